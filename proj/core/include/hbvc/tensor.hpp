#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbvc {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HBVC_CHECK(cond, msg)                      \
  do {                                             \
    if (!(cond)) throw ::hbvc::Error(msg);         \
  } while (0)

// Dense row-major tensor of doubles. Image-like data is laid out (C,H,W).
struct Tensor {
  std::vector<int> shape;
  std::vector<double> v;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)), v(numel_of(shape), 0.0) {}
  Tensor(std::vector<int> s, double fill) : shape(std::move(s)), v(numel_of(shape), fill) {}

  static int64_t numel_of(const std::vector<int>& s);

  int64_t numel() const { return static_cast<int64_t>(v.size()); }
  int ndim() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i < 0 ? ndim() + i : i)]; }
  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  bool empty() const { return v.empty(); }

  double* data() { return v.data(); }
  const double* data() const { return v.data(); }

  // (C,H,W) accessors
  double& at(int c, int y, int x) {
    return v[(static_cast<int64_t>(c) * shape[1] + y) * shape[2] + x];
  }
  double at(int c, int y, int x) const {
    return v[(static_cast<int64_t>(c) * shape[1] + y) * shape[2] + x];
  }
  double& operator[](int64_t i) { return v[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return v[static_cast<size_t>(i)]; }

  static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }
  static Tensor full(std::vector<int> s, double val) { return Tensor(std::move(s), val); }
  static Tensor randn(std::vector<int> s, std::mt19937_64& rng, double stddev = 1.0);
  static Tensor uniform(std::vector<int> s, std::mt19937_64& rng, double lo, double hi);

  Tensor& operator+=(const Tensor& o);
  Tensor& operator*=(double s);

  double min() const;
  double max() const;
  double sum() const;
  double abs_mean() const;
  bool all_finite() const;

  std::string shape_str() const;
};

// Sum-reduce helper used by gradient accumulation.
void axpy(Tensor& dst, const Tensor& src, double scale = 1.0);

}  // namespace hbvc
