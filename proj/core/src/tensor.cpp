#include "hbvc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hbvc {

int64_t Tensor::numel_of(const std::vector<int>& s) {
  int64_t n = 1;
  for (int d : s) {
    HBVC_CHECK(d >= 0, "negative tensor dimension");
    n *= d;
  }
  return n;
}

Tensor Tensor::randn(std::vector<int> s, std::mt19937_64& rng, double stddev) {
  Tensor t(std::move(s));
  std::normal_distribution<double> dist(0.0, stddev);
  for (auto& x : t.v) x = dist(rng);
  return t;
}

Tensor Tensor::uniform(std::vector<int> s, std::mt19937_64& rng, double lo, double hi) {
  Tensor t(std::move(s));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (auto& x : t.v) x = dist(rng);
  return t;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  HBVC_CHECK(same_shape(o), "tensor shape mismatch in += : " + shape_str() + " vs " + o.shape_str());
  for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (auto& x : v) x *= s;
  return *this;
}

double Tensor::min() const {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double Tensor::max() const {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double Tensor::sum() const { return std::accumulate(v.begin(), v.end(), 0.0); }

double Tensor::abs_mean() const {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s / static_cast<double>(v.size());
}

bool Tensor::all_finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ")";
  return os.str();
}

void axpy(Tensor& dst, const Tensor& src, double scale) {
  if (dst.empty()) {
    dst = src;
    if (scale != 1.0) dst *= scale;
    return;
  }
  HBVC_CHECK(dst.same_shape(src), "axpy shape mismatch");
  for (size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += scale * src.v[i];
}

}  // namespace hbvc
