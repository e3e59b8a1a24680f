#pragma once

#include <string>
#include <unordered_map>

#include "hbvc/ops.hpp"

namespace hbvc {

// Ordered named parameter store; checkpoint serialization follows this order.
class ParamRegistry {
 public:
  Var add(const std::string& name, Tensor init);
  Var find(const std::string& name) const;
  const std::vector<std::pair<std::string, Var>>& items() const { return items_; }
  int64_t total_elements() const;

 private:
  std::vector<std::pair<std::string, Var>> items_;
  std::unordered_map<std::string, size_t> index_;
};

struct Conv2d {
  Var w, b;
  int stride = 1, pad = 0, groups = 1;

  Conv2d() = default;
  // Kaiming-normal init scaled by w_scale (0 gives a zero-initialized layer).
  Conv2d(ParamRegistry& reg, const std::string& name, int cin, int cout, int k, int stride,
         int pad, std::mt19937_64& rng, int groups = 1, double w_scale = 1.0, bool bias = true);

  Var operator()(const Var& x) const;
};

// conv3x3 + leaky relu
struct ConvAct {
  Conv2d conv;
  double slope = 0.1;

  ConvAct() = default;
  ConvAct(ParamRegistry& reg, const std::string& name, int cin, int cout, int k, int stride,
          std::mt19937_64& rng);
  Var operator()(const Var& x) const;
};

// conv-lrelu-conv with identity skip
struct ResBlock {
  Conv2d c1, c2;

  ResBlock() = default;
  ResBlock(ParamRegistry& reg, const std::string& name, int ch, std::mt19937_64& rng);
  Var operator()(const Var& x) const;
};

// Depthwise separable convolution: depthwise 3x3 then pointwise 1x1.
struct DConv {
  Conv2d dw, pw;

  DConv() = default;
  DConv(ParamRegistry& reg, const std::string& name, int cin, int cout, int stride,
        std::mt19937_64& rng);
  Var operator()(const Var& x) const;
};

// Depth block: 1x1 -> depthwise 3x3 -> 1x1 with residual; strided or
// channel-changing variants use a 1x1 projection shortcut.
struct DepthBlock {
  Conv2d expand, dw, reduce, proj;
  bool identity_skip = true;

  DepthBlock() = default;
  DepthBlock(ParamRegistry& reg, const std::string& name, int cin, int cout, int stride,
             std::mt19937_64& rng);
  Var operator()(const Var& x) const;
};

// Pixel-shuffle 2x upsampling: conv3x3 to 4*cout then shuffle.
struct UpBlock {
  Conv2d conv;

  UpBlock() = default;
  UpBlock(ParamRegistry& reg, const std::string& name, int cin, int cout, std::mt19937_64& rng);
  Var operator()(const Var& x) const;
};

Var lrelu(const Var& x);

}  // namespace hbvc
