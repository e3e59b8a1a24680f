#include "hbvc/nn.hpp"

#include <cmath>

namespace hbvc {

Var ParamRegistry::add(const std::string& name, Tensor init) {
  HBVC_CHECK(index_.find(name) == index_.end(), "duplicate parameter name: " + name);
  Var p = make_param(std::move(init));
  index_[name] = items_.size();
  items_.emplace_back(name, p);
  return p;
}

Var ParamRegistry::find(const std::string& name) const {
  auto it = index_.find(name);
  HBVC_CHECK(it != index_.end(), "unknown parameter: " + name);
  return items_[it->second].second;
}

int64_t ParamRegistry::total_elements() const {
  int64_t n = 0;
  for (const auto& [name, p] : items_) n += p->val.numel();
  return n;
}

Conv2d::Conv2d(ParamRegistry& reg, const std::string& name, int cin, int cout, int k,
               int stride_, int pad_, std::mt19937_64& rng, int groups_, double w_scale,
               bool bias) {
  stride = stride_;
  pad = pad_;
  groups = groups_;
  int fan_in = (cin / groups_) * k * k;
  double stddev = w_scale * std::sqrt(2.0 / fan_in);
  Tensor wt = w_scale == 0.0 ? Tensor::zeros({cout, cin / groups_, k, k})
                             : Tensor::randn({cout, cin / groups_, k, k}, rng, stddev);
  w = reg.add(name + ".w", std::move(wt));
  if (bias) b = reg.add(name + ".b", Tensor::zeros({cout}));
}

Var Conv2d::operator()(const Var& x) const { return conv2d(x, w, b, stride, pad, groups); }

Var lrelu(const Var& x) { return leaky_relu(x, 0.1); }

ConvAct::ConvAct(ParamRegistry& reg, const std::string& name, int cin, int cout, int k,
                 int stride, std::mt19937_64& rng)
    : conv(reg, name, cin, cout, k, stride, k / 2, rng) {}

Var ConvAct::operator()(const Var& x) const { return leaky_relu(conv(x), slope); }

ResBlock::ResBlock(ParamRegistry& reg, const std::string& name, int ch, std::mt19937_64& rng)
    : c1(reg, name + ".c1", ch, ch, 3, 1, 1, rng),
      c2(reg, name + ".c2", ch, ch, 3, 1, 1, rng) {}

Var ResBlock::operator()(const Var& x) const { return add(x, c2(lrelu(c1(x)))); }

DConv::DConv(ParamRegistry& reg, const std::string& name, int cin, int cout, int stride,
             std::mt19937_64& rng)
    : dw(reg, name + ".dw", cin, cin, 3, stride, 1, rng, cin),
      pw(reg, name + ".pw", cin, cout, 1, 1, 0, rng) {}

Var DConv::operator()(const Var& x) const { return pw(dw(x)); }

DepthBlock::DepthBlock(ParamRegistry& reg, const std::string& name, int cin, int cout,
                       int stride, std::mt19937_64& rng)
    : expand(reg, name + ".e", cin, cout, 1, 1, 0, rng),
      dw(reg, name + ".d", cout, cout, 3, stride, 1, rng, cout),
      reduce(reg, name + ".r", cout, cout, 1, 1, 0, rng) {
  identity_skip = (cin == cout && stride == 1);
  if (!identity_skip) proj = Conv2d(reg, name + ".p", cin, cout, 1, stride, 0, rng);
}

Var DepthBlock::operator()(const Var& x) const {
  Var h = reduce(lrelu(dw(lrelu(expand(x)))));
  Var skip = identity_skip ? x : proj(x);
  return add(h, skip);
}

UpBlock::UpBlock(ParamRegistry& reg, const std::string& name, int cin, int cout,
                 std::mt19937_64& rng)
    : conv(reg, name, cin, cout * 4, 3, 1, 1, rng) {}

Var UpBlock::operator()(const Var& x) const { return pixel_shuffle(conv(x), 2); }

}  // namespace hbvc
