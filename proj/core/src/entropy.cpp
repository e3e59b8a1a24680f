#include "hbvc/entropy.hpp"

#include <cmath>

namespace hbvc {

FactorizedPrior::FactorizedPrior(ParamRegistry& reg, const std::string& name, int ch,
                                 std::mt19937_64& rng)
    : channels(ch) {
  // softplus(raw) keeps the chain monotone in x; biases start spread out so
  // the initial density covers a few integer bins.
  auto raw = [&](std::vector<int> s, double lo, double hi) {
    return Tensor::uniform(std::move(s), rng, lo, hi);
  };
  w1 = reg.add(name + ".w1", raw({kHidden * ch, 1, 1, 1}, -1.0, 1.0));
  b1 = reg.add(name + ".b1", raw({kHidden * ch}, -1.5, 1.5));
  a1 = reg.add(name + ".a1", raw({kHidden * ch}, -0.2, 0.2));
  w2 = reg.add(name + ".w2", raw({kHidden * ch, kHidden, 1, 1}, -1.0, 1.0));
  b2 = reg.add(name + ".b2", raw({kHidden * ch}, -0.5, 0.5));
  a2 = reg.add(name + ".a2", raw({kHidden * ch}, -0.2, 0.2));
  w3 = reg.add(name + ".w3", raw({ch, kHidden, 1, 1}, -1.0, 1.0));
  b3 = reg.add(name + ".b3", Tensor::zeros({ch}));
}

Var FactorizedPrior::cdf(const Var& x) const {
  HBVC_CHECK(x->val.dim(0) == channels, "factorized prior: channel mismatch");
  Var h = conv2d(x, softplus(w1), b1, 1, 0, channels);
  h = add(h, scale_channels(tanh_op(h), tanh_op(a1)));
  h = conv2d(h, softplus(w2), b2, 1, 0, channels);
  h = add(h, scale_channels(tanh_op(h), tanh_op(a2)));
  h = conv2d(h, softplus(w3), b3, 1, 0, channels);
  return sigmoid(h);
}

Var FactorizedPrior::bits(const Var& z_hat) const {
  Var hi = cdf(add_scalar(z_hat, 0.5));
  Var lo = cdf(add_scalar(z_hat, -0.5));
  Var p = lower_bound(sub(hi, lo), kRateTailFloor);
  return mul_scalar(log_op(p), -1.0 / std::log(2.0));
}

double FactorizedPrior::cdf_scalar(int c, double x) const {
  auto sp = [](double v) { return v > 30.0 ? v : std::log1p(std::exp(v)); };
  double h[kHidden], h2[kHidden];
  for (int j = 0; j < kHidden; ++j) {
    double y = sp(w1->val.v[(c * kHidden + j)]) * x + b1->val.v[c * kHidden + j];
    h[j] = y + std::tanh(a1->val.v[c * kHidden + j]) * std::tanh(y);
  }
  for (int j = 0; j < kHidden; ++j) {
    double y = b2->val.v[c * kHidden + j];
    for (int k = 0; k < kHidden; ++k)
      y += sp(w2->val.v[(c * kHidden + j) * kHidden + k]) * h[k];
    h2[j] = y + std::tanh(a2->val.v[c * kHidden + j]) * std::tanh(y);
  }
  double y = b3->val.v[c];
  for (int k = 0; k < kHidden; ++k) y += sp(w3->val.v[c * kHidden + k]) * h2[k];
  return 1.0 / (1.0 + std::exp(-y));
}

HyperCodec::HyperCodec(ParamRegistry& reg, const std::string& name, int latent_ch, int hyper_ch,
                       int stages_, int mid_ch, std::mt19937_64& rng)
    : e1(reg, name + ".e1", latent_ch, mid_ch, 3, 1, rng),
      d1(reg, name + ".d1", mid_ch, mid_ch, 3, 1, rng),
      d2(reg, name + ".d2", mid_ch, 2 * latent_ch, 3, 1, 1, rng),
      stages(stages_) {
  HBVC_CHECK(stages_ >= 1, "hyper codec needs at least one stride-2 stage");
  for (int s = 0; s < stages_; ++s) {
    int cout = (s == stages_ - 1) ? hyper_ch : mid_ch;
    enc_down.emplace_back(reg, name + ".e_dn" + std::to_string(s), mid_ch, cout, 3, 2, 1, rng);
    int cin = (s == 0) ? hyper_ch : mid_ch;
    dec_up.emplace_back(reg, name + ".d_up" + std::to_string(s), cin, mid_ch, rng);
  }
}

Var HyperCodec::encode(const Var& y) const {
  Var h = e1(y);
  for (size_t s = 0; s < enc_down.size(); ++s) {
    h = enc_down[s](h);
    if (s + 1 < enc_down.size()) h = lrelu(h);
  }
  return h;
}

Var HyperCodec::decode_feat(const Var& z) const {
  Var h = z;
  for (const auto& up : dec_up) h = lrelu(up(h));
  return d2(lrelu(d1(h)));
}

QuadtreeEntropy::QuadtreeEntropy(ParamRegistry& reg, const std::string& name, int latent_ch_,
                                 int cond_ch, int mid_ch, std::mt19937_64& rng)
    : latent_ch(latent_ch_) {
  for (int g = 0; g < kGroups; ++g) {
    std::string n = name + ".g" + std::to_string(g);
    nets[g].c1 = ConvAct(reg, n + ".c1", cond_ch + latent_ch_, mid_ch, 3, 1, rng);
    nets[g].c2 = ConvAct(reg, n + ".c2", mid_ch, mid_ch, 3, 1, rng);
    nets[g].out = Conv2d(reg, n + ".out", mid_ch, 2 * latent_ch_, 3, 1, 1, rng);
  }
}

std::array<Tensor, QuadtreeEntropy::kGroups> QuadtreeEntropy::group_masks(int c, int h, int w) {
  HBVC_CHECK(h % 2 == 0 && w % 2 == 0, "quadtree masks need even latent dims");
  std::array<Tensor, kGroups> masks;
  // group -> (dy,dx) inside each 2x2 block
  const int pos[kGroups][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  for (int g = 0; g < kGroups; ++g) {
    masks[g] = Tensor({c, h, w});
    for (int cc = 0; cc < c; ++cc)
      for (int y = pos[g][0]; y < h; y += 2)
        for (int x = pos[g][1]; x < w; x += 2) masks[g].at(cc, y, x) = 1.0;
  }
  return masks;
}

std::pair<Var, Var> QuadtreeEntropy::params(const Var& cond_feat, const Var& y_visible,
                                            int g) const {
  HBVC_CHECK(g >= 0 && g < kGroups, "bad quadtree group");
  const ParamNet& net = nets[g];
  Var h = net.out(net.c2(net.c1(concat_ch({cond_feat, y_visible}))));
  Var mu = slice_ch(h, 0, latent_ch);
  Var sigma = lower_bound(softplus(slice_ch(h, latent_ch, 2 * latent_ch)), kSigmaMin);
  return {mu, sigma};
}

Var QuadtreeEntropy::bits(const Var& y_hat, const Var& cond_feat) const {
  auto masks = group_masks(y_hat->val.dim(0), y_hat->val.dim(1), y_hat->val.dim(2));
  Var total;
  Tensor decoded_mask(y_hat->val.shape);
  for (int g = 0; g < kGroups; ++g) {
    Var visible = mul(y_hat, make_const(decoded_mask));
    auto [mu, sigma] = params(cond_feat, visible, g);
    Var bits_g = sum_all(mul(gaussian_bits(y_hat, mu, sigma), make_const(masks[g])));
    total = total ? add(total, bits_g) : bits_g;
    decoded_mask += masks[g];
  }
  return total;
}

}  // namespace hbvc
