#pragma once

#include "hbvc/nn.hpp"
#include "hbvc/profiles.hpp"

namespace hbvc {

inline constexpr double kSigmaMin = 0.11;

// Learned non-parametric factorized density, one small monotone network per
// channel (realized with grouped 1x1 convolutions). Used for hyper latents.
struct FactorizedPrior {
  int channels = 0;
  static constexpr int kHidden = 3;
  Var w1, b1, a1;  // C   -> 3C
  Var w2, b2, a2;  // 3C  -> 3C
  Var w3, b3;      // 3C  -> C
  Var cdf(const Var& x) const;   // per-element CDF in (0,1)
  Var bits(const Var& z_hat) const;
  // No-grad per-channel CDF evaluation for table building.
  double cdf_scalar(int channel, double x) const;

  FactorizedPrior() = default;
  FactorizedPrior(ParamRegistry& reg, const std::string& name, int channels,
                  std::mt19937_64& rng);
};

// Analysis/synthesis pair between a latent y and its hyper latent z
// (hyper_stages stride-2 steps down), synthesis emits a conditioning feature
// with 2x the latent channel count.
struct HyperCodec {
  ConvAct e1;
  std::vector<Conv2d> enc_down;
  std::vector<UpBlock> dec_up;
  ConvAct d1;
  Conv2d d2;
  int stages = 1;

  HyperCodec() = default;
  HyperCodec(ParamRegistry& reg, const std::string& name, int latent_ch, int hyper_ch,
             int stages, int mid_ch, std::mt19937_64& rng);

  Var encode(const Var& y) const;       // -> z
  Var decode_feat(const Var& z) const;  // -> (2*latent_ch, hy, wx) feature
};

// Quadtree-partitioned conditional Gaussian model: latent positions are
// split into four interleaved groups per 2x2 block, decoded group by group;
// group g parameters may depend on the hyper feature, an optional prior
// feature, and groups < g only.
struct QuadtreeEntropy {
  static constexpr int kGroups = 4;
  struct ParamNet {
    ConvAct c1, c2;
    Conv2d out;
  };
  ParamNet nets[kGroups];
  int latent_ch = 0;

  QuadtreeEntropy() = default;
  QuadtreeEntropy(ParamRegistry& reg, const std::string& name, int latent_ch, int cond_ch,
                  int mid_ch, std::mt19937_64& rng);

  // 0/1 masks; group g owns position ((0,0),(1,1),(0,1),(1,0))[g] of each
  // 2x2 block. Disjoint, and together they cover the plane.
  static std::array<Tensor, kGroups> group_masks(int c, int h, int w);

  // (mu, sigma) maps for group g; y_visible must be zero outside groups < g.
  std::pair<Var, Var> params(const Var& cond_feat, const Var& y_visible, int g) const;

  // Estimated total bits of y_hat (already quantized or noise-injected).
  Var bits(const Var& y_hat, const Var& cond_feat) const;
};

}  // namespace hbvc
