#pragma once

#include "hbvc/cfe.hpp"

namespace hbvc {

// Per-scale reference weights and bias; shapes equal the context shapes.
struct FusionWeights {
  Var s_f[3], s_b[3], b_t[3];
};

struct FusedContexts {
  Var c[3];
};

// Guidance tower: a pixel-resolution stack is pushed through depthwise-
// separable and depth blocks; every scale taps off (s_f, s_b, b_t) heads.
struct GuidanceTower {
  DConv in_dc;
  ConvAct ref1;
  DepthBlock down12, down23;
  Conv2d head1, head2, head3;

  GuidanceTower() = default;
  GuidanceTower(ParamRegistry& reg, const std::string& name, int in_ch, const Profile& p,
                std::mt19937_64& rng);

  FusionWeights operator()(const Var& guidance) const;
};

// Bi-directional contextual fusion for one side (encoder or decoder); the
// two sides hold separate parameters because their guidance differs.
struct BCF {
  GuidanceTower tower;
  DepthBlock db1, db2, db3;

  BCF() = default;
  BCF(ParamRegistry& reg, const std::string& name, int guide_in_ch, const Profile& p,
      std::mt19937_64& rng);

  FusionWeights weights_from(const Var& guidance) const;
  // C_t^i = DB_i(s_f^i * C_f^i + s_b^i * C_b^i + b_t^i); aborts on any shape
  // mismatch between weights and contexts.
  FusedContexts fuse(const ReferenceContexts& f, const ReferenceContexts& b,
                     const FusionWeights& w) const;
  std::pair<FusedContexts, FusionWeights> operator()(const ReferenceContexts& f,
                                                     const ReferenceContexts& b,
                                                     const Var& guidance) const;
};

// Pixel Feature Alignment: lifts the decoded latent back to pixel resolution
// with four pixel-shuffle 2x stages.
struct PFA {
  Conv2d in;
  UpBlock u1, u2, u3, u4;

  PFA() = default;
  PFA(ParamRegistry& reg, const std::string& name, int latent_ch, int out_ch,
      std::mt19937_64& rng);

  Var operator()(const Var& y_hat) const;
};

// Baseline fusion: concatenate both directions and reduce, one ResBlock per
// scale, no guidance. Encoder and decoder share this module (its inputs are
// identical on both sides).
struct ConcatFusion {
  Conv2d mix1, mix2, mix3;
  ResBlock rb1, rb2, rb3;

  ConcatFusion() = default;
  ConcatFusion(ParamRegistry& reg, const std::string& name, const Profile& p,
               std::mt19937_64& rng);

  FusedContexts operator()(const ReferenceContexts& f, const ReferenceContexts& b) const;
};

}  // namespace hbvc
