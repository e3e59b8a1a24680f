#pragma once

#include "hbvc/bcf.hpp"
#include "hbvc/entropy.hpp"

namespace hbvc {

// Learnable per-channel scale vectors (one pair per rate point).
struct QuantVectors {
  Var enc_raw[4], dec_raw[4];

  void init(ParamRegistry& reg, const std::string& name, int channels);
  Var enc(int qp) const;
  Var dec(int qp) const;
};

// Conditional transform: analysis injects the fused contexts at scales
// {1, 1/2, 1/4}; synthesis mirrors it and additionally emits the reference
// feature stored in the decoded buffer.
struct ContextualCoder {
  // analysis
  ConvAct a1, a2, a3;
  ResBlock ar2, ar3;
  Conv2d a4;
  // synthesis
  ConvAct s0;
  UpBlock su1, su2, su3, su4;
  Conv2d smix3, smix2, smix1;
  ResBlock sr2, sr3;
  Conv2d feat_head, pix_head;
  QuantVectors qs;

  ContextualCoder() = default;
  ContextualCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
                  std::mt19937_64& rng);

  Var analyze(const Var& x_t, const FusedContexts& ctx, int qp) const;  // -> scaled y
  struct Recon {
    Var x_hat;  // (3,H,W), clamped to [0,1]
    Var feat;   // (C_F,H,W)
  };
  Recon synthesize(const Var& y_hat, const FusedContexts& ctx, int qp) const;
};

// Compact hyperprior image codec for I-frames; also emits the reference
// feature for B descendants.
struct IntraCoder {
  ConvAct a1, a2, a3;
  Conv2d a4;
  ConvAct s0;
  UpBlock su1, su2, su3, su4;
  Conv2d feat_head, pix_head;
  QuantVectors qs;

  IntraCoder() = default;
  IntraCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
             std::mt19937_64& rng);

  Var analyze(const Var& x_t, int qp) const;
  ContextualCoder::Recon synthesize(const Var& y_hat, int qp) const;
};

// Temporal prior for the context entropy model, computed from the
// pre-fusion reference contexts (available on both sides before decoding).
struct TemporalPriorNet {
  ConvAct c1;  // stride 2: H/4 -> H/8
  Conv2d c2;   // stride 2: H/8 -> H/16

  TemporalPriorNet() = default;
  TemporalPriorNet(ParamRegistry& reg, const std::string& name, const Profile& p,
                   std::mt19937_64& rng);
  Var operator()(const Var& c3_f, const Var& c3_b) const;
};

}  // namespace hbvc
