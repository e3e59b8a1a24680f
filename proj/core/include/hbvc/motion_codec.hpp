#pragma once

#include <memory>
#include <optional>

#include "hbvc/flow.hpp"
#include "hbvc/schedule.hpp"

namespace hbvc {

enum class QuantMode : uint8_t { Round = 0, Noise = 1 };

// Everything the decoder can compute before reading the motion payload.
struct MotionSideInfo {
  Var v_fb, v_bf;  // inter-reference flows at full resolution
  std::optional<Var> f_v_f, f_v_b;  // buffered flow features (prior_ch, H/4, W/4)
  FrameType type_f = FrameType::I;
  FrameType type_b = FrameType::I;
};

struct MotionPriorFeats {
  Var adapter;  // (prior_ch, H/16, W/16) or empty (BMRC)
  Var ref_fb;   // (prior_ch, H/16, W/16) or empty (BMRC)
};

struct MotionRecon {
  MultiScaleFlows f, b;
  Var f_v_t;  // flow feature for the decoded buffer (prior_ch, H/4, W/4); empty for BMRC
};

// Motion Feature Adapter: variant sub-networks per reference frame-type
// pair. The stride-2 depth blocks are shared across variants and directions.
struct MFAdapter {
  DepthBlock shared_d1, shared_d2;  // H/4 -> H/16
  Conv2d fuse_bb, fuse_f, fuse_b, fuse_none;
  Var const_in;  // learned input of the both-I variant, per channel

  MFAdapter() = default;
  MFAdapter(ParamRegistry& reg, const std::string& name, const Profile& p,
            std::mt19937_64& rng);

  // h16/w16: output resolution. Throws if a feature is supplied for an
  // I-typed reference or missing for a B-typed one.
  Var operator()(const std::optional<Var>& f_v_f, const std::optional<Var>& f_v_b,
                 FrameType type_f, FrameType type_b, int h16, int w16) const;
};

// Feature-domain embedding of the inter-reference flows.
struct RefFlowEmbed {
  ConvAct c1;  // stride 4
  Conv2d c2;   // stride 4

  RefFlowEmbed() = default;
  RefFlowEmbed(ParamRegistry& reg, const std::string& name, const Profile& p,
               std::mt19937_64& rng);
  Var operator()(const Var& v_fb, const Var& v_bf) const;
};

// Common surface of the two motion compression mechanisms.
class MotionCoder {
 public:
  virtual ~MotionCoder() = default;

  virtual MotionPriorFeats priors(const MotionSideInfo& side) const = 0;
  // -> y scaled by q_enc[qp]; quantization happens outside.
  virtual Var analyze(const MultiScaleFlows& flows_f, const MultiScaleFlows& flows_b,
                      const MotionPriorFeats& pr, const MotionSideInfo& side, int qp) const = 0;
  virtual MotionRecon synthesize(const Var& y_hat, const MotionPriorFeats& pr,
                                 const MotionSideInfo& side, int qp) const = 0;
  // Conditioning feature for the motion entropy model.
  virtual Var entropy_cond(const Var& hyper_feat, const MotionPriorFeats& pr) const = 0;

  Var q_enc(int qp) const;
  Var q_dec(int qp) const;

 protected:
  Var q_enc_raw_[4], q_dec_raw_[4];
  void init_quant_vectors(ParamRegistry& reg, const std::string& name, int channels);
};

// Bi-directional Motion Converge: all six flows embedded per scale,
// progressively fused into one latent; priors injected at the latent
// resolution; the diverge path re-emits each scale and the flow feature.
class BMCCoder : public MotionCoder {
 public:
  BMCCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
           std::mt19937_64& rng);

  MotionPriorFeats priors(const MotionSideInfo& side) const override;
  Var analyze(const MultiScaleFlows& flows_f, const MultiScaleFlows& flows_b,
              const MotionPriorFeats& pr, const MotionSideInfo& side, int qp) const override;
  MotionRecon synthesize(const Var& y_hat, const MotionPriorFeats& pr,
                         const MotionSideInfo& side, int qp) const override;
  Var entropy_cond(const Var& hyper_feat, const MotionPriorFeats& pr) const override;

  MFAdapter adapter;
  RefFlowEmbed ref_embed;

 private:
  ConvAct e1, e2, e3;
  Conv2d e4, fuse;
  ConvAct d0;
  UpBlock u1, u2, u3, u4;
  Conv2d head3, head2, head1, fvt_head;
};

// Baseline: compress full-resolution flow residuals against half the
// inter-reference flows; coarse scales come from downsampling.
class BMRCCoder : public MotionCoder {
 public:
  BMRCCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
            std::mt19937_64& rng);

  MotionPriorFeats priors(const MotionSideInfo& side) const override;
  Var analyze(const MultiScaleFlows& flows_f, const MultiScaleFlows& flows_b,
              const MotionPriorFeats& pr, const MotionSideInfo& side, int qp) const override;
  MotionRecon synthesize(const Var& y_hat, const MotionPriorFeats& pr,
                         const MotionSideInfo& side, int qp) const override;
  Var entropy_cond(const Var& hyper_feat, const MotionPriorFeats& pr) const override;

  // (v_tf - 0.5*v_bf, v_tb - 0.5*v_fb)
  static std::pair<Var, Var> residuals(const Var& v_tf, const Var& v_tb, const Var& v_fb,
                                       const Var& v_bf);

 private:
  ConvAct e1, e2, e3;
  Conv2d e4;
  ConvAct d0;
  UpBlock u1, u2, u3, u4;
  Conv2d head;
};

std::unique_ptr<MotionCoder> make_motion_coder(MotionCodecKind kind, ParamRegistry& reg,
                                               const std::string& name, const Profile& p,
                                               std::mt19937_64& rng);

}  // namespace hbvc
