#include "hbvc/motion_codec.hpp"

#include <cmath>

namespace hbvc {

void MotionCoder::init_quant_vectors(ParamRegistry& reg, const std::string& name,
                                     int channels) {
  // coarser rate points start with smaller encode scales
  const double enc_init[4] = {1.6, 1.0, 0.65, 0.4};
  for (int q = 0; q < 4; ++q) {
    q_enc_raw_[q] =
        reg.add(name + ".q_enc" + std::to_string(q),
                Tensor({channels}, std::log(enc_init[q])));
    q_dec_raw_[q] =
        reg.add(name + ".q_dec" + std::to_string(q),
                Tensor({channels}, -std::log(enc_init[q])));
  }
}

Var MotionCoder::q_enc(int qp) const {
  HBVC_CHECK(qp >= 0 && qp < 4, "qp out of range");
  return exp_op(q_enc_raw_[qp]);
}

Var MotionCoder::q_dec(int qp) const {
  HBVC_CHECK(qp >= 0 && qp < 4, "qp out of range");
  return exp_op(q_dec_raw_[qp]);
}

MFAdapter::MFAdapter(ParamRegistry& reg, const std::string& name, const Profile& p,
                     std::mt19937_64& rng)
    : shared_d1(reg, name + ".d1", p.prior_ch, p.prior_ch, 2, rng),
      shared_d2(reg, name + ".d2", p.prior_ch, p.prior_ch, 2, rng),
      fuse_bb(reg, name + ".bb", 2 * p.prior_ch, p.prior_ch, 3, 1, 1, rng),
      fuse_f(reg, name + ".f", p.prior_ch, p.prior_ch, 3, 1, 1, rng),
      fuse_b(reg, name + ".b", p.prior_ch, p.prior_ch, 3, 1, 1, rng),
      fuse_none(reg, name + ".ii", p.prior_ch, p.prior_ch, 3, 1, 1, rng) {
  const_in = reg.add(name + ".const", Tensor::uniform({p.prior_ch}, rng, -0.5, 0.5));
  // tie the two direction branches of the both-B fusion at init
  Tensor& w = fuse_bb.w->val;
  int cout = w.dim(0), cin = w.dim(1), k = w.dim(2);
  for (int o = 0; o < cout; ++o)
    for (int c = 0; c < cin / 2; ++c)
      for (int i = 0; i < k * k; ++i)
        w.v[((static_cast<int64_t>(o) * cin + cin / 2 + c) * k * k) + i] =
            w.v[((static_cast<int64_t>(o) * cin + c) * k * k) + i];
}

Var MFAdapter::operator()(const std::optional<Var>& f_v_f, const std::optional<Var>& f_v_b,
                          FrameType type_f, FrameType type_b, int h16, int w16) const {
  HBVC_CHECK((type_f == FrameType::B) == f_v_f.has_value(),
             "MF adapter: forward flow feature must match reference type");
  HBVC_CHECK((type_b == FrameType::B) == f_v_b.has_value(),
             "MF adapter: backward flow feature must match reference type");
  auto down = [&](const Var& x) { return shared_d2(shared_d1(x)); };
  if (f_v_f && f_v_b) return fuse_bb(concat_ch({down(*f_v_f), down(*f_v_b)}));
  if (f_v_f) return fuse_f(down(*f_v_f));
  if (f_v_b) return fuse_b(down(*f_v_b));
  // both references intra: process a learned constant map
  Var ones = make_const(Tensor({const_in->val.dim(0), h16, w16}, 1.0));
  return fuse_none(scale_channels(ones, const_in));
}

RefFlowEmbed::RefFlowEmbed(ParamRegistry& reg, const std::string& name, const Profile& p,
                           std::mt19937_64& rng)
    : c1(reg, name + ".c1", 4, p.prior_ch, 5, 4, rng),
      c2(reg, name + ".c2", p.prior_ch, p.prior_ch, 5, 4, 2, rng) {}

Var RefFlowEmbed::operator()(const Var& v_fb, const Var& v_bf) const {
  return c2(c1(concat_ch({v_fb, v_bf})));
}

// ---------------- BMC ----------------

BMCCoder::BMCCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
                   std::mt19937_64& rng)
    : adapter(reg, name + ".mf", p, rng),
      ref_embed(reg, name + ".refembed", p, rng),
      e1(reg, name + ".e1", 4, p.motion_mid_ch, 3, 2, rng),
      e2(reg, name + ".e2", p.motion_mid_ch + 4, p.motion_mid_ch, 3, 2, rng),
      e3(reg, name + ".e3", p.motion_mid_ch + 4, 2 * p.motion_mid_ch, 3, 2, rng),
      e4(reg, name + ".e4", 2 * p.motion_mid_ch, 2 * p.motion_mid_ch, 3, 2, 1, rng),
      fuse(reg, name + ".fuse", 2 * p.motion_mid_ch + 2 * p.prior_ch, p.motion_latent_ch, 3, 1,
           1, rng),
      d0(reg, name + ".d0", p.motion_latent_ch + 2 * p.prior_ch, 2 * p.motion_mid_ch, 3, 1,
         rng),
      u1(reg, name + ".u1", 2 * p.motion_mid_ch, 2 * p.motion_mid_ch, rng),
      u2(reg, name + ".u2", 2 * p.motion_mid_ch, 2 * p.motion_mid_ch, rng),
      u3(reg, name + ".u3", 2 * p.motion_mid_ch, p.motion_mid_ch, rng),
      u4(reg, name + ".u4", p.motion_mid_ch, p.motion_mid_ch, rng),
      head3(reg, name + ".h3", 2 * p.motion_mid_ch, 4, 3, 1, 1, rng, 1, 0.0),
      head2(reg, name + ".h2", p.motion_mid_ch, 4, 3, 1, 1, rng, 1, 0.0),
      head1(reg, name + ".h1", p.motion_mid_ch, 4, 3, 1, 1, rng, 1, 0.0),
      fvt_head(reg, name + ".fvt", 2 * p.motion_mid_ch, p.prior_ch, 3, 1, 1, rng) {
  init_quant_vectors(reg, name, p.motion_latent_ch);
}

MotionPriorFeats BMCCoder::priors(const MotionSideInfo& side) const {
  int h = side.v_fb->val.dim(1) / 16, w = side.v_fb->val.dim(2) / 16;
  MotionPriorFeats pr;
  pr.adapter = adapter(side.f_v_f, side.f_v_b, side.type_f, side.type_b, h, w);
  pr.ref_fb = ref_embed(side.v_fb, side.v_bf);
  return pr;
}

Var BMCCoder::analyze(const MultiScaleFlows& ff, const MultiScaleFlows& fb,
                      const MotionPriorFeats& pr, const MotionSideInfo& side, int qp) const {
  HBVC_CHECK(pr.ref_fb, "BMC: missing inter-reference prior for a B frame");
  Var h = e1(concat_ch({ff.v1, fb.v1}));
  h = e2(concat_ch({h, ff.v2, fb.v2}));
  h = e3(concat_ch({h, ff.v3, fb.v3}));
  h = lrelu(e4(h));
  Var y = fuse(concat_ch({h, pr.adapter, pr.ref_fb}));
  return scale_channels(y, q_enc(qp));
}

MotionRecon BMCCoder::synthesize(const Var& y_hat, const MotionPriorFeats& pr,
                                 const MotionSideInfo& side, int qp) const {
  Var y = scale_channels(y_hat, q_dec(qp));
  Var h = d0(concat_ch({y, pr.adapter, pr.ref_fb}));
  h = lrelu(u1(h));           // H/8
  h = lrelu(u2(h));           // H/4
  Var v3 = head3(h);
  MotionRecon out;
  out.f_v_t = fvt_head(h);
  Var h2 = lrelu(u3(h));      // H/2
  Var v2 = head2(h2);
  Var h1 = lrelu(u4(h2));     // H
  Var v1 = head1(h1);
  out.f.dir = FlowDir::ToForward;
  out.b.dir = FlowDir::ToBackward;
  out.f.v1 = slice_ch(v1, 0, 2);
  out.b.v1 = slice_ch(v1, 2, 4);
  out.f.v2 = slice_ch(v2, 0, 2);
  out.b.v2 = slice_ch(v2, 2, 4);
  out.f.v3 = slice_ch(v3, 0, 2);
  out.b.v3 = slice_ch(v3, 2, 4);
  return out;
}

Var BMCCoder::entropy_cond(const Var& hyper_feat, const MotionPriorFeats& pr) const {
  return concat_ch({hyper_feat, pr.adapter, pr.ref_fb});
}

// ---------------- BMRC ----------------

BMRCCoder::BMRCCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
                     std::mt19937_64& rng)
    : e1(reg, name + ".e1", 4, p.motion_mid_ch, 3, 2, rng),
      e2(reg, name + ".e2", p.motion_mid_ch, p.motion_mid_ch, 3, 2, rng),
      e3(reg, name + ".e3", p.motion_mid_ch, 2 * p.motion_mid_ch, 3, 2, rng),
      e4(reg, name + ".e4", 2 * p.motion_mid_ch, p.motion_latent_ch, 3, 2, 1, rng),
      d0(reg, name + ".d0", p.motion_latent_ch, 2 * p.motion_mid_ch, 3, 1, rng),
      u1(reg, name + ".u1", 2 * p.motion_mid_ch, 2 * p.motion_mid_ch, rng),
      u2(reg, name + ".u2", 2 * p.motion_mid_ch, p.motion_mid_ch, rng),
      u3(reg, name + ".u3", p.motion_mid_ch, p.motion_mid_ch, rng),
      u4(reg, name + ".u4", p.motion_mid_ch, p.motion_mid_ch, rng),
      head(reg, name + ".head", p.motion_mid_ch, 4, 3, 1, 1, rng, 1, 0.0) {
  init_quant_vectors(reg, name, p.motion_latent_ch);
}

MotionPriorFeats BMRCCoder::priors(const MotionSideInfo&) const { return {}; }

std::pair<Var, Var> BMRCCoder::residuals(const Var& v_tf, const Var& v_tb, const Var& v_fb,
                                         const Var& v_bf) {
  Var r_f = sub(v_tf, mul_scalar(v_bf, 0.5));
  Var r_b = sub(v_tb, mul_scalar(v_fb, 0.5));
  return {r_f, r_b};
}

Var BMRCCoder::analyze(const MultiScaleFlows& ff, const MultiScaleFlows& fb,
                       const MotionPriorFeats&, const MotionSideInfo& side, int qp) const {
  auto [r_f, r_b] = residuals(ff.v1, fb.v1, side.v_fb, side.v_bf);
  Var y = e4(e3(e2(e1(concat_ch({r_f, r_b})))));
  return scale_channels(y, q_enc(qp));
}

MotionRecon BMRCCoder::synthesize(const Var& y_hat, const MotionPriorFeats&,
                                  const MotionSideInfo& side, int qp) const {
  Var y = scale_channels(y_hat, q_dec(qp));
  Var h = lrelu(u1(d0(y)));
  h = lrelu(u2(h));
  h = lrelu(u3(h));
  h = lrelu(u4(h));
  Var r = head(h);
  MotionRecon out;
  out.f.dir = FlowDir::ToForward;
  out.b.dir = FlowDir::ToBackward;
  out.f.v1 = add(slice_ch(r, 0, 2), mul_scalar(side.v_bf, 0.5));
  out.b.v1 = add(slice_ch(r, 2, 4), mul_scalar(side.v_fb, 0.5));
  out.f.v2 = downscale_flow2(out.f.v1);
  out.f.v3 = downscale_flow2(out.f.v2);
  out.b.v2 = downscale_flow2(out.b.v1);
  out.b.v3 = downscale_flow2(out.b.v2);
  return out;
}

Var BMRCCoder::entropy_cond(const Var& hyper_feat, const MotionPriorFeats&) const {
  return hyper_feat;
}

std::unique_ptr<MotionCoder> make_motion_coder(MotionCodecKind kind, ParamRegistry& reg,
                                               const std::string& name, const Profile& p,
                                               std::mt19937_64& rng) {
  if (kind == MotionCodecKind::BMC)
    return std::make_unique<BMCCoder>(reg, name, p, rng);
  return std::make_unique<BMRCCoder>(reg, name, p, rng);
}

}  // namespace hbvc
