#include "hbvc/transform.hpp"

#include <cmath>

namespace hbvc {

void QuantVectors::init(ParamRegistry& reg, const std::string& name, int channels) {
  const double enc_init[4] = {1.6, 1.0, 0.65, 0.4};
  for (int q = 0; q < 4; ++q) {
    enc_raw[q] = reg.add(name + ".q_enc" + std::to_string(q),
                         Tensor({channels}, std::log(enc_init[q])));
    dec_raw[q] = reg.add(name + ".q_dec" + std::to_string(q),
                         Tensor({channels}, -std::log(enc_init[q])));
  }
}

Var QuantVectors::enc(int qp) const {
  HBVC_CHECK(qp >= 0 && qp < 4, "qp out of range");
  return exp_op(enc_raw[qp]);
}

Var QuantVectors::dec(int qp) const {
  HBVC_CHECK(qp >= 0 && qp < 4, "qp out of range");
  return exp_op(dec_raw[qp]);
}

ContextualCoder::ContextualCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
                                 std::mt19937_64& rng)
    : a1(reg, name + ".a1", 3 + p.ctx_ch[0], p.mid_ch, 3, 2, rng),
      a2(reg, name + ".a2", p.mid_ch + p.ctx_ch[1], p.mid_ch, 3, 2, rng),
      a3(reg, name + ".a3", p.mid_ch + p.ctx_ch[2], p.mid_ch, 3, 2, rng),
      ar2(reg, name + ".ar2", p.mid_ch, rng),
      ar3(reg, name + ".ar3", p.mid_ch, rng),
      a4(reg, name + ".a4", p.mid_ch, p.ctx_latent_ch, 3, 2, 1, rng),
      s0(reg, name + ".s0", p.ctx_latent_ch, p.mid_ch, 3, 1, rng),
      su1(reg, name + ".su1", p.mid_ch, p.mid_ch, rng),
      su2(reg, name + ".su2", p.mid_ch, p.mid_ch, rng),
      su3(reg, name + ".su3", p.mid_ch, p.mid_ch, rng),
      su4(reg, name + ".su4", p.mid_ch, p.mid_ch, rng),
      smix3(reg, name + ".smix3", p.mid_ch + p.ctx_ch[2], p.mid_ch, 3, 1, 1, rng),
      smix2(reg, name + ".smix2", p.mid_ch + p.ctx_ch[1], p.mid_ch, 3, 1, 1, rng),
      smix1(reg, name + ".smix1", p.mid_ch + p.ctx_ch[0], p.mid_ch, 3, 1, 1, rng),
      sr2(reg, name + ".sr2", p.mid_ch, rng),
      sr3(reg, name + ".sr3", p.mid_ch, rng),
      feat_head(reg, name + ".feat", p.mid_ch, p.feat_ch, 3, 1, 1, rng),
      pix_head(reg, name + ".pix", p.mid_ch, 3, 3, 1, 1, rng) {
  qs.init(reg, name, p.ctx_latent_ch);
}

Var ContextualCoder::analyze(const Var& x_t, const FusedContexts& ctx, int qp) const {
  Var h = a1(concat_ch({x_t, ctx.c[0]}));
  h = ar2(a2(concat_ch({h, ctx.c[1]})));
  h = ar3(a3(concat_ch({h, ctx.c[2]})));
  Var y = a4(h);
  return scale_channels(y, qs.enc(qp));
}

ContextualCoder::Recon ContextualCoder::synthesize(const Var& y_hat, const FusedContexts& ctx,
                                                   int qp) const {
  Var y = scale_channels(y_hat, qs.dec(qp));
  Var h = s0(y);
  h = lrelu(su1(h));                                 // H/8
  h = lrelu(su2(h));                                 // H/4
  h = sr3(lrelu(smix3(concat_ch({h, ctx.c[2]}))));
  h = lrelu(su3(h));                                 // H/2
  h = sr2(lrelu(smix2(concat_ch({h, ctx.c[1]}))));
  h = lrelu(su4(h));                                 // H
  h = lrelu(smix1(concat_ch({h, ctx.c[0]})));
  Recon r;
  r.feat = feat_head(h);
  r.x_hat = clamp(pix_head(h), 0.0, 1.0);
  return r;
}

IntraCoder::IntraCoder(ParamRegistry& reg, const std::string& name, const Profile& p,
                       std::mt19937_64& rng)
    : a1(reg, name + ".a1", 3, p.mid_ch, 3, 2, rng),
      a2(reg, name + ".a2", p.mid_ch, p.mid_ch, 3, 2, rng),
      a3(reg, name + ".a3", p.mid_ch, p.mid_ch, 3, 2, rng),
      a4(reg, name + ".a4", p.mid_ch, p.ctx_latent_ch, 3, 2, 1, rng),
      s0(reg, name + ".s0", p.ctx_latent_ch, p.mid_ch, 3, 1, rng),
      su1(reg, name + ".su1", p.mid_ch, p.mid_ch, rng),
      su2(reg, name + ".su2", p.mid_ch, p.mid_ch, rng),
      su3(reg, name + ".su3", p.mid_ch, p.mid_ch, rng),
      su4(reg, name + ".su4", p.mid_ch, p.mid_ch, rng),
      feat_head(reg, name + ".feat", p.mid_ch, p.feat_ch, 3, 1, 1, rng),
      pix_head(reg, name + ".pix", p.mid_ch, 3, 3, 1, 1, rng) {
  qs.init(reg, name, p.ctx_latent_ch);
}

Var IntraCoder::analyze(const Var& x_t, int qp) const {
  Var y = a4(a3(a2(a1(x_t))));
  return scale_channels(y, qs.enc(qp));
}

ContextualCoder::Recon IntraCoder::synthesize(const Var& y_hat, int qp) const {
  Var y = scale_channels(y_hat, qs.dec(qp));
  Var h = lrelu(su1(s0(y)));
  h = lrelu(su2(h));
  h = lrelu(su3(h));
  h = lrelu(su4(h));
  ContextualCoder::Recon r;
  r.feat = feat_head(h);
  r.x_hat = clamp(pix_head(h), 0.0, 1.0);
  return r;
}

TemporalPriorNet::TemporalPriorNet(ParamRegistry& reg, const std::string& name,
                                   const Profile& p, std::mt19937_64& rng)
    : c1(reg, name + ".c1", 2 * p.ctx_ch[2], p.entropy_mid_ch, 3, 2, rng),
      c2(reg, name + ".c2", p.entropy_mid_ch, p.entropy_mid_ch, 3, 2, 1, rng) {}

Var TemporalPriorNet::operator()(const Var& c3_f, const Var& c3_b) const {
  return c2(c1(concat_ch({c3_f, c3_b})));
}

}  // namespace hbvc
