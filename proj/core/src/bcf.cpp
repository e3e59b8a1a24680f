#include "hbvc/bcf.hpp"

namespace hbvc {

GuidanceTower::GuidanceTower(ParamRegistry& reg, const std::string& name, int in_ch,
                             const Profile& p, std::mt19937_64& rng)
    : in_dc(reg, name + ".in", in_ch, p.guide_ch[0], 1, rng),
      ref1(reg, name + ".ref1", p.guide_ch[0], p.guide_ch[0], 3, 1, rng),
      down12(reg, name + ".dn12", p.guide_ch[0], p.guide_ch[1], 2, rng),
      down23(reg, name + ".dn23", p.guide_ch[1], p.guide_ch[2], 2, rng),
      head1(reg, name + ".h1", p.guide_ch[0], 3 * p.ctx_ch[0], 3, 1, 1, rng),
      head2(reg, name + ".h2", p.guide_ch[1], 3 * p.ctx_ch[1], 3, 1, 1, rng),
      head3(reg, name + ".h3", p.guide_ch[2], 3 * p.ctx_ch[2], 3, 1, 1, rng) {}

FusionWeights GuidanceTower::operator()(const Var& g) const {
  Var g1 = ref1(lrelu(in_dc(g)));
  Var g2 = down12(g1);
  Var g3 = down23(g2);
  FusionWeights w;
  const Conv2d* heads[3] = {&head1, &head2, &head3};
  const Var* feats[3] = {&g1, &g2, &g3};
  for (int i = 0; i < 3; ++i) {
    Var h = (*heads[i])(*feats[i]);
    int c = h->val.dim(0) / 3;
    w.s_f[i] = slice_ch(h, 0, c);
    w.s_b[i] = slice_ch(h, c, 2 * c);
    w.b_t[i] = slice_ch(h, 2 * c, 3 * c);
  }
  return w;
}

BCF::BCF(ParamRegistry& reg, const std::string& name, int guide_in_ch, const Profile& p,
         std::mt19937_64& rng)
    : tower(reg, name + ".tower", guide_in_ch, p, rng),
      db1(reg, name + ".db1", p.ctx_ch[0], p.ctx_ch[0], 1, rng),
      db2(reg, name + ".db2", p.ctx_ch[1], p.ctx_ch[1], 1, rng),
      db3(reg, name + ".db3", p.ctx_ch[2], p.ctx_ch[2], 1, rng) {}

FusionWeights BCF::weights_from(const Var& guidance) const { return tower(guidance); }

FusedContexts BCF::fuse(const ReferenceContexts& f, const ReferenceContexts& b,
                        const FusionWeights& w) const {
  const Var* cf[3] = {&f.c1, &f.c2, &f.c3};
  const Var* cb[3] = {&b.c1, &b.c2, &b.c3};
  const DepthBlock* dbs[3] = {&db1, &db2, &db3};
  FusedContexts out;
  for (int i = 0; i < 3; ++i) {
    HBVC_CHECK(w.s_f[i]->val.same_shape((*cf[i])->val) &&
                   w.s_b[i]->val.same_shape((*cb[i])->val) &&
                   w.b_t[i]->val.same_shape((*cf[i])->val),
               "BCF: weight/context shape mismatch at scale " + std::to_string(i + 1));
    Var mixed = add(add(mul(w.s_f[i], *cf[i]), mul(w.s_b[i], *cb[i])), w.b_t[i]);
    out.c[i] = (*dbs[i])(mixed);
  }
  return out;
}

std::pair<FusedContexts, FusionWeights> BCF::operator()(const ReferenceContexts& f,
                                                        const ReferenceContexts& b,
                                                        const Var& guidance) const {
  FusionWeights w = weights_from(guidance);
  return {fuse(f, b, w), w};
}

PFA::PFA(ParamRegistry& reg, const std::string& name, int latent_ch, int out_ch,
         std::mt19937_64& rng)
    : in(reg, name + ".in", latent_ch, out_ch * 4, 3, 1, 1, rng),
      u1(reg, name + ".u1", out_ch * 4, out_ch * 2, rng),
      u2(reg, name + ".u2", out_ch * 2, out_ch * 2, rng),
      u3(reg, name + ".u3", out_ch * 2, out_ch, rng),
      u4(reg, name + ".u4", out_ch, out_ch, rng) {}

Var PFA::operator()(const Var& y_hat) const {
  return u4(lrelu(u3(lrelu(u2(lrelu(u1(lrelu(in(y_hat)))))))));
}

ConcatFusion::ConcatFusion(ParamRegistry& reg, const std::string& name, const Profile& p,
                           std::mt19937_64& rng)
    : mix1(reg, name + ".m1", 2 * p.ctx_ch[0], p.ctx_ch[0], 3, 1, 1, rng),
      mix2(reg, name + ".m2", 2 * p.ctx_ch[1], p.ctx_ch[1], 3, 1, 1, rng),
      mix3(reg, name + ".m3", 2 * p.ctx_ch[2], p.ctx_ch[2], 3, 1, 1, rng),
      rb1(reg, name + ".rb1", p.ctx_ch[0], rng),
      rb2(reg, name + ".rb2", p.ctx_ch[1], rng),
      rb3(reg, name + ".rb3", p.ctx_ch[2], rng) {}

FusedContexts ConcatFusion::operator()(const ReferenceContexts& f,
                                       const ReferenceContexts& b) const {
  FusedContexts out;
  out.c[0] = rb1(mix1(concat_ch({f.c1, b.c1})));
  out.c[1] = rb2(mix2(concat_ch({f.c2, b.c2})));
  out.c[2] = rb3(mix3(concat_ch({f.c3, b.c3})));
  return out;
}

}  // namespace hbvc
