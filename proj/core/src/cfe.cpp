#include "hbvc/cfe.hpp"

namespace hbvc {

CFE::CFE(ParamRegistry& reg, const std::string& name, const Profile& p, std::mt19937_64& rng)
    : in1(reg, name + ".in1", p.feat_ch, p.ctx_ch[0], 3, 1, rng),
      d12(reg, name + ".d12", p.ctx_ch[0], p.ctx_ch[1], 3, 2, rng),
      d23(reg, name + ".d23", p.ctx_ch[1], p.ctx_ch[2], 3, 2, rng),
      r1(reg, name + ".r1", p.ctx_ch[0], rng),
      r2(reg, name + ".r2", p.ctx_ch[1], rng),
      r3(reg, name + ".r3", p.ctx_ch[2], rng) {}

ReferenceContexts CFE::operator()(const Var& f_ref, const MultiScaleFlows& flows) const {
  HBVC_CHECK(f_ref->val.dim(1) == flows.v1->val.dim(1) &&
                 f_ref->val.dim(2) == flows.v1->val.dim(2),
             "CFE: feature / flow resolution mismatch");
  Var l1 = in1(f_ref);
  Var l2 = d12(l1);
  Var l3 = d23(l2);
  ReferenceContexts out;
  out.dir = flows.dir;
  out.c1 = r1(warp_bilinear(l1, flows.v1));
  out.c2 = r2(warp_bilinear(l2, flows.v2));
  out.c3 = r3(warp_bilinear(l3, flows.v3));
  return out;
}

}  // namespace hbvc
