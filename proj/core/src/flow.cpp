#include "hbvc/flow.hpp"

namespace hbvc {

FlowNet::FlowNet(ParamRegistry& reg, const std::string& name, const Profile& p,
                 std::mt19937_64& rng)
    : c1(reg, name + ".c1", 8, p.flow_ch, 3, 1, rng),
      c2(reg, name + ".c2", p.flow_ch, p.flow_ch, 3, 1, rng),
      c3(reg, name + ".c3", p.flow_ch, p.flow_ch, 3, 1, rng),
      c4(reg, name + ".c4", p.flow_ch, p.flow_ch, 3, 1, rng),
      head(reg, name + ".head", p.flow_ch, 2, 3, 1, 1, rng, 1, 0.0) {}

Var FlowNet::run(const Var& dst, const Var& src) const {
  HBVC_CHECK(dst->val.same_shape(src->val), "flow: frame shape mismatch");
  std::vector<Var> pyr_d{dst}, pyr_s{src};
  for (int l = 1; l < levels; ++l) {
    pyr_d.push_back(avg_pool2(pyr_d.back()));
    pyr_s.push_back(avg_pool2(pyr_s.back()));
  }
  Var flow;
  for (int l = levels - 1; l >= 0; --l) {
    if (!flow) {
      flow = make_const(Tensor({2, pyr_d[l]->val.dim(1), pyr_d[l]->val.dim(2)}));
    } else {
      flow = upscale_flow2(flow);
    }
    Var warped = warp_bilinear(pyr_s[l], flow);
    Var delta = head(c4(c3(c2(c1(concat_ch({pyr_d[l], warped, flow}))))));
    flow = add(flow, delta);
  }
  return flow;
}

MultiScaleFlows FlowNet::estimate(const Var& x_t, const Var& x_ref, FlowDir dir) const {
  HBVC_CHECK(x_t->val.same_shape(x_ref->val), "estimate_flows: shape mismatch");
  HBVC_CHECK(x_t->val.dim(1) % 4 == 0 && x_t->val.dim(2) % 4 == 0,
             "estimate_flows: H,W must be divisible by 4");
  MultiScaleFlows f;
  f.dir = dir;
  f.v1 = run(x_t, x_ref);
  Var t2 = avg_pool2(x_t), r2 = avg_pool2(x_ref);
  f.v2 = run(t2, r2);
  f.v3 = run(avg_pool2(t2), avg_pool2(r2));
  return f;
}

Var upscale_flow2(const Var& f) { return mul_scalar(upsample2_bilinear(f), 2.0); }
Var downscale_flow2(const Var& f) { return mul_scalar(avg_pool2(f), 0.5); }

MultiScaleFlows apply_flow_mode(const MultiScaleFlows& f, FlowScaleMode mode) {
  MultiScaleFlows out = f;
  switch (mode) {
    case FlowScaleMode::Full: break;
    case FlowScaleMode::M1: out.v1 = upscale_flow2(f.v2); break;
    case FlowScaleMode::M2: out.v2 = downscale_flow2(f.v1); break;
    case FlowScaleMode::M3: out.v3 = downscale_flow2(f.v2); break;
  }
  return out;
}

}  // namespace hbvc
