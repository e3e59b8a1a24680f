#pragma once

#include "hbvc/flow.hpp"

namespace hbvc {

// Motion-compensated reference context pyramid at scales {1, 1/2, 1/4}.
struct ReferenceContexts {
  Var c1, c2, c3;
  FlowDir dir = FlowDir::ToForward;
};

// Contextual-feature extraction: feature pyramid from the decoded reference
// feature, warped per scale with the reconstructed flows, then refined.
// One instance serves both directions (shared weights).
struct CFE {
  ConvAct in1;   // feat_ch -> c1
  ConvAct d12;   // c1 -> c2, stride 2
  ConvAct d23;   // c2 -> c3, stride 2
  ResBlock r1, r2, r3;

  CFE() = default;
  CFE(ParamRegistry& reg, const std::string& name, const Profile& p, std::mt19937_64& rng);

  ReferenceContexts operator()(const Var& f_ref, const MultiScaleFlows& flows) const;
};

}  // namespace hbvc
