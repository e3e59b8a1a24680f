#pragma once

#include "hbvc/nn.hpp"
#include "hbvc/profiles.hpp"

namespace hbvc {

enum class FlowDir : uint8_t { ToForward, ToBackward };

// Optical flows at three fresh scales; v1 full res, v2 half, v3 quarter,
// each in its own scale's pixel units, channels ordered (dx, dy).
struct MultiScaleFlows {
  Var v1, v2, v3;
  FlowDir dir = FlowDir::ToForward;
};

// Coarse-to-fine estimator. One refinement stack, shared across the internal
// pyramid levels, predicts a flow increment from (target, warped source,
// upsampled flow).
struct FlowNet {
  ConvAct c1, c2, c3, c4;
  Conv2d head;  // zero-initialized: the untrained net predicts zero flow
  int levels = 3;

  FlowNet() = default;
  FlowNet(ParamRegistry& reg, const std::string& name, const Profile& p, std::mt19937_64& rng);

  // flow such that warp(src, flow) ~ dst, at the input resolution
  Var run(const Var& dst, const Var& src) const;

  // Fresh estimates at {1, 1/2, 1/4} of the input resolution; each scale is
  // computed on downsampled inputs, not resampled from a neighbour scale.
  MultiScaleFlows estimate(const Var& x_t, const Var& x_ref, FlowDir dir) const;
};

// Scale-replacement knob: m1 substitutes v1 with upsampled v2, m2/m3
// substitute v2/v3 with downsampled finer-scale flows. Flow values are
// rescaled to the destination scale's pixel units.
MultiScaleFlows apply_flow_mode(const MultiScaleFlows& f, FlowScaleMode mode);

Var upscale_flow2(const Var& f);    // spatial x2, values x2
Var downscale_flow2(const Var& f);  // spatial /2, values /2

}  // namespace hbvc
