#pragma once

#include "hbvc/frame.hpp"

namespace hbvc {

// Motion layout of one generated world. The scene is a torus: a panning
// sinusoidal background with textured rectangular objects on top. Objects
// either roam (own velocity, acceleration, wobble -> they occlude and
// disocclude what is behind them) or are locked to the background (a rigid
// scene with no occlusion at all).
struct MotionProfile {
  double pan_min = 0.1;       // |background velocity| per axis, px/frame
  double pan_max = 0.45;
  int object_count = 3;
  double occlusion_prob = 0.7;   // chance an object roams
  double obj_speed_max = 0.9;    // roamer speed relative to background
  double accel_max = 0.015;      // px/frame^2
  double wobble_amp_max = 1.5;   // px, sinusoidal path component
  bool integer_pan = false;      // snap all velocities to integers, no accel
};

struct SynthSpec {
  int num_sequences = 1;
  int length = 33;
  int width = 64;
  int height = 64;
  MotionProfile motion;
  uint64_t seed = 0;

  void validate() const;  // resolution >= 64x64, length >= 3
};

// Procedural periodic texture: a sum of integer-frequency sinusoids, exact
// at any real coordinate.
struct SynthTexture {
  struct Wave {
    int fx, fy;
    double amp, phase;
  };
  double dc[3];
  std::vector<Wave> waves[3];
  int period_x = 64, period_y = 64;

  double sample(int c, double x, double y) const;
};

struct SynthObject {
  SynthTexture tex;
  double half_w, half_h;
  double cx0, cy0;       // center at t=0
  double vx, vy;         // velocity
  double ax, ay;         // acceleration
  double wob_amp, wob_freq, wob_phase;
  bool roams;

  double cx(double t) const;
  double cy(double t) const;
};

// One generated sequence plus its exact geometry side channel.
struct SyntheticSequence {
  Sequence seq;
  SynthTexture background;
  double pan_x = 0.0, pan_y = 0.0;
  std::vector<SynthObject> objects;

  int width() const { return seq.width(); }
  int height() const { return seq.height(); }

  // index of the topmost object at world position (x,y) at time t; -1 = bg
  int layer_at(double x, double y, double t) const;

  // Ground-truth backward-warp flow (2,H,W), (dx,dy): frame t pixel p shows
  // the same surface point as frame r at p + flow(p).
  Tensor gt_flow(int t, int r) const;

  // 1 where the surface visible at (p,t) is also visible at frame r.
  Tensor visibility(int t, int r) const;

  // Pixels of frame t visible in exactly one reference: mask_f covers
  // "visible in f, hidden in b" (forward-informative), mask_b the converse.
  void informative_regions(int t, int f, int b, Tensor* mask_f, Tensor* mask_b) const;
};

// Deterministic in spec.seed; sequence i depends only on (seed, i).
std::vector<SyntheticSequence> generate_synthetic(const SynthSpec& spec);

}  // namespace hbvc
