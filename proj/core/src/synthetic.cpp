#include "hbvc/synthetic.hpp"

#include <cmath>

namespace hbvc {

namespace {
constexpr double kTau = 6.283185307179586477;

double wrap_delta(double d, double n) {
  // representative of d in [-n/2, n/2)
  d = std::fmod(d, n);
  if (d < -n / 2) d += n;
  if (d >= n / 2) d -= n;
  return d;
}

SynthTexture make_texture(std::mt19937_64& rng, int px, int py, double contrast, int max_freq) {
  SynthTexture t;
  t.period_x = px;
  t.period_y = py;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  for (int c = 0; c < 3; ++c) {
    t.dc[c] = 0.35 + 0.3 * u01(rng);
    int waves = 5;
    double amp_budget = contrast;
    for (int k = 0; k < waves; ++k) {
      SynthTexture::Wave w;
      do {
        w.fx = freq(rng);
        w.fy = freq(rng);
      } while (w.fx == 0 && w.fy == 0);
      w.amp = amp_budget * (0.3 + 0.7 * u01(rng)) / waves;
      w.phase = kTau * u01(rng);
      t.waves[c].push_back(w);
    }
  }
  return t;
}
}  // namespace

void SynthSpec::validate() const {
  HBVC_CHECK(num_sequences >= 1, "synth: num_sequences must be >= 1");
  HBVC_CHECK(length >= 3, "synth: length must be >= 3");
  HBVC_CHECK(width >= 64 && height >= 64, "synth: resolution must be at least 64x64");
  HBVC_CHECK(motion.occlusion_prob >= 0.0 && motion.occlusion_prob <= 1.0,
             "synth: occlusion_prob must be in [0,1]");
  HBVC_CHECK(motion.object_count >= 0, "synth: negative object count");
}

double SynthTexture::sample(int c, double x, double y) const {
  double v = dc[c];
  for (const Wave& w : waves[c])
    v += w.amp * std::sin(kTau * (w.fx * x / period_x + w.fy * y / period_y) + w.phase);
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double SynthObject::cx(double t) const {
  return cx0 + vx * t + 0.5 * ax * t * t + wob_amp * std::sin(wob_freq * t + wob_phase);
}

double SynthObject::cy(double t) const {
  return cy0 + vy * t + 0.5 * ay * t * t + wob_amp * std::cos(wob_freq * t + wob_phase);
}

int SyntheticSequence::layer_at(double x, double y, double t) const {
  for (int k = static_cast<int>(objects.size()) - 1; k >= 0; --k) {
    const SynthObject& o = objects[k];
    double dx = wrap_delta(x - o.cx(t), width());
    double dy = wrap_delta(y - o.cy(t), height());
    if (std::fabs(dx) <= o.half_w && std::fabs(dy) <= o.half_h) return k;
  }
  return -1;
}

Tensor SyntheticSequence::gt_flow(int t, int r) const {
  int H = height(), W = width();
  Tensor flow({2, H, W});
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      int k = layer_at(x, y, t);
      if (k < 0) {
        flow.at(0, y, x) = pan_x * (r - t);
        flow.at(1, y, x) = pan_y * (r - t);
      } else {
        flow.at(0, y, x) = objects[k].cx(r) - objects[k].cx(t);
        flow.at(1, y, x) = objects[k].cy(r) - objects[k].cy(t);
      }
    }
  return flow;
}

Tensor SyntheticSequence::visibility(int t, int r) const {
  int H = height(), W = width();
  Tensor vis({1, H, W});
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      int k = layer_at(x, y, t);
      double dx, dy;
      if (k < 0) {
        dx = pan_x * (r - t);
        dy = pan_y * (r - t);
      } else {
        dx = objects[k].cx(r) - objects[k].cx(t);
        dy = objects[k].cy(r) - objects[k].cy(t);
      }
      vis.at(0, y, x) = layer_at(x + dx, y + dy, r) == k ? 1.0 : 0.0;
    }
  return vis;
}

void SyntheticSequence::informative_regions(int t, int f, int b, Tensor* mask_f,
                                            Tensor* mask_b) const {
  Tensor vf = visibility(t, f);
  Tensor vb = visibility(t, b);
  *mask_f = Tensor(vf.shape);
  *mask_b = Tensor(vf.shape);
  for (int64_t i = 0; i < vf.numel(); ++i) {
    mask_f->v[i] = (vf.v[i] > 0.5 && vb.v[i] < 0.5) ? 1.0 : 0.0;
    mask_b->v[i] = (vb.v[i] > 0.5 && vf.v[i] < 0.5) ? 1.0 : 0.0;
  }
}

std::vector<SyntheticSequence> generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::vector<SyntheticSequence> out;
  out.reserve(spec.num_sequences);
  for (int si = 0; si < spec.num_sequences; ++si) {
    std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x1000193ULL * si + 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> sgn(-1.0, 1.0);
    const MotionProfile& m = spec.motion;

    SyntheticSequence s;
    s.background = make_texture(rng, spec.width, spec.height, 0.5, 6);
    auto pick_speed = [&](double lo, double hi) {
      double v = (lo + (hi - lo) * u01(rng)) * (u01(rng) < 0.5 ? -1.0 : 1.0);
      return m.integer_pan ? std::nearbyint(v) : v;
    };
    s.pan_x = pick_speed(m.pan_min, m.pan_max);
    s.pan_y = pick_speed(m.pan_min, m.pan_max);

    for (int k = 0; k < m.object_count; ++k) {
      SynthObject o;
      o.tex = make_texture(rng, 24, 24, 0.85, 8);
      o.half_w = 4.0 + 6.0 * u01(rng);
      o.half_h = 4.0 + 6.0 * u01(rng);
      o.cx0 = spec.width * u01(rng);
      o.cy0 = spec.height * u01(rng);
      o.roams = u01(rng) < m.occlusion_prob;
      if (o.roams) {
        o.vx = s.pan_x + m.obj_speed_max * sgn(rng);
        o.vy = s.pan_y + m.obj_speed_max * sgn(rng);
        o.ax = m.accel_max * sgn(rng);
        o.ay = m.accel_max * sgn(rng);
        o.wob_amp = m.wobble_amp_max * u01(rng);
        o.wob_freq = 0.1 + 0.3 * u01(rng);
        o.wob_phase = kTau * u01(rng);
        if (m.integer_pan) {
          o.vx = std::nearbyint(o.vx);
          o.vy = std::nearbyint(o.vy);
          o.ax = o.ay = o.wob_amp = 0.0;
        }
      } else {
        // locked to the background: rigid scene, occludes nothing over time
        o.vx = s.pan_x;
        o.vy = s.pan_y;
        o.ax = o.ay = 0.0;
        o.wob_amp = 0.0;
        o.wob_freq = 0.1;
        o.wob_phase = 0.0;
      }
      s.objects.push_back(o);
    }

    s.seq.fps = 30.0;
    s.seq.name = "synth_" + std::to_string(spec.seed) + "_" + std::to_string(si);
    for (int t = 0; t < spec.length; ++t) {
      Frame f;
      f.index = t;
      f.pixels = Tensor({3, spec.height, spec.width});
      for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
          int k = s.layer_at(x, y, t);
          for (int c = 0; c < 3; ++c) {
            double v;
            if (k < 0) {
              v = s.background.sample(c, x - s.pan_x * t, y - s.pan_y * t);
            } else {
              const SynthObject& o = s.objects[k];
              v = o.tex.sample(c, x - o.cx(t), y - o.cy(t));
            }
            f.pixels.at(c, y, x) = v;
          }
        }
      s.seq.frames.push_back(std::move(f));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hbvc
