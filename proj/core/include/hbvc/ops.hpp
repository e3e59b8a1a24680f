#pragma once

#include <random>

#include "hbvc/autograd.hpp"

namespace hbvc {

// ---- elementwise ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var div(const Var& a, const Var& b);
Var neg(const Var& a);
Var add_scalar(const Var& a, double s);
Var mul_scalar(const Var& a, double s);
Var leaky_relu(const Var& a, double slope = 0.01);
Var sigmoid(const Var& a);
Var tanh_op(const Var& a);
Var softplus(const Var& a);
Var clamp(const Var& a, double lo, double hi);
// max(a, bound); gradient passes where a >= bound or where it pushes up.
Var lower_bound(const Var& a, double bound);
Var square(const Var& a);
Var log_op(const Var& a);  // natural log, a > 0
Var exp_op(const Var& a);

// ---- structure ----
Var concat_ch(const std::vector<Var>& xs);             // along C of (C,H,W)
Var slice_ch(const Var& x, int c0, int c1);            // channels [c0,c1)
Var scale_channels(const Var& x, const Var& s);        // s: (C)
Var crop2d(const Var& x, int y0, int x0, int h, int w);

// ---- reductions ----
Var sum_all(const Var& x);     // -> (1)
Var mean_all(const Var& x);    // -> (1)
Var mse(const Var& a, const Var& b);
Var add_weighted(const std::vector<Var>& xs, const std::vector<double>& w);  // scalars

// ---- convolution ----
// x: (Cin,H,W), w: (Cout, Cin/groups, kh, kw), b: (Cout) or null; zero padding.
Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad, int groups = 1);

// ---- spatial ----
Var avg_pool2(const Var& x);           // 2x2 mean, stride 2 (H,W even)
Var upsample2_bilinear(const Var& x);  // factor 2, half-pixel centers
Var pixel_shuffle(const Var& x, int r);
Var pixel_unshuffle(const Var& x, int r);
// Bilinear backward warp with border-replicate sampling.
// img: (C,H,W), flow: (2,H,W) ordered (dx,dy); out(c,y,x)=img(c, y+dy, x+dx).
Var warp_bilinear(const Var& img, const Var& flow);

// ---- quantization ----
Var round_ste(const Var& x);                          // round, straight-through grad
Var add_uniform_noise(const Var& x, std::mt19937_64& rng);  // +U[-0.5,0.5)

// ---- entropy ----
// Elementwise coding cost in bits of integer-ish y under N(mu, sigma^2) with
// unit quantization bins and a floored tail mass.
// bits = -log2(max(Phi((y-mu+0.5)/sigma) - Phi((y-mu-0.5)/sigma), tail_floor))
inline constexpr double kRateTailFloor = 1e-9;
Var gaussian_bits(const Var& y, const Var& mu, const Var& sigma);
double gaussian_bits_scalar(double y, double mu, double sigma);

// Standard normal CDF.
double norm_cdf(double x);

// tensor-level helpers (no autograd)
Tensor avg_pool2_t(const Tensor& x);
Tensor upsample2_bilinear_t(const Tensor& x);
Tensor warp_bilinear_t(const Tensor& img, const Tensor& flow);

}  // namespace hbvc
