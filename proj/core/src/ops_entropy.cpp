#include <cmath>

#include "hbvc/ops.hpp"

namespace hbvc {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kLn2 = 0.6931471805599453094;

inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double gaussian_bits_scalar(double y, double mu, double sigma) {
  HBVC_CHECK(sigma > 0.0, "gaussian_bits: sigma must be positive");
  double u = (y - mu + 0.5) / sigma;
  double l = (y - mu - 0.5) / sigma;
  double p = norm_cdf(u) - norm_cdf(l);
  if (p < kRateTailFloor) p = kRateTailFloor;
  return -std::log2(p);
}

Var gaussian_bits(const Var& y, const Var& mu, const Var& sigma) {
  HBVC_CHECK(y->val.same_shape(mu->val) && y->val.same_shape(sigma->val),
             "gaussian_bits: shape mismatch");
  const Tensor& yv = y->val;
  const Tensor& mv = mu->val;
  const Tensor& sv = sigma->val;
  Tensor out(yv.shape);
  for (size_t i = 0; i < out.v.size(); ++i) {
    HBVC_CHECK(sv.v[i] > 0.0, "gaussian_bits: sigma must be positive");
    out.v[i] = gaussian_bits_scalar(yv.v[i], mv.v[i], sv.v[i]);
  }
  return make_op(std::move(out), {y, mu, sigma}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& yv = n.parents[0]->val;
    const Tensor& mv = n.parents[1]->val;
    const Tensor& sv = n.parents[2]->val;
    Tensor gy(yv.shape), gmu(mv.shape), gsig(sv.shape);
    for (size_t i = 0; i < yv.v.size(); ++i) {
      double s = sv.v[i];
      double u = (yv.v[i] - mv.v[i] + 0.5) / s;
      double l = (yv.v[i] - mv.v[i] - 0.5) / s;
      double p = norm_cdf(u) - norm_cdf(l);
      bool floored = p < kRateTailFloor;
      double pf = floored ? kRateTailFloor : p;
      double dbits_dp = -1.0 / (pf * kLn2);
      double gi = g.v[i];
      // When the mass is floored, only let gradients that grow it through.
      if (floored && gi * dbits_dp >= 0.0) {
        gy.v[i] = gmu.v[i] = gsig.v[i] = 0.0;
        continue;
      }
      double phi_u = norm_pdf(u), phi_l = norm_pdf(l);
      double dp_dy = (phi_u - phi_l) / s;
      double dp_dsig = -(phi_u * u - phi_l * l) / s;
      gy.v[i] = gi * dbits_dp * dp_dy;
      gmu.v[i] = -gy.v[i];
      gsig.v[i] = gi * dbits_dp * dp_dsig;
    }
    gm.accum(n.parents[0], std::move(gy));
    gm.accum(n.parents[1], std::move(gmu));
    gm.accum(n.parents[2], std::move(gsig));
  });
}

}  // namespace hbvc
