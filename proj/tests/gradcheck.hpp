#pragma once

#include <cmath>
#include <functional>

#include "hbvc/ops.hpp"

// Central-difference gradient check of a scalar-valued function of one or
// more leaf tensors. Returns the max relative error over all elements of
// all checked leaves.
namespace hbvc::testing {

inline double finite_diff_max_rel_err(
    const std::function<hbvc::Var()>& forward, const std::vector<hbvc::Var>& leaves,
    double h = 1e-4) {
  using namespace hbvc;
  GradMap gm;
  Var loss = forward();
  backward(loss, gm);

  double worst = 0.0;
  for (const Var& leaf : leaves) {
    const Tensor* ga = gm.find(leaf.get());
    Tensor analytic = ga ? *ga : Tensor(leaf->val.shape);
    for (int64_t i = 0; i < leaf->val.numel(); ++i) {
      double keep = leaf->val.v[i];
      leaf->val.v[i] = keep + h;
      double fp = forward()->val.v[0];
      leaf->val.v[i] = keep - h;
      double fm = forward()->val.v[0];
      leaf->val.v[i] = keep;
      double fd = (fp - fm) / (2.0 * h);
      double a = analytic.v[i];
      double denom = std::max({std::fabs(a), std::fabs(fd), 1e-3});
      worst = std::max(worst, std::fabs(a - fd) / denom);
    }
  }
  return worst;
}

}  // namespace hbvc::testing
