#include <random>

#include "doctest.h"
#include "gradcheck.hpp"
#include "hbvc/nn.hpp"
#include "hbvc/ops.hpp"

using namespace hbvc;
using hbvc::testing::finite_diff_max_rel_err;

namespace {
std::mt19937_64 rng(1234);

Var rand_leaf(std::vector<int> shape, double lo = -1.0, double hi = 1.0) {
  return make_param(Tensor::uniform(std::move(shape), rng, lo, hi));
}
}  // namespace

TEST_CASE("elementwise ops forward values") {
  Var a = make_param(Tensor({2, 2, 2}, 2.0));
  Var b = make_param(Tensor({2, 2, 2}, 3.0));
  CHECK(add(a, b)->val.v[0] == doctest::Approx(5.0));
  CHECK(sub(a, b)->val.v[0] == doctest::Approx(-1.0));
  CHECK(mul(a, b)->val.v[0] == doctest::Approx(6.0));
  CHECK(div(a, b)->val.v[0] == doctest::Approx(2.0 / 3.0));
  CHECK(mul_scalar(a, 0.5)->val.v[0] == doctest::Approx(1.0));
  CHECK(mean_all(a)->val.v[0] == doctest::Approx(2.0));
}

TEST_CASE("backward accumulates through shared subexpressions") {
  Var a = make_param(Tensor({1}, 3.0));
  Var y = add(mul(a, a), a);  // a^2 + a, dy/da = 2a + 1 = 7
  GradMap gm;
  backward(y, gm);
  CHECK(gm.find(a.get())->v[0] == doctest::Approx(7.0));
}

TEST_CASE("grad disabled skips graph recording") {
  Var a = make_param(Tensor({1}, 3.0));
  NoGradGuard ng;
  Var y = mul(a, a);
  CHECK_FALSE(y->needs_grad);
  CHECK(y->parents.empty());
}

TEST_CASE("gradcheck: arithmetic and activations") {
  Var a = rand_leaf({3, 4, 4});
  Var b = rand_leaf({3, 4, 4}, 0.5, 1.5);
  auto f = [&] {
    Var h = mul(sigmoid(a), tanh_op(b));
    h = add(h, softplus(sub(a, b)));
    h = div(h, add_scalar(square(b), 1.0));
    return mean_all(leaky_relu(h, 0.1));
  };
  CHECK(finite_diff_max_rel_err(f, {a, b}) < 1e-6);
}

TEST_CASE("gradcheck: reductions and structure ops") {
  Var a = rand_leaf({4, 4, 4});
  Var b = rand_leaf({2, 4, 4});
  Var s = rand_leaf({6}, 0.5, 1.5);
  auto f = [&] {
    Var c = concat_ch({a, b});
    c = scale_channels(c, s);
    Var sl = slice_ch(c, 1, 5);
    return add(mse(sl, mul_scalar(slice_ch(c, 0, 4), 0.9)), mean_all(crop2d(c, 1, 1, 2, 2)));
  };
  CHECK(finite_diff_max_rel_err(f, {a, b, s}) < 1e-6);
}

TEST_CASE("gradcheck: conv2d dense, strided, grouped") {
  Var x = rand_leaf({4, 6, 6});
  Var w = rand_leaf({6, 4, 3, 3});
  Var b = rand_leaf({6});
  auto f1 = [&] { return mean_all(conv2d(x, w, b, 1, 1)); };
  CHECK(finite_diff_max_rel_err(f1, {x, w, b}) < 1e-6);

  auto f2 = [&] { return mean_all(square(conv2d(x, w, b, 2, 1))); };
  CHECK(finite_diff_max_rel_err(f2, {x, w, b}) < 1e-6);

  Var wg = rand_leaf({4, 1, 3, 3});  // depthwise
  Var bg = rand_leaf({4});
  auto f3 = [&] { return mean_all(square(conv2d(x, wg, bg, 1, 1, 4))); };
  CHECK(finite_diff_max_rel_err(f3, {x, wg, bg}) < 1e-6);
}

TEST_CASE("conv2d shape contract") {
  Var x = rand_leaf({3, 8, 8});
  Var w = rand_leaf({5, 3, 3, 3});
  Var b = rand_leaf({5});
  auto y = conv2d(x, w, b, 2, 1);
  CHECK(y->val.shape == std::vector<int>{5, 4, 4});
  CHECK_THROWS_AS(conv2d(x, rand_leaf({5, 4, 3, 3}), b, 1, 1), Error);
}

TEST_CASE("gradcheck: pooling, upsampling, pixel shuffle") {
  Var x = rand_leaf({4, 4, 4});
  auto f1 = [&] { return mean_all(square(avg_pool2(x))); };
  CHECK(finite_diff_max_rel_err(f1, {x}) < 1e-6);
  auto f2 = [&] { return mean_all(square(upsample2_bilinear(x))); };
  CHECK(finite_diff_max_rel_err(f2, {x}) < 1e-6);
  auto f3 = [&] { return mean_all(square(pixel_shuffle(x, 2))); };
  CHECK(finite_diff_max_rel_err(f3, {x}) < 1e-6);
  auto f4 = [&] { return mean_all(square(pixel_unshuffle(x, 2))); };
  CHECK(finite_diff_max_rel_err(f4, {x}) < 1e-6);
}

TEST_CASE("pixel shuffle roundtrips") {
  Var x = rand_leaf({8, 3, 5});
  Var y = pixel_unshuffle(pixel_shuffle(x, 2), 2);
  for (int64_t i = 0; i < x->val.numel(); ++i) CHECK(y->val.v[i] == x->val.v[i]);
}

TEST_CASE("gradcheck: bilinear warp wrt image and flow") {
  // Keep samples strictly interior and away from integer crossings.
  Var img = rand_leaf({2, 8, 8});
  Var flow = make_param(Tensor::uniform({2, 8, 8}, rng, 0.2, 0.45));
  auto f = [&] { return mean_all(square(warp_bilinear(img, flow))); };
  CHECK(finite_diff_max_rel_err(f, {img, flow}) < 1e-3);
}

TEST_CASE("warp identity and shift") {
  std::mt19937_64 r2(7);
  Tensor img = Tensor::uniform({1, 4, 6}, r2, 0.0, 1.0);
  Tensor zero({2, 4, 6});
  Tensor w = warp_bilinear_t(img, zero);
  for (int64_t i = 0; i < img.numel(); ++i) CHECK(w.v[i] == doctest::Approx(img.v[i]));

  // constant flow (1,0) on a ramp: out(x) = img(x+1), right border replicated
  Tensor ramp({1, 1, 5});
  for (int x = 0; x < 5; ++x) ramp.at(0, 0, x) = x;
  Tensor one({2, 1, 5});
  for (int x = 0; x < 5; ++x) one.at(0, 0, x) = 1.0;
  Tensor shifted = warp_bilinear_t(ramp, one);
  for (int x = 0; x < 4; ++x) CHECK(shifted.at(0, 0, x) == doctest::Approx(x + 1.0));
  CHECK(shifted.at(0, 0, 4) == doctest::Approx(4.0));  // replicate

  // half-pixel flow on [0,1,0,...] samples the midpoint
  Tensor imp({1, 1, 4});
  imp.at(0, 0, 1) = 1.0;
  Tensor half({2, 1, 4});
  for (int x = 0; x < 4; ++x) half.at(0, 0, x) = 0.5;
  Tensor s = warp_bilinear_t(imp, half);
  CHECK(s.at(0, 0, 0) == doctest::Approx(0.5));
  CHECK(s.at(0, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("round_ste and noise are straight-through") {
  Var x = rand_leaf({2, 3, 3});
  GradMap gm;
  backward(mean_all(round_ste(x)), gm);
  const Tensor* g = gm.find(x.get());
  REQUIRE(g != nullptr);
  for (double v : g->v) CHECK(v == doctest::Approx(1.0 / x->val.numel()));
  for (int64_t i = 0; i < x->val.numel(); ++i)
    CHECK(round_ste(x)->val.v[i] == doctest::Approx(std::nearbyint(x->val.v[i])));
}

TEST_CASE("lower_bound clamps and passes upward gradients") {
  Var x = make_param(Tensor({2}, 0.0));
  x->val.v[0] = 0.05;
  x->val.v[1] = 0.5;
  Var y = lower_bound(x, 0.11);
  CHECK(y->val.v[0] == doctest::Approx(0.11));
  CHECK(y->val.v[1] == doctest::Approx(0.5));
  GradMap gm;
  backward(sum_all(y), gm);  // positive incoming grad: blocked below bound
  CHECK(gm.find(x.get())->v[0] == doctest::Approx(0.0));
  CHECK(gm.find(x.get())->v[1] == doctest::Approx(1.0));
  GradMap gm2;
  backward(mul_scalar(sum_all(y), -1.0), gm2);  // pushes value up: passes
  CHECK(gm2.find(x.get())->v[0] == doctest::Approx(-1.0));
}

TEST_CASE("gradcheck: gaussian coding cost") {
  Var y = rand_leaf({2, 3, 3}, -2.0, 2.0);
  Var mu = rand_leaf({2, 3, 3}, -0.5, 0.5);
  Var sg = rand_leaf({2, 3, 3}, 0.4, 1.6);
  auto f = [&] { return mean_all(gaussian_bits(y, mu, sg)); };
  CHECK(finite_diff_max_rel_err(f, {y, mu, sg}) < 1e-5);
}

TEST_CASE("gaussian bits closed-form values") {
  // unit-bin mass around 0 of a standard normal
  double p = norm_cdf(0.5) - norm_cdf(-0.5);
  CHECK(gaussian_bits_scalar(0.0, 0.0, 1.0) == doctest::Approx(-std::log2(p)).epsilon(1e-12));
  // far tail stays finite through the floor
  double far = gaussian_bits_scalar(20.0, 0.0, 1.0);
  CHECK(far > 0.0);
  CHECK(far == doctest::Approx(-std::log2(1e-9)));
  CHECK_THROWS_AS(gaussian_bits_scalar(0.0, 0.0, -1.0), Error);
}

TEST_CASE("nn blocks keep shapes and register parameters") {
  ParamRegistry reg;
  std::mt19937_64 r(5);
  DConv dc(reg, "dc", 8, 12, 2, r);
  DepthBlock db(reg, "db", 12, 12, 1, r);
  DepthBlock dbs(reg, "dbs", 12, 16, 2, r);
  UpBlock up(reg, "up", 16, 8, r);
  ResBlock rb(reg, "rb", 8, r);

  Var x = make_const(Tensor::uniform({8, 16, 16}, r, 0.0, 1.0));
  Var h = dc(x);
  CHECK(h->val.shape == std::vector<int>{12, 8, 8});
  h = db(h);
  CHECK(h->val.shape == std::vector<int>{12, 8, 8});
  h = dbs(h);
  CHECK(h->val.shape == std::vector<int>{16, 4, 4});
  h = up(h);
  CHECK(h->val.shape == std::vector<int>{8, 8, 8});
  h = rb(h);
  CHECK(h->val.shape == std::vector<int>{8, 8, 8});
  CHECK(reg.total_elements() > 0);
  CHECK_THROWS_AS(reg.add("dc.dw.w", Tensor({1})), Error);
}
