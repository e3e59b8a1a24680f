#include <algorithm>
#include <cmath>

#include "hbvc/ops.hpp"

namespace hbvc {

namespace {
inline int clampi(int x, int lo, int hi) { return x < lo ? lo : (x > hi ? hi : x); }
}  // namespace

Tensor avg_pool2_t(const Tensor& x) {
  HBVC_CHECK(x.ndim() == 3 && x.dim(1) % 2 == 0 && x.dim(2) % 2 == 0,
             "avg_pool2: odd spatial size " + x.shape_str());
  int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  Tensor out({C, H / 2, W / 2});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < H / 2; ++y)
      for (int xx = 0; xx < W / 2; ++xx)
        out.at(c, y, xx) = 0.25 * (x.at(c, 2 * y, 2 * xx) + x.at(c, 2 * y, 2 * xx + 1) +
                                   x.at(c, 2 * y + 1, 2 * xx) + x.at(c, 2 * y + 1, 2 * xx + 1));
  return out;
}

Var avg_pool2(const Var& x) {
  Tensor out = avg_pool2_t(x->val);
  return make_op(std::move(out), {x}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& xv = n.parents[0]->val;
    Tensor gx(xv.shape);
    int C = xv.dim(0), H = xv.dim(1), W = xv.dim(2);
    for (int c = 0; c < C; ++c)
      for (int y = 0; y < H / 2; ++y)
        for (int xx = 0; xx < W / 2; ++xx) {
          double gv = 0.25 * g.at(c, y, xx);
          gx.at(c, 2 * y, 2 * xx) = gv;
          gx.at(c, 2 * y, 2 * xx + 1) = gv;
          gx.at(c, 2 * y + 1, 2 * xx) = gv;
          gx.at(c, 2 * y + 1, 2 * xx + 1) = gv;
        }
    gm.accum(n.parents[0], std::move(gx));
  });
}

// Half-pixel-center bilinear, factor 2, edge clamped.
Tensor upsample2_bilinear_t(const Tensor& x) {
  HBVC_CHECK(x.ndim() == 3, "upsample2: expects (C,H,W)");
  int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  Tensor out({C, H * 2, W * 2});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < 2 * H; ++y) {
      double sy = (y + 0.5) / 2.0 - 0.5;
      int y0 = static_cast<int>(std::floor(sy));
      double ay = sy - y0;
      int yc0 = clampi(y0, 0, H - 1), yc1 = clampi(y0 + 1, 0, H - 1);
      for (int xx = 0; xx < 2 * W; ++xx) {
        double sx = (xx + 0.5) / 2.0 - 0.5;
        int x0 = static_cast<int>(std::floor(sx));
        double ax = sx - x0;
        int xc0 = clampi(x0, 0, W - 1), xc1 = clampi(x0 + 1, 0, W - 1);
        out.at(c, y, xx) = (1 - ay) * ((1 - ax) * x.at(c, yc0, xc0) + ax * x.at(c, yc0, xc1)) +
                           ay * ((1 - ax) * x.at(c, yc1, xc0) + ax * x.at(c, yc1, xc1));
      }
    }
  return out;
}

Var upsample2_bilinear(const Var& x) {
  Tensor out = upsample2_bilinear_t(x->val);
  return make_op(std::move(out), {x}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& xv = n.parents[0]->val;
    int C = xv.dim(0), H = xv.dim(1), W = xv.dim(2);
    Tensor gx(xv.shape);
    for (int c = 0; c < C; ++c)
      for (int y = 0; y < 2 * H; ++y) {
        double sy = (y + 0.5) / 2.0 - 0.5;
        int y0 = static_cast<int>(std::floor(sy));
        double ay = sy - y0;
        int yc0 = clampi(y0, 0, H - 1), yc1 = clampi(y0 + 1, 0, H - 1);
        for (int xx = 0; xx < 2 * W; ++xx) {
          double sx = (xx + 0.5) / 2.0 - 0.5;
          int x0 = static_cast<int>(std::floor(sx));
          double ax = sx - x0;
          int xc0 = clampi(x0, 0, W - 1), xc1 = clampi(x0 + 1, 0, W - 1);
          double gv = g.at(c, y, xx);
          gx.at(c, yc0, xc0) += gv * (1 - ay) * (1 - ax);
          gx.at(c, yc0, xc1) += gv * (1 - ay) * ax;
          gx.at(c, yc1, xc0) += gv * ay * (1 - ax);
          gx.at(c, yc1, xc1) += gv * ay * ax;
        }
      }
    gm.accum(n.parents[0], std::move(gx));
  });
}

Var pixel_shuffle(const Var& x, int r) {
  HBVC_CHECK(x->val.ndim() == 3 && x->val.dim(0) % (r * r) == 0, "pixel_shuffle: channels");
  int C = x->val.dim(0) / (r * r), H = x->val.dim(1), W = x->val.dim(2);
  Tensor out({C, H * r, W * r});
  for (int c = 0; c < C; ++c)
    for (int dy = 0; dy < r; ++dy)
      for (int dx = 0; dx < r; ++dx)
        for (int y = 0; y < H; ++y)
          for (int xx = 0; xx < W; ++xx)
            out.at(c, y * r + dy, xx * r + dx) = x->val.at(c * r * r + dy * r + dx, y, xx);
  return make_op(std::move(out), {x}, [r, C, H, W](const Tensor& g, Node& n, GradMap& gm) {
    Tensor gx(n.parents[0]->val.shape);
    for (int c = 0; c < C; ++c)
      for (int dy = 0; dy < r; ++dy)
        for (int dx = 0; dx < r; ++dx)
          for (int y = 0; y < H; ++y)
            for (int xx = 0; xx < W; ++xx)
              gx.at(c * r * r + dy * r + dx, y, xx) = g.at(c, y * r + dy, xx * r + dx);
    gm.accum(n.parents[0], std::move(gx));
  });
}

Var pixel_unshuffle(const Var& x, int r) {
  HBVC_CHECK(x->val.ndim() == 3 && x->val.dim(1) % r == 0 && x->val.dim(2) % r == 0,
             "pixel_unshuffle: spatial size");
  int C = x->val.dim(0), H = x->val.dim(1) / r, W = x->val.dim(2) / r;
  Tensor out({C * r * r, H, W});
  for (int c = 0; c < C; ++c)
    for (int dy = 0; dy < r; ++dy)
      for (int dx = 0; dx < r; ++dx)
        for (int y = 0; y < H; ++y)
          for (int xx = 0; xx < W; ++xx)
            out.at(c * r * r + dy * r + dx, y, xx) = x->val.at(c, y * r + dy, xx * r + dx);
  return make_op(std::move(out), {x}, [r, C, H, W](const Tensor& g, Node& n, GradMap& gm) {
    Tensor gx(n.parents[0]->val.shape);
    for (int c = 0; c < C; ++c)
      for (int dy = 0; dy < r; ++dy)
        for (int dx = 0; dx < r; ++dx)
          for (int y = 0; y < H; ++y)
            for (int xx = 0; xx < W; ++xx)
              gx.at(c, y * r + dy, xx * r + dx) = g.at(c * r * r + dy * r + dx, y, xx);
    gm.accum(n.parents[0], std::move(gx));
  });
}

Tensor warp_bilinear_t(const Tensor& img, const Tensor& flow) {
  HBVC_CHECK(img.ndim() == 3 && flow.ndim() == 3 && flow.dim(0) == 2 &&
                 flow.dim(1) == img.dim(1) && flow.dim(2) == img.dim(2),
             "warp: flow must be (2,H,W) matching image " + img.shape_str());
  int C = img.dim(0), H = img.dim(1), W = img.dim(2);
  Tensor out({C, H, W});
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      double sx = x + flow.at(0, y, x);
      double sy = y + flow.at(1, y, x);
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      double ax = sx - x0, ay = sy - y0;
      int xc0 = clampi(x0, 0, W - 1), xc1 = clampi(x0 + 1, 0, W - 1);
      int yc0 = clampi(y0, 0, H - 1), yc1 = clampi(y0 + 1, 0, H - 1);
      for (int c = 0; c < C; ++c) {
        out.at(c, y, x) =
            (1 - ay) * ((1 - ax) * img.at(c, yc0, xc0) + ax * img.at(c, yc0, xc1)) +
            ay * ((1 - ax) * img.at(c, yc1, xc0) + ax * img.at(c, yc1, xc1));
      }
    }
  return out;
}

Var warp_bilinear(const Var& img, const Var& flow) {
  Tensor out = warp_bilinear_t(img->val, flow->val);
  return make_op(std::move(out), {img, flow}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& iv = n.parents[0]->val;
    const Tensor& fv = n.parents[1]->val;
    int C = iv.dim(0), H = iv.dim(1), W = iv.dim(2);
    Tensor gi(iv.shape), gf(fv.shape);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        double sx = x + fv.at(0, y, x);
        double sy = y + fv.at(1, y, x);
        int x0 = static_cast<int>(std::floor(sx));
        int y0 = static_cast<int>(std::floor(sy));
        double ax = sx - x0, ay = sy - y0;
        int xc0 = clampi(x0, 0, W - 1), xc1 = clampi(x0 + 1, 0, W - 1);
        int yc0 = clampi(y0, 0, H - 1), yc1 = clampi(y0 + 1, 0, H - 1);
        double dfx = 0.0, dfy = 0.0;
        for (int c = 0; c < C; ++c) {
          double gv = g.at(c, y, x);
          double i00 = iv.at(c, yc0, xc0), i01 = iv.at(c, yc0, xc1);
          double i10 = iv.at(c, yc1, xc0), i11 = iv.at(c, yc1, xc1);
          gi.at(c, yc0, xc0) += gv * (1 - ay) * (1 - ax);
          gi.at(c, yc0, xc1) += gv * (1 - ay) * ax;
          gi.at(c, yc1, xc0) += gv * ay * (1 - ax);
          gi.at(c, yc1, xc1) += gv * ay * ax;
          dfx += gv * ((1 - ay) * (i01 - i00) + ay * (i11 - i10));
          dfy += gv * ((1 - ax) * (i10 - i00) + ax * (i11 - i01));
        }
        gf.at(0, y, x) = dfx;
        gf.at(1, y, x) = dfy;
      }
    gm.accum(n.parents[0], std::move(gi));
    gm.accum(n.parents[1], std::move(gf));
  });
}

}  // namespace hbvc
