#include <cmath>

#include "hbvc/ops.hpp"

namespace hbvc {

namespace {
void check_same(const Var& a, const Var& b, const char* what) {
  HBVC_CHECK(a->val.same_shape(b->val),
             std::string(what) + ": shape mismatch " + a->val.shape_str() + " vs " +
                 b->val.shape_str());
}
}  // namespace

Var add(const Var& a, const Var& b) {
  check_same(a, b, "add");
  Tensor out = a->val;
  out += b->val;
  return make_op(std::move(out), {a, b}, [](const Tensor& g, Node& n, GradMap& gm) {
    gm.accum(n.parents[0], g);
    gm.accum(n.parents[1], g);
  });
}

Var sub(const Var& a, const Var& b) {
  check_same(a, b, "sub");
  Tensor out = a->val;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b->val.v[i];
  return make_op(std::move(out), {a, b}, [](const Tensor& g, Node& n, GradMap& gm) {
    gm.accum(n.parents[0], g);
    Tensor gb = g;
    gb *= -1.0;
    gm.accum(n.parents[1], std::move(gb));
  });
}

Var mul(const Var& a, const Var& b) {
  check_same(a, b, "mul");
  Tensor out = a->val;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b->val.v[i];
  return make_op(std::move(out), {a, b}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    const Tensor& bv = n.parents[1]->val;
    Tensor ga(g.shape), gb(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i) {
      ga.v[i] = g.v[i] * bv.v[i];
      gb.v[i] = g.v[i] * av.v[i];
    }
    gm.accum(n.parents[0], std::move(ga));
    gm.accum(n.parents[1], std::move(gb));
  });
}

Var div(const Var& a, const Var& b) {
  check_same(a, b, "div");
  Tensor out = a->val;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] /= b->val.v[i];
  return make_op(std::move(out), {a, b}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    const Tensor& bv = n.parents[1]->val;
    Tensor ga(g.shape), gb(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i) {
      ga.v[i] = g.v[i] / bv.v[i];
      gb.v[i] = -g.v[i] * av.v[i] / (bv.v[i] * bv.v[i]);
    }
    gm.accum(n.parents[0], std::move(ga));
    gm.accum(n.parents[1], std::move(gb));
  });
}

Var neg(const Var& a) { return mul_scalar(a, -1.0); }

Var add_scalar(const Var& a, double s) {
  Tensor out = a->val;
  for (auto& x : out.v) x += s;
  return make_op(std::move(out), {a}, [](const Tensor& g, Node& n, GradMap& gm) {
    gm.accum(n.parents[0], g);
  });
}

Var mul_scalar(const Var& a, double s) {
  Tensor out = a->val;
  out *= s;
  return make_op(std::move(out), {a}, [s](const Tensor& g, Node& n, GradMap& gm) {
    Tensor ga = g;
    ga *= s;
    gm.accum(n.parents[0], std::move(ga));
  });
}

Var leaky_relu(const Var& a, double slope) {
  Tensor out = a->val;
  for (auto& x : out.v)
    if (x < 0.0) x *= slope;
  return make_op(std::move(out), {a}, [slope](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    Tensor ga(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i) ga.v[i] = g.v[i] * (av.v[i] >= 0.0 ? 1.0 : slope);
    gm.accum(n.parents[0], std::move(ga));
  });
}

Var sigmoid(const Var& a) {
  Tensor out = a->val;
  for (auto& x : out.v) x = 1.0 / (1.0 + std::exp(-x));
  Tensor saved = out;
  return make_op(std::move(out), {a},
                 [saved = std::move(saved)](const Tensor& g, Node& n, GradMap& gm) {
                   Tensor ga(g.shape);
                   for (size_t i = 0; i < g.v.size(); ++i)
                     ga.v[i] = g.v[i] * saved.v[i] * (1.0 - saved.v[i]);
                   gm.accum(n.parents[0], std::move(ga));
                 });
}

Var tanh_op(const Var& a) {
  Tensor out = a->val;
  for (auto& x : out.v) x = std::tanh(x);
  Tensor saved = out;
  return make_op(std::move(out), {a},
                 [saved = std::move(saved)](const Tensor& g, Node& n, GradMap& gm) {
                   Tensor ga(g.shape);
                   for (size_t i = 0; i < g.v.size(); ++i)
                     ga.v[i] = g.v[i] * (1.0 - saved.v[i] * saved.v[i]);
                   gm.accum(n.parents[0], std::move(ga));
                 });
}

Var softplus(const Var& a) {
  Tensor out = a->val;
  for (auto& x : out.v) x = x > 30.0 ? x : std::log1p(std::exp(x));
  return make_op(std::move(out), {a}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    Tensor ga(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i)
      ga.v[i] = g.v[i] / (1.0 + std::exp(-av.v[i]));
    gm.accum(n.parents[0], std::move(ga));
  });
}

Var clamp(const Var& a, double lo, double hi) {
  Tensor out = a->val;
  for (auto& x : out.v) x = x < lo ? lo : (x > hi ? hi : x);
  return make_op(std::move(out), {a}, [lo, hi](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    Tensor ga(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i)
      ga.v[i] = (av.v[i] >= lo && av.v[i] <= hi) ? g.v[i] : 0.0;
    gm.accum(n.parents[0], std::move(ga));
  });
}

Var lower_bound(const Var& a, double bound) {
  Tensor out = a->val;
  for (auto& x : out.v) x = x < bound ? bound : x;
  return make_op(std::move(out), {a}, [bound](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    Tensor ga(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i) {
      bool pass = av.v[i] >= bound || g.v[i] < 0.0;
      ga.v[i] = pass ? g.v[i] : 0.0;
    }
    gm.accum(n.parents[0], std::move(ga));
  });
}

Var square(const Var& a) { return mul(a, a); }

Var log_op(const Var& a) {
  Tensor out = a->val;
  for (auto& x : out.v) {
    HBVC_CHECK(x > 0.0, "log_op: non-positive input");
    x = std::log(x);
  }
  return make_op(std::move(out), {a}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    Tensor ga(g.shape);
    for (size_t i = 0; i < g.v.size(); ++i) ga.v[i] = g.v[i] / av.v[i];
    gm.accum(n.parents[0], std::move(ga));
  });
}

Var exp_op(const Var& a) {
  Tensor out = a->val;
  for (auto& x : out.v) x = std::exp(x);
  Tensor saved = out;
  return make_op(std::move(out), {a},
                 [saved = std::move(saved)](const Tensor& g, Node& n, GradMap& gm) {
                   Tensor ga(g.shape);
                   for (size_t i = 0; i < g.v.size(); ++i) ga.v[i] = g.v[i] * saved.v[i];
                   gm.accum(n.parents[0], std::move(ga));
                 });
}

Var concat_ch(const std::vector<Var>& xs) {
  HBVC_CHECK(!xs.empty(), "concat_ch: empty input");
  int H = xs[0]->val.dim(1), W = xs[0]->val.dim(2);
  int C = 0;
  for (const auto& x : xs) {
    HBVC_CHECK(x->val.ndim() == 3 && x->val.dim(1) == H && x->val.dim(2) == W,
               "concat_ch: spatial mismatch");
    C += x->val.dim(0);
  }
  Tensor out({C, H, W});
  int64_t off = 0;
  for (const auto& x : xs) {
    std::copy(x->val.v.begin(), x->val.v.end(), out.v.begin() + off);
    off += x->val.numel();
  }
  return make_op(std::move(out), xs, [](const Tensor& g, Node& n, GradMap& gm) {
    int64_t off = 0;
    for (auto& p : n.parents) {
      Tensor gp(p->val.shape);
      std::copy(g.v.begin() + off, g.v.begin() + off + gp.numel(), gp.v.begin());
      off += gp.numel();
      gm.accum(p, std::move(gp));
    }
  });
}

Var slice_ch(const Var& x, int c0, int c1) {
  HBVC_CHECK(x->val.ndim() == 3 && c0 >= 0 && c1 <= x->val.dim(0) && c0 < c1,
             "slice_ch: bad channel range");
  int H = x->val.dim(1), W = x->val.dim(2);
  int64_t plane = static_cast<int64_t>(H) * W;
  Tensor out({c1 - c0, H, W});
  std::copy(x->val.v.begin() + c0 * plane, x->val.v.begin() + c1 * plane, out.v.begin());
  return make_op(std::move(out), {x}, [c0, plane](const Tensor& g, Node& n, GradMap& gm) {
    Tensor gx(n.parents[0]->val.shape);
    std::copy(g.v.begin(), g.v.end(), gx.v.begin() + c0 * plane);
    gm.accum(n.parents[0], std::move(gx));
  });
}

Var scale_channels(const Var& x, const Var& s) {
  HBVC_CHECK(x->val.ndim() == 3 && s->val.ndim() == 1 && s->val.dim(0) == x->val.dim(0),
             "scale_channels: shapes " + x->val.shape_str() + " vs " + s->val.shape_str());
  int C = x->val.dim(0);
  int64_t plane = static_cast<int64_t>(x->val.dim(1)) * x->val.dim(2);
  Tensor out = x->val;
  for (int c = 0; c < C; ++c) {
    double sc = s->val.v[c];
    for (int64_t i = 0; i < plane; ++i) out.v[c * plane + i] *= sc;
  }
  return make_op(std::move(out), {x, s}, [C, plane](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& xv = n.parents[0]->val;
    const Tensor& sv = n.parents[1]->val;
    Tensor gx(xv.shape), gs(sv.shape);
    for (int c = 0; c < C; ++c) {
      double acc = 0.0;
      for (int64_t i = 0; i < plane; ++i) {
        gx.v[c * plane + i] = g.v[c * plane + i] * sv.v[c];
        acc += g.v[c * plane + i] * xv.v[c * plane + i];
      }
      gs.v[c] = acc;
    }
    gm.accum(n.parents[0], std::move(gx));
    gm.accum(n.parents[1], std::move(gs));
  });
}

Var crop2d(const Var& x, int y0, int x0, int h, int w) {
  HBVC_CHECK(x->val.ndim() == 3, "crop2d: expects (C,H,W)");
  int C = x->val.dim(0), H = x->val.dim(1), W = x->val.dim(2);
  HBVC_CHECK(y0 >= 0 && x0 >= 0 && y0 + h <= H && x0 + w <= W, "crop2d: window out of range");
  Tensor out({C, h, w});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) out.at(c, y, xx) = x->val.at(c, y0 + y, x0 + xx);
  return make_op(std::move(out), {x}, [y0, x0, h, w](const Tensor& g, Node& n, GradMap& gm) {
    Tensor gx(n.parents[0]->val.shape);
    int C = gx.dim(0);
    for (int c = 0; c < C; ++c)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) gx.at(c, y0 + y, x0 + xx) = g.at(c, y, xx);
    gm.accum(n.parents[0], std::move(gx));
  });
}

Var sum_all(const Var& x) {
  Tensor out({1});
  out.v[0] = x->val.sum();
  return make_op(std::move(out), {x}, [](const Tensor& g, Node& n, GradMap& gm) {
    Tensor gx(n.parents[0]->val.shape, g.v[0]);
    gm.accum(n.parents[0], std::move(gx));
  });
}

Var mean_all(const Var& x) {
  return mul_scalar(sum_all(x), 1.0 / static_cast<double>(x->val.numel()));
}

Var mse(const Var& a, const Var& b) {
  check_same(a, b, "mse");
  Tensor out({1});
  double acc = 0.0;
  for (size_t i = 0; i < a->val.v.size(); ++i) {
    double d = a->val.v[i] - b->val.v[i];
    acc += d * d;
  }
  out.v[0] = acc / static_cast<double>(a->val.numel());
  return make_op(std::move(out), {a, b}, [](const Tensor& g, Node& n, GradMap& gm) {
    const Tensor& av = n.parents[0]->val;
    const Tensor& bv = n.parents[1]->val;
    double scale = 2.0 * g.v[0] / static_cast<double>(av.numel());
    Tensor ga(av.shape), gb(bv.shape);
    for (size_t i = 0; i < av.v.size(); ++i) {
      double d = scale * (av.v[i] - bv.v[i]);
      ga.v[i] = d;
      gb.v[i] = -d;
    }
    gm.accum(n.parents[0], std::move(ga));
    gm.accum(n.parents[1], std::move(gb));
  });
}

Var add_weighted(const std::vector<Var>& xs, const std::vector<double>& w) {
  HBVC_CHECK(!xs.empty() && xs.size() == w.size(), "add_weighted: arity mismatch");
  Tensor out(xs[0]->val.shape);
  for (size_t k = 0; k < xs.size(); ++k) {
    HBVC_CHECK(xs[k]->val.same_shape(out), "add_weighted: shape mismatch");
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += w[k] * xs[k]->val.v[i];
  }
  return make_op(std::move(out), xs, [w](const Tensor& g, Node& n, GradMap& gm) {
    for (size_t k = 0; k < n.parents.size(); ++k) {
      Tensor gk = g;
      gk *= w[k];
      gm.accum(n.parents[k], std::move(gk));
    }
  });
}

Var round_ste(const Var& x) {
  Tensor out = x->val;
  for (auto& v : out.v) v = std::nearbyint(v);
  return make_op(std::move(out), {x}, [](const Tensor& g, Node& n, GradMap& gm) {
    gm.accum(n.parents[0], g);
  });
}

Var add_uniform_noise(const Var& x, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  Tensor out = x->val;
  for (auto& v : out.v) v += dist(rng);
  return make_op(std::move(out), {x}, [](const Tensor& g, Node& n, GradMap& gm) {
    gm.accum(n.parents[0], g);
  });
}

}  // namespace hbvc
