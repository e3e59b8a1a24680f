#include <Eigen/Dense>

#include "hbvc/ops.hpp"

namespace hbvc {

namespace {

using MatrixXd = Eigen::MatrixXd;  // column-major
using MapMat = Eigen::Map<MatrixXd>;
using ConstMapMat = Eigen::Map<const MatrixXd>;

// Column i of the patch matrix holds the receptive field of output pixel i
// for one channel group: layout (Cg*kh*kw) x (Ho*Wo).
void im2col(const double* x, int Cg, int H, int W, int kh, int kw, int stride, int pad,
            int Ho, int Wo, double* col) {
  const int64_t plane = static_cast<int64_t>(H) * W;
  int64_t idx = 0;
  for (int oy = 0; oy < Ho; ++oy) {
    for (int ox = 0; ox < Wo; ++ox) {
      for (int c = 0; c < Cg; ++c) {
        const double* xc = x + c * plane;
        for (int ky = 0; ky < kh; ++ky) {
          int iy = oy * stride + ky - pad;
          for (int kx = 0; kx < kw; ++kx) {
            int ix = ox * stride + kx - pad;
            col[idx++] =
                (iy >= 0 && iy < H && ix >= 0 && ix < W) ? xc[static_cast<int64_t>(iy) * W + ix]
                                                         : 0.0;
          }
        }
      }
    }
  }
}

void col2im(const double* col, int Cg, int H, int W, int kh, int kw, int stride, int pad,
            int Ho, int Wo, double* x) {
  const int64_t plane = static_cast<int64_t>(H) * W;
  int64_t idx = 0;
  for (int oy = 0; oy < Ho; ++oy) {
    for (int ox = 0; ox < Wo; ++ox) {
      for (int c = 0; c < Cg; ++c) {
        double* xc = x + c * plane;
        for (int ky = 0; ky < kh; ++ky) {
          int iy = oy * stride + ky - pad;
          for (int kx = 0; kx < kw; ++kx) {
            int ix = ox * stride + kx - pad;
            if (iy >= 0 && iy < H && ix >= 0 && ix < W)
              xc[static_cast<int64_t>(iy) * W + ix] += col[idx];
            ++idx;
          }
        }
      }
    }
  }
}

struct ConvDims {
  int Cin, H, W, Cout, Cg, kh, kw, stride, pad, groups, Ho, Wo;
};

ConvDims conv_dims(const Tensor& x, const Tensor& w, int stride, int pad, int groups) {
  HBVC_CHECK(x.ndim() == 3 && w.ndim() == 4, "conv2d: x must be (C,H,W), w (Cout,Cin/g,kh,kw)");
  ConvDims d;
  d.Cin = x.dim(0);
  d.H = x.dim(1);
  d.W = x.dim(2);
  d.Cout = w.dim(0);
  d.Cg = w.dim(1);
  d.kh = w.dim(2);
  d.kw = w.dim(3);
  d.stride = stride;
  d.pad = pad;
  d.groups = groups;
  HBVC_CHECK(groups >= 1 && d.Cin % groups == 0 && d.Cout % groups == 0,
             "conv2d: bad group count");
  HBVC_CHECK(d.Cg == d.Cin / groups, "conv2d: weight channel mismatch");
  d.Ho = (d.H + 2 * pad - d.kh) / stride + 1;
  d.Wo = (d.W + 2 * pad - d.kw) / stride + 1;
  HBVC_CHECK(d.Ho >= 1 && d.Wo >= 1, "conv2d: output would be empty");
  return d;
}

Tensor conv_forward(const Tensor& x, const Tensor& w, const Tensor* b, const ConvDims& d) {
  Tensor out({d.Cout, d.Ho, d.Wo});
  const int K = d.Cg * d.kh * d.kw;
  const int64_t N = static_cast<int64_t>(d.Ho) * d.Wo;
  const int Cog = d.Cout / d.groups;
  std::vector<double> col(static_cast<size_t>(K) * N);
  for (int g = 0; g < d.groups; ++g) {
    im2col(x.data() + static_cast<int64_t>(g) * d.Cg * d.H * d.W, d.Cg, d.H, d.W, d.kh, d.kw,
           d.stride, d.pad, d.Ho, d.Wo, col.data());
    ConstMapMat M(col.data(), K, N);
    ConstMapMat Wg(w.data() + static_cast<int64_t>(g) * Cog * K, K, Cog);
    MapMat Y(out.data() + static_cast<int64_t>(g) * Cog * N, N, Cog);
    Y.noalias() = M.transpose() * Wg;
  }
  // GEMM result is (N x Cout-per-group) column-major == (Cout,Ho,Wo) row-major.
  if (b) {
    for (int c = 0; c < d.Cout; ++c) {
      double bc = b->v[c];
      double* oc = out.data() + static_cast<int64_t>(c) * N;
      for (int64_t i = 0; i < N; ++i) oc[i] += bc;
    }
  }
  return out;
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad, int groups) {
  const ConvDims d = conv_dims(x->val, w->val, stride, pad, groups);
  if (b) HBVC_CHECK(b->val.ndim() == 1 && b->val.dim(0) == d.Cout, "conv2d: bias shape");
  Tensor out = conv_forward(x->val, w->val, b ? &b->val : nullptr, d);

  std::vector<Var> parents = b ? std::vector<Var>{x, w, b} : std::vector<Var>{x, w};
  return make_op(std::move(out), std::move(parents),
                 [d](const Tensor& g, Node& n, GradMap& gm) {
                   const Var& xv = n.parents[0];
                   const Var& wv = n.parents[1];
                   const int K = d.Cg * d.kh * d.kw;
                   const int64_t N = static_cast<int64_t>(d.Ho) * d.Wo;
                   const int Cog = d.Cout / d.groups;

                   Tensor gx(xv->val.shape);
                   Tensor gw(wv->val.shape);
                   std::vector<double> col(static_cast<size_t>(K) * N);
                   std::vector<double> gcol(static_cast<size_t>(K) * N);
                   for (int g2 = 0; g2 < d.groups; ++g2) {
                     im2col(xv->val.data() + static_cast<int64_t>(g2) * d.Cg * d.H * d.W, d.Cg,
                            d.H, d.W, d.kh, d.kw, d.stride, d.pad, d.Ho, d.Wo, col.data());
                     ConstMapMat M(col.data(), K, N);
                     ConstMapMat GY(g.data() + static_cast<int64_t>(g2) * Cog * N, N, Cog);
                     MapMat GW(gw.data() + static_cast<int64_t>(g2) * Cog * K, K, Cog);
                     GW.noalias() = M * GY;
                     ConstMapMat Wg(wv->val.data() + static_cast<int64_t>(g2) * Cog * K, K, Cog);
                     MapMat GM(gcol.data(), K, N);
                     GM.noalias() = Wg * GY.transpose();
                     col2im(gcol.data(), d.Cg, d.H, d.W, d.kh, d.kw, d.stride, d.pad, d.Ho, d.Wo,
                            gx.data() + static_cast<int64_t>(g2) * d.Cg * d.H * d.W);
                   }
                   gm.accum(n.parents[0], std::move(gx));
                   gm.accum(n.parents[1], std::move(gw));
                   if (n.parents.size() == 3) {
                     Tensor gb({d.Cout});
                     for (int c = 0; c < d.Cout; ++c) {
                       const double* gc = g.data() + static_cast<int64_t>(c) * N;
                       double acc = 0.0;
                       for (int64_t i = 0; i < N; ++i) acc += gc[i];
                       gb.v[c] = acc;
                     }
                     gm.accum(n.parents[2], std::move(gb));
                   }
                 });
}

}  // namespace hbvc
