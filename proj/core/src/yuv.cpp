#include "hbvc/yuv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hbvc {

namespace {
constexpr double kKr = 0.2126, kKb = 0.0722, kKg = 1.0 - kKr - kKb;
constexpr double kYScale = 255.0 / 219.0;
constexpr double kCScale = 255.0 / 224.0;
constexpr double kRv = kCScale * 2.0 * (1.0 - kKr);
constexpr double kBu = kCScale * 2.0 * (1.0 - kKb);
constexpr double kGu = kCScale * 2.0 * (1.0 - kKb) * kKb / kKg;
constexpr double kGv = kCScale * 2.0 * (1.0 - kKr) * kKr / kKg;

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }
}  // namespace

void rgb_from_yuv709(double y, double u, double v, double* r, double* g, double* b) {
  double yl = kYScale * (y - 16.0);
  double cu = u - 128.0, cv = v - 128.0;
  *r = clamp01((yl + kRv * cv) / 255.0);
  *g = clamp01((yl - kGu * cu - kGv * cv) / 255.0);
  *b = clamp01((yl + kBu * cu) / 255.0);
}

void yuv709_from_rgb(double r, double g, double b, double* y, double* u, double* v) {
  double yl = (kKr * r + kKg * g + kKb * b) * 255.0;
  *y = 16.0 + yl / kYScale;
  *u = 128.0 + (b * 255.0 - yl) / kBu;
  *v = 128.0 + (r * 255.0 - yl) / kRv;
}

Sequence read_yuv420(const std::string& path, int width, int height, int frame_count,
                     double fps) {
  HBVC_CHECK(width > 0 && height > 0 && width % 2 == 0 && height % 2 == 0,
             "read_yuv420: dimensions must be positive and even");
  HBVC_CHECK(frame_count >= 0, "read_yuv420: negative frame count");

  std::ifstream in(path, std::ios::binary);
  HBVC_CHECK(in.good(), "read_yuv420: cannot open " + path);
  const int64_t luma = static_cast<int64_t>(width) * height;
  const int64_t frame_bytes = luma + luma / 2;
  in.seekg(0, std::ios::end);
  int64_t file_size = in.tellg();
  HBVC_CHECK(file_size >= frame_bytes * frame_count,
             "read_yuv420: file truncated: " + std::to_string(file_size) + " bytes < " +
                 std::to_string(frame_bytes * frame_count));
  in.seekg(0);

  Sequence seq;
  seq.fps = fps;
  seq.name = std::filesystem::path(path).stem().string();
  std::vector<unsigned char> buf(static_cast<size_t>(frame_bytes));
  for (int fi = 0; fi < frame_count; ++fi) {
    in.read(reinterpret_cast<char*>(buf.data()), frame_bytes);
    HBVC_CHECK(in.gcount() == frame_bytes, "read_yuv420: short read");
    Frame f;
    f.index = fi;
    f.pixels = Tensor({3, height, width});
    const unsigned char* yp = buf.data();
    const unsigned char* up = yp + luma;
    const unsigned char* vp = up + luma / 4;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        double Y = yp[static_cast<int64_t>(y) * width + x];
        int64_t ci = static_cast<int64_t>(y / 2) * (width / 2) + x / 2;
        double r, g, b;
        rgb_from_yuv709(Y, up[ci], vp[ci], &r, &g, &b);
        f.pixels.at(0, y, x) = r;
        f.pixels.at(1, y, x) = g;
        f.pixels.at(2, y, x) = b;
      }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

void write_yuv420(const std::string& path, const Sequence& seq) {
  std::ofstream out(path, std::ios::binary);
  HBVC_CHECK(out.good(), "write_yuv420: cannot open " + path);
  if (seq.frames.empty()) return;
  int H = seq.height(), W = seq.width();
  HBVC_CHECK(H % 2 == 0 && W % 2 == 0, "write_yuv420: odd dimensions");
  std::vector<unsigned char> buf(static_cast<size_t>(W) * H * 3 / 2);
  std::vector<double> uf(static_cast<size_t>(W) * H), vf(static_cast<size_t>(W) * H);
  for (const Frame& f : seq.frames) {
    unsigned char* yp = buf.data();
    unsigned char* up = yp + static_cast<int64_t>(W) * H;
    unsigned char* vp = up + static_cast<int64_t>(W) * H / 4;
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        double Y, U, V;
        yuv709_from_rgb(f.pixels.at(0, y, x), f.pixels.at(1, y, x), f.pixels.at(2, y, x), &Y,
                        &U, &V);
        yp[static_cast<int64_t>(y) * W + x] =
            static_cast<unsigned char>(std::lround(std::min(255.0, std::max(0.0, Y))));
        uf[static_cast<size_t>(y) * W + x] = U;
        vf[static_cast<size_t>(y) * W + x] = V;
      }
    for (int y = 0; y < H / 2; ++y)
      for (int x = 0; x < W / 2; ++x) {
        double u = 0.25 * (uf[static_cast<size_t>(2 * y) * W + 2 * x] +
                           uf[static_cast<size_t>(2 * y) * W + 2 * x + 1] +
                           uf[static_cast<size_t>(2 * y + 1) * W + 2 * x] +
                           uf[static_cast<size_t>(2 * y + 1) * W + 2 * x + 1]);
        double v = 0.25 * (vf[static_cast<size_t>(2 * y) * W + 2 * x] +
                           vf[static_cast<size_t>(2 * y) * W + 2 * x + 1] +
                           vf[static_cast<size_t>(2 * y + 1) * W + 2 * x] +
                           vf[static_cast<size_t>(2 * y + 1) * W + 2 * x + 1]);
        up[static_cast<int64_t>(y) * (W / 2) + x] =
            static_cast<unsigned char>(std::lround(std::min(255.0, std::max(0.0, u))));
        vp[static_cast<int64_t>(y) * (W / 2) + x] =
            static_cast<unsigned char>(std::lround(std::min(255.0, std::max(0.0, v))));
      }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<int64_t>(buf.size()));
  }
}

}  // namespace hbvc
