#include "hbvc/frame.hpp"

namespace hbvc {

void Sequence::validate() const {
  for (size_t i = 0; i < frames.size(); ++i) {
    HBVC_CHECK(frames[i].pixels.ndim() == 3 && frames[i].pixels.dim(0) == 3,
               "frame must be (3,H,W)");
    HBVC_CHECK(frames[i].height() == height() && frames[i].width() == width(),
               "all frames must share H,W");
    HBVC_CHECK(frames[i].index == static_cast<int>(i), "frame indices must be contiguous");
  }
}

namespace {
// reflect index without repeating the border sample (abcb|a)
int reflect(int i, int n) {
  if (n == 1) return 0;
  int period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  return i < n ? i : period - i;
}
}  // namespace

Tensor pad_reflect_to_multiple(const Tensor& chw, int m) {
  HBVC_CHECK(chw.ndim() == 3, "pad expects (C,H,W)");
  int C = chw.dim(0), H = chw.dim(1), W = chw.dim(2);
  int Hp = (H + m - 1) / m * m;
  int Wp = (W + m - 1) / m * m;
  if (Hp == H && Wp == W) return chw;
  Tensor out({C, Hp, Wp});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < Hp; ++y)
      for (int x = 0; x < Wp; ++x) out.at(c, y, x) = chw.at(c, reflect(y, H), reflect(x, W));
  return out;
}

Tensor crop_to(const Tensor& chw, int h, int w) {
  HBVC_CHECK(chw.ndim() == 3 && chw.dim(1) >= h && chw.dim(2) >= w, "crop_to: too small");
  if (chw.dim(1) == h && chw.dim(2) == w) return chw;
  int C = chw.dim(0);
  Tensor out({C, h, w});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = chw.at(c, y, x);
  return out;
}

Sequence augment(const Sequence& seq, double reverse_prob, int patch_h, int patch_w,
                 std::mt19937_64& rng) {
  HBVC_CHECK(reverse_prob >= 0.0 && reverse_prob <= 1.0, "reverse_prob must be in [0,1]");
  HBVC_CHECK(patch_h <= seq.height() && patch_w <= seq.width(),
             "crop larger than frame: " + std::to_string(patch_h) + "x" +
                 std::to_string(patch_w) + " vs " + std::to_string(seq.height()) + "x" +
                 std::to_string(seq.width()));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  bool rev = coin(rng) < reverse_prob;
  std::uniform_int_distribution<int> oy(0, seq.height() - patch_h);
  std::uniform_int_distribution<int> ox(0, seq.width() - patch_w);
  int y0 = oy(rng), x0 = ox(rng);

  Sequence out;
  out.fps = seq.fps;
  out.name = seq.name;
  int n = static_cast<int>(seq.size());
  for (int i = 0; i < n; ++i) {
    const Frame& src = seq.frames[rev ? n - 1 - i : i];
    Frame f;
    f.index = i;
    f.bit_depth = src.bit_depth;
    f.pixels = Tensor({3, patch_h, patch_w});
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < patch_h; ++y)
        for (int x = 0; x < patch_w; ++x) f.pixels.at(c, y, x) = src.pixels.at(c, y0 + y, x0 + x);
    out.frames.push_back(std::move(f));
  }
  return out;
}

}  // namespace hbvc
