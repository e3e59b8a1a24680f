#include "hbvc/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>

namespace hbvc {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

unsigned char to_u8(double v) {
  double s = std::lround(std::min(1.0, std::max(0.0, v)) * 255.0);
  return static_cast<unsigned char>(s);
}

}  // namespace

Tensor read_png_rgb(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  HBVC_CHECK(fp != nullptr, "read_png: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  HBVC_CHECK(png, "read_png: init failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("read_png: decode failed for " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);

  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  std::vector<png_byte> row(png_get_rowbytes(png, info));
  Tensor out({3, static_cast<int>(h), static_cast<int>(w)});
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        out.at(c, static_cast<int>(y), static_cast<int>(x)) = row[3 * x + c] / 255.0;
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

namespace {

void write_png_impl(const std::string& path, int w, int h, int channels,
                    const std::vector<unsigned char>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  HBVC_CHECK(fp != nullptr, "write_png: cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  HBVC_CHECK(png, "write_png: init failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("write_png: encode failed for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y)
    png_write_row(png, const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * w * channels));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_rgb(const std::string& path, const Tensor& img) {
  HBVC_CHECK(img.ndim() == 3 && img.dim(0) == 3, "write_png_rgb: expects (3,H,W)");
  int H = img.dim(1), W = img.dim(2);
  std::vector<unsigned char> bytes(static_cast<size_t>(H) * W * 3);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < 3; ++c)
        bytes[(static_cast<size_t>(y) * W + x) * 3 + c] = to_u8(img.at(c, y, x));
  write_png_impl(path, W, H, 3, bytes);
}

void write_png_gray(const std::string& path, const Tensor& map, bool normalize) {
  HBVC_CHECK(map.ndim() == 2 || (map.ndim() == 3 && map.dim(0) == 1),
             "write_png_gray: expects (H,W) or (1,H,W)");
  int H = map.dim(-2), W = map.dim(-1);
  double lo = 0.0, scale = 1.0;
  if (normalize) {
    lo = map.min();
    double hi = map.max();
    scale = hi > lo ? 1.0 / (hi - lo) : 1.0;
  }
  std::vector<unsigned char> bytes(static_cast<size_t>(H) * W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      double v = map.v[static_cast<size_t>(y) * W + x];
      bytes[static_cast<size_t>(y) * W + x] = to_u8((v - lo) * scale);
    }
  write_png_impl(path, W, H, 1, bytes);
}

namespace {
std::string frame_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04d.png", i);
  return buf;
}
}  // namespace

Sequence read_png_dir(const std::string& dir, double fps) {
  Sequence seq;
  seq.fps = fps;
  seq.name = std::filesystem::path(dir).filename().string();
  for (int i = 0;; ++i) {
    auto p = std::filesystem::path(dir) / frame_name(i);
    if (!std::filesystem::exists(p)) break;
    Frame f;
    f.index = i;
    f.pixels = read_png_rgb(p.string());
    seq.frames.push_back(std::move(f));
  }
  HBVC_CHECK(!seq.frames.empty(), "read_png_dir: no frame_0000.png under " + dir);
  seq.validate();
  return seq;
}

void write_png_dir(const std::string& dir, const Sequence& seq) {
  std::filesystem::create_directories(dir);
  for (const Frame& f : seq.frames)
    write_png_rgb((std::filesystem::path(dir) / frame_name(f.index)).string(), f.pixels);
}

}  // namespace hbvc
