#pragma once

#include "hbvc/frame.hpp"

namespace hbvc {

// BT.709 limited-range (16-235 luma, 16-240 chroma) 8-bit conversion,
// Kr = 0.2126, Kb = 0.0722. yuv values are 8-bit code values (as doubles),
// rgb values are [0,1].
void rgb_from_yuv709(double y, double u, double v, double* r, double* g, double* b);
void yuv709_from_rgb(double r, double g, double b, double* y, double* u, double* v);

// Planar YUV420 8-bit reader; chroma is expanded 2x2 nearest. Throws on a
// short file (truncation) or odd dimensions.
Sequence read_yuv420(const std::string& path, int width, int height, int frame_count,
                     double fps = 30.0);

// Inverse writer: per-pixel conversion, chroma planes are the rounded 2x2
// mean of the full-resolution chroma.
void write_yuv420(const std::string& path, const Sequence& seq);

}  // namespace hbvc
