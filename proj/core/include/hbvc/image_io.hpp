#pragma once

#include "hbvc/frame.hpp"

namespace hbvc {

Tensor read_png_rgb(const std::string& path);                         // (3,H,W) in [0,1]
void write_png_rgb(const std::string& path, const Tensor& img);       // clamps to [0,1]
// Single-channel map as 8-bit grayscale; normalize rescales [min,max]->[0,255].
void write_png_gray(const std::string& path, const Tensor& map, bool normalize = false);

// Frame directory with files named frame_0000.png, frame_0001.png, ...
Sequence read_png_dir(const std::string& dir, double fps = 30.0);
void write_png_dir(const std::string& dir, const Sequence& seq);

}  // namespace hbvc
