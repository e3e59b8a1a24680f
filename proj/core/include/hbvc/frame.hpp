#pragma once

#include <string>
#include <vector>

#include "hbvc/tensor.hpp"

namespace hbvc {

// One RGB frame, (3,H,W) doubles in [0,1].
struct Frame {
  Tensor pixels;
  int index = 0;
  int bit_depth = 8;

  int height() const { return pixels.dim(1); }
  int width() const { return pixels.dim(2); }
};

struct Sequence {
  std::vector<Frame> frames;
  double fps = 30.0;
  std::string name;

  int height() const { return frames.empty() ? 0 : frames[0].height(); }
  int width() const { return frames.empty() ? 0 : frames[0].width(); }
  size_t size() const { return frames.size(); }

  // all frames share H,W; indices contiguous from 0
  void validate() const;
};

// Reflect-pad spatial dims up to a multiple of m (pipeline entry), and the
// matching crop back (pipeline exit).
Tensor pad_reflect_to_multiple(const Tensor& chw, int m);
Tensor crop_to(const Tensor& chw, int h, int w);

// Data augmentation: with probability reverse_prob the frame order is
// reversed (indices relabeled), then a random patch_w x patch_h crop is
// taken at a common offset. No resampling.
Sequence augment(const Sequence& seq, double reverse_prob, int patch_h, int patch_w,
                 std::mt19937_64& rng);

}  // namespace hbvc
