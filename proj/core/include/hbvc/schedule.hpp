#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hbvc/tensor.hpp"

namespace hbvc {

enum class FrameType : uint8_t { I = 0, B = 1 };

// One frame's coding slot in the hierarchical random-access order.
struct ScheduleEntry {
  int t = 0;
  FrameType type = FrameType::I;
  int f = -1;     // forward reference (B only)
  int b = -1;     // backward reference (B only)
  int level = 0;  // >= 1 for B
  int span = 0;   // b - f

  bool is_b() const { return type == FrameType::B; }
};

struct Schedule {
  std::vector<ScheduleEntry> entries;  // coding order
  int intra_period = 0;
  int num_frames = 0;

  std::string to_json() const;
};

inline constexpr int kSupportedIntraPeriods[] = {2, 4, 8, 16, 32};
bool intra_period_supported(int ip);

// Random-access dyadic schedule. I-frames sit at multiples of intra_period;
// each GOP codes its closing I first, then B-frames level by level,
// midpoints first, left before right within a level. A trailing partial GOP
// is truncated to the largest dyadic pieces that fit (sets *warning).
Schedule build_schedule(int num_frames, int intra_period, std::string* warning = nullptr);

// level such that span == intra_period / 2^(level-1); for IP 32 this is the
// span = 2^(6-level) law.
int level_of(const ScheduleEntry& entry, int intra_period);

}  // namespace hbvc
