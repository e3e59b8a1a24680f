#include "hbvc/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace hbvc {

bool intra_period_supported(int ip) {
  for (int s : kSupportedIntraPeriods)
    if (s == ip) return true;
  return false;
}

namespace {

int int_log2(int v) {
  int l = 0;
  while ((1 << (l + 1)) <= v) ++l;
  return l;
}

// Emit the B-frames of the dyadic GOP (base, base+size) level by level.
void emit_gop_b_frames(int base, int size, int intra_period, std::vector<ScheduleEntry>& out) {
  for (int span = size; span >= 2; span /= 2) {
    for (int f = base; f + span <= base + size; f += span) {
      ScheduleEntry e;
      e.t = f + span / 2;
      e.type = FrameType::B;
      e.f = f;
      e.b = f + span;
      e.span = span;
      e.level = 1 + int_log2(intra_period / span);
      out.push_back(e);
    }
  }
}

}  // namespace

Schedule build_schedule(int num_frames, int intra_period, std::string* warning) {
  HBVC_CHECK(intra_period_supported(intra_period),
             "intra_period must be one of {2,4,8,16,32}, got " + std::to_string(intra_period));
  HBVC_CHECK(num_frames >= 1, "num_frames must be >= 1");

  Schedule s;
  s.intra_period = intra_period;
  s.num_frames = num_frames;

  const bool aligned = (num_frames % intra_period) == 1;
  if (!aligned && warning) {
    *warning = "num_frames " + std::to_string(num_frames) + " is not 1 mod " +
               std::to_string(intra_period) + "; trailing GOP truncated to dyadic pieces";
  }

  ScheduleEntry i0;
  i0.t = 0;
  s.entries.push_back(i0);

  int base = 0;
  const int last = num_frames - 1;
  while (base < last) {
    int size = intra_period;
    while (size > last - base) size /= 2;  // largest dyadic span that fits
    ScheduleEntry ic;
    ic.t = base + size;
    s.entries.push_back(ic);
    emit_gop_b_frames(base, size, intra_period, s.entries);
    base += size;
  }
  return s;
}

int level_of(const ScheduleEntry& entry, int intra_period) {
  HBVC_CHECK(entry.is_b(), "level_of is defined for B entries only");
  HBVC_CHECK(intra_period_supported(intra_period), "bad intra period");
  HBVC_CHECK(entry.span >= 2 && intra_period % entry.span == 0, "span incompatible with IP");
  int l = 1;
  int span = intra_period;
  while (span != entry.span) {
    span /= 2;
    ++l;
  }
  return l;
}

std::string Schedule::to_json() const {
  std::ostringstream os;
  os << "{\"intra_period\":" << intra_period << ",\"num_frames\":" << num_frames
     << ",\"entries\":[";
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (i) os << ",";
    if (e.is_b()) {
      os << "{\"t\":" << e.t << ",\"type\":\"B\",\"f\":" << e.f << ",\"b\":" << e.b
         << ",\"level\":" << e.level << ",\"span\":" << e.span << "}";
    } else {
      os << "{\"t\":" << e.t << ",\"type\":\"I\"}";
    }
  }
  os << "]}";
  return os.str();
}

}  // namespace hbvc
