#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "doctest.h"
#include "hbvc/schedule.hpp"

using namespace hbvc;

namespace {

// Independent reference: recursive midpoint split, stable-sorted by level.
void ref_gop(int f, int b, int level, std::vector<std::array<int, 4>>& acc) {
  if (b - f < 2) return;
  int m = (f + b) / 2;
  acc.push_back({level, m, f, b});
  ref_gop(f, m, level + 1, acc);
  ref_gop(m, b, level + 1, acc);
}

std::vector<ScheduleEntry> ref_schedule(int num_frames, int ip) {
  std::vector<ScheduleEntry> out;
  ScheduleEntry i0;
  i0.t = 0;
  out.push_back(i0);
  int base = 0, last = num_frames - 1;
  while (base < last) {
    int size = ip;
    while (size > last - base) size /= 2;
    ScheduleEntry ic;
    ic.t = base + size;
    out.push_back(ic);
    std::vector<std::array<int, 4>> acc;
    ref_gop(base, base + size, 1, acc);
    std::stable_sort(acc.begin(), acc.end(),
                     [](const auto& a, const auto& b) { return a[0] < b[0]; });
    for (const auto& rec : acc) {
      ScheduleEntry e;
      e.t = rec[1];
      e.type = FrameType::B;
      e.f = rec[2];
      e.b = rec[3];
      e.span = rec[3] - rec[2];
      // level measured against the configured IP, not the (maybe truncated) GOP
      int l = 1, sp = ip;
      while (sp != e.span) {
        sp /= 2;
        ++l;
      }
      e.level = l;
      out.push_back(e);
    }
    base += size;
  }
  return out;
}

void check_valid(const Schedule& s) {
  std::set<int> emitted;
  std::set<int> all;
  for (const auto& e : s.entries) {
    CHECK(all.insert(e.t).second);  // permutation: no duplicates
    if (e.is_b()) {
      CHECK(emitted.count(e.f));  // reference availability
      CHECK(emitted.count(e.b));
      CHECK(e.f < e.t);
      CHECK(e.t < e.b);
      CHECK(e.t - e.f == e.b - e.t);  // midpoint exactness
      CHECK((e.span & (e.span - 1)) == 0);
      CHECK(e.span == s.intra_period >> (e.level - 1));
    }
    emitted.insert(e.t);
  }
  CHECK(static_cast<int>(all.size()) == s.num_frames);
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == s.num_frames - 1);
}

}  // namespace

TEST_CASE("fig-1b ordering for IP 4") {
  Schedule s = build_schedule(5, 4);
  REQUIRE(s.entries.size() == 5);
  CHECK(s.entries[0].t == 0);
  CHECK(s.entries[1].t == 4);
  CHECK(s.entries[2].t == 2);
  CHECK(s.entries[2].f == 0);
  CHECK(s.entries[2].b == 4);
  CHECK(s.entries[3].t == 1);
  CHECK(s.entries[3].f == 0);
  CHECK(s.entries[3].b == 2);
  CHECK(s.entries[4].t == 3);
  CHECK(s.entries[4].f == 2);
  CHECK(s.entries[4].b == 4);
}

TEST_CASE("single level IP 2") {
  Schedule s = build_schedule(3, 2);
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[0].t == 0);
  CHECK(s.entries[1].t == 2);
  CHECK(s.entries[2].t == 1);
  CHECK(s.entries[2].is_b());
}

TEST_CASE("IP 8 order and spans") {
  Schedule s = build_schedule(9, 8);
  std::vector<int> order, spans;
  for (const auto& e : s.entries) {
    order.push_back(e.t);
    spans.push_back(e.is_b() ? e.span : -1);
  }
  CHECK(order == std::vector<int>{0, 8, 4, 2, 6, 1, 3, 5, 7});
  CHECK(spans == std::vector<int>{-1, -1, 8, 4, 4, 2, 2, 2, 2});
}

TEST_CASE("matches independent recursive-midpoint reference") {
  for (int ip : {2, 4, 8, 16, 32}) {
    for (int n = 1; n <= 129; ++n) {
      Schedule s = build_schedule(n, ip);
      auto ref = ref_schedule(n, ip);
      REQUIRE(s.entries.size() == ref.size());
      for (size_t i = 0; i < ref.size(); ++i) {
        CHECK(s.entries[i].t == ref[i].t);
        CHECK(s.entries[i].type == ref[i].type);
        CHECK(s.entries[i].f == ref[i].f);
        CHECK(s.entries[i].b == ref[i].b);
        CHECK(s.entries[i].level == ref[i].level);
        CHECK(s.entries[i].span == ref[i].span);
      }
      check_valid(s);
    }
  }
}

TEST_CASE("count law per full GOP") {
  for (int ip : {4, 8, 16, 32}) {
    Schedule s = build_schedule(2 * ip + 1, ip);
    int b_total = 0;
    std::map<int, int> per_span;
    for (const auto& e : s.entries)
      if (e.is_b()) {
        ++b_total;
        per_span[e.span]++;
      }
    CHECK(b_total == 2 * (ip - 1));
    for (int span = 2; span <= ip; span *= 2) CHECK(per_span[span] == 2 * (ip / span));
  }
}

TEST_CASE("span law for IP 32 matches 2^(6-level)") {
  Schedule s = build_schedule(33, 32);
  for (const auto& e : s.entries)
    if (e.is_b()) {
      CHECK(e.span == (1 << (6 - e.level)));
      CHECK(level_of(e, 32) == e.level);
    }
}

TEST_CASE("level_of examples") {
  ScheduleEntry e;
  e.type = FrameType::B;
  e.span = 32;
  CHECK(level_of(e, 32) == 1);
  e.span = 2;
  CHECK(level_of(e, 32) == 5);
  e.span = 8;
  CHECK(level_of(e, 8) == 1);
  ScheduleEntry i;
  CHECK_THROWS_AS(level_of(i, 32), Error);
}

TEST_CASE("reversal symmetry") {
  // Reversing frame order maps a valid schedule to a valid schedule with
  // f/b swapped; all invariants must survive the mapping.
  Schedule s = build_schedule(17, 16);
  int n = s.num_frames;
  Schedule rev;
  rev.intra_period = s.intra_period;
  rev.num_frames = n;
  for (const auto& e : s.entries) {
    ScheduleEntry r = e;
    r.t = n - 1 - e.t;
    if (e.is_b()) {
      r.f = n - 1 - e.b;
      r.b = n - 1 - e.f;
    }
    rev.entries.push_back(r);
  }
  check_valid(rev);
}

TEST_CASE("tail truncation warns and keeps dyadic structure") {
  std::string warn;
  Schedule s = build_schedule(7, 4, &warn);
  CHECK(!warn.empty());
  std::vector<int> order;
  for (const auto& e : s.entries) order.push_back(e.t);
  CHECK(order == std::vector<int>{0, 4, 2, 1, 3, 6, 5});
  check_valid(s);

  warn.clear();
  build_schedule(33, 32, &warn);
  CHECK(warn.empty());
}

TEST_CASE("unsupported intra period is a configuration error") {
  CHECK_THROWS_AS(build_schedule(10, 3), Error);
  CHECK_THROWS_AS(build_schedule(10, 64), Error);
  CHECK_THROWS_AS(build_schedule(0, 4), Error);
}

TEST_CASE("json dump is well formed") {
  Schedule s = build_schedule(5, 4);
  std::string j = s.to_json();
  CHECK(j.find("\"intra_period\":4") != std::string::npos);
  CHECK(j.find("\"t\":2,\"type\":\"B\",\"f\":0,\"b\":4") != std::string::npos);
}
