#include "hbvc/range_coder.hpp"

#include <algorithm>
#include <cmath>

#include "hbvc/ops.hpp"

namespace hbvc {

namespace {
constexpr uint32_t kTop = 1u << 24;
constexpr uint32_t kBot = 1u << 16;
constexpr uint32_t kTotalBits = 16;
constexpr uint32_t kTotal = 1u << kTotalBits;
}  // namespace

void CdfTable::check() const {
  HBVC_CHECK(cum.size() >= 2 && cum.front() == 0 && cum.back() == kTotal,
             "cdf table must span [0,65536]");
  for (size_t i = 1; i < cum.size(); ++i)
    HBVC_CHECK(cum[i] > cum[i - 1], "cdf table must be strictly increasing");
}

CdfTable build_cdf(const std::vector<double>& p) {
  int n = static_cast<int>(p.size());
  HBVC_CHECK(n >= 1 && n < static_cast<int>(kTotal) / 2, "build_cdf: bad alphabet size");
  double sum = 0.0;
  for (double x : p) {
    HBVC_CHECK(x >= 0.0, "build_cdf: negative probability");
    sum += x;
  }
  HBVC_CHECK(sum > 0.0, "build_cdf: zero mass");

  const uint32_t budget = kTotal - static_cast<uint32_t>(n);  // 1 reserved per symbol
  std::vector<uint32_t> f(n);
  uint32_t assigned = 0;
  int argmax = 0;
  for (int i = 0; i < n; ++i) {
    f[i] = static_cast<uint32_t>(std::floor(p[i] / sum * budget));
    assigned += f[i];
    if (p[i] > p[argmax]) argmax = i;
  }
  f[argmax] += budget - assigned;  // leftover mass to the most likely symbol

  CdfTable t;
  t.cum.resize(n + 1);
  t.cum[0] = 0;
  for (int i = 0; i < n; ++i) t.cum[i + 1] = t.cum[i] + f[i] + 1;
  t.check();
  return t;
}

CdfTable gaussian_cdf(double mu, double sigma) {
  HBVC_CHECK(sigma > 0.0, "gaussian_cdf: sigma must be positive");
  const int n = 2 * kCoderQMax + 1;
  std::vector<double> p(n + 1);  // + escape
  double lo_tail = norm_cdf((-kCoderQMax - 0.5 - mu) / sigma);
  double hi_tail = 1.0 - norm_cdf((kCoderQMax + 0.5 - mu) / sigma);
  double prev = lo_tail;
  for (int v = -kCoderQMax; v <= kCoderQMax; ++v) {
    double c = norm_cdf((v + 0.5 - mu) / sigma);
    p[v + kCoderQMax] = std::max(c - prev, kRateTailFloor);
    prev = c;
  }
  p[n] = std::max(lo_tail + hi_tail, kRateTailFloor);
  return build_cdf(p);
}

void RangeEncoder::normalize() {
  while (true) {
    if ((low_ ^ (low_ + range_)) < kTop) {
      // top byte settled
    } else if (range_ < kBot) {
      range_ = (0u - low_) & (kBot - 1);  // carryless squeeze
    } else {
      break;
    }
    out_.push_back(static_cast<uint8_t>(low_ >> 24));
    low_ <<= 8;
    range_ <<= 8;
  }
}

void RangeEncoder::encode(uint32_t cum_lo, uint32_t cum_hi, uint32_t total) {
  HBVC_CHECK(cum_lo < cum_hi && cum_hi <= total && total <= kTotal, "range encode: bad interval");
  uint32_t r = range_ / total;
  low_ += r * cum_lo;
  range_ = r * (cum_hi - cum_lo);
  normalize();
}

void RangeEncoder::encode_symbol(const CdfTable& t, int s) {
  HBVC_CHECK(s >= 0 && s < t.size(), "range encode: symbol outside support");
  encode(t.cum[s], t.cum[s + 1], kTotal);
}

void RangeEncoder::encode_bits_raw(uint32_t value, int nbits) {
  HBVC_CHECK(nbits >= 0 && nbits <= 32, "bad raw bit count");
  for (int i = nbits - 1; i >= 0; --i) {
    uint32_t bit = (value >> i) & 1u;
    encode(bit ? kTotal / 2 : 0, bit ? kTotal : kTotal / 2, kTotal);
  }
}

void RangeEncoder::encode_ue(uint32_t value) {
  uint64_t v = static_cast<uint64_t>(value) + 1;
  int n = 0;
  while ((v >> (n + 1)) != 0) ++n;
  encode_bits_raw(0, n);
  encode_bits_raw(static_cast<uint32_t>(v), n + 1);
}

std::vector<uint8_t> RangeEncoder::finish() {
  // choose the value in [low, low+range) with the most trailing zero bytes
  uint64_t lo = low_;
  uint64_t hi = lo + range_;
  for (int zero_bits = 32; zero_bits >= 0; zero_bits -= 8) {
    uint64_t mask = (zero_bits == 64) ? ~0ull : ((1ull << zero_bits) - 1);
    uint64_t v = (lo + mask) & ~mask;
    if (v < hi) {
      for (int b = 3; b >= zero_bits / 8; --b)
        out_.push_back(static_cast<uint8_t>(v >> (8 * b)));
      break;
    }
  }
  return std::move(out_);
}

RangeDecoder::RangeDecoder(const uint8_t* data, size_t size) : data_(data), size_(size) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() { return pos_ < size_ ? data_[pos_++] : 0; }

void RangeDecoder::normalize() {
  while (true) {
    if ((low_ ^ (low_ + range_)) < kTop) {
    } else if (range_ < kBot) {
      range_ = (0u - low_) & (kBot - 1);
    } else {
      break;
    }
    code_ = (code_ << 8) | next_byte();
    low_ <<= 8;
    range_ <<= 8;
  }
}

uint32_t RangeDecoder::decode_target(uint32_t total) {
  uint32_t r = range_ / total;
  uint32_t t = (code_ - low_) / r;
  return t < total ? t : total - 1;
}

void RangeDecoder::decode_update(uint32_t cum_lo, uint32_t cum_hi, uint32_t total) {
  HBVC_CHECK(cum_lo < cum_hi && cum_hi <= total, "range decode: bad interval");
  uint32_t r = range_ / total;
  low_ += r * cum_lo;
  range_ = r * (cum_hi - cum_lo);
  normalize();
}

int RangeDecoder::decode_symbol(const CdfTable& t) {
  uint32_t target = decode_target(kTotal);
  // binary search: cum[s] <= target < cum[s+1]
  int lo = 0, hi = t.size();
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (t.cum[mid] <= target)
      lo = mid;
    else
      hi = mid;
  }
  HBVC_CHECK(t.cum[lo] <= target && target < t.cum[lo + 1], "range decode: corrupt target");
  decode_update(t.cum[lo], t.cum[lo + 1], kTotal);
  return lo;
}

uint32_t RangeDecoder::decode_bits_raw(int nbits) {
  uint32_t v = 0;
  for (int i = 0; i < nbits; ++i) {
    uint32_t t = decode_target(kTotal);
    uint32_t bit = t >= kTotal / 2 ? 1 : 0;
    decode_update(bit ? kTotal / 2 : 0, bit ? kTotal : kTotal / 2, kTotal);
    v = (v << 1) | bit;
  }
  return v;
}

uint32_t RangeDecoder::decode_ue() {
  int n = 0;
  while (decode_bits_raw(1) == 0) {
    ++n;
    HBVC_CHECK(n <= 32, "range decode: corrupt exp-golomb prefix");
  }
  uint32_t v = 1;
  for (int i = 0; i < n; ++i) v = (v << 1) | decode_bits_raw(1);
  return v - 1;
}

void encode_gaussian_value(RangeEncoder& enc, const CdfTable& t, int32_t v) {
  if (v >= -kCoderQMax && v <= kCoderQMax) {
    enc.encode_symbol(t, v + kCoderQMax);
  } else {
    enc.encode_symbol(t, t.size() - 1);  // escape
    uint32_t mag = static_cast<uint32_t>(std::abs(v)) - (kCoderQMax + 1);
    enc.encode_ue(mag);
    enc.encode_bits_raw(v < 0 ? 1 : 0, 1);
  }
}

int32_t decode_gaussian_value(RangeDecoder& dec, const CdfTable& t) {
  int s = dec.decode_symbol(t);
  if (s < t.size() - 1) return s - kCoderQMax;
  uint32_t mag = dec.decode_ue() + (kCoderQMax + 1);
  uint32_t neg = dec.decode_bits_raw(1);
  return neg ? -static_cast<int32_t>(mag) : static_cast<int32_t>(mag);
}

}  // namespace hbvc
