#pragma once

#include <cstdint>
#include <vector>

#include "hbvc/tensor.hpp"

namespace hbvc {

// Cumulative 16-bit fixed-point frequency table: cum[0] = 0,
// cum[n_symbols] = 65536, strictly increasing (floor of 1 per symbol).
struct CdfTable {
  std::vector<uint32_t> cum;

  int size() const { return static_cast<int>(cum.size()) - 1; }
  void check() const;
};

// Quantize a probability vector into a CdfTable (floor 1/65536 per symbol).
CdfTable build_cdf(const std::vector<double>& p);

inline constexpr int kCoderQMax = 64;  // symbols beyond +-64 escape to Exp-Golomb

// Gaussian alphabet over [-kCoderQMax, kCoderQMax] plus a trailing escape
// symbol whose mass is the two tails; identical tail floor as the rate
// estimate.
CdfTable gaussian_cdf(double mu, double sigma);

// Carryless range coder (Subbotin style). Termination emits the fewest
// bytes that still pin the interval; the decoder reads zeros past the end.
class RangeEncoder {
 public:
  void encode(uint32_t cum_lo, uint32_t cum_hi, uint32_t total);
  void encode_symbol(const CdfTable& t, int s);
  void encode_bits_raw(uint32_t value, int nbits);
  void encode_ue(uint32_t value);  // Exp-Golomb
  std::vector<uint8_t> finish();

 private:
  void normalize();
  std::vector<uint8_t> out_;
  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

class RangeDecoder {
 public:
  RangeDecoder(const uint8_t* data, size_t size);

  uint32_t decode_target(uint32_t total);
  void decode_update(uint32_t cum_lo, uint32_t cum_hi, uint32_t total);
  int decode_symbol(const CdfTable& t);
  uint32_t decode_bits_raw(int nbits);
  uint32_t decode_ue();

 private:
  void normalize();
  uint8_t next_byte();
  const uint8_t* data_;
  size_t size_, pos_ = 0;
  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t code_ = 0;
};

// Symbol-level helpers for quantized-Gaussian payloads: values with
// |v| > kCoderQMax are escaped (Exp-Golomb magnitude + sign).
void encode_gaussian_value(RangeEncoder& enc, const CdfTable& t, int32_t v);
int32_t decode_gaussian_value(RangeDecoder& dec, const CdfTable& t);

}  // namespace hbvc
