#pragma once

#include "hbvc/schedule.hpp"

namespace hbvc {

// Versioned bitstream file: a fixed header followed by per-frame chunks in
// coding order. All multi-byte integers are big-endian.
//
//   header: magic "BRHV" | version u8 | width u16 | height u16 |
//           intra_period u8 | num_frames u16 | qp u8 | profile u8
//   chunk:  frame_index u16 | frame_type u8 |
//           payloads, each u32 length + bytes
//           (B frames carry [z_v, y_v, z_t, y_t], I frames [z_t, y_t])
struct BitstreamContainer {
  static constexpr char kMagic[5] = "BRHV";
  static constexpr uint8_t kVersion = 1;
  static constexpr size_t kHeaderBytes = 14;

  uint16_t width = 0;
  uint16_t height = 0;
  uint8_t intra_period = 32;
  uint16_t num_frames = 0;
  uint8_t qp = 0;
  uint8_t profile_id = 0;

  struct Chunk {
    uint16_t frame_index = 0;
    FrameType type = FrameType::I;
    std::vector<std::vector<uint8_t>> payloads;
  };
  std::vector<Chunk> chunks;

  std::vector<uint8_t> to_bytes() const;
  static BitstreamContainer from_bytes(const std::vector<uint8_t>& bytes);

  // Chunks must follow the scheduler's coding order for (num_frames,
  // intra_period); from_bytes enforces this.
  void check_order() const;

  int64_t payload_bytes() const;
};

void write_container(const std::string& path, const BitstreamContainer& c);
BitstreamContainer read_container(const std::string& path);

uint8_t profile_id_from_name(const std::string& name);
std::string profile_name_from_id(uint8_t id);

}  // namespace hbvc
