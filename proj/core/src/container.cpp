#include "hbvc/container.hpp"

#include <cstring>
#include <fstream>

namespace hbvc {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

struct Reader {
  const std::vector<uint8_t>& b;
  size_t pos = 0;

  uint8_t u8() {
    HBVC_CHECK(pos + 1 <= b.size(), "container: truncated");
    return b[pos++];
  }
  uint16_t u16() {
    HBVC_CHECK(pos + 2 <= b.size(), "container: truncated");
    uint16_t v = (static_cast<uint16_t>(b[pos]) << 8) | b[pos + 1];
    pos += 2;
    return v;
  }
  uint32_t u32() {
    HBVC_CHECK(pos + 4 <= b.size(), "container: truncated");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | b[pos + i];
    pos += 4;
    return v;
  }
  std::vector<uint8_t> bytes(size_t n) {
    HBVC_CHECK(pos + n <= b.size(), "container: truncated payload");
    std::vector<uint8_t> out(b.begin() + pos, b.begin() + pos + n);
    pos += n;
    return out;
  }
};

}  // namespace

std::vector<uint8_t> BitstreamContainer::to_bytes() const {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  put_u16(out, width);
  put_u16(out, height);
  out.push_back(intra_period);
  put_u16(out, num_frames);
  out.push_back(qp);
  out.push_back(profile_id);
  HBVC_CHECK(out.size() == kHeaderBytes, "container: header layout drifted");
  for (const Chunk& c : chunks) {
    put_u16(out, c.frame_index);
    out.push_back(static_cast<uint8_t>(c.type));
    size_t want = c.type == FrameType::B ? 4 : 2;
    HBVC_CHECK(c.payloads.size() == want, "container: wrong payload count for frame type");
    for (const auto& p : c.payloads) {
      put_u32(out, static_cast<uint32_t>(p.size()));
      out.insert(out.end(), p.begin(), p.end());
    }
  }
  return out;
}

BitstreamContainer BitstreamContainer::from_bytes(const std::vector<uint8_t>& bytes) {
  Reader r{bytes};
  HBVC_CHECK(bytes.size() >= kHeaderBytes, "container: too short for header");
  char magic[4];
  std::memcpy(magic, bytes.data(), 4);
  HBVC_CHECK(std::memcmp(magic, kMagic, 4) == 0, "container: bad magic");
  r.pos = 4;
  uint8_t version = r.u8();
  HBVC_CHECK(version == kVersion,
             "container: unsupported version " + std::to_string(version));
  BitstreamContainer c;
  c.width = r.u16();
  c.height = r.u16();
  c.intra_period = r.u8();
  c.num_frames = r.u16();
  c.qp = r.u8();
  c.profile_id = r.u8();
  while (r.pos < bytes.size()) {
    Chunk ch;
    ch.frame_index = r.u16();
    uint8_t ft = r.u8();
    HBVC_CHECK(ft <= 1, "container: bad frame type");
    ch.type = static_cast<FrameType>(ft);
    int n = ch.type == FrameType::B ? 4 : 2;
    for (int i = 0; i < n; ++i) {
      uint32_t len = r.u32();
      ch.payloads.push_back(r.bytes(len));
    }
    c.chunks.push_back(std::move(ch));
  }
  c.check_order();
  return c;
}

void BitstreamContainer::check_order() const {
  HBVC_CHECK(intra_period_supported(intra_period), "container: bad intra period");
  Schedule s = build_schedule(num_frames, intra_period);
  HBVC_CHECK(chunks.size() == s.entries.size(), "container: chunk count mismatch");
  for (size_t i = 0; i < chunks.size(); ++i) {
    HBVC_CHECK(chunks[i].frame_index == s.entries[i].t &&
                   chunks[i].type == s.entries[i].type,
               "container: chunks out of coding order at position " + std::to_string(i));
  }
}

int64_t BitstreamContainer::payload_bytes() const {
  int64_t n = 0;
  for (const auto& c : chunks)
    for (const auto& p : c.payloads) n += static_cast<int64_t>(p.size());
  return n;
}

void write_container(const std::string& path, const BitstreamContainer& c) {
  std::ofstream out(path, std::ios::binary);
  HBVC_CHECK(out.good(), "cannot open " + path);
  auto bytes = c.to_bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<int64_t>(bytes.size()));
  HBVC_CHECK(out.good(), "write failed: " + path);
}

BitstreamContainer read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  HBVC_CHECK(in.good(), "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return BitstreamContainer::from_bytes(bytes);
}

uint8_t profile_id_from_name(const std::string& name) {
  if (name == "paper") return 0;
  if (name == "desk") return 1;
  if (name == "tiny") return 2;
  throw Error("unknown profile name: " + name);
}

std::string profile_name_from_id(uint8_t id) {
  switch (id) {
    case 0: return "paper";
    case 1: return "desk";
    case 2: return "tiny";
    default: throw Error("unknown profile id: " + std::to_string(id));
  }
}

}  // namespace hbvc
