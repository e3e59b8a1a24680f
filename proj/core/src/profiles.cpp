#include "hbvc/profiles.hpp"

#include <sstream>

namespace hbvc {

std::string to_string(MotionCodecKind k) { return k == MotionCodecKind::BMC ? "bmc" : "bmrc"; }
std::string to_string(FusionKind k) { return k == FusionKind::BCF ? "bcf" : "concat"; }
std::string to_string(FlowScaleMode m) {
  switch (m) {
    case FlowScaleMode::Full: return "full";
    case FlowScaleMode::M1: return "m1";
    case FlowScaleMode::M2: return "m2";
    default: return "m3";
  }
}

MotionCodecKind motion_codec_from_string(const std::string& s) {
  if (s == "bmc") return MotionCodecKind::BMC;
  if (s == "bmrc") return MotionCodecKind::BMRC;
  throw Error("unknown motion codec: " + s);
}

FusionKind fusion_from_string(const std::string& s) {
  if (s == "bcf") return FusionKind::BCF;
  if (s == "concat") return FusionKind::Concat;
  throw Error("unknown fusion mode: " + s);
}

FlowScaleMode flow_mode_from_string(const std::string& s) {
  if (s == "full") return FlowScaleMode::Full;
  if (s == "m1") return FlowScaleMode::M1;
  if (s == "m2") return FlowScaleMode::M2;
  if (s == "m3") return FlowScaleMode::M3;
  throw Error("unknown flow mode: " + s);
}

Profile Profile::paper() {
  Profile p;
  p.name = "paper";
  p.ctx_ch = {48, 64, 96};
  p.feat_ch = 48;
  p.motion_latent_ch = 128;
  p.ctx_latent_ch = 128;
  p.hyper_ch = 64;
  p.hyper_stages = 3;  // z sits 8x below y
  p.flow_ch = 32;
  p.guide_ch = {64, 96, 128};
  p.mid_ch = 96;
  p.motion_mid_ch = 64;
  p.prior_ch = 64;
  p.entropy_mid_ch = 64;
  p.pfa_ch = 32;
  return p;
}

Profile Profile::desk() { return Profile{}; }

Profile Profile::tiny() {
  Profile p;
  p.name = "tiny";
  p.ctx_ch = {8, 12, 16};
  p.feat_ch = 16;
  p.motion_latent_ch = 32;
  p.ctx_latent_ch = 32;
  p.hyper_ch = 16;
  p.hyper_stages = 1;
  p.flow_ch = 12;
  p.guide_ch = {16, 24, 32};
  p.mid_ch = 24;
  p.motion_mid_ch = 16;
  p.prior_ch = 16;
  p.entropy_mid_ch = 16;
  p.pfa_ch = 8;
  return p;
}

Profile Profile::by_name(const std::string& name) {
  if (name == "paper") return paper();
  if (name == "desk") return desk();
  if (name == "tiny") return tiny();
  throw Error("unknown profile: " + name + " (expected paper|desk|tiny)");
}

std::string Profile::to_json() const {
  std::ostringstream os;
  os << "{\"name\":\"" << name << "\",\"ctx_ch\":[" << ctx_ch[0] << "," << ctx_ch[1] << ","
     << ctx_ch[2] << "],\"feat_ch\":" << feat_ch << ",\"motion_latent_ch\":" << motion_latent_ch
     << ",\"ctx_latent_ch\":" << ctx_latent_ch << ",\"hyper_ch\":" << hyper_ch
     << ",\"hyper_stages\":" << hyper_stages << ",\"flow_ch\":" << flow_ch << ",\"guide_ch\":["
     << guide_ch[0] << "," << guide_ch[1] << "," << guide_ch[2] << "],\"mid_ch\":" << mid_ch
     << ",\"motion_mid_ch\":" << motion_mid_ch << ",\"prior_ch\":" << prior_ch
     << ",\"entropy_mid_ch\":" << entropy_mid_ch << ",\"pfa_ch\":" << pfa_ch << "}";
  return os.str();
}

double CodecConfig::lambda(int q) const {
  HBVC_CHECK(q >= 0 && q < kNumRatePoints, "qp out of range");
  return lambda_scale * static_cast<double>(2048 >> q);
}

std::string CodecConfig::arch_json() const {
  std::ostringstream os;
  os << "{\"arch_version\":1,\"profile\":" << profile.to_json() << ",\"motion_codec\":\""
     << to_string(motion_codec) << "\",\"fusion\":\"" << to_string(fusion) << "\"}";
  return os.str();
}

uint64_t CodecConfig::fingerprint() const { return fnv1a64(arch_json()); }

void CodecConfig::validate() const {
  HBVC_CHECK(qp >= 0 && qp < kNumRatePoints, "qp must be in [0,3]");
  HBVC_CHECK(intra_period == 2 || intra_period == 4 || intra_period == 8 ||
                 intra_period == 16 || intra_period == 32,
             "intra_period must be one of {2,4,8,16,32}");
  HBVC_CHECK(lambda_scale > 0.0, "lambda_scale must be positive");
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hbvc
