#pragma once

#include <array>
#include <string>

#include "hbvc/tensor.hpp"

namespace hbvc {

enum class MotionCodecKind : uint8_t { BMC = 0, BMRC = 1 };
enum class FusionKind : uint8_t { BCF = 0, Concat = 1 };
enum class FlowScaleMode : uint8_t { Full = 0, M1 = 1, M2 = 2, M3 = 3 };

std::string to_string(MotionCodecKind k);
std::string to_string(FusionKind k);
std::string to_string(FlowScaleMode m);
MotionCodecKind motion_codec_from_string(const std::string& s);
FusionKind fusion_from_string(const std::string& s);
FlowScaleMode flow_mode_from_string(const std::string& s);

// Channel widths for one model size. "paper" mirrors the published layout,
// "desk" is the default working size, "tiny" is the fast test size.
struct Profile {
  std::string name = "desk";
  std::array<int, 3> ctx_ch = {16, 24, 32};  // context pyramid c1,c2,c3
  int feat_ch = 32;                          // reference feature C_F
  int motion_latent_ch = 64;                 // C_v
  int ctx_latent_ch = 64;                    // C_y
  int hyper_ch = 32;                         // C_z
  int hyper_stages = 1;                      // stride-2 stages between y and z
  int flow_ch = 16;
  std::array<int, 3> guide_ch = {32, 48, 64};  // BCF guidance tower
  int mid_ch = 48;                             // transform trunk
  int motion_mid_ch = 32;                      // motion codec trunk
  int prior_ch = 32;                           // motion prior embeddings
  int entropy_mid_ch = 32;
  int pfa_ch = 16;  // PFA output channels feeding decoder guidance

  static Profile paper();
  static Profile desk();
  static Profile tiny();
  static Profile by_name(const std::string& name);

  std::string to_json() const;  // canonical form, fingerprint input
};

// Full codec configuration. Fields marked (arch) change the parameter set
// and therefore the checkpoint fingerprint; flow_mode and intra_period are
// runtime knobs.
struct CodecConfig {
  Profile profile;                                        // (arch)
  MotionCodecKind motion_codec = MotionCodecKind::BMC;    // (arch)
  FusionKind fusion = FusionKind::BCF;                    // (arch)
  FlowScaleMode flow_mode = FlowScaleMode::Full;
  int intra_period = 32;
  int qp = 2;  // rate point, 0 = finest

  double lambda_scale = 1.0;
  static constexpr int kNumRatePoints = 4;
  // λ(qp): {2048,1024,512,256} * lambda_scale; higher qp codes coarser.
  double lambda(int qp) const;

  std::string arch_json() const;
  uint64_t fingerprint() const;
  void validate() const;
};

uint64_t fnv1a64(const std::string& s);

}  // namespace hbvc
