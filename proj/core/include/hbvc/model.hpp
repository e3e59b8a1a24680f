#pragma once

#include <memory>

#include "hbvc/motion_codec.hpp"
#include "hbvc/transform.hpp"

namespace hbvc {

// The complete trainable codec. Which sub-modules exist follows the
// architecture part of the config (motion codec kind, fusion kind); the
// checkpoint fingerprint covers exactly those choices plus the profile.
struct CodecModel {
  CodecConfig cfg;
  ParamRegistry reg;

  FlowNet flow;
  CFE cfe;

  std::unique_ptr<MotionCoder> motion;
  HyperCodec mo_hyper;
  FactorizedPrior mo_prior;
  QuadtreeEntropy mo_entropy;

  std::unique_ptr<BCF> bcf_enc, bcf_dec;  // fusion == BCF
  std::unique_ptr<PFA> pfa;
  std::unique_ptr<ConcatFusion> concat_fuse;  // fusion == Concat

  ContextualCoder ctx;
  HyperCodec ctx_hyper;
  FactorizedPrior ctx_prior;
  QuadtreeEntropy ctx_entropy;
  TemporalPriorNet tprior;

  IntraCoder intra;
  HyperCodec intra_hyper;
  FactorizedPrior intra_prior;
  QuadtreeEntropy intra_entropy;

  explicit CodecModel(const CodecConfig& config, uint64_t init_seed = 0x5eed);

  // Versioned parameter archive with an architecture fingerprint; loading a
  // checkpoint whose fingerprint does not match its own embedded config is
  // refused, as is loading into a model built from a different config.
  void save(const std::string& path) const;
  static std::unique_ptr<CodecModel> load(const std::string& path);

  int64_t num_parameters() const { return reg.total_elements(); }
};

// Serialize/parse the architecture config (used by checkpoints).
std::string codec_config_to_json(const CodecConfig& cfg);
CodecConfig codec_config_from_json(const std::string& json_text);

}  // namespace hbvc
