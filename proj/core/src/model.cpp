#include "hbvc/model.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace hbvc {

namespace {
int cond_ch_motion(const CodecConfig& cfg) {
  int c = 2 * cfg.profile.motion_latent_ch;  // hyper synthesis
  if (cfg.motion_codec == MotionCodecKind::BMC) c += 2 * cfg.profile.prior_ch;
  return c;
}
}  // namespace

CodecModel::CodecModel(const CodecConfig& config, uint64_t init_seed) : cfg(config) {
  cfg.validate();
  const Profile& p = cfg.profile;
  std::mt19937_64 rng(init_seed);

  flow = FlowNet(reg, "flow.net", p, rng);
  cfe = CFE(reg, "ctx.cfe", p, rng);

  motion = make_motion_coder(cfg.motion_codec, reg, "motion.codec", p, rng);
  mo_hyper = HyperCodec(reg, "motion.hyper", p.motion_latent_ch, p.hyper_ch, p.hyper_stages,
                        p.entropy_mid_ch, rng);
  mo_prior = FactorizedPrior(reg, "motion.zprior", p.hyper_ch, rng);
  mo_entropy = QuadtreeEntropy(reg, "motion.qt", p.motion_latent_ch, cond_ch_motion(cfg),
                               p.entropy_mid_ch, rng);

  if (cfg.fusion == FusionKind::BCF) {
    bcf_enc = std::make_unique<BCF>(reg, "fusion.enc", 9, p, rng);
    pfa = std::make_unique<PFA>(reg, "fusion.pfa", p.ctx_latent_ch, p.pfa_ch, rng);
    bcf_dec = std::make_unique<BCF>(reg, "fusion.dec", p.pfa_ch + 6, p, rng);
  } else {
    concat_fuse = std::make_unique<ConcatFusion>(reg, "fusion.cat", p, rng);
  }

  ctx = ContextualCoder(reg, "ctx.coder", p, rng);
  ctx_hyper = HyperCodec(reg, "ctx.hyper", p.ctx_latent_ch, p.hyper_ch, p.hyper_stages,
                         p.entropy_mid_ch, rng);
  ctx_prior = FactorizedPrior(reg, "ctx.zprior", p.hyper_ch, rng);
  ctx_entropy = QuadtreeEntropy(reg, "ctx.qt", p.ctx_latent_ch,
                                2 * p.ctx_latent_ch + p.entropy_mid_ch, p.entropy_mid_ch, rng);
  tprior = TemporalPriorNet(reg, "ctx.tprior", p, rng);

  intra = IntraCoder(reg, "intra.coder", p, rng);
  intra_hyper = HyperCodec(reg, "intra.hyper", p.ctx_latent_ch, p.hyper_ch, p.hyper_stages,
                           p.entropy_mid_ch, rng);
  intra_prior = FactorizedPrior(reg, "intra.zprior", p.hyper_ch, rng);
  intra_entropy = QuadtreeEntropy(reg, "intra.qt", p.ctx_latent_ch, 2 * p.ctx_latent_ch,
                                  p.entropy_mid_ch, rng);
}

namespace {

constexpr char kCkptMagic[4] = {'H', 'B', 'C', 'K'};
constexpr uint8_t kCkptVersion = 1;

template <typename T>
void put_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get_raw(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  HBVC_CHECK(in.good(), "checkpoint: truncated");
  return v;
}

}  // namespace

void CodecModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  HBVC_CHECK(out.good(), "checkpoint: cannot open " + path);
  out.write(kCkptMagic, 4);
  put_raw(out, kCkptVersion);
  uint64_t fp = cfg.fingerprint();
  put_raw(out, fp);
  std::string cj = codec_config_to_json(cfg);
  uint32_t cj_len = static_cast<uint32_t>(cj.size());
  put_raw(out, cj_len);
  out.write(cj.data(), cj_len);

  uint32_t n = static_cast<uint32_t>(reg.items().size());
  put_raw(out, n);
  for (const auto& [name, p] : reg.items()) {
    uint16_t nl = static_cast<uint16_t>(name.size());
    put_raw(out, nl);
    out.write(name.data(), nl);
    uint8_t nd = static_cast<uint8_t>(p->val.ndim());
    put_raw(out, nd);
    for (int d = 0; d < p->val.ndim(); ++d) put_raw(out, static_cast<int32_t>(p->val.dim(d)));
    out.write(reinterpret_cast<const char*>(p->val.data()),
              static_cast<int64_t>(p->val.numel()) * 8);
  }
  HBVC_CHECK(out.good(), "checkpoint: write failed");
}

std::unique_ptr<CodecModel> CodecModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  HBVC_CHECK(in.good(), "checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  HBVC_CHECK(in.good() && std::memcmp(magic, kCkptMagic, 4) == 0, "checkpoint: bad magic");
  uint8_t version = get_raw<uint8_t>(in);
  HBVC_CHECK(version == kCkptVersion, "checkpoint: unsupported version");
  uint64_t fp = get_raw<uint64_t>(in);
  uint32_t cj_len = get_raw<uint32_t>(in);
  std::string cj(cj_len, '\0');
  in.read(cj.data(), cj_len);
  HBVC_CHECK(in.good(), "checkpoint: truncated config");

  CodecConfig cfg = codec_config_from_json(cj);
  HBVC_CHECK(cfg.fingerprint() == fp,
             "checkpoint: config fingerprint mismatch (corrupt or incompatible file)");

  auto model = std::make_unique<CodecModel>(cfg, 0);
  uint32_t n = get_raw<uint32_t>(in);
  HBVC_CHECK(n == model->reg.items().size(), "checkpoint: parameter count mismatch");
  for (uint32_t i = 0; i < n; ++i) {
    uint16_t nl = get_raw<uint16_t>(in);
    std::string name(nl, '\0');
    in.read(name.data(), nl);
    uint8_t nd = get_raw<uint8_t>(in);
    std::vector<int> shape(nd);
    for (int d = 0; d < nd; ++d) shape[d] = get_raw<int32_t>(in);
    Var p = model->reg.find(name);
    HBVC_CHECK(p->val.shape == shape, "checkpoint: shape mismatch for " + name);
    in.read(reinterpret_cast<char*>(p->val.data()),
            static_cast<int64_t>(p->val.numel()) * 8);
    HBVC_CHECK(in.good(), "checkpoint: truncated tensor " + name);
  }
  return model;
}

std::string codec_config_to_json(const CodecConfig& cfg) {
  nlohmann::json j;
  const Profile& p = cfg.profile;
  j["arch_version"] = 1;
  j["profile"] = {{"name", p.name},
                  {"ctx_ch", p.ctx_ch},
                  {"feat_ch", p.feat_ch},
                  {"motion_latent_ch", p.motion_latent_ch},
                  {"ctx_latent_ch", p.ctx_latent_ch},
                  {"hyper_ch", p.hyper_ch},
                  {"hyper_stages", p.hyper_stages},
                  {"flow_ch", p.flow_ch},
                  {"guide_ch", p.guide_ch},
                  {"mid_ch", p.mid_ch},
                  {"motion_mid_ch", p.motion_mid_ch},
                  {"prior_ch", p.prior_ch},
                  {"entropy_mid_ch", p.entropy_mid_ch},
                  {"pfa_ch", p.pfa_ch}};
  j["motion_codec"] = to_string(cfg.motion_codec);
  j["fusion"] = to_string(cfg.fusion);
  j["flow_mode"] = to_string(cfg.flow_mode);
  j["intra_period"] = cfg.intra_period;
  j["qp"] = cfg.qp;
  j["lambda_scale"] = cfg.lambda_scale;
  return j.dump();
}

CodecConfig codec_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CodecConfig cfg;
  const auto& pj = j.at("profile");
  Profile& p = cfg.profile;
  p.name = pj.at("name").get<std::string>();
  p.ctx_ch = pj.at("ctx_ch").get<std::array<int, 3>>();
  p.feat_ch = pj.at("feat_ch").get<int>();
  p.motion_latent_ch = pj.at("motion_latent_ch").get<int>();
  p.ctx_latent_ch = pj.at("ctx_latent_ch").get<int>();
  p.hyper_ch = pj.at("hyper_ch").get<int>();
  p.hyper_stages = pj.at("hyper_stages").get<int>();
  p.flow_ch = pj.at("flow_ch").get<int>();
  p.guide_ch = pj.at("guide_ch").get<std::array<int, 3>>();
  p.mid_ch = pj.at("mid_ch").get<int>();
  p.motion_mid_ch = pj.at("motion_mid_ch").get<int>();
  p.prior_ch = pj.at("prior_ch").get<int>();
  p.entropy_mid_ch = pj.at("entropy_mid_ch").get<int>();
  p.pfa_ch = pj.at("pfa_ch").get<int>();
  cfg.motion_codec = motion_codec_from_string(j.at("motion_codec").get<std::string>());
  cfg.fusion = fusion_from_string(j.at("fusion").get<std::string>());
  if (j.contains("flow_mode"))
    cfg.flow_mode = flow_mode_from_string(j.at("flow_mode").get<std::string>());
  if (j.contains("intra_period")) cfg.intra_period = j.at("intra_period").get<int>();
  if (j.contains("qp")) cfg.qp = j.at("qp").get<int>();
  if (j.contains("lambda_scale")) cfg.lambda_scale = j.at("lambda_scale").get<double>();
  return cfg;
}

}  // namespace hbvc
