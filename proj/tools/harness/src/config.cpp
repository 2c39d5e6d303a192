#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <string>

#include "oscseg/harness.hpp"

namespace oscseg::harness {

std::string_view to_string(SegmentMode mode) noexcept {
  return mode == SegmentMode::gap_cluster ? "gap-cluster" : "otsu-binary";
}

SegmentMode parse_segment_mode(std::string_view text) {
  if (text == "otsu-binary" || text == "otsu") return SegmentMode::otsu_binary;
  if (text == "gap-cluster" || text == "gap") return SegmentMode::gap_cluster;
  fail(Errc::invalid_config, "unknown segmentation mode '" + std::string(text) +
                                 "' (expected otsu-binary or gap-cluster)");
}

namespace {

struct PresetSpec {
  std::optional<ModelKind> model;
  double coupling[3];  // neural, bz, mems
  std::optional<double> gap[3];
  std::optional<double> total_time;
  std::optional<double> window;
};

std::size_t slot(ModelKind kind) { return static_cast<std::size_t>(kind); }

const std::map<std::string, PresetSpec, std::less<>>& presets() {
  // Per-model couplings for image-detail work, the stronger ones that merge
  // regions into shapes, and gap thresholds tuned per model.
  static const std::map<std::string, PresetSpec, std::less<>> table = {
      {"neural-default", {ModelKind::neural, {0.02, 0.1, 0.05}, {}, {}, {}}},
      {"bz-default", {ModelKind::bz, {0.02, 0.1, 0.05}, {}, {}, {}}},
      {"mems-default", {ModelKind::mems, {0.02, 0.1, 0.05}, {}, {}, {}}},
      {"shape-extraction", {std::nullopt, {0.05, 0.35, 0.1}, {}, {}, {}}},
      {"tuned-thresholds",
       {std::nullopt, {0.02, 0.1, 0.05}, {0.025, 0.0125, 0.02}, {}, {}}},
      {"region-clusters",
       {ModelKind::bz, {0.02, 0.3, 0.05}, {0.025, 0.025, 0.025}, 200.0, 50.0}},
  };
  return table;
}

double parse_real(std::string_view key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(v))
    fail(Errc::invalid_config,
         "'" + std::string(key) + "' expects a number, got '" + text + "'");
  return v;
}

long long parse_int(std::string_view key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v) || std::fabs(v) > 9.0e15)
    fail(Errc::invalid_config,
         "'" + std::string(key) + "' expects an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

bool parse_bool(std::string_view key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(Errc::invalid_config,
       "'" + std::string(key) + "' expects true/false, got '" + text + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

using Setter = std::function<void(RunConfig&, const std::string& key,
                                  const std::string& value)>;

struct KeyInfo {
  std::optional<ModelKind> model;  // model-specific parameter
  Setter set;
};

template <class P>
P& params(RunConfig& cfg) {
  return std::get<P>(cfg.model);
}

const std::map<std::string, KeyInfo, std::less<>>& keys() {
  using K = ModelKind;
  auto real = [](double SimConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) {
      c.sim.*field = parse_real(k, v);
    };
  };
  auto neural = [](double NeuralParams::*field) {
    return KeyInfo{K::neural, [field](RunConfig& c, const std::string& k,
                                      const std::string& v) {
                     params<NeuralParams>(c).*field = parse_real(k, v);
                   }};
  };
  auto bz = [](double BzParams::*field) {
    return KeyInfo{K::bz, [field](RunConfig& c, const std::string& k,
                                  const std::string& v) {
                     params<BzParams>(c).*field = parse_real(k, v);
                   }};
  };
  auto mems = [](double MemsParams::*field) {
    return KeyInfo{K::mems, [field](RunConfig& c, const std::string& k,
                                    const std::string& v) {
                     params<MemsParams>(c).*field = parse_real(k, v);
                   }};
  };
  static const std::map<std::string, KeyInfo, std::less<>> table = {
      {"coupling",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.coupling.coefficient = parse_real(k, v);
        }}},
      {"boundary",
       {{}, [](RunConfig& c, const std::string&, const std::string& v) {
          c.coupling.boundary = parse_boundary(v);
        }}},
      {"radius",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.coupling.radius = static_cast<int>(parse_int(k, v));
        }}},
      {"include-self",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.coupling.include_self = parse_bool(k, v);
        }}},
      {"mode",
       {{}, [](RunConfig& c, const std::string&, const std::string& v) {
          c.mode = parse_segment_mode(v);
        }}},
      {"threshold",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.mode = SegmentMode::otsu_binary;
          if (v == "auto" || v == "otsu") {
            c.threshold.reset();
          } else {
            c.threshold = parse_real(k, v);
          }
        }}},
      {"gap-threshold",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.mode = SegmentMode::gap_cluster;
          c.gap_threshold = parse_real(k, v);
        }}},
      {"relative-gap",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.relative_gap = parse_bool(k, v);
        }}},
      {"dt", {{}, real(&SimConfig::dt)}},
      {"total-time", {{}, real(&SimConfig::total_time)}},
      {"window", {{}, real(&SimConfig::window)}},
      {"transient-fraction", {{}, real(&SimConfig::transient_fraction)}},
      {"convergence-tol", {{}, real(&SimConfig::convergence_tol)}},
      {"init-jitter", {{}, real(&SimConfig::init_jitter)}},
      {"init-phase-spread", {{}, real(&SimConfig::init_phase_spread)}},
      {"init-radius", {{}, real(&SimConfig::init_radius)}},
      {"seed",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          const long long s = parse_int(k, v);
          require(s >= 0, "seed must be >= 0");
          c.sim.seed = static_cast<std::uint64_t>(s);
        }}},
      {"threads",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.sim.threads = static_cast<int>(parse_int(k, v));
        }}},
      {"stop-on-convergence",
       {{}, [](RunConfig& c, const std::string& k, const std::string& v) {
          c.sim.stop_on_convergence = parse_bool(k, v);
        }}},
      {"rho", neural(&NeuralParams::rho)},
      {"epsilon", neural(&NeuralParams::epsilon)},
      {"gamma", neural(&NeuralParams::gamma)},
      {"beta", neural(&NeuralParams::beta)},
      {"stimulus-lo", neural(&NeuralParams::stimulus_lo)},
      {"stimulus-hi", neural(&NeuralParams::stimulus_hi)},
      {"rho-jitter",
       {K::neural, [](RunConfig& c, const std::string& k, const std::string& v) {
          params<NeuralParams>(c).rho_jitter = parse_bool(k, v);
        }}},
      {"beta1", bz(&BzParams::beta1)},
      {"beta2", bz(&BzParams::beta2)},
      {"theta", bz(&BzParams::theta)},
      {"tau-lo", bz(&BzParams::tau_lo)},
      {"tau-hi", bz(&BzParams::tau_hi)},
      {"event-level", bz(&BzParams::event_level)},
      {"damping", mems(&MemsParams::damping_c)},
      {"nonlinear", mems(&MemsParams::nonlinear_d)},
      {"omega-lo", mems(&MemsParams::omega_lo)},
      {"omega-hi", mems(&MemsParams::omega_hi)},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, spec] : presets()) out.push_back(name);
  return out;
}

std::optional<ModelKind> preset_model(std::string_view preset) {
  const auto it = presets().find(preset);
  if (it == presets().end())
    fail(Errc::invalid_config, "unknown preset '" + std::string(preset) + "'");
  return it->second.model;
}

RunConfig make_config(ModelKind kind, std::string_view preset) {
  const std::string name =
      preset.empty() ? std::string(to_string(kind)) + "-default" : std::string(preset);
  const auto it = presets().find(name);
  if (it == presets().end())
    fail(Errc::invalid_config, "unknown preset '" + name + "'");
  const PresetSpec& spec = it->second;
  if (spec.model && *spec.model != kind)
    fail(Errc::invalid_config, "preset '" + name + "' is for the " +
                                   std::string(to_string(*spec.model)) +
                                   " model, not " + std::string(to_string(kind)));
  RunConfig cfg;
  cfg.preset = name;
  cfg.model = default_model(kind);
  cfg.sim = default_sim_config(kind);
  cfg.coupling.coefficient = spec.coupling[slot(kind)];
  cfg.coupling.boundary = Boundary::mirror;
  if (spec.gap[slot(kind)]) {
    cfg.mode = SegmentMode::gap_cluster;
    cfg.gap_threshold = *spec.gap[slot(kind)];
  }
  if (spec.total_time) cfg.sim.total_time = *spec.total_time;
  if (spec.window) cfg.sim.window = *spec.window;
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Overrides& overrides,
                     std::vector<bool>& used) {
  used.resize(overrides.size(), false);
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    std::string_view key = overrides[i].first;
    const auto dot = key.find('.');
    if (dot != std::string_view::npos) {
      if (parse_model_kind(key.substr(0, dot)) != cfg.kind()) continue;
      key = key.substr(dot + 1);
    }
    const auto it = keys().find(key);
    if (it == keys().end())
      fail(Errc::invalid_config, "unknown setting '" + overrides[i].first + "'");
    if (it->second.model && *it->second.model != cfg.kind()) continue;
    it->second.set(cfg, std::string(key), overrides[i].second);
    used[i] = true;
  }
}

void require_all_used(const Overrides& overrides, const std::vector<bool>& used) {
  for (std::size_t i = 0; i < overrides.size(); ++i)
    if (i >= used.size() || !used[i])
      fail(Errc::invalid_config, "setting '" + overrides[i].first +
                                     "' does not apply to any selected model");
}

Overrides parse_config_text(std::string_view text) {
  Overrides out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      fail(Errc::invalid_config,
           "config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(trimmed).substr(0, eq));
    std::string value = trim(std::string_view(trimmed).substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty())
      fail(Errc::invalid_config,
           "config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Overrides load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open config file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return parse_config_text(text);
}

void validate(const RunConfig& cfg) {
  oscseg::validate(cfg.model);
  oscseg::validate(cfg.coupling);
  oscseg::validate(cfg.sim);
  require(std::isfinite(cfg.gap_threshold) && cfg.gap_threshold > 0.0,
          "gap threshold must be > 0");
  if (cfg.threshold) require(std::isfinite(*cfg.threshold), "threshold must be finite");
}

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_config:
    case Errc::invalid_size:
    case Errc::dimension_mismatch:
      return 2;
    case Errc::numerical_blowup:
    case Errc::degenerate:
      return 3;
    case Errc::malformed_header:
    case Errc::truncated_data:
    case Errc::unsupported_maxval:
    case Errc::io:
      return 4;
  }
  return 1;
}

}  // namespace oscseg::harness
