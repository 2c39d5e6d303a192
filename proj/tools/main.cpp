// oscseg: command-line front end for oscillator-network image segmentation.
//
// Exit status: 0 success, 2 configuration or usage error, 3 numerical
// failure, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oscseg/harness.hpp"
#include "oscseg/image_io.hpp"

namespace {

using namespace oscseg;
using namespace oscseg::harness;

struct CommonOptions {
  std::string config_file;
  std::string preset;
  std::string model;
  std::string coupling;
  std::string threshold;
  std::string gap_threshold;
  std::string mode;
  std::string boundary;
  std::string seed;
  std::string dt;
  std::string total_time;
  std::string window;
  std::string threads;
  bool relative_gap = false;
  std::vector<std::string> sets;
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, CommonOptions& o, bool model_flag) {
  sub->add_option("--config", o.config_file, "key = value settings file");
  sub->add_option("--preset", o.preset,
                  "neural-default, bz-default, mems-default, shape-extraction, "
                  "tuned-thresholds or region-clusters");
  if (model_flag) sub->add_option("--model", o.model, "neural, bz or mems (default bz)");
  sub->add_option("--coupling", o.coupling, "coupling coefficient c");
  sub->add_option("--threshold", o.threshold,
                  "fixed binary frequency threshold, or 'auto' for Otsu");
  sub->add_option("--gap-threshold", o.gap_threshold,
                  "gap-clustering threshold (switches to gap-cluster mode)");
  sub->add_flag("--relative-gap", o.relative_gap,
                "gap thresholds are fractions of the median frequency");
  sub->add_option("--mode", o.mode, "otsu-binary or gap-cluster");
  sub->add_option("--boundary", o.boundary, "mirror (default) or truncate");
  sub->add_option("--seed", o.seed, "seed for the initial-state jitter");
  sub->add_option("--dt", o.dt, "RK4 step");
  sub->add_option("--total-time", o.total_time, "simulated time");
  sub->add_option("--window", o.window, "frequency estimation window");
  sub->add_option("--threads", o.threads, "worker threads per simulation");
  sub->add_option("--set", o.sets, "extra key=value setting (repeatable)");
  sub->add_option("--out-dir", o.out_dir, "output directory");
}

Overrides collect_overrides(const CommonOptions& o) {
  Overrides ov;
  if (!o.config_file.empty()) ov = load_config_file(o.config_file);
  auto put = [&ov](const char* key, const std::string& value) {
    if (!value.empty()) ov.emplace_back(key, value);
  };
  put("mode", o.mode);
  put("coupling", o.coupling);
  put("threshold", o.threshold);
  put("gap-threshold", o.gap_threshold);
  if (o.relative_gap) ov.emplace_back("relative-gap", "true");
  put("boundary", o.boundary);
  put("seed", o.seed);
  put("dt", o.dt);
  put("total-time", o.total_time);
  put("window", o.window);
  put("threads", o.threads);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      fail(Errc::invalid_config, "--set expects key=value, got '" + s + "'");
    ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return ov;
}

RunConfig single_config(const CommonOptions& o) {
  ModelKind kind = ModelKind::bz;
  if (!o.model.empty()) {
    kind = parse_model_kind(o.model);
  } else if (!o.preset.empty()) {
    if (auto m = preset_model(o.preset)) kind = *m;
  }
  RunConfig cfg = make_config(kind, o.preset);
  const Overrides ov = collect_overrides(o);
  std::vector<bool> used;
  apply_overrides(cfg, ov, used);
  require_all_used(ov, used);
  return cfg;
}

std::vector<RunConfig> method_configs(const CommonOptions& o,
                                      const std::vector<std::string>& methods,
                                      bool& include_otsu) {
  include_otsu = false;
  std::vector<RunConfig> cfgs;
  for (const auto& m : methods) {
    if (m == "otsu") {
      include_otsu = true;
      continue;
    }
    cfgs.push_back(make_config(parse_model_kind(m), o.preset));
  }
  require(!cfgs.empty() || include_otsu, "no methods selected");
  const Overrides ov = collect_overrides(o);
  std::vector<bool> used(ov.size(), false);
  for (auto& cfg : cfgs) {
    std::vector<bool> u;
    apply_overrides(cfg, ov, u);
    for (std::size_t i = 0; i < u.size(); ++i) used[i] = used[i] || u[i];
  }
  require_all_used(ov, used);
  return cfgs;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segment grayscale images with frequency-locking oscillator networks"};
  app.require_subcommand(1);

  CommonOptions seg_o;
  std::string seg_input, seg_ref;
  auto* seg = app.add_subcommand("segment", "simulate one image and segment it");
  seg->add_option("image", seg_input, "input PGM")->required();
  seg->add_option("--ref", seg_ref, "reference mask PGM for scoring");
  add_common(seg, seg_o, true);

  CommonOptions sw_o;
  std::string sw_input;
  std::vector<double> sw_couplings, sw_thresholds;
  auto* sw = app.add_subcommand("sweep", "coupling x gap-threshold grid");
  sw->add_option("image", sw_input, "input PGM")->required();
  sw->add_option("--couplings", sw_couplings, "comma-separated couplings")
      ->delimiter(',')
      ->required();
  sw->add_option("--thresholds", sw_thresholds, "comma-separated gap thresholds")
      ->delimiter(',')
      ->required();
  add_common(sw, sw_o, true);

  CommonOptions ns_o;
  std::string ns_input, ns_ref;
  std::vector<double> ns_variances{0.005, 0.01, 0.02, 0.03};
  std::vector<std::string> ns_methods{"neural", "bz", "mems", "otsu"};
  int ns_trials = 5;
  std::uint64_t ns_noise_seed = 1;
  auto* ns = app.add_subcommand("noise-study", "mislabel rate vs Gaussian noise");
  ns->add_option("image", ns_input, "noise-free input PGM")->required();
  ns->add_option("--ref", ns_ref, "ground-truth mask PGM");
  ns->add_option("--variances", ns_variances, "comma-separated noise variances")
      ->delimiter(',');
  ns->add_option("--trials", ns_trials, "noise draws per variance")->capture_default_str();
  ns->add_option("--noise-seed", ns_noise_seed, "seed of the first noise draw")
      ->capture_default_str();
  ns->add_option("--methods", ns_methods, "neural,bz,mems,otsu")->delimiter(',');
  add_common(ns, ns_o, false);

  CommonOptions cmp_o;
  std::vector<std::string> cmp_images, cmp_refs;
  std::vector<std::string> cmp_methods{"neural", "bz", "mems", "otsu"};
  auto* cmp = app.add_subcommand("compare", "per-image mislabel rates per method");
  cmp->add_option("--images", cmp_images, "comma-separated input PGMs")
      ->delimiter(',')
      ->required();
  cmp->add_option("--refs,--ref", cmp_refs, "comma-separated reference masks")
      ->delimiter(',')
      ->required();
  cmp->add_option("--methods", cmp_methods, "neural,bz,mems,otsu")->delimiter(',');
  add_common(cmp, cmp_o, false);

  SyntheticRequest gen_r;
  std::string gen_out = ".";
  auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic test image");
  gen->add_option("--kind", gen_r.kind, "quadrant or two-region")->capture_default_str();
  gen->add_option("--side", gen_r.side, "image side in pixels")->capture_default_str();
  gen->add_option("--levels", gen_r.levels, "grey levels per quadrant")
      ->capture_default_str();
  gen->add_option("--a", gen_r.intensity_a, "left-half intensity")->capture_default_str();
  gen->add_option("--b", gen_r.intensity_b, "right-half intensity")->capture_default_str();
  gen->add_option("--noise-variance", gen_r.noise_variance, "additive Gaussian noise")
      ->capture_default_str();
  gen->add_option("--seed", gen_r.seed, "shuffle and noise seed")->capture_default_str();
  gen->add_option("--out-dir", gen_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*seg) {
      SegmentRequest req{single_config(seg_o), seg_input, std::nullopt, seg_o.out_dir};
      if (!seg_ref.empty()) req.reference = seg_ref;
      const auto out = cmd_segment(req);
      std::cout << "clusters=" << out.result.labels.label_count()
                << " threshold=" << fmt(out.result.threshold)
                << " converged=" << (out.result.sim.converged ? "yes" : "no");
      if (out.metrics) std::cout << " mislabel_rate=" << fmt(out.metrics->mislabeled_fraction);
      std::cout << "\n";
    } else if (*sw) {
      SweepRequest req{single_config(sw_o), sw_input, sw_couplings, sw_thresholds,
                       sw_o.out_dir};
      const auto cells = cmd_sweep(req);
      std::size_t failed = 0;
      for (const auto& c : cells) failed += c.status != "ok";
      std::cout << cells.size() << " cells, " << failed << " failed\n";
    } else if (*ns) {
      NoiseStudyRequest req;
      req.methods = method_configs(ns_o, ns_methods, req.include_otsu);
      req.image = load_pgm(ns_input);
      if (!ns_ref.empty()) req.truth = labels_from_image(load_pgm(ns_ref));
      req.variances = ns_variances;
      req.trials = ns_trials;
      req.noise_seed = ns_noise_seed;
      req.out_dir = ns_o.out_dir;
      for (const auto& r : cmd_noise_study(req))
        std::cout << fmt(r.variance) << " " << r.method << " " << fmt(r.error_vs_clean)
                  << (std::isnan(r.error_vs_truth) ? "" : " " + fmt(r.error_vs_truth))
                  << "\n";
    } else if (*cmp) {
      CompareRequest req;
      req.methods = method_configs(cmp_o, cmp_methods, req.include_otsu);
      for (const auto& p : cmp_images) req.images.emplace_back(p);
      for (const auto& p : cmp_refs) req.references.emplace_back(p);
      req.out_dir = cmp_o.out_dir;
      for (const auto& r : cmd_compare(req))
        std::cout << r.image << " " << r.method << " " << fmt(r.mislabel_rate) << "\n";
    } else if (*gen) {
      gen_r.out_dir = gen_out;
      cmd_gen_synthetic(gen_r);
    }
  } catch (const Error& e) {
    std::cerr << "oscseg: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "oscseg: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
