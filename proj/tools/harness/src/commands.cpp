#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "oscseg/harness.hpp"
#include "oscseg/image_io.hpp"

#include "json.hpp"

namespace oscseg::harness {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

json describe_model(const ModelConfig& model) {
  json j;
  j["kind"] = to_string(kind_of(model));
  std::visit(
      [&j](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NeuralParams>) {
          j["rho"] = p.rho;
          j["epsilon"] = p.epsilon;
          j["gamma"] = p.gamma;
          j["beta"] = p.beta;
          j["stimulus_lo"] = p.stimulus_lo;
          j["stimulus_hi"] = p.stimulus_hi;
          j["rho_jitter"] = p.rho_jitter;
        } else if constexpr (std::is_same_v<P, BzParams>) {
          j["beta1"] = p.beta1;
          j["beta2"] = p.beta2;
          j["theta"] = p.theta;
          j["tau_lo"] = p.tau_lo;
          j["tau_hi"] = p.tau_hi;
          j["event_level"] = p.event_level;
        } else {
          j["damping_c"] = p.damping_c;
          j["nonlinear_d"] = p.nonlinear_d;
          j["omega_lo"] = p.omega_lo;
          j["omega_hi"] = p.omega_hi;
        }
      },
      model);
  return j;
}

json describe(const RunConfig& cfg) {
  json j;
  j["preset"] = cfg.preset;
  j["model"] = describe_model(cfg.model);
  j["coupling"] = {{"coefficient", cfg.coupling.coefficient},
                   {"radius", cfg.coupling.radius},
                   {"include_self", cfg.coupling.include_self},
                   {"boundary", to_string(cfg.coupling.boundary)}};
  const SimConfig& s = cfg.sim;
  j["simulation"] = {{"integrator", "rk4"},
                     {"dt", s.dt},
                     {"total_time", s.total_time},
                     {"transient_fraction", s.transient_fraction},
                     {"window", s.window},
                     {"convergence_tol", s.convergence_tol},
                     {"seed", s.seed},
                     {"init_jitter", s.init_jitter},
                     {"init_phase_spread", s.init_phase_spread},
                     {"init_radius", s.init_radius},
                     {"stop_on_convergence", s.stop_on_convergence},
                     {"threads", s.threads}};
  json seg;
  seg["mode"] = to_string(cfg.mode);
  if (cfg.threshold) {
    seg["threshold"] = *cfg.threshold;
  } else {
    seg["threshold"] = "otsu";
  }
  seg["gap_threshold"] = cfg.gap_threshold;
  seg["relative_gap"] = cfg.relative_gap;
  j["segmentation"] = seg;
  return j;
}

json describe_sim(const SimulationResult& r) {
  return {{"converged", r.converged},
          {"last_change", std::isfinite(r.last_change) ? json(r.last_change) : json()},
          {"windows", r.windows},
          {"steps", r.steps},
          {"end_time", r.end_time},
          {"frequency_spread", r.frequencies.spread()},
          {"non_oscillating", r.frequencies.count(NodeStatus::non_oscillating)},
          {"low_confidence", r.frequencies.count(NodeStatus::low_confidence)},
          {"map_hash", r.frequencies.hash()}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    fail(Errc::io, "cannot create output directory " + dir.string());
}

void write_report(const fs::path& dir, const json& report) {
  save_file(dir / "report.json", report.dump(2) + "\n");
}

json report_header(std::string_view command) {
  json j;
  j["tool"] = "oscseg";
  j["command"] = command;
  return j;
}

LabelMap load_reference(const fs::path& path, GridDims dims) {
  LabelMap ref = labels_from_image(load_pgm(path));
  if (!(ref.dims == dims))
    fail(Errc::dimension_mismatch, "reference " + path.string() +
                                       " does not match the image size");
  return ref;
}

std::string method_name(const RunConfig& cfg) {
  return std::string(to_string(cfg.kind()));
}

}  // namespace

// ---------------------------------------------------------------------------

SegmentOutcome cmd_segment(const SegmentRequest& req) {
  validate(req.config);
  const GrayImage image = load_pgm(req.input);
  std::optional<LabelMap> reference;
  if (req.reference) reference = load_reference(*req.reference, image.dims());

  SegmentOutcome out;
  out.result = run_pipeline(image, req.config);
  if (reference) out.metrics = mislabel_rate(out.result.labels, *reference);

  json report = report_header("segment");
  report["input"] = req.input.string();
  report["reference"] = req.reference ? json(req.reference->string()) : json();
  report["config"] = describe(req.config);
  report["simulation"] = describe_sim(out.result.sim);
  report["threshold_used"] = out.result.threshold;
  report["clusters"] = out.result.labels.label_count();
  if (out.metrics) {
    report["mislabeled"] = out.metrics->mislabeled;
    report["pixels"] = out.metrics->pixel_count;
    report["mislabel_rate"] = out.metrics->mislabeled_fraction;
  }

  ensure_dir(req.out_dir);
  save_file(req.out_dir / "frequencies.csv", to_csv(out.result.sim.frequencies));
  save_file(req.out_dir / "labels.csv", to_csv(out.result.labels));
  save_file(req.out_dir / "labels.pgm", to_pgm(out.result.labels));
  write_report(req.out_dir, report);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SweepCell> run_sweep(const GrayImage& image, const RunConfig& base,
                                 const std::vector<double>& couplings,
                                 const std::vector<double>& thresholds,
                                 std::vector<FrequencyMap>* maps,
                                 std::vector<LabelMap>* masks) {
  require(!couplings.empty(), "sweep needs at least one coupling value");
  require(!thresholds.empty(), "sweep needs at least one threshold value");
  for (double c : couplings)
    require(std::isfinite(c) && c >= 0.0, "sweep couplings must be >= 0");
  for (double t : thresholds)
    require(std::isfinite(t) && t > 0.0, "sweep thresholds must be > 0");
  validate(base);

  std::vector<SweepCell> cells;
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    RunConfig cfg = base;
    cfg.coupling.coefficient = couplings[i];
    cfg.mode = SegmentMode::gap_cluster;

    std::optional<SimulationResult> sim;
    std::string sim_status = "ok";
    try {
      sim = simulate(image, cfg.model, cfg.coupling, cfg.sim);
    } catch (const Error& e) {
      if (exit_code(e.code()) == 2) throw;
      sim_status = std::string(to_string(e.code()));
    }
    if (maps) maps->push_back(sim ? sim->frequencies : FrequencyMap(image.dims()));

    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      SweepCell cell;
      cell.coupling = couplings[i];
      cell.threshold = thresholds[j];
      cell.status = sim_status;
      LabelMap labels(image.dims());
      if (sim) {
        cell.map_hash = sim->frequencies.hash();
        cfg.gap_threshold = thresholds[j];
        try {
          labels = segment_frequencies(sim->frequencies, cfg, &cell.gap);
          cell.clusters = labels.label_count();
          cell.mask_file =
              "mask_c" + std::to_string(i) + "_t" + std::to_string(j) + ".pgm";
        } catch (const Error& e) {
          if (exit_code(e.code()) == 2) throw;
          cell.status = std::string(to_string(e.code()));
        }
      }
      if (masks) masks->push_back(std::move(labels));
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream os;
  os << "coupling,threshold,gap,clusters,map_hash,status,mask\n";
  for (const auto& c : cells) {
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(c.map_hash));
    os << format_double(c.coupling) << ',' << format_double(c.threshold) << ','
       << format_double(c.gap) << ',' << c.clusters << ',' << hash << ','
       << c.status << ',' << c.mask_file << '\n';
  }
  return os.str();
}

std::vector<SweepCell> cmd_sweep(const SweepRequest& req) {
  const GrayImage image = load_pgm(req.input);
  std::vector<FrequencyMap> maps;
  std::vector<LabelMap> masks;
  auto cells = run_sweep(image, req.config, req.couplings, req.thresholds, &maps, &masks);

  json report = report_header("sweep");
  report["input"] = req.input.string();
  report["config"] = describe(req.config);
  report["couplings"] = req.couplings;
  report["thresholds"] = req.thresholds;

  ensure_dir(req.out_dir);
  save_file(req.out_dir / "sweep.csv", sweep_csv(cells));
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (cells[i * req.thresholds.size()].map_hash != 0)
      save_file(req.out_dir / ("frequencies_c" + std::to_string(i) + ".csv"),
                to_csv(maps[i]));
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (!cells[k].mask_file.empty())
      save_file(req.out_dir / cells[k].mask_file, to_pgm(masks[k]));
  write_report(req.out_dir, report);
  return cells;
}

// ---------------------------------------------------------------------------

std::vector<NoiseRow> run_noise_study(const NoiseStudyRequest& req) {
  require(req.trials >= 1, "noise study needs trials >= 1");
  require(!req.variances.empty(), "noise study needs at least one variance");
  require(!req.methods.empty() || req.include_otsu, "noise study needs a method");
  for (double v : req.variances)
    require(std::isfinite(v) && v >= 0.0, "noise variances must be >= 0");
  for (const auto& m : req.methods) validate(m);
  if (req.truth && !(req.truth->dims == req.image.dims()))
    fail(Errc::dimension_mismatch, "ground truth does not match the image size");

  struct Method {
    std::string name;
    const RunConfig* cfg;  // nullptr = intensity Otsu
  };
  std::vector<Method> methods;
  for (const auto& m : req.methods) methods.push_back({method_name(m), &m});
  if (req.include_otsu) methods.push_back({"otsu", nullptr});

  auto segment = [](const Method& m, const GrayImage& img) {
    return m.cfg ? run_pipeline(img, *m.cfg).labels : otsu_segment(img);
  };
  std::vector<LabelMap> clean;
  for (const auto& m : methods) clean.push_back(segment(m, req.image));

  std::vector<NoiseRow> rows;
  for (double variance : req.variances) {
    for (std::size_t k = 0; k < methods.size(); ++k) {
      NoiseRow row;
      row.variance = variance;
      row.method = methods[k].name;
      row.trials = req.trials;
      double vs_clean = 0.0, vs_truth = 0.0;
      for (int t = 0; t < req.trials; ++t) {
        const GrayImage noisy = add_gaussian_noise(
            req.image, {variance, req.noise_seed + static_cast<std::uint64_t>(t)});
        const LabelMap labels = segment(methods[k], noisy);
        vs_clean += mislabel_rate(labels, clean[k]).mislabeled_fraction;
        if (req.truth) vs_truth += mislabel_rate(labels, *req.truth).mislabeled_fraction;
      }
      row.error_vs_clean = vs_clean / req.trials;
      row.error_vs_truth = req.truth ? vs_truth / req.trials
                                     : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
    }
  }
  return rows;
}

std::string noise_csv(const std::vector<NoiseRow>& rows) {
  std::ostringstream os;
  os << "variance,method,trials,error_vs_clean,error_vs_truth\n";
  for (const auto& r : rows)
    os << format_double(r.variance) << ',' << r.method << ',' << r.trials << ','
       << format_double(r.error_vs_clean) << ','
       << (std::isnan(r.error_vs_truth) ? std::string() : format_double(r.error_vs_truth))
       << '\n';
  return os.str();
}

std::vector<NoiseRow> cmd_noise_study(const NoiseStudyRequest& req) {
  auto rows = run_noise_study(req);
  json report = report_header("noise-study");
  report["methods"] = json::array();
  for (const auto& m : req.methods) report["methods"].push_back(describe(m));
  report["include_otsu"] = req.include_otsu;
  report["variances"] = req.variances;
  report["trials"] = req.trials;
  report["noise_seed"] = req.noise_seed;
  report["ground_truth"] = req.truth.has_value();

  ensure_dir(req.out_dir);
  save_file(req.out_dir / "noise.csv", noise_csv(rows));
  write_report(req.out_dir, report);
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<CompareRow> run_compare(const std::vector<GrayImage>& images,
                                    const std::vector<LabelMap>& references,
                                    const std::vector<std::string>& names,
                                    const std::vector<RunConfig>& methods,
                                    bool include_otsu) {
  require(!images.empty(), "compare needs at least one image");
  require(images.size() == references.size() && images.size() == names.size(),
          "compare needs exactly one reference per image");
  require(!methods.empty() || include_otsu, "compare needs a method");
  for (const auto& m : methods) validate(m);

  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!(images[i].dims() == references[i].dims))
      fail(Errc::dimension_mismatch, "reference for " + names[i] +
                                         " does not match the image size");
    auto add = [&](std::string method, const LabelMap& labels) {
      const auto m = mislabel_rate(labels, references[i]);
      rows.push_back({names[i], std::move(method), labels.label_count(),
                      m.mislabeled, m.pixel_count, m.mislabeled_fraction});
    };
    for (const auto& cfg : methods) add(method_name(cfg), run_pipeline(images[i], cfg).labels);
    if (include_otsu) add("otsu", otsu_segment(images[i]));
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "image,method,clusters,mislabeled,pixels,mislabel_rate\n";
  for (const auto& r : rows)
    os << r.image << ',' << r.method << ',' << r.clusters << ',' << r.mislabeled
       << ',' << r.pixels << ',' << format_double(r.mislabel_rate) << '\n';
  return os.str();
}

std::vector<CompareRow> cmd_compare(const CompareRequest& req) {
  require(!req.images.empty(), "compare needs at least one image");
  require(req.images.size() == req.references.size(),
          "compare needs exactly one reference per image");
  std::vector<GrayImage> images;
  std::vector<LabelMap> refs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < req.images.size(); ++i) {
    images.push_back(load_pgm(req.images[i]));
    refs.push_back(load_reference(req.references[i], images.back().dims()));
    names.push_back(req.images[i].filename().string());
  }
  auto rows = run_compare(images, refs, names, req.methods, req.include_otsu);

  json report = report_header("compare");
  report["methods"] = json::array();
  for (const auto& m : req.methods) report["methods"].push_back(describe(m));
  report["include_otsu"] = req.include_otsu;
  report["images"] = json::array();
  for (std::size_t i = 0; i < req.images.size(); ++i)
    report["images"].push_back(
        {{"image", req.images[i].string()}, {"reference", req.references[i].string()}});

  ensure_dir(req.out_dir);
  save_file(req.out_dir / "compare.csv", compare_csv(rows));
  write_report(req.out_dir, report);
  return rows;
}

// ---------------------------------------------------------------------------

void cmd_gen_synthetic(const SyntheticRequest& req) {
  SyntheticImage syn = [&] {
    if (req.kind == "quadrant")
      return generate_quadrant_image(req.side, req.levels, req.seed);
    if (req.kind == "two-region") {
      require(req.intensity_a >= 0.0 && req.intensity_a <= 1.0 &&
                  req.intensity_b >= 0.0 && req.intensity_b <= 1.0,
              "two-region intensities must lie in [0, 1]");
      return generate_two_region_image(req.side, req.intensity_a, req.intensity_b);
    }
    fail(Errc::invalid_config, "unknown synthetic image kind '" + req.kind +
                                   "' (expected quadrant or two-region)");
  }();
  if (req.noise_variance > 0.0)
    syn.image = add_gaussian_noise(syn.image, {req.noise_variance, req.seed});
  else
    require(req.noise_variance == 0.0, "noise variance must be >= 0");

  json report = report_header("gen-synthetic");
  report["kind"] = req.kind;
  report["side"] = req.side;
  if (req.kind == "quadrant") {
    report["levels_per_quadrant"] = req.levels;
  } else {
    report["intensity_a"] = req.intensity_a;
    report["intensity_b"] = req.intensity_b;
  }
  report["noise_variance"] = req.noise_variance;
  report["seed"] = req.seed;

  ensure_dir(req.out_dir);
  save_file(req.out_dir / "image.pgm", write_pgm(syn.image));
  save_file(req.out_dir / "reference.pgm", write_pgm(labels_to_image(syn.reference)));
  write_report(req.out_dir, report);
}

}  // namespace oscseg::harness
