#include "oscseg/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscseg/error.hpp"
#include "oscseg/integrator.hpp"
#include "oscseg/rng.hpp"

namespace oscseg {

SimConfig default_sim_config(ModelKind kind) {
  SimConfig cfg;
  switch (kind) {
    case ModelKind::neural:
      // f in [0.07, 0.092]: periods of 11-14 AU.
      cfg.dt = 0.02;
      cfg.total_time = 560.0;
      cfg.window = 140.0;
      break;
    case ModelKind::bz:
      // f in [0.39, 0.57]: periods of 1.8-2.6 AU.
      cfg.dt = 0.002;
      cfg.total_time = 100.0;
      cfg.window = 25.0;
      break;
    case ModelKind::mems:
      // f in [1, 1.1]. Phases start within one radian: a full 2*pi spread
      // leaves phase defects that take hundreds of periods to unwind.
      cfg.dt = 0.002;
      cfg.total_time = 100.0;
      cfg.window = 25.0;
      cfg.init_phase_spread = 1.0;
      break;
  }
  cfg.transient_fraction = 0.25;
  return cfg;
}

void validate(const SimConfig& cfg) {
  require(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt must be > 0");
  require(std::isfinite(cfg.total_time) && cfg.total_time > 0.0,
          "total_time must be > 0");
  require(cfg.transient_fraction >= 0.0 && cfg.transient_fraction < 1.0,
          "transient_fraction must lie in [0, 1)");
  require(cfg.window > cfg.dt, "window must exceed dt");
  require(cfg.window <= (1.0 - cfg.transient_fraction) * cfg.total_time,
          "window must fit into the post-transient part of total_time");
  require(cfg.convergence_tol > 0.0, "convergence_tol must be > 0");
  require(cfg.init_jitter >= 0.0, "init_jitter must be >= 0");
  require(cfg.init_phase_spread >= 0.0, "init_phase_spread must be >= 0");
  require(cfg.init_radius > 0.0, "init_radius must be > 0");
  require(cfg.threads >= 1, "threads must be >= 1");
}

NetworkState make_network(const GrayImage& image, const ModelConfig& model,
                          const SimConfig& cfg) {
  validate(model);
  NetworkState net;
  net.model = model;
  net.dims = image.dims();
  net.control = map_intensity(image, model);
  const std::size_t n = image.size();
  net.first.assign(n, 0.0);
  net.second.assign(n, 0.0);

  Rng rng(cfg.seed);
  if (net.kind() == ModelKind::mems) {
    for (std::size_t i = 0; i < n; ++i) {
      const double phase =
          cfg.init_phase_spread > 0.0
              ? rng.uniform(-0.5 * cfg.init_phase_spread,
                            0.5 * cfg.init_phase_spread)
              : 0.0;
      net.first[i] = cfg.init_radius * std::cos(phase);
      net.second[i] = cfg.init_radius * std::sin(phase);
    }
  } else if (cfg.init_jitter > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      net.first[i] = rng.uniform(-cfg.init_jitter, cfg.init_jitter);
  }

  if (const auto* p = std::get_if<NeuralParams>(&model); p && p->rho_jitter) {
    Rng offsets(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    net.offset.resize(n);
    for (auto& rho : net.offset) rho = offsets.uniform(-p->rho, p->rho);
  }
  return net;
}

namespace {

/// Right-hand side of the coupled network with reusable buffers.
class NetworkSystem {
 public:
  NetworkSystem(const NetworkState& net, const CouplingSpec& spec, int threads)
      : net_(net),
        spec_(spec),
        threads_(threads),
        sum_first_(net.size()),
        sum_second_(net.kind() == ModelKind::mems ? net.size() : 0),
        scratch_(2 * net.size()) {}

  void operator()(std::span<const double> first, std::span<const double> second,
                  std::span<double> d_first, std::span<double> d_second) {
    const bool coupled = spec_.coefficient != 0.0;
    if (coupled) {
      neighbor_sums(first, net_.dims, spec_, sum_first_, scratch_);
      if (!sum_second_.empty())
        neighbor_sums(second, net_.dims, spec_, sum_second_, scratch_);
    }
    std::visit(
        [&](const auto& p) { eval(p, coupled, first, second, d_first, d_second); },
        net_.model);
  }

 private:
  void eval(const NeuralParams& p, bool coupled, std::span<const double> x,
            std::span<const double> y, std::span<double> dx,
            std::span<double> dy) const {
    const long n = static_cast<long>(x.size());
    const double c = spec_.coefficient;
    const bool jitter = !net_.offset.empty();
#pragma omp parallel for schedule(static) num_threads(threads_) if (threads_ > 1)
    for (long i = 0; i < n; ++i) {
      const double s = coupled ? c * sum_first_[i] : 0.0;
      const NeuralState d =
          jitter ? neural_derivative({x[i], y[i]}, p, net_.control[i], s,
                                     net_.offset[i])
                 : neural_derivative({x[i], y[i]}, p, net_.control[i], s);
      dx[i] = d.x;
      dy[i] = d.y;
    }
  }

  void eval(const BzParams& p, bool coupled, std::span<const double> x1,
            std::span<const double> x2, std::span<double> dx1,
            std::span<double> dx2) const {
    const long n = static_cast<long>(x1.size());
    const double c = spec_.coefficient;
#pragma omp parallel for schedule(static) num_threads(threads_) if (threads_ > 1)
    for (long i = 0; i < n; ++i) {
      const double s = coupled ? c * sum_first_[i] : 0.0;
      const BzState d = bz_derivative({x1[i], x2[i]}, p, net_.control[i], s);
      dx1[i] = d.x1;
      dx2[i] = d.x2;
    }
  }

  void eval(const MemsParams& p, bool coupled, std::span<const double> re,
            std::span<const double> im, std::span<double> dre,
            std::span<double> dim) const {
    const long n = static_cast<long>(re.size());
    const double c = spec_.coefficient;
#pragma omp parallel for schedule(static) num_threads(threads_) if (threads_ > 1)
    for (long i = 0; i < n; ++i) {
      const std::complex<double> s =
          coupled ? std::complex<double>(c * sum_first_[i], c * sum_second_[i])
                  : std::complex<double>(0.0, 0.0);
      const MemsState d = mems_derivative({re[i], im[i]}, p, net_.control[i], s);
      dre[i] = d.z_re;
      dim[i] = d.z_im;
    }
  }

  const NetworkState& net_;
  CouplingSpec spec_;
  int threads_;
  std::vector<double> sum_first_;
  std::vector<double> sum_second_;
  std::vector<double> scratch_;
};

/// Packs both planes into one vector so the generic RK4 stepper can drive
/// the network.
class NetworkStepper {
 public:
  NetworkStepper(const NetworkState& net, const CouplingSpec& spec, int threads)
      : n_(net.size()), system_(net, spec, threads), rk_(2 * net.size()),
        packed_(2 * net.size()) {}

  void step(NetworkState& net, double dt) {
    std::copy(net.first.begin(), net.first.end(), packed_.begin());
    std::copy(net.second.begin(), net.second.end(), packed_.begin() + n_);
    auto rhs = [this](std::span<const double> s, std::span<double> d, double) {
      system_(s.subspan(0, n_), s.subspan(n_, n_), d.subspan(0, n_),
              d.subspan(n_, n_));
    };
    rk_.step(rhs, packed_, net.time, dt);
    for (std::size_t i = 0; i < 2 * n_; ++i) {
      if (!std::isfinite(packed_[i]))
        fail(Errc::numerical_blowup,
             "non-finite state at node " + std::to_string(i % n_) +
                 " near t=" + std::to_string(net.time + dt));
    }
    std::copy(packed_.begin(), packed_.begin() + n_, net.first.begin());
    std::copy(packed_.begin() + n_, packed_.end(), net.second.begin());
  }

 private:
  std::size_t n_;
  NetworkSystem system_;
  Rk4 rk_;
  std::vector<double> packed_;
};

void check_shape(const NetworkState& net) {
  const std::size_t n = net.dims.size();
  if (net.control.size() != n || net.first.size() != n ||
      net.second.size() != n || (!net.offset.empty() && net.offset.size() != n))
    fail(Errc::dimension_mismatch, "network planes do not match grid size");
}

}  // namespace

void network_rates(const NetworkState& net, std::span<const double> first,
                   std::span<const double> second, const CouplingSpec& spec,
                   std::span<double> d_first, std::span<double> d_second,
                   int threads) {
  check_shape(net);
  validate(spec);
  NetworkSystem system(net, spec, threads);
  system(first, second, d_first, d_second);
}

NetworkState rk4_step(const NetworkState& state, double dt,
                      const CouplingSpec& spec) {
  require(dt > 0.0, "dt must be > 0");
  validate(spec);
  check_shape(state);
  NetworkState next = state;
  NetworkStepper stepper(next, spec, 1);
  stepper.step(next, dt);
  next.time = state.time + dt;
  return next;
}

SimulationResult run_network(NetworkState net, const CouplingSpec& spec,
                             const SimConfig& cfg) {
  validate(cfg);
  validate(spec);
  validate(net.model);
  check_shape(net);

  const std::size_t n = net.size();
  const double level = event_level(net.model);
  const double t0 = net.time;
  const double transient_end = t0 + cfg.transient_fraction * cfg.total_time;
  const auto window_count = static_cast<std::size_t>(
      std::floor((1.0 - cfg.transient_fraction) * cfg.total_time / cfg.window +
                 1e-9));
  const double t_final = transient_end + window_count * cfg.window;

  NetworkStepper stepper(net, spec, cfg.threads);
  std::vector<std::vector<double>> events(n);
  std::vector<double> prev(n);

  SimulationResult result;
  result.last_change = std::numeric_limits<double>::infinity();
  FrequencyMap previous;
  bool have_previous = false;
  std::size_t next_window = 1;

  auto evaluate_window = [&](double boundary) {
    FrequencyMap map(net.dims);
    for (std::size_t i = 0; i < n; ++i) {
      const auto est = estimate_frequency(events[i], boundary - cfg.window, boundary);
      map.freqs[i] = est.freq;
      map.flags[i] = est.flag;
    }
    if (have_previous) {
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (map.usable(i) != previous.usable(i)) {
          change = std::numeric_limits<double>::infinity();
          break;
        }
        if (map.flags[i] == NodeStatus::ok && previous.flags[i] == NodeStatus::ok)
          change = std::max(change, std::abs(map.freqs[i] - previous.freqs[i]));
      }
      result.last_change = change;
      result.converged = change <= cfg.convergence_tol;
    }
    previous = std::move(map);
    have_previous = true;
    ++result.windows;
  };

  const auto total_steps =
      static_cast<std::size_t>(std::ceil((t_final - t0) / cfg.dt - 1e-9));
  for (std::size_t step = 0; step < total_steps; ++step) {
    const double t_prev = net.time;
    std::copy(net.first.begin(), net.first.end(), prev.begin());
    stepper.step(net, cfg.dt);
    net.time = t0 + static_cast<double>(step + 1) * cfg.dt;
    ++result.steps;

    for (std::size_t i = 0; i < n; ++i) {
      if (const auto t = upward_crossing(prev[i], net.first[i], level, t_prev, net.time);
          t && *t >= transient_end)
        events[i].push_back(*t);
    }

    if (cfg.trace_stride > 0 && result.steps % cfg.trace_stride == 0)
      result.trace.push_back({net.time, net.first, net.second});

    bool stop = false;
    while (next_window <= window_count &&
           transient_end + next_window * cfg.window <= net.time + 1e-9 * cfg.dt) {
      evaluate_window(transient_end + next_window * cfg.window);
      ++next_window;
      if (cfg.stop_on_convergence && result.converged) {
        stop = true;
        break;
      }
    }
    if (stop) break;
  }
  if (have_previous) {
    result.frequencies = std::move(previous);
  } else {
    result.frequencies = FrequencyMap(net.dims);
  }
  result.end_time = net.time;
  return result;
}

SimulationResult simulate(const GrayImage& image, const ModelConfig& model,
                          const CouplingSpec& spec, const SimConfig& cfg) {
  validate(cfg);
  return run_network(make_network(image, model, cfg), spec, cfg);
}

}  // namespace oscseg
