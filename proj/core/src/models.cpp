#include "oscseg/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscseg/error.hpp"
#include "oscseg/integrator.hpp"

namespace oscseg {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::neural: return "neural";
    case ModelKind::bz: return "bz";
    case ModelKind::mems: return "mems";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "neural") return ModelKind::neural;
  if (name == "bz") return ModelKind::bz;
  if (name == "mems") return ModelKind::mems;
  fail(Errc::invalid_config, "unknown model '" + std::string(name) +
                                 "' (expected neural, bz or mems)");
}

ModelKind kind_of(const ModelConfig& model) noexcept {
  return static_cast<ModelKind>(model.index());
}

ModelConfig default_model(ModelKind kind) {
  switch (kind) {
    case ModelKind::neural: return NeuralParams{};
    case ModelKind::bz: return BzParams{};
    case ModelKind::mems: return MemsParams{};
  }
  return NeuralParams{};
}

static bool finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

void validate(const NeuralParams& p) {
  require(finite({p.rho, p.epsilon, p.gamma, p.beta, p.stimulus_lo,
                  p.stimulus_hi}),
          "neural parameters must be finite");
  require(p.epsilon > 0.0, "neural epsilon must be > 0");
  require(p.beta > 0.0, "neural beta must be > 0");
  require(p.stimulus_lo < p.stimulus_hi,
          "neural stimulus range must satisfy lo < hi");
}

void validate(const BzParams& p) {
  require(finite({p.beta1, p.beta2, p.theta, p.tau_lo, p.tau_hi,
                  p.event_level}),
          "bz parameters must be finite");
  require(p.beta1 > 0.0 && p.beta2 > 0.0, "bz beta1 and beta2 must be > 0");
  require(p.tau_lo > 0.0, "bz tau range must be positive");
  require(p.tau_lo < p.tau_hi, "bz tau range must satisfy lo < hi");
}

void validate(const MemsParams& p) {
  require(finite({p.damping_c, p.nonlinear_d, p.omega_lo, p.omega_hi}),
          "mems parameters must be finite");
  require(!(p.damping_c > 0.0) || p.nonlinear_d < 0.0,
          "mems nonlinear_d must be < 0 when damping_c > 0");
  require(p.omega_lo < p.omega_hi, "mems omega range must satisfy lo < hi");
}

void validate(const ModelConfig& model) {
  std::visit([](const auto& p) { validate(p); }, model);
}

ControlRange control_range(const ModelConfig& model) noexcept {
  struct Visitor {
    ControlRange operator()(const NeuralParams& p) const {
      return {p.stimulus_lo, p.stimulus_hi};
    }
    ControlRange operator()(const BzParams& p) const {
      return {p.tau_lo, p.tau_hi};
    }
    ControlRange operator()(const MemsParams& p) const {
      return {p.omega_lo, p.omega_hi};
    }
  };
  return std::visit(Visitor{}, model);
}

double event_level(const ModelConfig& model) noexcept {
  if (const auto* bz = std::get_if<BzParams>(&model)) return bz->event_level;
  return 0.0;
}

namespace {

// Integrate a two-component autonomous system and report whether the rate
// of change settles below `tol` over the final stretch.
template <class Rates>
bool settles(Rates rates, double x0, double y0, double dt, double settle_time,
             double watch_time, double tol) {
  Rk4 rk(2);
  double state[2] = {x0, y0};
  auto system = [&](std::span<const double> s, std::span<double> d, double) {
    const auto r = rates(s[0], s[1]);
    d[0] = r.first;
    d[1] = r.second;
  };
  const auto settle_steps = static_cast<long>(settle_time / dt);
  const auto watch_steps = static_cast<long>(watch_time / dt);
  double t = 0.0;
  for (long i = 0; i < settle_steps; ++i, t += dt) rk.step(system, state, t, dt);
  double worst = 0.0;
  for (long i = 0; i < watch_steps; ++i, t += dt) {
    rk.step(system, state, t, dt);
    if (!std::isfinite(state[0]) || !std::isfinite(state[1])) return false;
    const auto r = rates(state[0], state[1]);
    worst = std::max(worst, std::hypot(r.first, r.second));
  }
  return worst < tol;
}

}  // namespace

bool converges_to_fixed_point(const NeuralParams& p, double stimulus) {
  auto rates = [&](double x, double y) {
    const auto d = neural_derivative({x, y}, p, stimulus, 0.0);
    return std::pair{d.x, d.y};
  };
  // Perturbed start near the origin; an excitable node fires at most one
  // spike before resting on the left branch.
  return settles(rates, 0.01, 0.0, 0.01, 300.0, 100.0, 1e-6);
}

bool converges_to_fixed_point(const BzParams& p, double tau) {
  auto rates = [&](double x1, double x2) {
    const auto d = bz_derivative({x1, x2}, p, tau, 0.0);
    return std::pair{d.x1, d.x2};
  };
  return settles(rates, 0.01, 0.0, std::min(1e-3, tau / 20.0), 60.0, 20.0,
                 1e-6);
}

}  // namespace oscseg
