#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>
#include <variant>

namespace oscseg {

enum class ModelKind { neural, bz, mems };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Neural relaxation oscillator (excitatory x, inhibitory y).
//
//   dx/dt = 3x - x^3 - y + 2 + rho + I + S
//   dy/dt = epsilon * (gamma * (1 + tanh(x / beta)) - y)
//
// I is the per-node stimulus mapped from pixel intensity onto
// [stimulus_lo, stimulus_hi].
// ---------------------------------------------------------------------------
struct NeuralParams {
  double rho = 0.02;
  double epsilon = 0.15;
  double gamma = 10.0;
  double beta = 0.1;
  double stimulus_lo = 2.0;
  double stimulus_hi = 4.0;
  /// Draw a per-node offset uniformly from [-rho, rho] instead of using rho.
  bool rho_jitter = false;
};

struct NeuralState {
  double x = 0.0;
  double y = 0.0;
};

// ---------------------------------------------------------------------------
// Two-variable Belousov-Zhabotinsky (Oregonator-style) oscillator.
//
//   dx1/dt = (1/tau) * (-x1 + f(x1 - x2, beta1)) + S
//   dx2/dt = -x2 + f(x1 - theta, beta2)
//   f(x, b) = (1 + tanh(b x)) / 2
//
// theta selects oscillating (0.5) or excitable (0.1) mode. tau is mapped from
// intensity onto [tau_lo, tau_hi].
// ---------------------------------------------------------------------------
struct BzParams {
  double beta1 = 5.0;
  double beta2 = 10.0;
  double theta = 0.5;
  double tau_lo = 0.01;
  double tau_hi = 0.11;
  /// Upward crossings of x1 through this level count as events.
  double event_level = 0.5;
};

struct BzState {
  double x1 = 0.0;
  double x2 = 0.0;
};

// ---------------------------------------------------------------------------
// MEMS resonator in Hopf normal form, z complex.
//
//   dz/dt = (c + i omega) z + d z |z|^2 + S
//
// With c > 0 and d < 0 the limit cycle has radius sqrt(-c/d).
// ---------------------------------------------------------------------------
struct MemsParams {
  double damping_c = 1.0;
  double nonlinear_d = -1.0;
  double omega_lo = 2.0 * std::numbers::pi;
  double omega_hi = 2.2 * std::numbers::pi;
};

struct MemsState {
  double z_re = 0.0;
  double z_im = 0.0;
};

using ModelConfig = std::variant<NeuralParams, BzParams, MemsParams>;

ModelKind kind_of(const ModelConfig& model) noexcept;

/// Default parameter set for the given model (the pipeline defaults).
ModelConfig default_model(ModelKind kind);

/// Throws Error(invalid_config) when a parameter invariant is violated.
void validate(const NeuralParams& p);
void validate(const BzParams& p);
void validate(const MemsParams& p);
void validate(const ModelConfig& model);

/// Control-parameter range [lo, hi] that intensity 0..1 is mapped onto.
struct ControlRange {
  double lo;
  double hi;
};
ControlRange control_range(const ModelConfig& model) noexcept;

/// Level and direction convention used for event detection on the model's
/// output variable (x, x1 or Re z).
double event_level(const ModelConfig& model) noexcept;

// Derivatives. Pure functions; the integrator owns time stepping.

inline NeuralState neural_derivative(const NeuralState& s,
                                     const NeuralParams& p, double stimulus,
                                     double coupling) noexcept {
  return {3.0 * s.x - s.x * s.x * s.x - s.y + 2.0 + p.rho + stimulus +
              coupling,
          p.epsilon * (p.gamma * (1.0 + std::tanh(s.x / p.beta)) - s.y)};
}

/// Same as neural_derivative but with an explicit per-node offset replacing
/// p.rho.
inline NeuralState neural_derivative(const NeuralState& s,
                                     const NeuralParams& p, double stimulus,
                                     double coupling, double rho) noexcept {
  return {3.0 * s.x - s.x * s.x * s.x - s.y + 2.0 + rho + stimulus + coupling,
          p.epsilon * (p.gamma * (1.0 + std::tanh(s.x / p.beta)) - s.y)};
}

inline double bz_sigmoid(double x, double beta) noexcept {
  return 0.5 * (1.0 + std::tanh(beta * x));
}

inline BzState bz_derivative(const BzState& s, const BzParams& p, double tau,
                             double coupling) noexcept {
  return {(-s.x1 + bz_sigmoid(s.x1 - s.x2, p.beta1)) / tau + coupling,
          -s.x2 + bz_sigmoid(s.x1 - p.theta, p.beta2)};
}

inline MemsState mems_derivative(const MemsState& s, const MemsParams& p,
                                 double omega,
                                 std::complex<double> coupling) noexcept {
  const double r2 = s.z_re * s.z_re + s.z_im * s.z_im;
  const double gain = p.damping_c + p.nonlinear_d * r2;
  return {gain * s.z_re - omega * s.z_im + coupling.real(),
          gain * s.z_im + omega * s.z_re + coupling.imag()};
}

/// Integrates one uncoupled neural oscillator from a perturbed start and
/// reports whether it settles onto a fixed point instead of a limit cycle.
/// Intended for mode tests (I = -1 inactive, I = +1 active).
bool converges_to_fixed_point(const NeuralParams& p, double stimulus);

/// Same check for the BZ oscillator at a given tau (theta = 0.1 excitable,
/// theta = 0.5 oscillating).
bool converges_to_fixed_point(const BzParams& p, double tau);

}  // namespace oscseg
