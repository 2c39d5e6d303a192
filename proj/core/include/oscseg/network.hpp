#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oscseg/frequency.hpp"
#include "oscseg/grid.hpp"
#include "oscseg/image.hpp"
#include "oscseg/models.hpp"

namespace oscseg {

/// Whole-grid dynamical state at one instant.
///
/// Every model has two real state components per node, stored as separate
/// row-major planes: (x, y) neural, (x1, x2) BZ, (Re z, Im z) MEMS.
struct NetworkState {
  ModelConfig model;
  GridDims dims;
  std::vector<double> control;  ///< I, tau or omega per node
  std::vector<double> first;
  std::vector<double> second;
  std::vector<double> offset;  ///< per-node rho when NeuralParams::rho_jitter
  double time = 0.0;

  ModelKind kind() const noexcept { return kind_of(model); }
  std::size_t size() const noexcept { return dims.size(); }
};

struct SimConfig {
  double dt = 0.02;
  double total_time = 560.0;
  double transient_fraction = 0.25;
  double window = 140.0;
  double convergence_tol = 1e-3;
  std::uint64_t seed = 1;
  /// Half-width of the uniform initial jitter on x (neural) or x1 (BZ).
  double init_jitter = 0.01;
  /// Width of the uniform initial phase interval for MEMS (radians).
  double init_phase_spread = 0.0;
  /// Initial MEMS amplitude |z0|.
  double init_radius = 0.1;
  /// Stop at the first window whose change is within convergence_tol.
  bool stop_on_convergence = false;
  /// Worker threads for the per-node derivative loop (results do not depend
  /// on this).
  int threads = 1;
  /// Record every n-th step of the full network trace (0 = off).
  std::size_t trace_stride = 0;
};

/// Step size, horizon and window tuned to the model's period range.
SimConfig default_sim_config(ModelKind kind);

void validate(const SimConfig& cfg);

/// Builds the network for an image: maps intensities to control parameters
/// and draws the seeded initial conditions.
NetworkState make_network(const GrayImage& image, const ModelConfig& model,
                          const SimConfig& cfg);

/// Writes d(state)/dt for every node into the two rate planes. Coupling is
/// evaluated from the same planes, so every node sees one consistent
/// snapshot.
void network_rates(const NetworkState& net, std::span<const double> first,
                   std::span<const double> second, const CouplingSpec& spec,
                   std::span<double> d_first, std::span<double> d_second,
                   int threads = 1);

/// One synchronous RK4 step of the whole network. Throws
/// Error(numerical_blowup) if any component becomes non-finite.
NetworkState rk4_step(const NetworkState& state, double dt,
                      const CouplingSpec& spec);

struct TraceFrame {
  double time = 0.0;
  std::vector<double> first;
  std::vector<double> second;
};

struct SimulationResult {
  FrequencyMap frequencies;
  bool converged = false;
  /// Max per-node change between the last two windows (infinity when fewer
  /// than two windows were evaluated).
  double last_change = 0.0;
  std::size_t windows = 0;
  std::size_t steps = 0;
  double end_time = 0.0;
  std::vector<TraceFrame> trace;
};

/// Integrates from `initial` and estimates per-node frequencies on
/// consecutive windows after the transient.
SimulationResult run_network(NetworkState initial, const CouplingSpec& spec,
                             const SimConfig& cfg);

/// make_network followed by run_network.
SimulationResult simulate(const GrayImage& image, const ModelConfig& model,
                          const CouplingSpec& spec, const SimConfig& cfg);

}  // namespace oscseg
