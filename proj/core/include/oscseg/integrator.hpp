#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscseg {

/// Classical fixed-step fourth-order Runge-Kutta for flat real state vectors.
///
/// The system is called as system(state, rates, t) and must write every
/// element of rates. Scratch buffers are owned by the stepper so repeated
/// steps do not allocate.
class Rk4 {
 public:
  explicit Rk4(std::size_t n) : tmp_(n), k1_(n), k2_(n), k3_(n), k4_(n) {}

  std::size_t size() const noexcept { return tmp_.size(); }

  template <class System>
  void step(System&& system, std::span<double> x, double t, double dt) {
    const std::size_t n = tmp_.size();
    const double half = 0.5 * dt;
    const double sixth = dt / 6.0;

    system(std::span<const double>(x), std::span<double>(k1_), t);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k1_[i];

    system(std::span<const double>(tmp_), std::span<double>(k2_), t + half);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k2_[i];

    system(std::span<const double>(tmp_), std::span<double>(k3_), t + half);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];

    system(std::span<const double>(tmp_), std::span<double>(k4_), t + dt);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += sixth * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  std::vector<double> tmp_, k1_, k2_, k3_, k4_;
};

}  // namespace oscseg
