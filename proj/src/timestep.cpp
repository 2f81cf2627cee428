#include "gsav/timestep.hpp"

#include <algorithm>
#include <cmath>

#include "gsav/errors.hpp"

namespace gsav {

double next_tau(const AdaptiveStep& mode, double energy_prev, double energy_curr,
                double tau_prev) {
  require(tau_prev > 0.0, "next_tau: previous step must be positive");
  const double rate = (energy_curr - energy_prev) / tau_prev;
  const double candidate = mode.tau_max / std::sqrt(1.0 + mode.alpha * rate * rate);
  // NaN-safe: an infinite rate yields candidate 0, clamped to tau_min.
  return std::max(mode.tau_min, std::isnan(candidate) ? mode.tau_min : candidate);
}

StepController::StepController(Mode mode) : mode_(mode) {
  if (const auto* u = std::get_if<UniformStep>(&mode_)) {
    require(std::isfinite(u->tau) && u->tau > 0.0, "uniform step must be positive");
  } else {
    const auto& a = std::get<AdaptiveStep>(mode_);
    require(a.tau_min > 0.0 && a.tau_min <= a.tau_max, "adaptive steps need 0 < tau_min <= tau_max");
    require(a.alpha > 0.0, "adaptive alpha must be positive");
  }
}

double StepController::propose(double t, double t_end, double energy_now) const {
  const double remaining = t_end - t;
  require(remaining > 0.0, "StepController::propose: already at t_end");
  if (const auto* u = std::get_if<UniformStep>(&mode_)) {
    // A remainder within rounding of tau is a full step; no sliver steps at the end.
    if (std::abs(remaining - u->tau) <= 1e-9 * u->tau) return u->tau;
    return std::min(remaining, u->tau);
  }
  const auto& a = std::get<AdaptiveStep>(mode_);
  double tau = a.tau_min;
  if (prev_energy_ && last_tau_) tau = next_tau(a, *prev_energy_, energy_now, *last_tau_);
  if (tau >= remaining) return remaining;
  if (remaining - tau < a.tau_min) return remaining <= a.tau_max ? remaining : 0.5 * remaining;
  return tau;
}

void StepController::accept(double tau, double energy_before, double energy_new) {
  prev_energy_ = energy_before;
  last_energy_ = energy_new;
  last_tau_ = tau;
}

}  // namespace gsav
