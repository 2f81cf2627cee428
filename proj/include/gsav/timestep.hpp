#pragma once

#include <optional>
#include <variant>

namespace gsav {

struct UniformStep {
  double tau;
};

struct AdaptiveStep {
  double tau_min;
  double tau_max;
  double alpha;
};

/// tau_{n+1} = max{tau_min, tau_max / sqrt(1 + alpha |d_t E|^2)} with
/// d_t E = (E_curr - E_prev) / tau_prev, E the discrete energy E_h.
double next_tau(const AdaptiveStep& mode, double energy_prev, double energy_curr,
                double tau_prev);

/// Step-size state owned by one trajectory.
///
/// The first adaptive step uses tau_min. Steps are shortened so that the
/// trajectory lands exactly on t_end; in adaptive mode the final step is
/// planned so that no sliver shorter than tau_min remains (this keeps every
/// step inside [tau_min, tau_max] whenever tau_max >= 2 tau_min and
/// t_end >= tau_min).
class StepController {
 public:
  using Mode = std::variant<UniformStep, AdaptiveStep>;

  explicit StepController(Mode mode);

  const Mode& mode() const { return mode_; }
  bool adaptive() const { return std::holds_alternative<AdaptiveStep>(mode_); }

  /// Step to take from time t, given E_h at the current state.
  double propose(double t, double t_end, double energy_now) const;
  /// Record a completed step of size tau ending at energy E_h = energy_new.
  void accept(double tau, double energy_before, double energy_new);

  std::optional<double> last_energy() const { return last_energy_; }
  std::optional<double> last_tau() const { return last_tau_; }

 private:
  Mode mode_;
  std::optional<double> prev_energy_;  // E_h before the last step
  std::optional<double> last_energy_;  // E_h after the last step
  std::optional<double> last_tau_;
};

}  // namespace gsav
