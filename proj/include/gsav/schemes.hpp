#pragma once

#include <string>

#include "gsav/expkernel.hpp"
#include "gsav/model.hpp"

namespace gsav {

enum class Scheme { ei1, ei2, stab1 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeConfig {
  double eps = 0.01;
  double kappa = 2.0;
  Potential potential = Potential::double_well();
  Sigma sigma = Sigma::exp(1.0);
  Scheme scheme = Scheme::ei1;

  /// Defaults to kappa = ||f'||_{C[-beta, beta]} of the given potential.
  static SchemeConfig make(Potential p, Sigma s, Scheme scheme, double eps = 0.01);

  bool kappa_meets_bound() const { return kappa >= potential.lipschitz(); }
};

/// (u^n, s^n) at time t after `step` steps.
struct SolverState {
  GridFunction u;
  double s = 0.0;
  double t = 0.0;
  long step = 0;

  /// Step-0 state with s = E_1h(u) exactly.
  static SolverState initial(const Potential& p, GridFunction u);
};

/// g(u, s) f(u) + kappa g_fixed u.
GridFunction nonlinear_term(const SchemeConfig& cfg, const GridFunction& u, double s,
                            double g_fixed);

/// Everything one GSAV-EI2 step computes. The predictor fields feed the
/// auxiliary-variable bound checks.
struct Ei2StepDetail {
  SolverState next;
  GridFunction predictor_u;
  double predictor_s;
  double g_mid;
};

SolverState step_ei1(const SchemeConfig& cfg, const SolverState& state, double tau);
SolverState step_ei2(const SchemeConfig& cfg, const SolverState& state, double tau);
/// Same as step_ei2 but also returns the predictor. `reuse_transform`
/// selects whether the spectral transform of u^n is computed once and shared
/// by predictor and corrector; results are bitwise identical either way.
Ei2StepDetail step_ei2_detailed(const SchemeConfig& cfg, const SolverState& state, double tau,
                                bool reuse_transform = true);
/// Linearly implicit variant: (I + tau L) u^{n+1} = u^n + tau N, with the
/// GSAV-EI1 auxiliary update.
SolverState step_stab1(const SchemeConfig& cfg, const SolverState& state, double tau);

/// Dispatch on cfg.scheme.
SolverState step(const SchemeConfig& cfg, const SolverState& state, double tau);

/// Fine-step GSAV-EI2 trajectory to t_end used as ground truth in
/// convergence studies. tau_ref must divide t_end (within 1e-12).
SolverState reference_solution(const SchemeConfig& cfg, const GridFunction& u0, double t_end,
                               double tau_ref);

}  // namespace gsav
