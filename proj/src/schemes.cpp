#include "gsav/schemes.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace gsav {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::ei1: return "ei1";
    case Scheme::ei2: return "ei2";
    case Scheme::stab1: return "stab1";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "ei1") return Scheme::ei1;
  if (s == "ei2") return Scheme::ei2;
  if (s == "stab1") return Scheme::stab1;
  throw ContractViolation("unknown scheme '" + s + "'");
}

SchemeConfig SchemeConfig::make(Potential p, Sigma s, Scheme scheme, double eps) {
  SchemeConfig cfg;
  cfg.eps = eps;
  cfg.kappa = p.lipschitz();
  cfg.potential = std::move(p);
  cfg.sigma = s;
  cfg.scheme = scheme;
  return cfg;
}

SolverState SolverState::initial(const Potential& p, GridFunction u) {
  require(u.all_finite(), "initial state contains non-finite values");
  const double s = bulk_energy(p, u);
  return SolverState{std::move(u), s, 0.0, 0};
}

namespace {

struct Reaction {
  GridFunction f;  // f(u)
  GridFunction n;  // g (f(u) + kappa u)
  double g;
};

// f, g = g(u, s) and N for the case where the frozen coefficient is g itself.
Reaction reaction(const SchemeConfig& cfg, const GridFunction& u, double s) {
  ReactionAndBulk rb = reaction_and_bulk(cfg.potential, u);
  const double g = g_ratio(cfg.sigma, s, rb.bulk);
  Reaction r{std::move(rb.f), GridFunction(u.spec()), g};
  for (std::size_t k = 0; k < u.size(); ++k) r.n[k] = g * (r.f[k] + cfg.kappa * u[k]);
  return r;
}

double g_of(const SchemeConfig& cfg, const GridFunction& u, double s) {
  return g_ratio(cfg.sigma, s, bulk_energy(cfg.potential, u));
}

void check_cfg(const SchemeConfig& cfg, double tau) {
  require(std::isfinite(tau) && tau > 0.0, "time step must be positive");
  require(cfg.eps > 0.0, "eps must be positive");
  require(cfg.kappa > 0.0, "kappa must be positive");
}

SolverState finish(const SolverState& prev, GridFunction u, double s, double tau) {
  if (!u.all_finite() || !std::isfinite(s)) {
    std::ostringstream os;
    os << "non-finite value produced at step " << prev.step + 1 << " (t=" << prev.t + tau << ")";
    throw NumericError(os.str());
  }
  return SolverState{std::move(u), s, prev.t + tau, prev.step + 1};
}

template <class Fn>
auto with_step_context(const SolverState& state, Fn&& fn) {
  auto prefix = [&] {
    std::ostringstream os;
    os << "step " << state.step + 1 << " (t=" << state.t << "): ";
    return os.str();
  };
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError(prefix() + e.what());
  } catch (const NumericError& e) {
    const std::string what = e.what();
    if (what.rfind("non-finite value produced", 0) == 0) throw;
    throw NumericError(prefix() + what);
  }
}

SolverState ei1_core(const SchemeConfig& cfg, const SolverState& state, double tau,
                     const SpectralBasis& basis, const SpectralCoeffs& u_hat) {
  const Reaction r = reaction(cfg, state.u, state.s);
  const double g = r.g;
  const StabilizedOperator op(cfg.kappa * g, cfg.eps * cfg.eps, state.u.spec());
  GridFunction u_next =
      basis.backward(exp_integrator_combine(op, basis, tau, u_hat, basis.forward(r.n)));
  const double s_next = state.s - g * inner(r.f, u_next - state.u);
  return finish(state, std::move(u_next), s_next, tau);
}

}  // namespace

GridFunction nonlinear_term(const SchemeConfig& cfg, const GridFunction& u, double s,
                            double g_fixed) {
  const double g = g_of(cfg, u, s);
  const GridFunction f = f_eval(cfg.potential, u);
  GridFunction out(u.spec());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = g * f[k] + cfg.kappa * g_fixed * u[k];
  return out;
}

SolverState step_ei1(const SchemeConfig& cfg, const SolverState& state, double tau) {
  check_cfg(cfg, tau);
  return with_step_context(state, [&] {
    const auto basis = spectral_basis(state.u.spec());
    return ei1_core(cfg, state, tau, *basis, basis->forward(state.u));
  });
}

Ei2StepDetail step_ei2_detailed(const SchemeConfig& cfg, const SolverState& state, double tau,
                                bool reuse_transform) {
  check_cfg(cfg, tau);
  return with_step_context(state, [&] {
    const auto basis = spectral_basis(state.u.spec());
    const SpectralCoeffs u_hat = basis->forward(state.u);
    SolverState pred = ei1_core(cfg, state, tau, *basis, u_hat);

    GridFunction u_half = state.u + pred.u;
    u_half *= 0.5;
    const double s_half = 0.5 * (state.s + pred.s);
    const Reaction r = reaction(cfg, u_half, s_half);
    const double g_mid = r.g;
    const StabilizedOperator op(cfg.kappa * g_mid, cfg.eps * cfg.eps, state.u.spec());

    const SpectralCoeffs n_hat = basis->forward(r.n);
    GridFunction u_next =
        reuse_transform
            ? basis->backward(exp_integrator_combine(op, *basis, tau, u_hat, n_hat))
            : basis->backward(
                  exp_integrator_combine(op, *basis, tau, basis->forward(state.u), n_hat));

    const GridFunction du = u_next - state.u;
    const double s_next = state.s - g_mid * inner(r.f, du) +
                          0.5 * cfg.kappa * g_mid * inner(u_next - pred.u, du);
    SolverState next = finish(state, std::move(u_next), s_next, tau);
    return Ei2StepDetail{std::move(next), std::move(pred.u), pred.s, g_mid};
  });
}

SolverState step_ei2(const SchemeConfig& cfg, const SolverState& state, double tau) {
  return step_ei2_detailed(cfg, state, tau).next;
}

SolverState step_stab1(const SchemeConfig& cfg, const SolverState& state, double tau) {
  check_cfg(cfg, tau);
  return with_step_context(state, [&] {
    const auto basis = spectral_basis(state.u.spec());
    const Reaction r = reaction(cfg, state.u, state.s);
    const double g = r.g;
    const StabilizedOperator op(cfg.kappa * g, cfg.eps * cfg.eps, state.u.spec());

    SpectralCoeffs rhs = basis->forward(state.u);
    rhs.axpy(tau, basis->forward(r.n));
    const auto lambda = basis->eigenvalues();
    std::vector<double> inv(lambda.size());
    for (std::size_t s = 0; s < lambda.size(); ++s) inv[s] = 1.0 / (1.0 + tau * op.symbol(lambda[s]));
    rhs.scale(inv);
    GridFunction u_next = basis->backward(rhs);
    const double s_next = state.s - g * inner(r.f, u_next - state.u);
    return finish(state, std::move(u_next), s_next, tau);
  });
}

SolverState step(const SchemeConfig& cfg, const SolverState& state, double tau) {
  switch (cfg.scheme) {
    case Scheme::ei1: return step_ei1(cfg, state, tau);
    case Scheme::ei2: return step_ei2(cfg, state, tau);
    case Scheme::stab1: return step_stab1(cfg, state, tau);
  }
  throw ContractViolation("unknown scheme");
}

SolverState reference_solution(const SchemeConfig& cfg, const GridFunction& u0, double t_end,
                               double tau_ref) {
  require(t_end >= 0.0, "reference_solution: t_end must be non-negative");
  require(tau_ref > 0.0, "reference_solution: tau_ref must be positive");
  const double steps_real = t_end / tau_ref;
  const long steps = std::lround(steps_real);
  require(std::abs(static_cast<double>(steps) * tau_ref - t_end) <= 1e-12 * std::max(1.0, t_end),
          "reference_solution: tau_ref does not divide t_end");
  SolverState state = SolverState::initial(cfg.potential, u0);
  for (long n = 0; n < steps; ++n) state = step_ei2(cfg, state, tau_ref);
  return state;
}

}  // namespace gsav
