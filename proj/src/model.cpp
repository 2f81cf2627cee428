#include "gsav/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

namespace gsav {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_log_domain(double u) {
  if (!(std::abs(u) < 1.0)) {
    std::ostringstream os;
    os << "Flory-Huggins potential evaluated at u = " << u << " (|u| must be < 1)";
    throw DomainError(os.str());
  }
}

double softplus(double y) { return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y))); }

}  // namespace

Potential::Potential(std::variant<DoubleWell, FloryHuggins> kind) : kind_(kind) {}

Potential Potential::double_well() {
  Potential p(DoubleWell{});
  p.beta_ = compute_beta(p);
  p.lipschitz_ = lipschitz_bound(p);
  return p;
}

Potential Potential::flory_huggins(double theta, double theta_c) {
  require(theta > 0.0 && theta_c > theta,
          "Flory-Huggins potential requires theta_c > theta > 0");
  Potential p(FloryHuggins{theta, theta_c});
  p.beta_ = compute_beta(p);
  require(p.beta_ > 0.0 && p.beta_ < 1.0, "Flory-Huggins potential: beta must lie in (0, 1)");
  require(p.f(p.beta_) <= 1e-12 && p.f(-p.beta_) >= -1e-12,
          "Flory-Huggins potential: f(beta) <= 0 <= f(-beta) violated");
  p.lipschitz_ = lipschitz_bound(p);
  return p;
}

std::string Potential::name() const {
  return std::visit(overloaded{[](DoubleWell) { return std::string("double-well"); },
                               [](FloryHuggins) { return std::string("flory-huggins"); }},
                    kind_);
}

namespace {

double fh_f(const FloryHuggins& fh, double u, double lp, double lm) {
  return 0.5 * fh.theta * (lm - lp) + fh.theta_c * u;
}

double fh_F(const FloryHuggins& fh, double u, double lp, double lm) {
  return 0.5 * fh.theta * ((1.0 + u) * lp + (1.0 - u) * lm) - 0.5 * fh.theta_c * u * u;
}

double dw_F(double u) {
  const double w = u * u - 1.0;
  return 0.25 * w * w;
}

}  // namespace

double Potential::f(double u) const {
  return std::visit(overloaded{[u](DoubleWell) { return u - u * u * u; },
                               [u](FloryHuggins fh) {
                                 check_log_domain(u);
                                 return fh_f(fh, u, std::log1p(u), std::log1p(-u));
                               }},
                    kind_);
}

double Potential::F(double u) const {
  return std::visit(overloaded{[u](DoubleWell) { return dw_F(u); },
                               [u](FloryHuggins fh) {
                                 check_log_domain(u);
                                 return fh_F(fh, u, std::log1p(u), std::log1p(-u));
                               }},
                    kind_);
}

std::pair<double, double> Potential::f_and_F(double u) const {
  return std::visit(overloaded{[u](DoubleWell) { return std::pair{u - u * u * u, dw_F(u)}; },
                               [u](FloryHuggins fh) {
                                 check_log_domain(u);
                                 const double lp = std::log1p(u), lm = std::log1p(-u);
                                 return std::pair{fh_f(fh, u, lp, lm), fh_F(fh, u, lp, lm)};
                               }},
                    kind_);
}

double Potential::df(double u) const {
  return std::visit(overloaded{[u](DoubleWell) { return 1.0 - 3.0 * u * u; },
                               [u](FloryHuggins fh) {
                                 check_log_domain(u);
                                 return -fh.theta / (1.0 - u * u) + fh.theta_c;
                               }},
                    kind_);
}

GridFunction f_eval(const Potential& p, const GridFunction& u) {
  GridFunction out(u.spec());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = p.f(u[k]);
  return out;
}

GridFunction F_eval(const Potential& p, const GridFunction& u) {
  GridFunction out(u.spec());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = p.F(u[k]);
  return out;
}

ReactionAndBulk reaction_and_bulk(const Potential& p, const GridFunction& u) {
  ReactionAndBulk out{GridFunction(u.spec()), 0.0};
  std::vector<double> F(u.size());
  // Same expressions as f_and_F, with the dispatch hoisted out of the loop.
  std::visit(overloaded{[&](DoubleWell) {
                          for (std::size_t k = 0; k < u.size(); ++k) {
                            const double x = u[k];
                            out.f[k] = x - x * x * x;
                            F[k] = dw_F(x);
                          }
                        },
                        [&](const FloryHuggins& fh) {
                          for (std::size_t k = 0; k < u.size(); ++k) {
                            const double x = u[k];
                            if (!(std::abs(x) < 1.0)) check_log_domain(x);
                            const double lp = std::log1p(x), lm = std::log1p(-x);
                            out.f[k] = fh_f(fh, x, lp, lm);
                            F[k] = fh_F(fh, x, lp, lm);
                          }
                        }},
             p.kind());
  const double h = u.spec().h();
  out.bulk = h * h * pairwise_sum(F);
  return out;
}

double compute_beta(const Potential& p) {
  if (std::holds_alternative<DoubleWell>(p.kind())) return 1.0;
  // f > 0 just right of 0 (f'(0) = theta_c - theta > 0) and f -> -inf as u -> 1.
  double lo = 1e-9;
  double hi = 1.0 - 1e-15;
  if (!(p.f(lo) > 0.0 && p.f(hi) < 0.0))
    throw ContractViolation("compute_beta: no sign change of f on (0, 1)");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (p.f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double lipschitz_bound(const Potential& p) {
  const double beta = p.beta();
  auto objective = [&p](double u) { return std::abs(p.df(u)); };

  constexpr int samples = 4000;
  double best_x = -beta;
  double best = objective(-beta);
  for (int k = 1; k <= samples; ++k) {
    const double x = -beta + 2.0 * beta * k / samples;
    const double val = objective(x);
    if (val > best) {
      best = val;
      best_x = x;
    }
  }

  // Golden-section refinement on the bracketing sample interval.
  const double step = 2.0 * beta / samples;
  double a = std::max(-beta, best_x - step);
  double b = std::min(beta, best_x + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  while (b - a > 1e-10) {
    if (objective(c) > objective(d))
      b = d;
    else
      a = c;
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return std::max({best, objective(0.5 * (a + b)), objective(-beta), objective(beta)});
}

Sigma Sigma::constant(double c) {
  require(std::isfinite(c) && c > 0.0, "constant sigma requires c > 0");
  return Sigma(SigmaConstant{c});
}

Sigma Sigma::exp(double a) {
  require(std::isfinite(a) && a > 0.0, "exponential sigma requires a > 0");
  return Sigma(SigmaExp{a});
}

Sigma Sigma::arctan_shift() { return Sigma(SigmaArctan{}); }
Sigma Sigma::tanh_shift() { return Sigma(SigmaTanh{}); }

std::string Sigma::name() const {
  return std::visit(overloaded{[](SigmaConstant) { return std::string("const"); },
                               [](SigmaExp) { return std::string("exp"); },
                               [](SigmaArctan) { return std::string("arctan"); },
                               [](SigmaTanh) { return std::string("tanh"); }},
                    kind_);
}

double Sigma::value(double x) const {
  return std::visit(overloaded{[](SigmaConstant s) { return s.c; },
                               [x](SigmaExp s) { return std::exp(s.a * x); },
                               [x](SigmaArctan) { return std::atan2(1.0, -x); },
                               [x](SigmaTanh) { return 1.0 + std::tanh(x); }},
                    kind_);
}

double Sigma::log_value(double x) const {
  return std::visit(overloaded{[](SigmaConstant s) { return std::log(s.c); },
                               [x](SigmaExp s) { return s.a * x; },
                               // pi/2 + atan(x) == atan2(1, -x), accurate for x << 0.
                               [x](SigmaArctan) { return std::log(std::atan2(1.0, -x)); },
                               // 1 + tanh(x) == 2 / (1 + e^{-2x}).
                               [x](SigmaTanh) { return std::numbers::ln2 - softplus(-2.0 * x); }},
                    kind_);
}

double g_ratio(const Sigma& s, double r, double e1) {
  double g = 1.0;
  if (const auto* e = std::get_if<SigmaExp>(&s.kind())) {
    g = std::exp(e->a * (r - e1));
  } else if (!s.is_constant()) {
    g = std::exp(s.log_value(r) - s.log_value(e1));
  }
  if (!std::isfinite(g) || !(g > 0.0)) {
    std::ostringstream os;
    os << "g ratio out of range: sigma=" << s.name() << " r=" << r << " E1=" << e1 << " -> " << g;
    throw NumericError(os.str());
  }
  return g;
}

double bulk_energy(const Potential& p, const GridFunction& v) {
  const GridFunction F = F_eval(p, v);
  const double h = v.spec().h();
  return h * h * pairwise_sum(F.values());
}

double total_energy(const Potential& p, double eps, const GridFunction& v) {
  return 0.5 * eps * eps * gradient_norm2_squared(v) + bulk_energy(p, v);
}

double modified_energy(double eps, const GridFunction& v, double r) {
  return 0.5 * eps * eps * gradient_norm2_squared(v) + r;
}

}  // namespace gsav
