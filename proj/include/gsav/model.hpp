#pragma once

#include <string>
#include <utility>
#include <variant>

#include "gsav/mesh.hpp"

namespace gsav {

struct DoubleWell {};

struct FloryHuggins {
  double theta;
  double theta_c;
};

/// Nonlinear reaction f = -F' together with its maximum-bound value beta
/// (f(beta) <= 0 <= f(-beta)) and the Lipschitz bound ||f'||_{C[-beta, beta]}.
class Potential {
 public:
  static Potential double_well();
  /// Requires theta_c > theta > 0. beta is located by bisection.
  static Potential flory_huggins(double theta, double theta_c);

  const std::variant<DoubleWell, FloryHuggins>& kind() const { return kind_; }
  double beta() const { return beta_; }
  double lipschitz() const { return lipschitz_; }
  std::string name() const;

  /// f(u); throws DomainError for |u| >= 1 with the logarithmic kind.
  double f(double u) const;
  /// F(u) with F' = -f.
  double F(double u) const;
  /// f'(u).
  double df(double u) const;
  /// f(u) and F(u) from one set of logarithms; bitwise equal to f() and F().
  std::pair<double, double> f_and_F(double u) const;

 private:
  explicit Potential(std::variant<DoubleWell, FloryHuggins> kind);

  std::variant<DoubleWell, FloryHuggins> kind_;
  double beta_ = 1.0;
  double lipschitz_ = 0.0;
};

GridFunction f_eval(const Potential& p, const GridFunction& u);
GridFunction F_eval(const Potential& p, const GridFunction& u);

struct ReactionAndBulk {
  GridFunction f;  // f(u)
  double bulk;     // E_1h(u), identical to bulk_energy(p, u)
};
/// f(u) and E_1h(u) in a single sweep.
ReactionAndBulk reaction_and_bulk(const Potential& p, const GridFunction& u);

/// Positive root of f: 1 for the double well, bisection on (0, 1) to 1e-12
/// otherwise.
double compute_beta(const Potential& p);

/// sup |f'| over [-beta, beta]: dense sampling plus endpoints, refined by
/// golden-section search to 1e-10.
double lipschitz_bound(const Potential& p);

struct SigmaConstant {
  double c = 1.0;
};
struct SigmaExp {
  double a = 1.0;
};
/// pi/2 + arctan(x)
struct SigmaArctan {};
/// 1 + tanh(x)
struct SigmaTanh {};

/// Positive, non-decreasing shaping function of the auxiliary variable.
class Sigma {
 public:
  using Kind = std::variant<SigmaConstant, SigmaExp, SigmaArctan, SigmaTanh>;

  static Sigma constant(double c = 1.0);
  static Sigma exp(double a);
  static Sigma arctan_shift();
  static Sigma tanh_shift();

  const Kind& kind() const { return kind_; }
  bool is_constant() const { return std::holds_alternative<SigmaConstant>(kind_); }
  std::string name() const;

  double value(double x) const;
  /// log sigma(x), evaluated without forming sigma(x) where it would underflow.
  double log_value(double x) const;

 private:
  explicit Sigma(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// sigma(r) / sigma(e1), where e1 = E_1h(v) is supplied by the caller.
/// Exactly 1.0 for constant sigma; throws NumericError when non-finite.
double g_ratio(const Sigma& s, double r, double e1);

/// E_1h(v) = <F(v), 1>.
double bulk_energy(const Potential& p, const GridFunction& v);
/// E_h(v) = (eps^2 / 2) ||grad_h v||^2 + E_1h(v).
double total_energy(const Potential& p, double eps, const GridFunction& v);
/// Modified energy (eps^2 / 2) ||grad_h v||^2 + r.
double modified_energy(double eps, const GridFunction& v, double r);

}  // namespace gsav
