#include "gsav/expkernel.hpp"

#include <cmath>
#include <vector>

namespace gsav {

StabilizedOperator::StabilizedOperator(double c, double eps2, const GridSpec& spec)
    : c_(c), eps2_(eps2), spec_(spec) {
  require(std::isfinite(c) && c > 0.0, "StabilizedOperator: c must be positive and finite");
  require(std::isfinite(eps2) && eps2 > 0.0, "StabilizedOperator: eps^2 must be positive");
}

double phi1(double z) {
  if (std::abs(z) >= 1e-5) return std::expm1(z) / z;
  // sum_{k=0}^{7} z^k / (k + 1)!, Horner form.
  double acc = 1.0 / 40320.0;
  for (int k = 7; k >= 1; --k) {
    double fact = 1.0;
    for (int q = 2; q <= k; ++q) fact *= q;
    acc = acc * z + 1.0 / fact;
  }
  return acc;
}

namespace {

std::vector<double> symbol_table(const StabilizedOperator& op, const SpectralBasis& basis,
                                 double tau, double (*fn)(double)) {
  const auto lambda = basis.eigenvalues();
  std::vector<double> out(lambda.size());
  for (std::size_t s = 0; s < lambda.size(); ++s) out[s] = fn(-tau * op.symbol(lambda[s]));
  return out;
}

double exp_fn(double z) { return std::exp(z); }

}  // namespace

GridFunction apply_exp(const StabilizedOperator& op, double tau, const GridFunction& v) {
  require(tau >= 0.0, "apply_exp: tau must be non-negative");
  require(v.spec() == op.spec(), "apply_exp: grid mismatch");
  if (tau == 0.0) return v;
  const auto basis = spectral_basis(op.spec());
  SpectralCoeffs c = basis->forward(v);
  c.scale(symbol_table(op, *basis, tau, exp_fn));
  return basis->backward(c);
}

GridFunction apply_phi1(const StabilizedOperator& op, double tau, const GridFunction& v) {
  require(tau > 0.0, "apply_phi1: tau must be positive");
  require(v.spec() == op.spec(), "apply_phi1: grid mismatch");
  const auto basis = spectral_basis(op.spec());
  SpectralCoeffs c = basis->forward(v);
  c.scale(symbol_table(op, *basis, tau, phi1));
  return basis->backward(c);
}

SpectralCoeffs exp_integrator_combine(const StabilizedOperator& op, const SpectralBasis& basis,
                                      double tau, const SpectralCoeffs& v_hat,
                                      const SpectralCoeffs& n_hat) {
  require(tau > 0.0, "exp_integrator_combine: tau must be positive");
  require(v_hat.spec() == op.spec() && n_hat.spec() == op.spec(),
          "exp_integrator_combine: grid mismatch");
  const GridSpec& spec = op.spec();
  const int m = spec.points();
  // With z = -tau (c - eps^2 (lambda_k + lambda_l)), e^z - 1 factors through
  // expm1(a + b) = A + B + A B (A = expm1(a), B = expm1(b)); all terms are
  // <= 0 here, so the identity adds no cancellation and needs only O(M)
  // transcendental calls. tau phi_1(z) = (e^z - 1) / z * tau = -(e^z - 1) / symbol.
  std::vector<double> axis(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    axis[static_cast<std::size_t>(k)] = std::expm1(tau * op.eps2() * laplacian_eigenvalue_1d(spec, k));
  const double a = std::expm1(-tau * op.c());

  const std::size_t cols = v_hat.cols();
  const std::size_t comps = v_hat.components();
  const auto lambda = basis.eigenvalues();
  SpectralCoeffs out(spec);
  auto o = out.raw();
  auto v = v_hat.raw();
  auto n = n_hat.raw();
  for (std::size_t k = 0; k < v_hat.rows(); ++k) {
    for (std::size_t l = 0; l < cols; ++l) {
      const std::size_t s = k * cols + l;
      const double bk = axis[k], bl = axis[l];
      const double b = bk + bl + bk * bl;
      const double em1 = a + b + a * b;
      const double e = 1.0 + em1;
      const double p = -em1 / op.symbol(lambda[s]);
      for (std::size_t q = 0; q < comps; ++q) {
        const std::size_t idx = s * comps + q;
        o[idx] = e * v[idx] + p * n[idx];
      }
    }
  }
  return out;
}

Eigen::MatrixXd dense_laplacian(const GridSpec& spec) {
  const int m = spec.points();
  require(m <= kDenseMaxPoints, "dense matrices refused for M > 16");
  const int n = m * m;
  const double inv_h2 = 1.0 / (spec.h() * spec.h());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const bool periodic = spec.boundary() == Boundary::periodic;
  auto wrap = [&](int i) {
    if (periodic) return (i + m) % m;
    return i < 0 ? 0 : (i >= m ? m - 1 : i);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int row = i * m + j;
      a(row, row) -= 4.0 * inv_h2;
      a(row, wrap(i + 1) * m + j) += inv_h2;
      a(row, wrap(i - 1) * m + j) += inv_h2;
      a(row, i * m + wrap(j + 1)) += inv_h2;
      a(row, i * m + wrap(j - 1)) += inv_h2;
    }
  return a;
}

Eigen::MatrixXd dense_matrix(const StabilizedOperator& op) {
  const Eigen::MatrixXd lap = dense_laplacian(op.spec());
  return op.c() * Eigen::MatrixXd::Identity(lap.rows(), lap.cols()) - op.eps2() * lap;
}

Eigen::MatrixXd dense_exp(const Eigen::MatrixXd& a, double tau) {
  require(a.rows() == a.cols(), "dense_exp: matrix must be square");
  require(a.rows() <= kDenseMaxPoints * kDenseMaxPoints, "dense_exp: matrix too large");
  const Eigen::MatrixXd x = tau * a;
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Eigen::MatrixXd scaled = x / std::ldexp(1.0, squarings);

  constexpr int degree = 18;
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  for (int k = degree; k >= 1; --k)
    result = Eigen::MatrixXd::Identity(n, n) + (scaled * result) / static_cast<double>(k);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

Eigen::MatrixXd dense_phi1(const Eigen::MatrixXd& l, double tau) {
  require(tau > 0.0, "dense_phi1: tau must be positive");
  const Eigen::Index n = l.rows();
  const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(n, n) - dense_exp(-l, tau);
  return (tau * l).partialPivLu().solve(rhs);
}

Eigen::VectorXd to_vector(const GridFunction& v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) x[static_cast<Eigen::Index>(k)] = v[k];
  return x;
}

GridFunction from_vector(const GridSpec& spec, const Eigen::VectorXd& x) {
  require(static_cast<std::size_t>(x.size()) == spec.size(), "from_vector: size mismatch");
  return GridFunction(spec, std::vector<double>(x.data(), x.data() + x.size()));
}

}  // namespace gsav
