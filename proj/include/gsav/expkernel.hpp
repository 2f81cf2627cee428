#pragma once

#include <Eigen/Dense>

#include "gsav/mesh.hpp"

namespace gsav {

/// L = c I - eps^2 Delta_h with c > 0, hence symmetric positive definite.
class StabilizedOperator {
 public:
  StabilizedOperator(double c, double eps2, const GridSpec& spec);

  double c() const { return c_; }
  double eps2() const { return eps2_; }
  const GridSpec& spec() const { return spec_; }

  /// Eigenvalue of L for a Laplacian eigenvalue lambda: c - eps^2 lambda.
  double symbol(double lambda) const { return c_ - eps2_ * lambda; }

 private:
  double c_;
  double eps2_;
  GridSpec spec_;
};

/// phi_1(z) = (e^z - 1) / z, with phi_1(0) = 1.
double phi1(double z);

/// e^{-tau L} v through the spectral basis.
GridFunction apply_exp(const StabilizedOperator& op, double tau, const GridFunction& v);
/// phi_1(-tau L) v through the spectral basis.
GridFunction apply_phi1(const StabilizedOperator& op, double tau, const GridFunction& v);

/// Spectral-space form of e^{-tau L} v_hat + tau phi_1(-tau L) n_hat, the
/// common core of the exponential integrator updates.
SpectralCoeffs exp_integrator_combine(const StabilizedOperator& op, const SpectralBasis& basis,
                                      double tau, const SpectralCoeffs& v_hat,
                                      const SpectralCoeffs& n_hat);

// ---------------------------------------------------------------------------
// Dense oracles. These build M^2 x M^2 matrices and are meant for
// verification on small grids only (M <= 16).

constexpr int kDenseMaxPoints = 16;

/// Explicit stencil matrix of Delta_h (row/column index i * M + j).
Eigen::MatrixXd dense_laplacian(const GridSpec& spec);
/// Explicit matrix of L = c I - eps^2 Delta_h.
Eigen::MatrixXd dense_matrix(const StabilizedOperator& op);

/// e^{tau A} by scaling and squaring: A is scaled by 2^-s so that
/// ||tau A 2^-s||_1 <= 1/2, the exponential of the scaled matrix is taken
/// from its Taylor polynomial of degree 18 (truncation below 1e-22), and the
/// result is squared s times.
Eigen::MatrixXd dense_exp(const Eigen::MatrixXd& a, double tau);

/// phi_1(-tau L) = (tau L)^{-1} (I - e^{-tau L}) for SPD L, tau > 0.
Eigen::MatrixXd dense_phi1(const Eigen::MatrixXd& l, double tau);

Eigen::VectorXd to_vector(const GridFunction& v);
GridFunction from_vector(const GridSpec& spec, const Eigen::VectorXd& x);

}  // namespace gsav
