#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "gsav/errors.hpp"

namespace gsav {

enum class Boundary { periodic, neumann };

const char* to_string(Boundary b);

/// Uniform M x M grid on the square (0, L)^2.
///
/// Only L and M are stored; the mesh size h = L / M is derived on demand.
/// Storage offset i in [0, M) corresponds to the mesh point with index i + 1
/// for the periodic grid (x = (i + 1) h) and to the cell centre
/// x = (i + 1/2) h for the Neumann grid.
class GridSpec {
 public:
  GridSpec(double length, int points, Boundary boundary = Boundary::periodic);

  double length() const { return length_; }
  int points() const { return points_; }
  double h() const { return length_ / points_; }
  Boundary boundary() const { return boundary_; }
  std::size_t size() const {
    return static_cast<std::size_t>(points_) * static_cast<std::size_t>(points_);
  }

  /// Physical coordinate of storage offset i along either axis.
  double coordinate(int i) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double length_;
  int points_;
  Boundary boundary_;
};

/// Real-valued grid function, row-major: value(i, j) lives at i * M + j, with
/// i the x index and j the y index.
class GridFunction {
 public:
  explicit GridFunction(const GridSpec& spec, double fill = 0.0);
  GridFunction(const GridSpec& spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  int points() const { return spec_.points(); }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double a);
  /// this += a * x
  GridFunction& axpy(double a, const GridFunction& x);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
  friend GridFunction operator*(GridFunction a, double s) { return a *= s; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(spec_.points()) +
           static_cast<std::size_t>(j);
  }

  GridSpec spec_;
  std::vector<double> values_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b);

/// Deterministic pairwise summation: the range is split at n / 2 until at
/// most 8 terms remain, which are then added left to right. The result
/// depends only on the input values, never on scheduling.
double pairwise_sum(std::span<const double> x);

GridFunction laplacian(const GridFunction& v);

/// Forward differences (D_x v, D_y v). Under the Neumann boundary the
/// difference across the outer face is zero (mirror ghost value).
std::pair<GridFunction, GridFunction> gradient(const GridFunction& v);

double inner(const GridFunction& v, const GridFunction& w);
double norm2(const GridFunction& v);
double norm_inf(const GridFunction& v);
/// ||grad_h v||^2 = <D_x v, D_x v> + <D_y v, D_y v>.
double gradient_norm2_squared(const GridFunction& v);

/// One-dimensional factor of the Laplacian eigenvalue for mode k.
double laplacian_eigenvalue_1d(const GridSpec& spec, int k);

/// Eigenvalue of Delta_h for mode (k, l), 0 <= k, l < M.
/// Periodic: -(4/h^2)(sin^2(k pi / M) + sin^2(l pi / M)).
/// Neumann (cell-centred, DCT-II basis): -(4/h^2)(sin^2(k pi / 2M) + sin^2(l pi / 2M)).
double laplacian_eigenvalue(const GridSpec& spec, int k, int l);

/// Coefficients of a grid function in the basis diagonalising Delta_h.
///
/// Periodic grids keep the non-redundant half of the 2D DFT
/// (M x (M/2 + 1) complex values); the remaining modes follow from Hermitian
/// symmetry and are available through at(). Neumann grids keep M x M real
/// DCT-II coefficients. Both are unnormalised forward transforms, so a
/// constant field c maps to (0, 0) -> c M^2 (periodic) or c (2M)^2 (Neumann).
class SpectralCoeffs {
 public:
  explicit SpectralCoeffs(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::size_t rows() const { return static_cast<std::size_t>(spec_.points()); }
  std::size_t cols() const { return cols_; }
  /// Number of stored coefficient slots (rows() * cols()).
  std::size_t slots() const { return rows() * cols_; }
  /// Doubles per slot: 2 (complex) for periodic, 1 for Neumann.
  std::size_t components() const { return components_; }

  /// Coefficient of mode (k, l) for any 0 <= k, l < M.
  std::complex<double> at(int k, int l) const;

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  /// Multiply slot s by factors[s].
  void scale(std::span<const double> factors);
  /// this += a * other
  void axpy(double a, const SpectralCoeffs& other);

 private:
  GridSpec spec_;
  std::size_t cols_;
  std::size_t components_;
  std::vector<double> data_;
};

/// Fast trigonometric transform for one grid (FFTW plans plus the table of
/// Laplacian eigenvalues aligned with the SpectralCoeffs slots).
/// Instances are immutable after construction and safe to share.
class SpectralBasis {
 public:
  explicit SpectralBasis(const GridSpec& spec);
  ~SpectralBasis();
  SpectralBasis(const SpectralBasis&) = delete;
  SpectralBasis& operator=(const SpectralBasis&) = delete;

  const GridSpec& spec() const { return spec_; }
  /// lambda_{kl} per storage slot.
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  SpectralCoeffs forward(const GridFunction& v) const;
  GridFunction backward(const SpectralCoeffs& c) const;

 private:
  struct Plans;
  GridSpec spec_;
  std::vector<double> eigenvalues_;
  double backward_scale_;
  std::unique_ptr<Plans> plans_;
};

/// Shared basis for a grid; created on first use and cached process-wide.
std::shared_ptr<const SpectralBasis> spectral_basis(const GridSpec& spec);

SpectralCoeffs to_spectral(const GridFunction& v);
GridFunction from_spectral(const SpectralCoeffs& c);

/// O(M^4) transforms with the same conventions as the fast path. Oracle and
/// fallback only; refuses M > 32.
SpectralCoeffs to_spectral_direct(const GridFunction& v);
GridFunction from_spectral_direct(const SpectralCoeffs& c);

}  // namespace gsav
