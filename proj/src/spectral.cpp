#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "gsav/mesh.hpp"

namespace gsav {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralCoeffs::SpectralCoeffs(const GridSpec& spec)
    : spec_(spec),
      cols_(spec.boundary() == Boundary::periodic
                ? static_cast<std::size_t>(spec.points() / 2 + 1)
                : static_cast<std::size_t>(spec.points())),
      components_(spec.boundary() == Boundary::periodic ? 2 : 1),
      data_(rows() * cols_ * components_, 0.0) {}

std::complex<double> SpectralCoeffs::at(int k, int l) const {
  const int m = spec_.points();
  require(k >= 0 && k < m && l >= 0 && l < m, "SpectralCoeffs::at: mode out of range");
  if (components_ == 1) return {data_[static_cast<std::size_t>(k) * cols_ + l], 0.0};
  if (static_cast<std::size_t>(l) < cols_) {
    const std::size_t s = (static_cast<std::size_t>(k) * cols_ + l) * 2;
    return {data_[s], data_[s + 1]};
  }
  // c(k, l) = conj(c(-k, -l)) for real input.
  const int kk = (m - k) % m;
  const int ll = m - l;
  const std::size_t s = (static_cast<std::size_t>(kk) * cols_ + ll) * 2;
  return {data_[s], -data_[s + 1]};
}

void SpectralCoeffs::scale(std::span<const double> factors) {
  require(factors.size() == slots(), "SpectralCoeffs::scale: factor count mismatch");
  if (components_ == 1) {
    for (std::size_t s = 0; s < factors.size(); ++s) data_[s] *= factors[s];
  } else {
    for (std::size_t s = 0; s < factors.size(); ++s) {
      data_[2 * s] *= factors[s];
      data_[2 * s + 1] *= factors[s];
    }
  }
}

void SpectralCoeffs::axpy(double a, const SpectralCoeffs& other) {
  require(spec_ == other.spec_, "SpectralCoeffs::axpy: grid mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * other.data_[k];
}

struct SpectralBasis::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectralBasis::SpectralBasis(const GridSpec& spec)
    : spec_(spec), plans_(std::make_unique<Plans>()) {
  const int m = spec.points();
  SpectralCoeffs layout(spec);
  eigenvalues_.resize(layout.slots());
  for (std::size_t k = 0; k < layout.rows(); ++k)
    for (std::size_t l = 0; l < layout.cols(); ++l)
      eigenvalues_[k * layout.cols() + l] =
          laplacian_eigenvalue(spec, static_cast<int>(k), static_cast<int>(l));

  // FFTW_ESTIMATE yields the same plan on every run, which keeps results
  // bitwise reproducible; FFTW_UNALIGNED lets us execute on std::vector storage.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  std::vector<double> real_buf(spec.size());
  std::vector<double> coef_buf(layout.raw().size());
  if (spec.boundary() == Boundary::periodic) {
    auto* cplx = reinterpret_cast<fftw_complex*>(coef_buf.data());
    plans_->forward = fftw_plan_dft_r2c_2d(m, m, real_buf.data(), cplx, flags);
    plans_->backward = fftw_plan_dft_c2r_2d(m, m, cplx, real_buf.data(), flags);
    backward_scale_ = 1.0 / (static_cast<double>(m) * m);
  } else {
    plans_->forward =
        fftw_plan_r2r_2d(m, m, real_buf.data(), coef_buf.data(), FFTW_REDFT10, FFTW_REDFT10, flags);
    plans_->backward =
        fftw_plan_r2r_2d(m, m, coef_buf.data(), real_buf.data(), FFTW_REDFT01, FFTW_REDFT01, flags);
    backward_scale_ = 1.0 / (4.0 * m * m);
  }
  if (plans_->forward == nullptr || plans_->backward == nullptr)
    throw NumericError("SpectralBasis: FFTW planning failed");
}

SpectralBasis::~SpectralBasis() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward != nullptr) fftw_destroy_plan(plans_->forward);
  if (plans_->backward != nullptr) fftw_destroy_plan(plans_->backward);
}

SpectralCoeffs SpectralBasis::forward(const GridFunction& v) const {
  require(v.spec() == spec_, "SpectralBasis::forward: grid mismatch");
  SpectralCoeffs c(spec_);
  // Out-of-place r2c and r2r transforms preserve their input.
  auto* in = const_cast<double*>(v.values().data());
  if (spec_.boundary() == Boundary::periodic)
    fftw_execute_dft_r2c(plans_->forward, in, reinterpret_cast<fftw_complex*>(c.raw().data()));
  else
    fftw_execute_r2r(plans_->forward, in, c.raw().data());
  return c;
}

GridFunction SpectralBasis::backward(const SpectralCoeffs& c) const {
  require(c.spec() == spec_, "SpectralBasis::backward: grid mismatch");
  GridFunction out(spec_);
  if (spec_.boundary() == Boundary::periodic) {
    // c2r overwrites its input.
    std::vector<double> scratch(c.raw().begin(), c.raw().end());
    fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.values().data());
  } else {
    fftw_execute_r2r(plans_->backward, const_cast<double*>(c.raw().data()), out.values().data());
  }
  out *= backward_scale_;
  return out;
}

std::shared_ptr<const SpectralBasis> spectral_basis(const GridSpec& spec) {
  using Key = std::tuple<int, int, double>;
  static std::mutex cache_mutex;
  static std::map<Key, std::shared_ptr<const SpectralBasis>> cache;
  const Key key{spec.points(), static_cast<int>(spec.boundary()), spec.length()};
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const SpectralBasis>(spec);
  cache.emplace(key, basis);
  return basis;
}

SpectralCoeffs to_spectral(const GridFunction& v) { return spectral_basis(v.spec())->forward(v); }

GridFunction from_spectral(const SpectralCoeffs& c) {
  return spectral_basis(c.spec())->backward(c);
}

namespace {

constexpr int kDirectMaxPoints = 32;

}  // namespace

SpectralCoeffs to_spectral_direct(const GridFunction& v) {
  const GridSpec& spec = v.spec();
  const int m = spec.points();
  require(m <= kDirectMaxPoints, "direct transform refused for M > 32");
  SpectralCoeffs c(spec);
  auto raw = c.raw();
  const double pi = std::numbers::pi;
  if (spec.boundary() == Boundary::periodic) {
    for (std::size_t k = 0; k < c.rows(); ++k)
      for (std::size_t l = 0; l < c.cols(); ++l) {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            const double arg = -2.0 * pi * static_cast<double>(i * k + j * l) / m;
            acc += v(i, j) * std::complex<double>(std::cos(arg), std::sin(arg));
          }
        const std::size_t s = (k * c.cols() + l) * 2;
        raw[s] = acc.real();
        raw[s + 1] = acc.imag();
      }
  } else {
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            acc += v(i, j) * std::cos(pi * k * (i + 0.5) / m) * std::cos(pi * l * (j + 0.5) / m);
        raw[static_cast<std::size_t>(k) * m + l] = 4.0 * acc;
      }
  }
  return c;
}

GridFunction from_spectral_direct(const SpectralCoeffs& c) {
  const GridSpec& spec = c.spec();
  const int m = spec.points();
  require(m <= kDirectMaxPoints, "direct transform refused for M > 32");
  GridFunction out(spec);
  const double pi = std::numbers::pi;
  if (spec.boundary() == Boundary::periodic) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            const double arg = 2.0 * pi * static_cast<double>(i * k + j * l) / m;
            acc += c.at(k, l) * std::complex<double>(std::cos(arg), std::sin(arg));
          }
        out(i, j) = acc.real() / (static_cast<double>(m) * m);
      }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            const double wk = k == 0 ? 1.0 : 2.0;
            const double wl = l == 0 ? 1.0 : 2.0;
            acc += wk * wl * c.at(k, l).real() * std::cos(pi * k * (i + 0.5) / m) *
                   std::cos(pi * l * (j + 0.5) / m);
          }
        out(i, j) = acc / (4.0 * m * m);
      }
  }
  return out;
}

}  // namespace gsav
