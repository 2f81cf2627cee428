#include "gsav/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gsav {

const char* to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "neumann";
}

GridSpec::GridSpec(double length, int points, Boundary boundary)
    : length_(length), points_(points), boundary_(boundary) {
  require(points >= 2, "GridSpec: need at least 2 points per dimension");
  require(std::isfinite(length) && length > 0.0, "GridSpec: length must be positive");
}

double GridSpec::coordinate(int i) const {
  return boundary_ == Boundary::periodic ? (i + 1) * h() : (i + 0.5) * h();
}

GridFunction::GridFunction(const GridSpec& spec, double fill)
    : spec_(spec), values_(spec.size(), fill) {}

GridFunction::GridFunction(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  require(values_.size() == spec_.size(),
          "GridFunction: expected " + std::to_string(spec_.size()) + " values, got " +
              std::to_string(values_.size()));
}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(double a) {
  for (double& x : values_) x *= a;
  return *this;
}

GridFunction& GridFunction::axpy(double a, const GridFunction& x) {
  require_same_grid(*this, x);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
  return *this;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  require(a.spec() == b.spec(), "grid functions live on different grids");
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

namespace {

// Neighbour offsets along one axis, honouring the boundary convention.
struct Neighbours {
  int prev, next;
};

Neighbours neighbours(const GridSpec& spec, int i) {
  const int m = spec.points();
  if (spec.boundary() == Boundary::periodic) return {(i + m - 1) % m, (i + 1) % m};
  return {std::max(i - 1, 0), std::min(i + 1, m - 1)};
}

}  // namespace

GridFunction laplacian(const GridFunction& v) {
  const GridSpec& spec = v.spec();
  const int m = spec.points();
  const double inv_h2 = 1.0 / (spec.h() * spec.h());
  GridFunction out(spec);
  for (int i = 0; i < m; ++i) {
    const auto ni = neighbours(spec, i);
    for (int j = 0; j < m; ++j) {
      const auto nj = neighbours(spec, j);
      out(i, j) = (v(ni.next, j) + v(ni.prev, j) + v(i, nj.next) + v(i, nj.prev) - 4.0 * v(i, j)) *
                  inv_h2;
    }
  }
  return out;
}

std::pair<GridFunction, GridFunction> gradient(const GridFunction& v) {
  const GridSpec& spec = v.spec();
  const int m = spec.points();
  const double inv_h = 1.0 / spec.h();
  GridFunction dx(spec), dy(spec);
  for (int i = 0; i < m; ++i) {
    const int ip = neighbours(spec, i).next;
    for (int j = 0; j < m; ++j) {
      const int jp = neighbours(spec, j).next;
      dx(i, j) = (v(ip, j) - v(i, j)) * inv_h;
      dy(i, j) = (v(i, jp) - v(i, j)) * inv_h;
    }
  }
  return {std::move(dx), std::move(dy)};
}

double inner(const GridFunction& v, const GridFunction& w) {
  require_same_grid(v, w);
  std::vector<double> prod(v.size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = v[k] * w[k];
  const double h = v.spec().h();
  return h * h * pairwise_sum(prod);
}

double norm2(const GridFunction& v) { return std::sqrt(inner(v, v)); }

double norm_inf(const GridFunction& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

double gradient_norm2_squared(const GridFunction& v) {
  const auto [dx, dy] = gradient(v);
  return inner(dx, dx) + inner(dy, dy);
}

double laplacian_eigenvalue_1d(const GridSpec& spec, int k) {
  const int m = spec.points();
  require(k >= 0 && k < m, "laplacian_eigenvalue: mode index out of range");
  const double h = spec.h();
  const double denom = spec.boundary() == Boundary::periodic ? m : 2.0 * m;
  const double s = std::sin(k * std::numbers::pi / denom);
  return -4.0 / (h * h) * s * s;
}

double laplacian_eigenvalue(const GridSpec& spec, int k, int l) {
  return laplacian_eigenvalue_1d(spec, k) + laplacian_eigenvalue_1d(spec, l);
}

}  // namespace gsav
