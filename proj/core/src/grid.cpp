#include "susyg/grid.hpp"

#include <cmath>
#include <string>

#include "susyg/errors.hpp"

namespace susyg {

Grid::Grid(double x_min, double x_max, int n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw ConfigError("grid: need finite x_min < x_max");
  }
  if (n_points < 2) throw ConfigError("grid: need at least 2 points");
  h_ = (x_max - x_min) / (n_points - 1);
}

Grid Grid::standard() { return Grid(-12.0, 12.0, 2401); }

Samples Grid::points() const {
  Samples p(n_);
  for (int i = 0; i < n_; ++i) p[i] = (*this)[i];
  return p;
}

namespace {

void require_stencil(const Grid& g, std::span<const double> f) {
  if (static_cast<int>(f.size()) != g.size()) {
    throw ConfigError("stencil: sample count " + std::to_string(f.size()) +
                      " does not match grid size " + std::to_string(g.size()));
  }
  if (g.size() < 6) throw ConfigError("stencil: grid needs at least 6 points");
}

}  // namespace

Samples derivative(const Grid& g, std::span<const double> f) {
  require_stencil(g, f);
  const int n = g.size();
  const double c = 1.0 / (12.0 * g.h());
  Samples d(n);
  d[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  d[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (int i = 2; i < n - 2; ++i) {
    d[i] = c * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
  }
  d[n - 1] = -c * (-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]);
  d[n - 2] = -c * (-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]);
  return d;
}

Samples second_derivative(const Grid& g, std::span<const double> f) {
  require_stencil(g, f);
  const int n = g.size();
  const double c = 1.0 / (12.0 * g.h() * g.h());
  Samples d(n);
  auto left0 = [&](auto at) {
    return c * (45 * at(0) - 154 * at(1) + 214 * at(2) - 156 * at(3) + 61 * at(4) - 10 * at(5));
  };
  auto left1 = [&](auto at) {
    return c * (10 * at(0) - 15 * at(1) - 4 * at(2) + 14 * at(3) - 6 * at(4) + at(5));
  };
  auto fwd = [&](int i) { return f[i]; };
  auto bwd = [&](int i) { return f[n - 1 - i]; };
  d[0] = left0(fwd);
  d[1] = left1(fwd);
  d[n - 1] = left0(bwd);
  d[n - 2] = left1(bwd);
  for (int i = 2; i < n - 2; ++i) {
    d[i] = c * (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]);
  }
  return d;
}

double integrate(const Grid& g, std::span<const double> f) {
  const int n = static_cast<int>(f.size());
  if (n != g.size()) throw ConfigError("integrate: sample count does not match grid");
  double s = 0.5 * (f[0] + f[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += f[i];
  return s * g.h();
}

double inner(const Grid& g, std::span<const double> a, std::span<const double> b) {
  const int n = static_cast<int>(a.size());
  if (n != g.size() || b.size() != a.size()) throw ConfigError("inner: size mismatch");
  double s = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += a[i] * b[i];
  return s * g.h();
}

double l2_norm(const Grid& g, std::span<const double> f) { return std::sqrt(inner(g, f, f)); }

}  // namespace susyg
