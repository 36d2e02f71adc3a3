#include "susyg/susy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "susyg/errors.hpp"
#include "susyg/parallel.hpp"

namespace susyg::susy {

std::string_view to_string(Case c) {
  switch (c) {
    case Case::CI: return "CI";
    case Case::CII: return "CII";
    case Case::CIII: return "CIII";
    case Case::CIV: return "CIV";
  }
  return "?";
}

std::string_view to_string(WMethod m) {
  return m == WMethod::integral ? "integral" : "differential";
}

SusyContext SusyContext::make(double omega, double k_wave, double epsilon, double w0) {
  if (!std::isfinite(omega) || omega <= 0.0) throw ConfigError("omega must be positive");
  if (!std::isfinite(k_wave)) throw ConfigError("k must be finite");
  if (!std::isfinite(epsilon)) throw ConfigError("epsilon must be finite");
  if (!std::isfinite(w0) || w0 < 0.0) throw ConfigError("w0 must be finite and >= 0");
  SusyContext c;
  c.omega = omega;
  c.k_wave = k_wave;
  c.epsilon = epsilon;
  c.nu = epsilon / omega;
  c.w0 = w0;
  const double r = std::nearbyint(c.nu);
  if (std::abs(c.nu - r) < kIntegerTol && r >= 0.0) {
    c.j = static_cast<int>(r);
    c.nu = r;
    c.epsilon = r * omega;
  }
  if (c.on_spectrum()) {
    c.case_tag = c.regular() ? Case::CI : Case::CII;
  } else {
    c.case_tag = c.regular() ? Case::CIII : Case::CIV;
  }
  return c;
}

double SusyContext::z(double x) const { return std::sqrt(omega) * (x + 2.0 * k_wave / omega); }

double v0(const SusyContext& ctx, double x) {
  const double s = x + 2.0 * ctx.k_wave / ctx.omega;
  return 0.25 * ctx.omega * ctx.omega * s * s - 0.5 * ctx.omega;
}

std::vector<double> psi0_upto(const SusyContext& ctx, int n_max, double x) {
  if (n_max < 0) return {};
  std::vector<double> out(n_max + 1);
  const double z = ctx.z(x);
  const double y = z / std::numbers::sqrt2;
  double prev = 0.0;
  double cur = std::pow(ctx.omega / (2.0 * std::numbers::pi), 0.25) * std::exp(-0.25 * z * z);
  out[0] = cur;
  for (int n = 0; n < n_max; ++n) {
    double next = std::sqrt(2.0 / (n + 1)) * y * cur - std::sqrt(double(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    out[n + 1] = cur;
  }
  return out;
}

Psi0Block psi0_block(const SusyContext& ctx, const Grid& grid, int n_lo, int count) {
  if (n_lo < 0 || count < 0) throw ConfigError("psi0_block: bad level range");
  const int m = grid.size();
  Psi0Block b{std::vector<Samples>(count, Samples(m)), std::vector<Samples>(count, Samples(m))};
  const double s = std::sqrt(ctx.omega);
  parallel_for(m, [&](int i) {
    auto p = psi0_upto(ctx, n_lo + count, grid[i]);
    for (int c = 0; c < count; ++c) {
      const int n = n_lo + c;
      const double lower = n > 0 ? std::sqrt(double(n)) * p[n - 1] : 0.0;
      b.v[c][i] = p[n];
      b.dv[c][i] = 0.5 * s * (lower - std::sqrt(double(n + 1)) * p[n + 1]);
    }
  });
  return b;
}

double psi0_n(const SusyContext& ctx, int n, double x) {
  if (n < 0) throw ConfigError("psi0_n: n must be >= 0");
  return psi0_upto(ctx, n, x)[n];
}

double psi0_n_dx(const SusyContext& ctx, int n, double x) {
  if (n < 0) throw ConfigError("psi0_n_dx: n must be >= 0");
  auto p = psi0_upto(ctx, n + 1, x);
  const double lower = n > 0 ? std::sqrt(double(n)) * p[n - 1] : 0.0;
  return 0.5 * std::sqrt(ctx.omega) * (lower - std::sqrt(double(n + 1)) * p[n + 1]);
}

namespace {

constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 15;
constexpr double kTailZ = 12.0;

template <class F>
double gk(F&& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0, l1 = 0.0;
  double v = gauss_kronrod<double, 21>::integrate(f, a, b, kQuadDepth, kQuadTol, &err, &l1);
  if (!std::isfinite(v) || err > 1e-10 * l1 + std::numeric_limits<double>::min()) {
    throw QuadratureFailure("w_integral: adaptive quadrature did not reach tolerance on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return v;
}

}  // namespace

WField w_integral(const SusyContext& ctx, const Grid& grid) {
  specfun::PcfEvaluator ev(ctx.nu);
  auto integrand = [&](double t) {
    const double d = ev.d(ctx.z(t));
    return d * d;
  };
  const int n = grid.size();
  Samples seg(n - 1);
  parallel_for(n - 1, [&](int i) { seg[i] = gk(integrand, grid[i], grid[i + 1]); });
  // Right tail: finite piece up to z = 12, then the asymptotic region to +inf.
  const double x_last = grid[n - 1];
  const double x_switch = kTailZ / std::sqrt(ctx.omega) - 2.0 * ctx.k_wave / ctx.omega;
  const double inf = std::numeric_limits<double>::infinity();
  double tail = 0.0;
  if (x_last < x_switch) {
    tail = gk(integrand, x_last, x_switch) + gk(integrand, x_switch, inf);
  } else {
    tail = gk(integrand, x_last, inf);
  }
  WField w;
  w.method = WMethod::integral;
  w.values.resize(n);
  double acc = tail;
  w.values[n - 1] = ctx.w0 + acc;
  for (int i = n - 2; i >= 0; --i) {
    acc += seg[i];
    w.values[i] = ctx.w0 + acc;
  }
  return w;
}

WField w_differential(const SusyContext& ctx, const Grid& grid) {
  specfun::PcfEvaluator ev(ctx.nu);
  const double s = std::sqrt(ctx.omega);
  WField w;
  w.method = WMethod::differential;
  w.values.resize(grid.size());
  parallel_for(grid.size(), [&](int i) {
    w.values[i] = ctx.w0 + ev.bundle(ctx.z(grid[i])).w_nu / s;
  });
  return w;
}

double w_at(const SusyContext& ctx, double x) {
  return ctx.w0 + specfun::wronskian_nu(ctx.nu, ctx.z(x)) / std::sqrt(ctx.omega);
}

Transform::Transform(const SusyContext& ctx, const Grid& grid, WMethod method)
    : ctx_(ctx), grid_(grid) {
  const int n = grid.size();
  specfun::PcfEvaluator ev(ctx.nu);
  std::vector<specfun::PcfBundle> b(n);
  parallel_for(n, [&](int i) { b[i] = ev.bundle(ctx.z(grid[i])); });

  const double s = std::sqrt(ctx.omega);
  if (method == WMethod::integral) {
    w_ = w_integral(ctx, grid);
  } else {
    w_.method = WMethod::differential;
    w_.values.resize(n);
    for (int i = 0; i < n; ++i) w_.values[i] = ctx.w0 + b[i].w_nu / s;
  }
  for (int i = 0; i < n; ++i) {
    const double w = w_.values[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw SingularTransform("w is not positive at x=" + std::to_string(grid[i]));
    }
  }

  u_.resize(n);
  u_dx_.resize(n);
  eta_.resize(n);
  eta_dx_.resize(n);
  eta_dxx_.resize(n);
  f_.resize(n);
  gamma_.resize(n);
  v0_.resize(n);
  const double eps = ctx.epsilon;
  for (int i = 0; i < n; ++i) {
    const double x = grid[i];
    const double z = ctx.z(x);
    const double u = b[i].d0, d1 = b[i].d1, d2 = b[i].d2;
    const double w = w_.values[i];
    const double q = z * u * u - 2.0 * u * d1;  // 2 u du/dz
    const double et = u * u / w;
    const double et_dx = s * q / w + et * et;
    const double et_dxx =
        s * s * ((1.0 + z * z) * u * u + 2.0 * u * (d2 - 2.0 * z * d1) + 2.0 * d1 * d1) / w +
        3.0 * s * et * q / w + 2.0 * et * et * et;
    const double pot = susy::v0(ctx, x);
    u_[i] = u;
    u_dx_[i] = s * (0.5 * z * u - d1);
    eta_[i] = et;
    eta_dx_[i] = et_dx;
    eta_dxx_[i] = et_dxx;
    v0_[i] = pot;
    // (eta'^2 - 2 eta eta'') / (4 eta^2) with the removable 1/u^2 divided out.
    f_[i] = eps - pot - s * q / w - 0.75 * et * et;
    gamma_[i] = 0.5 * (et * et - et_dx) + eps - pot;
    if (!std::isfinite(et_dxx) || !std::isfinite(f_[i])) {
      throw SingularTransform("transform fields not finite at x=" + std::to_string(x));
    }
  }
}

Samples Transform::v2() const {
  Samples r(v0_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = v0_[i] + 2.0 * eta_dx_[i];
  return r;
}

Samples Transform::magnetic_field() const {
  Samples r(eta_dx_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = 0.5 * eta_dx_[i];
  return r;
}

Samples Transform::vector_potential() const {
  Samples r(eta_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = 0.5 * eta_[i] - ctx_.k_wave;
  return r;
}

Samples Transform::apply_L2_minus(std::span<const double> psi) const {
  Samples d1 = derivative(grid_, psi);
  Samples d2 = second_derivative(grid_, psi);
  Samples r(psi.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = d2[i] + eta_[i] * d1[i] + gamma_[i] * psi[i];
  return r;
}

Samples Transform::apply_L2_plus(std::span<const double> psi) const {
  Samples d1 = derivative(grid_, psi);
  Samples d2 = second_derivative(grid_, psi);
  Samples r(psi.size());
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = d2[i] - eta_[i] * d1[i] + (gamma_[i] - eta_dx_[i]) * psi[i];
  }
  return r;
}

void Transform::check_level(int n) const {
  if (n < 0) throw ConfigError("psi2_n: n must be >= 0");
  if (std::abs(ctx_.level_energy(n) - ctx_.epsilon) < 1e-9 * ctx_.omega) {
    throw DegenerateLevel("psi2_n: level " + std::to_string(n) +
                          " coincides with the factorization energy");
  }
}

namespace {

// Unnormalized L2^- psi_n and its derivative from analytic oscillator data:
// L2^- psi = P psi + eta psi', P = (eta^2 - eta')/2 + eps - E_n, psi'' = (V0 - E_n) psi.
struct Psi2Raw {
  Samples v, dv;
};

Psi2Raw psi2_raw(const Transform& t, int n) {
  const auto& ctx = t.context();
  const auto& g = t.grid();
  const double en = ctx.level_energy(n);
  const int m = g.size();
  Psi2Raw r{Samples(m), Samples(m)};
  const auto& eta = t.eta();
  const auto& eta_dx = t.eta_dx();
  const auto& eta_dxx = t.eta_dxx();
  const auto& pot = t.v0();
  parallel_for(m, [&](int i) {
    const double x = g[i];
    auto p = psi0_upto(ctx, n + 1, x);
    const double psi = p[n];
    const double lower = n > 0 ? std::sqrt(double(n)) * p[n - 1] : 0.0;
    const double dpsi = 0.5 * std::sqrt(ctx.omega) * (lower - std::sqrt(double(n + 1)) * p[n + 1]);
    const double P = 0.5 * (eta[i] * eta[i] - eta_dx[i]) + ctx.epsilon - en;
    const double dP = eta[i] * eta_dx[i] - 0.5 * eta_dxx[i];
    r.v[i] = P * psi + eta[i] * dpsi;
    r.dv[i] = dP * psi + (P + eta_dx[i]) * dpsi + eta[i] * (pot[i] - en) * psi;
  });
  return r;
}

}  // namespace

namespace {

double psi2_scale(const Transform& t, const Psi2Raw& r, int n, bool renormalize) {
  const auto& ctx = t.context();
  if (!renormalize) return 1.0 / std::abs(ctx.level_energy(n) - ctx.epsilon);
  const double nrm = l2_norm(t.grid(), r.v);
  if (!(nrm > 0.0)) throw SingularTransform("psi2_n: zero norm on grid");
  return 1.0 / nrm;
}

}  // namespace

Samples Transform::psi2_n(int n, bool renormalize) const {
  check_level(n);
  Psi2Raw r = psi2_raw(*this, n);
  const double scale = psi2_scale(*this, r, n, renormalize);
  for (double& v : r.v) v *= scale;
  return std::move(r.v);
}

Samples Transform::psi2_n_dx(int n, bool renormalize) const {
  check_level(n);
  Psi2Raw r = psi2_raw(*this, n);
  const double scale = psi2_scale(*this, r, n, renormalize);
  for (double& v : r.dv) v *= scale;
  return std::move(r.dv);
}

Transform::Block Transform::psi2_block(int n_lo, int count, bool renormalize) const {
  if (n_lo < 0 || count < 0) throw ConfigError("psi2_block: bad level range");
  const int m = grid_.size();
  Psi0Block p = psi0_block(ctx_, grid_, n_lo, count);
  Block b{std::vector<Samples>(count), std::vector<Samples>(count)};
  for (int c = 0; c < count; ++c) {
    const int n = n_lo + c;
    const double en = ctx_.level_energy(n);
    if (std::abs(en - ctx_.epsilon) < 1e-9 * ctx_.omega) continue;
    Psi2Raw r{Samples(m), Samples(m)};
    for (int i = 0; i < m; ++i) {
      const double psi = p.v[c][i], dpsi = p.dv[c][i];
      const double P = 0.5 * (eta_[i] * eta_[i] - eta_dx_[i]) + ctx_.epsilon - en;
      const double dP = eta_[i] * eta_dx_[i] - 0.5 * eta_dxx_[i];
      r.v[i] = P * psi + eta_[i] * dpsi;
      r.dv[i] = dP * psi + (P + eta_dx_[i]) * dpsi + eta_[i] * (v0_[i] - en) * psi;
    }
    const double scale = psi2_scale(*this, r, n, renormalize);
    for (double& v : r.v) v *= scale;
    for (double& v : r.dv) v *= scale;
    b.v[c] = std::move(r.v);
    b.dv[c] = std::move(r.dv);
  }
  return b;
}

bool Transform::missing_state_normalizable() const { return ctx_.regular(); }

namespace {

// 1 / || u / w ||: int u^2/w^2 dx = 1/w0 - 1/w(-inf), and w(-inf) is finite
// only when u is a bound oscillator state.
double missing_state_scale(const SusyContext& ctx) {
  if (!ctx.regular()) {
    throw NotNormalizable("missing state u/w is not square-integrable for w0 = 0");
  }
  double inv = 1.0 / ctx.w0;
  if (ctx.on_spectrum()) {
    const double bound = std::sqrt(2.0 * std::numbers::pi / ctx.omega) * std::tgamma(ctx.j + 1.0);
    inv -= 1.0 / (ctx.w0 + bound);
  }
  return 1.0 / std::sqrt(inv);
}

}  // namespace

Samples Transform::missing_state() const {
  const double c = missing_state_scale(ctx_);
  Samples r(u_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = c * u_[i] / w_.values[i];
  return r;
}

Samples Transform::missing_state_dx() const {
  const double c = missing_state_scale(ctx_);
  Samples r(u_.size());
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = c * (u_dx_[i] + eta_[i] * u_[i]) / w_.values[i];
  }
  return r;
}

Samples eta(const SusyContext& ctx, const Grid& grid) { return Transform(ctx, grid).eta(); }
Samples eta_dx(const SusyContext& ctx, const Grid& grid) { return Transform(ctx, grid).eta_dx(); }
Samples eta_dxx(const SusyContext& ctx, const Grid& grid) { return Transform(ctx, grid).eta_dxx(); }
Samples f_term(const SusyContext& ctx, const Grid& grid) { return Transform(ctx, grid).f(); }
Samples v2(const SusyContext& ctx, const Grid& grid) { return Transform(ctx, grid).v2(); }
Samples magnetic_field(const SusyContext& ctx, const Grid& grid) {
  return Transform(ctx, grid).magnetic_field();
}
Samples vector_potential(const SusyContext& ctx, const Grid& grid) {
  return Transform(ctx, grid).vector_potential();
}
Samples apply_L2_minus(const SusyContext& ctx, const Grid& grid, std::span<const double> psi) {
  return Transform(ctx, grid).apply_L2_minus(psi);
}
Samples apply_L2_plus(const SusyContext& ctx, const Grid& grid, std::span<const double> psi) {
  return Transform(ctx, grid).apply_L2_plus(psi);
}
Samples psi2_n(const SusyContext& ctx, int n, const Grid& grid) {
  return Transform(ctx, grid).psi2_n(n);
}
Samples missing_state(const SusyContext& ctx, const Grid& grid) {
  return Transform(ctx, grid).missing_state();
}

}  // namespace susyg::susy
