#include "susyg/bg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "susyg/errors.hpp"
#include "susyg/parallel.hpp"

namespace susyg::bg {

namespace {

constexpr double kEnergyTol = 1e-9;

bool same_energy(double a, double b) { return std::abs(a - b) <= kEnergyTol; }

// Multiplicity of E_n = |n - nu| in the full spectrum: the partner 2nu - n.
int level_degeneracy(double nu, int n) {
  const double m = 2.0 * nu - n;
  const double r = std::nearbyint(m);
  if (std::abs(m - r) < kEnergyTol && r >= 0.0 && static_cast<int>(r) != n) return 2;
  return 1;
}

bool includes_e_nu(susy::Case c) { return c != susy::Case::CIV; }

}  // namespace

std::string to_string(const Label& l) { return l.is_nu ? "nu" : std::to_string(l.n); }

std::string_view to_string(Spacing s) {
  return s == Spacing::equidistant ? "equidistant" : "partially_equidistant";
}

SpectrumTable spectrum(const SusyContext& ctx, int n_max) {
  if (n_max < 1) throw ConfigError("spectrum: n_max must be >= 1");
  SpectrumTable t;
  t.nu = ctx.nu;
  t.case_tag = ctx.case_tag;
  t.includes_E_nu = includes_e_nu(ctx.case_tag);
  // In CI/CII the zero level is the oscillator index j itself.
  if (ctx.case_tag == susy::Case::CIII) t.entries.push_back({Label::nu(), 0.0, 1, 0});
  for (int n = 0; n <= n_max; ++n) {
    t.entries.push_back({Label::level(n), std::abs(n - ctx.nu), level_degeneracy(ctx.nu, n), 0});
  }
  std::vector<int> order(t.entries.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ea = t.entries[a].energy, eb = t.entries[b].energy;
    return !same_energy(ea, eb) && ea < eb;
  });
  for (size_t r = 0; r < order.size(); ++r) t.entries[order[r]].rank = static_cast<int>(r);
  t.equidistant = classify_spacing(t) == Spacing::equidistant;
  t.partially_equidistant = !t.equidistant;
  return t;
}

Spacing classify_spacing(const SpectrumTable& table) {
  if (table.entries.empty()) throw ConfigError("classify_spacing: empty table");
  int n_max = 0;
  for (const auto& e : table.entries) {
    if (!e.label.is_nu) n_max = std::max(n_max, e.label.n);
  }
  // Extend past the fold at n ~ 2nu so the regular tail is always visible.
  n_max = std::max(n_max, static_cast<int>(std::ceil(2.0 * std::abs(table.nu))) + 4);
  std::vector<double> levels;
  if (table.includes_E_nu) levels.push_back(0.0);
  for (int n = 0; n <= n_max; ++n) levels.push_back(std::abs(n - table.nu));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end(), same_energy), levels.end());
  for (size_t i = 1; i < levels.size(); ++i) {
    if (std::abs(levels[i] - levels[i - 1] - 1.0) > kEnergyTol) return Spacing::partially_equidistant;
  }
  return Spacing::equidistant;
}

std::vector<Level> degeneracies(const SpectrumTable& table) {
  std::vector<const SpectrumEntry*> sorted;
  for (const auto& e : table.entries) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SpectrumEntry* a, const SpectrumEntry* b) { return a->rank < b->rank; });
  std::vector<Level> out;
  for (const auto* e : sorted) {
    if (out.empty() || !same_energy(out.back().energy, e->energy)) {
      out.push_back({e->energy, e->degeneracy, {e->label}});
    } else {
      out.back().labels.push_back(e->label);
      out.back().degeneracy = std::max(out.back().degeneracy, e->degeneracy);
    }
  }
  return out;
}

namespace {

struct Psi0Samples {
  Samples v, dv;
};

Psi0Samples psi0_samples(const SusyContext& ctx, const Grid& g, int n) {
  Psi0Samples r{Samples(g.size()), Samples(g.size())};
  const double s = std::sqrt(ctx.omega);
  parallel_for(g.size(), [&](int i) {
    auto p = susy::psi0_upto(ctx, n + 1, g[i]);
    r.v[i] = p[n];
    const double lower = n > 0 ? std::sqrt(double(n)) * p[n - 1] : 0.0;
    r.dv[i] = 0.5 * s * (lower - std::sqrt(double(n + 1)) * p[n + 1]);
  });
  return r;
}

void scale(Samples& v, double c) {
  for (double& x : v) x *= c;
}

}  // namespace

Spinor eigenspinor(const Transform& t, Label label, bool renormalize) {
  const auto& ctx = t.context();
  const auto& g = t.grid();
  const int m = g.size();
  const bool special = label.is_nu || (ctx.on_spectrum() && label.n == ctx.j);
  Spinor s;
  s.label = label;
  const double half = std::numbers::sqrt2 / 2.0;
  if (special) {
    s.energy = 0.0;
    switch (ctx.case_tag) {
      case susy::Case::CI: {
        auto p = psi0_samples(ctx, g, ctx.j);
        s.upper = t.missing_state();
        s.upper_dx = t.missing_state_dx();
        scale(s.upper, half);
        scale(s.upper_dx, half);
        s.lower = std::move(p.v);
        s.lower_dx = std::move(p.dv);
        scale(s.lower, half);
        scale(s.lower_dx, half);
        break;
      }
      case susy::Case::CII: {
        auto p = psi0_samples(ctx, g, ctx.j);
        s.upper.assign(m, 0.0);
        s.upper_dx.assign(m, 0.0);
        s.lower = std::move(p.v);
        s.lower_dx = std::move(p.dv);
        break;
      }
      case susy::Case::CIII:
        s.upper = t.missing_state();
        s.upper_dx = t.missing_state_dx();
        s.lower.assign(m, 0.0);
        s.lower_dx.assign(m, 0.0);
        break;
      case susy::Case::CIV:
        throw NoSuchState("no eigenstate at E_nu = 0 in case CIV");
    }
    return s;
  }
  if (label.n < 0) throw ConfigError("eigenspinor: level index must be >= 0");
  s.energy = std::abs(label.n - ctx.nu);
  auto p = psi0_samples(ctx, g, label.n);
  s.upper = t.psi2_n(label.n, renormalize);
  s.upper_dx = t.psi2_n_dx(label.n, renormalize);
  s.lower = std::move(p.v);
  s.lower_dx = std::move(p.dv);
  scale(s.upper, half);
  scale(s.upper_dx, half);
  scale(s.lower, half);
  scale(s.lower_dx, half);
  return s;
}

std::vector<Spinor> eigenspinors(const Transform& t, int n_lo, int count, bool renormalize) {
  if (n_lo < 0 || count < 0) throw ConfigError("eigenspinors: bad level range");
  const auto& ctx = t.context();
  auto lo = susy::psi0_block(ctx, t.grid(), n_lo, count);
  auto up = t.psi2_block(n_lo, count, renormalize);
  const double half = std::numbers::sqrt2 / 2.0;
  std::vector<Spinor> out(count);
  for (int c = 0; c < count; ++c) {
    const int n = n_lo + c;
    if (ctx.on_spectrum() && n == ctx.j) {
      out[c] = eigenspinor(t, Label::level(n), renormalize);
      continue;
    }
    Spinor& s = out[c];
    s.label = Label::level(n);
    s.energy = std::abs(n - ctx.nu);
    s.upper = std::move(up.v[c]);
    s.upper_dx = std::move(up.dv[c]);
    s.lower = std::move(lo.v[c]);
    s.lower_dx = std::move(lo.dv[c]);
    scale(s.upper, half);
    scale(s.upper_dx, half);
    scale(s.lower, half);
    scale(s.lower_dx, half);
  }
  return out;
}

Spinor eigenspinor(const SusyContext& ctx, Label label, const Grid& grid) {
  return eigenspinor(Transform(ctx, grid), label);
}

Samples density_n(const Spinor& s) {
  Samples r(s.upper.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = s.upper[i] * s.upper[i] + s.lower[i] * s.lower[i];
  return r;
}

namespace {

CSamples complexify(const Samples& v) { return CSamples(v.begin(), v.end()); }

}  // namespace

Samples current_x_n(const Transform& t, const Spinor& s) {
  return spinor_observables(t, complexify(s.upper), complexify(s.lower), complexify(s.upper_dx),
                            complexify(s.lower_dx))
      .jx;
}

Samples current_y_n(const Transform& t, const Spinor& s) {
  const auto& eta = t.eta();
  Samples r(s.upper.size());
  for (size_t i = 0; i < r.size(); ++i) {
    const double a = s.upper[i], b = s.lower[i];
    r[i] = 2.0 * (b * s.upper_dx[i] - a * s.lower_dx[i] - eta[i] * a * b);
  }
  return r;
}

Observables spinor_observables(const Transform& t, const CSamples& a, const CSamples& b,
                               const CSamples& a_dx, const CSamples& b_dx) {
  const auto& eta = t.eta();
  const size_t m = a.size();
  if (b.size() != m || a_dx.size() != m || b_dx.size() != m || eta.size() != m) {
    throw ConfigError("spinor_observables: size mismatch");
  }
  Observables o{Samples(m), Samples(m), Samples(m)};
  for (size_t i = 0; i < m; ++i) {
    const auto ca = std::conj(a[i]), cb = std::conj(b[i]);
    o.rho[i] = std::norm(a[i]) + std::norm(b[i]);
    o.jx[i] = 2.0 * (std::imag(ca * b_dx[i] + cb * a_dx[i]) + eta[i] * std::imag(ca * b[i]));
    o.jy[i] = 2.0 * (std::real(cb * a_dx[i]) - std::real(ca * b_dx[i]) - eta[i] * std::real(ca * b[i]));
  }
  return o;
}

namespace {

struct ComponentBases {
  std::vector<Samples> upper, lower;
};

// Analytically normalized component functions; grid truncation does not
// distort the overlaps with localized probes.
ComponentBases component_bases(const Transform& t, int n_max) {
  const auto& ctx = t.context();
  ComponentBases b;
  b.upper.resize(n_max + 1);
  b.lower.resize(n_max + 1);
  std::vector<char> keep(n_max + 1, 1);
  for (int n = 0; n <= n_max; ++n) {
    b.lower[n] = psi0_samples(ctx, t.grid(), n).v;
    if (ctx.on_spectrum() && n == ctx.j) {
      keep[n] = 0;
      continue;
    }
    b.upper[n] = t.psi2_n(n, false);
  }
  std::vector<Samples> up;
  for (int n = 0; n <= n_max; ++n) {
    if (keep[n]) up.push_back(std::move(b.upper[n]));
  }
  if (t.missing_state_normalizable()) up.push_back(t.missing_state());
  b.upper = std::move(up);
  return b;
}

double captured(const Grid& g, const std::vector<Samples>& basis, std::span<const double> f) {
  double s = 0.0;
  for (const auto& phi : basis) {
    const double c = inner(g, phi, f);
    s += c * c;
  }
  return s;
}

double deficit(double captured_mass, double total) {
  return std::sqrt(std::max(0.0, 1.0 - captured_mass / total));
}

}  // namespace

double probe_reconstruction_error(const Transform& t, int n_max, std::span<const double> upper,
                                  std::span<const double> lower) {
  const auto& g = t.grid();
  ComponentBases b = component_bases(t, n_max);
  const double total = inner(g, upper, upper) + inner(g, lower, lower);
  if (!(total > 0.0)) throw ConfigError("probe_reconstruction_error: zero probe");
  return deficit(captured(g, b.upper, upper) + captured(g, b.lower, lower), total);
}

double completeness_check(const SusyContext& ctx, int n_max, const Grid& grid) {
  if (n_max < 1) throw ConfigError("completeness_check: n_max must be >= 1");
  Transform t(ctx, grid);
  ComponentBases b = component_bases(t, n_max);
  const double len = 1.0 / std::sqrt(ctx.omega);
  const double centre = -2.0 * ctx.k_wave / ctx.omega;
  const double sigma = 0.5 * len;
  double worst = 0.0;
  for (double offset : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
    const double xc = centre + offset * len;
    Samples probe(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      const double d = (grid[i] - xc) / sigma;
      probe[i] = std::exp(-0.5 * d * d);
    }
    const double total = inner(grid, probe, probe);
    worst = std::max(worst, deficit(captured(grid, b.upper, probe), total));
    worst = std::max(worst, deficit(captured(grid, b.lower, probe), total));
  }
  return worst;
}

}  // namespace susyg::bg
