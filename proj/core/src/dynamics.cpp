#include "susyg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "susyg/errors.hpp"
#include "susyg/parallel.hpp"

namespace susyg::dynamics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using coherent::Complex;
using coherent::Family;

bool g_is_one_except(const coherent::LadderSpec& s, std::initializer_list<int> zeros) {
  for (const auto& [n, g] : s.g_values) {
    const bool listed = std::find(zeros.begin(), zeros.end(), n) != zeros.end();
    if (listed ? g != 0.0 : g != 1.0) return false;
  }
  for (int z : zeros) {
    if (s.g(z) != 0.0) return false;
  }
  return true;
}

Rational best_convergent(double x, long max_den) {
  // h/k convergents of the continued fraction of x.
  long h0 = 1, h1 = static_cast<long>(std::floor(x)), k0 = 0, k1 = 1;
  double frac = x - std::floor(x);
  Rational best{h1, k1};
  for (int it = 0; it < 64 && frac > 1e-15; ++it) {
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    frac = inv - a;
    const long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den) break;
    best = {h2, k2};
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return best;
}

}  // namespace

int k_split(double nu, int K) {
  if (nu >= K) return static_cast<int>(std::ceil(nu - K - 1e-12));
  return 0;
}

EvolutionSpec EvolutionSpec::make(const SusyContext& ctx, const CoherentState& cs, double t) {
  if (!std::isfinite(t)) throw ConfigError("evolution time must be finite");
  return {ctx, cs, t, dynamics::k_split(ctx.nu, cs.K)};
}

std::vector<double> energies(const SusyContext& ctx, const CoherentState& cs) {
  std::vector<double> e(cs.size());
  for (int n = 0; n < cs.size(); ++n) e[n] = std::abs(cs.level(n) - ctx.nu);
  return e;
}

CSamples evolve(const EvolutionSpec& spec) {
  const double d = spec.ctx.nu - spec.cs.K;
  CSamples c(spec.cs.coeffs);
  for (int n = 0; n < spec.cs.size(); ++n) {
    const double arg = n < spec.k_split ? -(d - n) * spec.t : (d - n) * spec.t;
    c[n] *= std::polar(1.0, arg);
  }
  return c;
}

Samples density_t(const EvolutionSpec& spec, const coherent::LevelTable& table) {
  if (table.K() != spec.cs.K) throw ConfigError("density_t: table and state have different K");
  return table.observables(evolve(spec)).rho;
}

Samples density_t(const EvolutionSpec& spec, const susy::Transform& t) {
  coherent::LevelTable table(t, spec.cs.K, coherent::significant_terms(spec.cs.coeffs));
  return density_t(spec, table);
}

double fidelity(const SusyContext& ctx, const CoherentState& cs, double t) {
  const auto e = energies(ctx, cs);
  double re = 0.0, im = 0.0;
  for (int n = 0; n < cs.size(); ++n) {
    const double p = std::norm(cs.coeffs[n]);
    re += p * std::cos(e[n] * t);
    im -= p * std::sin(e[n] * t);
  }
  return re * re + im * im;
}

std::vector<double> fidelity_series(const SusyContext& ctx, const CoherentState& cs,
                                    const std::vector<double>& times) {
  std::vector<double> f(times.size());
  parallel_for(static_cast<int>(times.size()), [&](int i) { f[i] = fidelity(ctx, cs, times[i]); });
  return f;
}

double reduce_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double phase_distance(double a, double b) {
  const double d = reduce_phase(a - b);
  return std::min(d, kTwoPi - d);
}

std::optional<Rational> rationalize(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  const Rational r = best_convergent(x, max_den);
  if (std::abs(x - double(r.p) / double(r.q)) < tol) return r;
  return std::nullopt;
}

CyclicReport cyclic_analysis(const SusyContext& ctx, const CoherentState& cs) {
  CyclicReport rep;
  const auto e = energies(ctx, cs);
  const int k = k_split(ctx.nu, cs.K);
  const double d = ctx.nu - cs.K;
  int nonzero = 0, only = 0;
  for (int n = 0; n < cs.size(); ++n) {
    if (cs.coeffs[n] != Complex{0.0, 0.0}) {
      ++nonzero;
      only = n;
    }
  }
  const auto two_nu = rationalize(2.0 * ctx.nu);
  rep.two_nu = two_nu;
  if (nonzero == 1) {
    rep.cyclic = true;
    rep.is_coherent_evolution = true;
    rep.tau = kTwoPi;
    rep.global_phase_raw = -kTwoPi * e[only];
    rep.rule = "eigenstate";
  } else if (k == 0) {
    rep.cyclic = true;
    rep.is_coherent_evolution = true;
    rep.tau = kTwoPi;
    rep.global_phase_raw = kTwoPi * d;
    rep.rule = "coherent: nu <= K";
  } else if (cs.N != coherent::kInfinite && cs.N < k) {
    rep.cyclic = true;
    rep.is_coherent_evolution = true;
    rep.tau = kTwoPi;
    rep.global_phase_raw = -kTwoPi * d;
    rep.rule = "coherent: N < k";
  } else if (two_nu) {
    rep.cyclic = true;
    rep.tau = kTwoPi * double(two_nu->q);
    rep.global_phase_raw = std::numbers::pi * double(two_nu->p);
    rep.rule = "cyclic: 2 nu = p/q";
  } else {
    rep.rule = "not cyclic: 2 nu has no p/q with q <= 64";
    rep.approx_tau = kTwoPi * double(best_convergent(2.0 * ctx.nu, 64).q);
    return rep;
  }
  // Global phase from the largest coefficient after one period.
  const auto ct = evolve(EvolutionSpec::make(ctx, cs, *rep.tau));
  int star = 0;
  for (int n = 1; n < cs.size(); ++n) {
    if (std::abs(cs.coeffs[n]) > std::abs(cs.coeffs[star])) star = n;
  }
  rep.global_phase = reduce_phase(std::arg(ct[star] / cs.coeffs[star]));
  double mean_e = 0.0;
  for (int n = 0; n < cs.size(); ++n) mean_e += std::norm(cs.coeffs[n]) * e[n];
  rep.geometric_phase = reduce_phase(rep.global_phase_raw + *rep.tau * mean_e);
  return rep;
}

double geometric_phase(const SusyContext& ctx, const CoherentState& cs) {
  const auto rep = cyclic_analysis(ctx, cs);
  if (!rep.geometric_phase) throw NotCyclic("geometric_phase: evolution is not cyclic (" + rep.rule + ")");
  return *rep.geometric_phase;
}

std::optional<double> geometric_phase_closed(const SusyContext& ctx, const CoherentState& cs) {
  const double r2 = std::norm(cs.alpha);
  const double nu = ctx.nu;
  auto prob = [&](int level) {
    const int n = level - cs.K;
    return n >= 0 && n < cs.size() ? std::norm(cs.coeffs[n]) : 0.0;
  };
  const bool trivial = cs.spec.trivial();
  if (trivial && cs.K == 0 && cs.N == coherent::kInfinite) {
    if (nu <= 0.0) return reduce_phase(kTwoPi * r2);
    const auto pq = rationalize(2.0 * nu);
    if (!pq) return std::nullopt;
    const int k = k_split(nu, 0);
    double below = 0.0;
    for (int n = 0; n < k; ++n) below += prob(n);
    const double q = double(pq->q);
    return reduce_phase(std::numbers::pi * double(pq->p) +
                        kTwoPi * q * ((r2 - nu) * (1.0 - 2.0 * below) + 2.0 * k * prob(k)));
  }
  if (!ctx.on_spectrum()) return std::nullopt;
  const int j = ctx.j;
  if (!g_is_one_except(cs.spec, {j, j + 1})) return std::nullopt;
  if (cs.family == Family::BGCS && cs.K == j + 1) {
    return reduce_phase(kTwoPi * (r2 + (j + 1) * prob(j + 1)));
  }
  if (cs.family == Family::GPCS && cs.K == 0 && cs.N == j - 1) {
    double mean_n = 0.0;
    for (int n = 0; n < cs.size(); ++n) mean_n += n * std::norm(cs.coeffs[n]);
    return reduce_phase(-kTwoPi * mean_n);
  }
  return std::nullopt;
}

}  // namespace susyg::dynamics
