#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "commands.hpp"
#include "susyg/bg.hpp"
#include "susyg/coherent.hpp"
#include "susyg/dynamics.hpp"
#include "susyg/errors.hpp"
#include "susyg/specfun.hpp"
#include "susyg/susy.hpp"

namespace susyg::cli {

namespace {

using Complex = std::complex<double>;
using susy::SusyContext;

struct Check {
  std::string name;
  double tol;
  std::function<double()> worst;  // returns the largest deviation seen
};

SusyContext ctx_of(double eps, double w0) { return SusyContext::make(1.0, 1.0, eps, w0); }

double pcf_ode() {
  double worst = 0.0;
  for (double nu : {-2.5, -1.0, 0.0, 0.5, 1.7, 3.0}) {
    for (int i = 0; i <= 48; ++i) {
      const double z = -6.0 + 0.25 * i;
      const double d0 = specfun::pcf_d(nu, z), d1 = specfun::pcf_d(nu + 1, z), d2 = specfun::pcf_d(nu + 2, z);
      // D' = z/2 D - D_{nu+1}, applied twice.
      const double dd1 = 0.5 * z * d1 - d2;
      const double dd0 = 0.5 * z * d0 - d1;
      const double d0xx = 0.5 * d0 + 0.5 * z * dd0 - dd1;
      const double res = -d0xx + (0.25 * z * z - 0.5) * d0 - nu * d0;
      worst = std::max(worst, std::abs(res) / std::max(1.0, std::abs(d0)));
    }
  }
  return worst;
}

double hermite_reduction() {
  double worst = 0.0;
  for (int j = 0; j <= 4; ++j) {
    for (int i = 0; i <= 48; ++i) {
      const double z = -6.0 + 0.25 * i;
      const double ref = std::pow(2.0, -0.5 * j) * std::exp(-0.25 * z * z) * specfun::hermite(j, z / std::numbers::sqrt2);
      worst = std::max(worst, std::abs(specfun::pcf_d(j, z) - ref));
    }
  }
  return worst;
}

double dnu_richardson() {
  double worst = 0.0;
  const double h = 1e-3;
  for (double nu : {-1.5, -0.5, 0.3, 1.0, 2.2}) {
    for (double z : {-3.0, -1.0, 0.0, 1.5, 4.0}) {
      auto c = [&](double hh) { return (specfun::pcf_d(nu + hh, z) - specfun::pcf_d(nu - hh, z)) / (2.0 * hh); };
      const double fd = (4.0 * c(h / 2) - c(h)) / 3.0;
      const double an = specfun::pcf_d_dnu(nu, z);
      worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(an)));
    }
  }
  return worst;
}

double w_methods() {
  double worst = 0.0;
  const Grid g(-8.0, 8.0, 201);
  for (double nu : {-1.0, 0.0, 0.5, 2.0}) {
    for (double w0 : {0.0, 1.0}) {
      const auto ctx = ctx_of(nu, w0);
      const auto a = susy::w_integral(ctx, g).values;
      const auto b = susy::w_differential(ctx, g).values;
      for (int i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
    }
  }
  return worst;
}

double intertwining() {
  double worst = 0.0;
  for (auto [eps, w0] : {std::pair{0.7, 1.0}, std::pair{0.5, 0.0}, std::pair{2.0, 1.0}}) {
    const auto ctx = ctx_of(eps, w0);
    susy::Transform t(ctx, Grid::standard());
    const auto v2 = t.v2();
    for (int n = 0; n <= 5; ++n) {
      if (n == ctx.j) continue;
      const auto psi = t.psi2_n(n);
      const auto dd = second_derivative(t.grid(), psi);
      double res = 0.0, peak = 0.0;
      for (int i = 0; i < t.grid().size(); ++i) {
        res = std::max(res, std::abs(-dd[i] + (v2[i] - ctx.level_energy(n)) * psi[i]));
        peak = std::max(peak, std::abs(psi[i]));
      }
      worst = std::max(worst, res / peak);
    }
  }
  return worst;
}

std::vector<bg::Label> labels_upto(const SusyContext& ctx, int n_max) {
  std::vector<bg::Label> out;
  if (ctx.case_tag == susy::Case::CIII) out.push_back(bg::Label::nu());
  for (int n = 0; n <= n_max; ++n) out.push_back(bg::Label::level(n));
  return out;
}

double orthonormality() {
  double worst = 0.0;
  for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{0.5, 0.0}, std::pair{2.0, 1.0}}) {
    const auto ctx = ctx_of(eps, w0);
    susy::Transform t(ctx, Grid::standard());
    std::vector<bg::Spinor> s;
    for (const auto& l : labels_upto(ctx, 8)) s.push_back(bg::eigenspinor(t, l));
    for (size_t a = 0; a < s.size(); ++a) {
      for (size_t b = a; b < s.size(); ++b) {
        const double g = inner(t.grid(), s[a].upper, s[b].upper) + inner(t.grid(), s[a].lower, s[b].lower);
        worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
      }
    }
  }
  return worst;
}

double jx_eigenstates() {
  double worst = 0.0;
  for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.0}}) {
    const auto ctx = ctx_of(eps, w0);
    susy::Transform t(ctx, Grid::standard());
    for (const auto& l : labels_upto(ctx, 5)) {
      for (double v : bg::current_x_n(t, bg::eigenspinor(t, l))) worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

double jy_ground_regular() {
  const auto ctx = ctx_of(0.5, 1.0);
  susy::Transform t(ctx, Grid::standard());
  double worst = 0.0;
  for (double v : bg::current_y_n(t, bg::eigenspinor(t, bg::Label::nu()))) worst = std::max(worst, std::abs(v));
  return worst;
}

double spectrum_tables() {
  double worst = 0.0;
  auto cmp = [&](double eps, const std::vector<double>& want) {
    const auto table = bg::spectrum(ctx_of(eps, 1.0), static_cast<int>(want.size()));
    for (size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(table.entries[i].energy - want[i]));
  };
  cmp(0.7, {0.0, 0.7, 0.3, 1.3, 2.3});
  cmp(2.0, {2.0, 1.0, 0.0, 1.0, 2.0, 3.0});
  cmp(0.5, {0.0, 0.5, 0.5, 1.5, 2.5});
  return worst;
}

// The three families used by the coherent and dynamics suites.
std::vector<coherent::CoherentState> sample_states(double r, double theta) {
  const Complex a = std::polar(r, theta);
  const auto c2 = ctx_of(2.0, 1.0);
  const auto spec = coherent::make_ladder(c2, coherent::LadderKind::diagonal);
  return {coherent::bgcs(spec, c2, a), coherent::gpcs(spec, c2, a, 0), coherent::standard_cs(a)};
}

double probability_sums() {
  double worst = 0.0;
  for (double r : {0.0, 0.5, 1.0, 3.0, 10.0}) {
    for (const auto& cs : sample_states(r, 0.4)) {
      double s = 0.0;
      for (const auto& c : cs.coeffs) s += std::norm(c);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  return worst;
}

double poisson() {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 3.0, 10.0}) {
    const auto cs = coherent::standard_cs(std::polar(r, 1.1));
    for (int n = 0; n < cs.size(); ++n) {
      const double p = std::exp(-r * r + 2.0 * n * std::log(r) - std::lgamma(n + 1.0));
      worst = std::max(worst, std::abs(std::norm(cs.coeffs[n]) - p));
    }
  }
  return worst;
}

double eigen_relation() {
  double worst = 0.0;
  for (double eps : {2.0, 0.5}) {
    const auto ctx = ctx_of(eps, 1.0);
    const auto spec = coherent::make_ladder(ctx, coherent::LadderKind::diagonal);
    for (double r : {0.5, 1.0, 3.0, 10.0}) {
      const Complex a = std::polar(r, 0.9);
      const auto cs = coherent::bgcs(spec, ctx, a);
      double peak = 0.0, res = 0.0;
      for (int n = 0; n + 1 < cs.size(); ++n) {
        const double lam =
            coherent::ladder_action(spec, ctx, coherent::Direction::lower, bg::Label::level(cs.level(n + 1))).coefficient;
        res = std::max(res, std::abs(lam * cs.coeffs[n + 1] - a * cs.coeffs[n]));
        peak = std::max(peak, std::abs(a * cs.coeffs[n]));
      }
      worst = std::max(worst, res / peak);
    }
  }
  return worst;
}

double measures() {
  return std::max({coherent::measure_check(coherent::MeasureFamily::standard, 0, 12),
                   coherent::measure_check(coherent::MeasureFamily::bgcs_above_root, 2, 12),
                   coherent::measure_check(coherent::MeasureFamily::gpcs_ground, 4, 12)});
}

double periods() {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 3.0}) {
    const auto c2 = ctx_of(2.0, 1.0);
    for (const auto& cs : sample_states(r, 0.0)) {
      worst = std::max(worst, std::abs(dynamics::fidelity(c2, cs, 2.0 * std::numbers::pi) - 1.0));
    }
    const auto c3 = ctx_of(1.0 / 3.0, 1.0);
    const auto cs = coherent::bgcs(coherent::make_ladder(c3, coherent::LadderKind::diagonal), c3, r);
    worst = std::max(worst, std::abs(dynamics::fidelity(c3, cs, 6.0 * std::numbers::pi) - 1.0));
  }
  return worst;
}

double translation() {
  const auto ctx = ctx_of(2.0, 1.0);
  const auto spec = coherent::make_ladder(ctx, coherent::LadderKind::diagonal);
  susy::Transform t(ctx, Grid::standard());
  const double time = 0.7, theta = 0.3;
  const auto cs = coherent::bgcs(spec, ctx, std::polar(1.0, theta));
  const auto shifted = coherent::bgcs(spec, ctx, std::polar(1.0, theta - time));
  coherent::LevelTable table(t, cs.K, coherent::significant_terms(cs.coeffs));
  const auto a = dynamics::density_t(dynamics::EvolutionSpec::make(ctx, cs, time), table);
  const auto b = table.observables(shifted.coeffs).rho;
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double phases() {
  double worst = 0.0;
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    std::vector<std::pair<SusyContext, coherent::CoherentState>> cases;
    for (double eps : {2.0}) {
      const auto ctx = ctx_of(eps, 1.0);
      const auto spec = coherent::make_ladder(ctx, coherent::LadderKind::diagonal);
      cases.push_back({ctx, coherent::bgcs(spec, ctx, r)});
      cases.push_back({ctx, coherent::gpcs(spec, ctx, r, 0)});
    }
    for (double eps : {-1.0, 1.0 / 3.0, 0.5}) cases.push_back({ctx_of(eps, 1.0), coherent::standard_cs(r)});
    for (const auto& [ctx, cs] : cases) {
      const auto closed = dynamics::geometric_phase_closed(ctx, cs);
      if (!closed) throw NumericalError("phase suite: no closed form for a sample state");
      worst = std::max(worst, dynamics::phase_distance(dynamics::geometric_phase(ctx, cs), *closed));
    }
  }
  return worst;
}

double uncertainty_standard() {
  double worst = 0.0;
  for (double r : {0.0, 0.5, 2.0, 10.0}) {
    worst = std::max(worst, std::abs(coherent::uncertainty(coherent::standard_cs(std::polar(r, 0.6))).product - 0.5));
  }
  return worst;
}

double uncertainty_bgcs() {
  double worst = 0.0;
  for (int j : {1, 2, 5}) {
    const auto ctx = ctx_of(j, 1.0);
    const auto spec = coherent::make_ladder(ctx, coherent::LadderKind::diagonal);
    for (double r : {0.0, 0.5, 2.0, 10.0}) {
      const auto q = coherent::uncertainty(coherent::bgcs(spec, ctx, std::polar(r, 0.2)));
      worst = std::max(worst, std::abs(q.product - coherent::bgcs_product_closed(j, r)));
    }
  }
  return worst;
}

// Largest violation of dX dP >= |<[X,P]>|/2; zero when the bound holds.
double uncertainty_bound() {
  double worst = 0.0;
  const auto ctx = ctx_of(2.0, 0.0);
  const auto spec = coherent::make_ladder(ctx, coherent::LadderKind::diagonal);
  for (double r : {0.05, 0.5, 1.0, 3.0, 10.0}) {
    for (double th : {0.0, 1.0, 2.0, 3.0}) {
      const auto q = coherent::uncertainty(coherent::gpcs(spec, ctx, std::polar(r, th), 0));
      worst = std::max(worst, 0.5 * q.commutator - q.product);
    }
  }
  return std::max(worst, 0.0);
}

}  // namespace

bool run_validate(const Resolved& run, std::ostream& os) {
  const auto tol = run.tolerances();
  // Kernel-level checks scale with tol_kernel, derived ones with tol_derived.
  const double kd = tol.derived / 1e-8, kk = tol.kernel / 1e-12;
  const std::vector<Check> checks = {
      {"pcf ODE residual", 1e-8 * kd, pcf_ode},
      {"pcf Hermite reduction", 1e-10 * kk, hermite_reduction},
      {"pcf d/dnu vs Richardson", 1e-6 * kd, dnu_richardson},
      {"w integral vs differential", 1e-8 * kd, w_methods},
      {"spectrum tables", 1e-12 * kk, spectrum_tables},
      {"partner eigen-equation", 1e-5 * kd, intertwining},
      {"eigenspinor orthonormality", 1e-8 * kd, orthonormality},
      {"eigenstate J_x", 1e-10 * kk, jx_eigenstates},
      {"regular ground J_y", 1e-8 * kd, jy_ground_regular},
      {"coherent sum P_n", 1e-12 * kk, probability_sums},
      {"standard vs Poisson", 1e-12 * kk, poisson},
      {"BGCS eigen-relation", 1e-12 * kk, eigen_relation},
      {"measure closed forms", 1e-6 * kd, measures},
      {"fidelity at period", 1e-10 * kk, periods},
      {"BGCS density translation", 1e-10 * kk, translation},
      {"geometric phase closed forms", 1e-8 * kd, phases},
      {"standard dX dP = 1/2", 1e-12 * kk, uncertainty_standard},
      {"BGCS dX dP closed form", 1e-12 * kk, uncertainty_bgcs},
      {"GPCS dX dP >= |<[X,P]>|/2", 1e-12 * kk, uncertainty_bound},
  };
  bool all = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-32s %12s %10s %8s  %s\n", "suite", "worst", "tol", "time", "result");
  os << line;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    double w = 0.0;
    std::string status;
    try {
      w = c.worst();
      status = w <= c.tol ? "PASS" : "FAIL";
    } catch (const std::exception& e) {
      w = std::numeric_limits<double>::quiet_NaN();
      status = std::string("FAIL (") + e.what() + ")";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (status != "PASS") all = false;
    std::snprintf(line, sizeof line, "%-32s %12.3e %10.1e %7.2fs  %s\n", c.name.c_str(), w, c.tol, secs,
                  status.c_str());
    os << line;
  }
  os << (all ? "all suites passed\n" : "some suites FAILED\n");
  return all;
}

}  // namespace susyg::cli
