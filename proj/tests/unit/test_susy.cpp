#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include "mp_oracle.hpp"
#include "susyg/errors.hpp"
#include "susyg/susy.hpp"

using namespace susyg;
using namespace susyg::susy;

namespace {

SusyContext ctx_of(double eps, double w0, double k = 1.0) { return SusyContext::make(1.0, k, eps, w0); }

double max_abs(const Samples& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// eta = D_nu^2 / (w0 + W_nu) at omega = 1, k = 0, all from the 50-digit oracle.
double eta_oracle(double nu, double w0, double x) {
  const double d = oracle::d(nu, x);
  return d * d / (w0 + oracle::wronskian_nu(nu, x));
}

// Richardson-extrapolated first and second derivatives of the oracle eta.
std::pair<double, double> eta_derivs_oracle(double nu, double w0, double x) {
  auto e = [&](double y) { return eta_oracle(nu, w0, y); };
  auto d1 = [&](double h) { return (e(x + h) - e(x - h)) / (2 * h); };
  auto d2 = [&](double h) { return (e(x + h) - 2 * e(x) + e(x - h)) / (h * h); };
  const double h = 1e-2;
  return {(4 * d1(h / 2) - d1(h)) / 3, (4 * d2(h / 2) - d2(h)) / 3};
}

int sign_changes(const Samples& v) {
  const double floor = 1e-6 * max_abs(v);
  int count = 0, last = 0;
  for (double x : v) {
    if (std::abs(x) < floor) continue;
    const int s = x > 0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// -psi'' + V psi by stencil.
Samples hamiltonian(const Grid& g, const Samples& v, const Samples& psi) {
  const auto dd = second_derivative(g, psi);
  Samples out(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) out[i] = -dd[i] + v[i] * psi[i];
  return out;
}

}  // namespace

TEST_SUITE("context") {
  TEST_CASE("classification table") {
    struct Row {
      double eps, w0;
      Case want;
    };
    for (const Row& r : {Row{-1.0, 1.0, Case::CIII}, Row{-1.0, 0.0, Case::CIV}, Row{0.0, 1.0, Case::CI},
                         Row{0.0, 0.0, Case::CII}, Row{0.5, 1.0, Case::CIII}, Row{0.5, 0.0, Case::CIV},
                         Row{0.7, 1.0, Case::CIII}, Row{0.7, 0.0, Case::CIV}, Row{2.0, 1.0, Case::CI},
                         Row{2.0, 0.0, Case::CII}, Row{1.5, 1.0, Case::CIII}, Row{1.5, 0.0, Case::CIV}}) {
      CAPTURE(r.eps);
      CAPTURE(r.w0);
      CHECK(ctx_of(r.eps, r.w0).case_tag == r.want);
    }
  }

  TEST_CASE("integer detection threshold") {
    CHECK(ctx_of(2.0 + 1e-10, 1.0).j == 2);
    CHECK(ctx_of(2.0 + 1e-8, 1.0).j == -1);
    CHECK(ctx_of(2.0 + 1e-10, 1.0).nu == 2.0);
  }

  TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(ctx_of(0.5, -1.0), ConfigError);
    CHECK_THROWS_AS(SusyContext::make(0.0, 1.0, 0.5, 1.0), ConfigError);
    CHECK_THROWS_AS(SusyContext::make(1.0, 1.0, NAN, 1.0), ConfigError);
  }
}

TEST_SUITE("oscillator") {
  TEST_CASE("v0 examples") {
    CHECK(v0(ctx_of(0, 1, 0.0), 0.0) == doctest::Approx(-0.5));
    CHECK(v0(ctx_of(0, 1, 1.0), -2.0) == doctest::Approx(-0.5));
    CHECK(std::abs(v0(SusyContext::make(2.0, 0.0, 0.3, 1.0), 1.0)) <= 1e-15);
  }

  TEST_CASE("psi0 normalization, node and orthogonality") {
    const auto ctx = ctx_of(0.5, 1.0);
    const auto g = Grid::standard();
    Samples p0, p2, p3;
    for (double x : g.points()) {
      p0.push_back(psi0_n(ctx, 0, x));
      p2.push_back(psi0_n(ctx, 2, x));
      p3.push_back(psi0_n(ctx, 3, x));
    }
    CHECK(inner(g, p0, p0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(inner(g, p2, p3)) <= 1e-14);
    CHECK(std::abs(psi0_n(ctx, 1, -2.0)) <= 1e-16);
  }

  TEST_CASE("psi0 derivative matches a finite difference") {
    const auto ctx = ctx_of(0.5, 1.0);
    for (int n : {0, 3, 7}) {
      for (double x : {-3.1, -2.0, 0.4}) {
        const double fd = (psi0_n(ctx, n, x + 1e-5) - psi0_n(ctx, n, x - 1e-5)) / 2e-5;
        CHECK(psi0_n_dx(ctx, n, x) == doctest::Approx(fd).epsilon(1e-8));
      }
    }
  }
}

TEST_SUITE("w") {
  TEST_CASE("critical nu = 0 at the origin is sqrt(pi/2)") {
    const auto ctx = ctx_of(0.0, 0.0, 0.0);
    CHECK(w_at(ctx, 0.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-13));
    const Grid g(0.0, 4.0, 9);
    CHECK(w_integral(ctx, g).values[0] == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-12));
  }

  TEST_CASE("nu = 1, w0 = 0.5, x = -1 against an independent quadrature") {
    const double frozen = 2.0024078694950156308;
    // w0 + int_{-1}^inf D_1(t)^2 dt with D_1 from the 50-digit oracle.
    boost::math::quadrature::exp_sinh<double> es;
    const double q = 0.5 + es.integrate([](double s) {
      const double d = oracle::d(1.0, s - 1.0);
      return d * d;
    });
    CHECK(q == doctest::Approx(frozen).epsilon(1e-11));
    const auto ctx = ctx_of(1.0, 0.5, 0.0);
    const Grid g(-1.0, 3.0, 9);
    CHECK(w_integral(ctx, g).values[0] == doctest::Approx(frozen).epsilon(1e-12));
    CHECK(w_differential(ctx, g).values[0] == doctest::Approx(frozen).epsilon(1e-12));
  }

  TEST_CASE("tends to w0 far right") {
    for (double w0 : {0.0, 0.5, 3.0}) {
      const auto ctx = ctx_of(0.5, w0);
      CHECK(std::abs(w_at(ctx, 40.0) - w0) <= 1e-14);
      const Grid g(30.0, 40.0, 11);
      CHECK(std::abs(w_integral(ctx, g).values.back() - w0) <= 1e-14);
    }
  }

  TEST_CASE("methods agree on [-8, 8]") {
    const Grid g(-8.0, 8.0, 201);
    double worst = 0.0;
    for (double nu : {-1.0, 0.0, 0.5, 2.0}) {
      for (double w0 : {0.0, 1.0}) {
        const auto ctx = ctx_of(nu, w0);
        const auto a = w_integral(ctx, g).values, b = w_differential(ctx, g).values;
        for (int i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
      }
    }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("nodeless for every w0 >= 0 tested") {
    const Grid g(-8.0, 8.0, 201);
    for (double nu : {-1.3, 0.0, 0.5, 2.0, 3.7}) {
      for (double w0 : {0.0, 1e-3, 1.0, 50.0}) {
        for (double v : w_differential(ctx_of(nu, w0), g).values) CHECK(v > 0.0);
      }
    }
  }
}

TEST_SUITE("transform fields") {
  TEST_CASE("eta positive, decaying, with consistent derivative") {
    const auto ctx = ctx_of(0.5, 1.0);
    Transform t(ctx, Grid::standard());
    for (double e : t.eta()) CHECK(e > 0.0);
    CHECK(t.eta().back() <= 1e-20);
    const auto& g = t.grid();
    double worst = 0.0;
    for (int i = 2; i < g.size() - 2; ++i) {
      if (std::abs(g[i]) > 6.0) continue;
      const double fd = (t.eta()[i + 1] - t.eta()[i - 1]) / (2 * g.h());
      worst = std::max(worst, std::abs(fd - t.eta_dx()[i]));
    }
    // h^2 truncation of the central difference at h = 0.01.
    CHECK(worst <= 1e-4);
    const auto d1 = derivative(g, t.eta());
    double w4 = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      if (std::abs(g[i]) <= 6.0) w4 = std::max(w4, std::abs(d1[i] - t.eta_dx()[i]));
    }
    CHECK(w4 <= 1e-6);
    const auto d2 = derivative(g, t.eta_dx());
    double w5 = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      if (std::abs(g[i]) <= 6.0) w5 = std::max(w5, std::abs(d2[i] - t.eta_dxx()[i]));
    }
    CHECK(w5 <= 1e-6);
  }

  TEST_CASE("f, V2 - V0 at nu = 0, w0 = 1, x = 0 against the oracle") {
    const double f_frozen = 0.35228731908901672051;
    const double dv_frozen = 0.39390048242928874530;
    const double e = eta_oracle(0.0, 1.0, 0.0);
    const auto [e1, e2] = eta_derivs_oracle(0.0, 1.0, 0.0);
    CHECK((e1 * e1 - 2 * e * e2) / (4 * e * e) == doctest::Approx(f_frozen).epsilon(1e-8));
    CHECK(2 * e1 == doctest::Approx(dv_frozen).epsilon(1e-9));

    const auto ctx = ctx_of(0.0, 1.0, 0.0);
    const Grid g(-2.5, 2.5, 11);
    REQUIRE(g[5] == 0.0);
    Transform t(ctx, g);
    CHECK(t.f()[5] == doctest::Approx(f_frozen).epsilon(1e-11));
    CHECK(t.v2()[5] - t.v0()[5] == doctest::Approx(dv_frozen).epsilon(1e-11));
  }

  TEST_CASE("gamma, V2, B and A identities") {
    const auto ctx = ctx_of(0.7, 1.0);
    Transform t(ctx, Grid::standard());
    const auto v2 = t.v2(), b = t.magnetic_field(), a = t.vector_potential();
    for (int i = 0; i < t.grid().size(); ++i) {
      const double eta = t.eta()[i], ed = t.eta_dx()[i];
      CHECK(t.gamma()[i] == doctest::Approx((eta * eta + 2 * ed) / 4 + t.f()[i]).epsilon(1e-12));
      CHECK(v2[i] == doctest::Approx(t.v0()[i] + 2 * ed).epsilon(1e-12));
      CHECK(b[i] == doctest::Approx(ed / 2).epsilon(1e-14));
      CHECK(a[i] == doctest::Approx(eta / 2 - ctx.k_wave).epsilon(1e-14));
    }
  }

  TEST_CASE("flux equals the endpoint difference of eta") {
    for (double w0 : {0.0, 1.0}) {
      const auto ctx = ctx_of(0.5, w0);
      Transform t(ctx, Grid::standard());
      const auto& g = t.grid();
      // Trapezoid with its leading end correction; B does not vanish at the
      // grid ends for non-integer nu.
      const double h = g.h();
      const double flux = integrate(g, t.magnetic_field()) - h * h / 24 * (t.eta_dxx().back() - t.eta_dxx().front());
      CHECK(flux == doctest::Approx((t.eta().back() - t.eta().front()) / 2).epsilon(1e-8));
    }
  }

  TEST_CASE("V2 - V0 shrinks monotonically as w0 grows") {
    // Integer nu: D_j decays on both sides, w stays bounded.
    double prev = INFINITY;
    for (double w0 : {1.0, 10.0, 100.0, 1000.0}) {
      const auto ctx = ctx_of(2.0, w0);
      Transform t(ctx, Grid::standard());
      const auto v2 = t.v2();
      double m = 0.0;
      for (int i = 0; i < t.grid().size(); ++i) m = std::max(m, std::abs(v2[i] - t.v0()[i]));
      CHECK(m < prev);
      prev = m;
      CHECK(std::abs(v2.front() - t.v0().front()) <= 1e-10);
      CHECK(std::abs(v2.back() - t.v0().back()) <= 1e-10);
    }
    CHECK(prev <= 1e-2);
  }

  TEST_CASE("non-integer nu: V2 - V0 tends to a constant 2 omega on the left") {
    // D_nu grows as z -> -inf, so eta ~ |x| there and 2 eta' does not decay.
    const auto ctx = ctx_of(0.5, 1.0);
    Transform t(ctx, Grid(-30.0, 12.0, 4201));
    const auto v2 = t.v2();
    CHECK(std::abs(v2.front() - t.v0().front()) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(std::abs(v2.back() - t.v0().back()) <= 1e-10);
  }
}

TEST_SUITE("intertwining") {
  TEST_CASE("L2- annihilates psi_j when epsilon is a level") {
    const auto ctx = ctx_of(2.0, 1.0);
    Transform t(ctx, Grid::standard());
    Samples pj;
    for (double x : t.grid().points()) pj.push_back(psi0_n(ctx, 2, x));
    CHECK(l2_norm(t.grid(), t.apply_L2_minus(pj)) <= 1e-6);
    CHECK(max_abs(t.apply_L2_minus(Samples(t.grid().size(), 0.0))) == 0.0);
  }

  TEST_CASE("L2+ L2- psi_n = (E_n - epsilon)^2 psi_n") {
    for (auto [eps, w0] : {std::pair{0.7, 1.0}, std::pair{2.0, 0.0}, std::pair{-1.0, 1.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      for (int n = 0; n <= 4; ++n) {
        Samples p;
        for (double x : t.grid().points()) p.push_back(psi0_n(ctx, n, x));
        const auto q = t.apply_L2_plus(t.apply_L2_minus(p));
        const double s = (n - ctx.nu) * (n - ctx.nu);
        Samples r(p.size());
        for (size_t i = 0; i < p.size(); ++i) r[i] = q[i] - s * p[i];
        CAPTURE(eps);
        CAPTURE(n);
        CHECK(l2_norm(t.grid(), r) <= 1e-6);
      }
    }
  }

  TEST_CASE("H2 L2- - L2- H0 vanishes on psi_0..psi_5") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{0.5, 0.0}, std::pair{2.0, 1.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      const auto& g = t.grid();
      const auto v2 = t.v2();
      for (int n = 0; n <= 5; ++n) {
        Samples p;
        for (double x : g.points()) p.push_back(psi0_n(ctx, n, x));
        const auto lhs = hamiltonian(g, v2, t.apply_L2_minus(p));
        const auto rhs = t.apply_L2_minus(hamiltonian(g, t.v0(), p));
        Samples r(p.size());
        for (size_t i = 0; i < p.size(); ++i) r[i] = lhs[i] - rhs[i];
        CHECK(l2_norm(g, r) <= 1e-5 * l2_norm(g, p));
      }
    }
  }
}

TEST_SUITE("partner eigenfunctions") {
  TEST_CASE("eigen-equation for n <= 8 and the missing state") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{2.0, 1.0}, std::pair{2.0, 0.0}, std::pair{0.7, 0.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      const auto& g = t.grid();
      const auto v2 = t.v2();
      for (int n = 0; n <= 8; ++n) {
        if (n == ctx.j) continue;
        const auto p = t.psi2_n(n);
        const auto h = hamiltonian(g, v2, p);
        double r = 0.0;
        for (int i = 0; i < g.size(); ++i) r = std::max(r, std::abs(h[i] - n * p[i]));
        CHECK(r <= 1e-5 * max_abs(p));
      }
      if (t.missing_state_normalizable()) {
        const auto m = t.missing_state();
        const auto h = hamiltonian(g, v2, m);
        double r = 0.0;
        for (int i = 0; i < g.size(); ++i) r = std::max(r, std::abs(h[i] - ctx.epsilon * m[i]));
        CHECK(r <= 1e-5 * max_abs(m));
      }
    }
  }

  TEST_CASE("orthonormal for m, n <= 8") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      std::vector<Samples> p;
      for (int n = 0; n <= 8; ++n) {
        if (n != ctx.j) p.push_back(t.psi2_n(n));
      }
      for (size_t a = 0; a < p.size(); ++a) {
        for (size_t b = 0; b < p.size(); ++b) {
          CHECK(std::abs(inner(t.grid(), p[a], p[b]) - (a == b ? 1.0 : 0.0)) <= 1e-8);
        }
      }
    }
  }

  TEST_CASE("analytic normalization is already unit") {
    const auto ctx = ctx_of(0.7, 1.0);
    Transform t(ctx, Grid::standard());
    for (int n = 0; n <= 5; ++n) CHECK(l2_norm(t.grid(), t.psi2_n(n, false)) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("block form matches single levels") {
    const auto ctx = ctx_of(0.7, 1.0);
    Transform t(ctx, Grid::standard());
    const auto b = t.psi2_block(1, 4);
    for (int c = 0; c < 4; ++c) {
      const auto p = t.psi2_n(1 + c), dp = t.psi2_n_dx(1 + c);
      for (int i = 0; i < t.grid().size(); i += 37) {
        CHECK(b.v[c][i] == doctest::Approx(p[i]).epsilon(1e-12));
        CHECK(b.dv[c][i] == doctest::Approx(dp[i]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("node counts") {
    // Isospectral regular case keeps n nodes.
    Transform ci(ctx_of(2.0, 1.0), Grid::standard());
    CHECK(sign_changes(ci.psi2_n(3)) == 3);
    CHECK(sign_changes(ci.psi2_n(0)) == 0);
    // Critical case loses one node above the deleted level.
    Transform cii(ctx_of(2.0, 0.0), Grid::standard());
    CHECK(sign_changes(cii.psi2_n(3)) == 2);
  }

  TEST_CASE("degenerate level") {
    Transform t(ctx_of(2.0, 1.0), Grid::standard());
    CHECK_THROWS_AS(t.psi2_n(2), DegenerateLevel);
  }

  TEST_CASE("missing state") {
    const auto g = Grid::standard();
    Transform r(ctx_of(0.5, 1.0), g);
    REQUIRE(r.missing_state_normalizable());
    const auto m = r.missing_state();
    CHECK(l2_norm(g, m) == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 0; n <= 5; ++n) CHECK(std::abs(inner(g, m, r.psi2_n(n))) <= 1e-8);
    Transform c(ctx_of(0.5, 0.0), g);
    CHECK_FALSE(c.missing_state_normalizable());
    CHECK_THROWS_AS(c.missing_state(), NotNormalizable);
  }

  TEST_CASE("missing state derivative") {
    Transform r(ctx_of(0.5, 1.0), Grid::standard());
    const auto d = derivative(r.grid(), r.missing_state());
    const auto a = r.missing_state_dx();
    for (int i = 0; i < r.grid().size(); ++i) CHECK(std::abs(d[i] - a[i]) <= 1e-7);
  }
}

TEST_SUITE("free functions") {
  TEST_CASE("single-call forms agree with the transform") {
    const auto ctx = ctx_of(0.7, 1.0);
    const Grid g(-6.0, 6.0, 121);
    Transform t(ctx, g);
    CHECK(eta(ctx, g) == t.eta());
    CHECK(v2(ctx, g) == t.v2());
    CHECK(psi2_n(ctx, 2, g) == t.psi2_n(2));
    CHECK(magnetic_field(ctx, g) == t.magnetic_field());
    for (int i = 0; i < g.size(); i += 10) CHECK(w_at(ctx, g[i]) == doctest::Approx(t.w().values[i]).epsilon(1e-14));
  }
}
