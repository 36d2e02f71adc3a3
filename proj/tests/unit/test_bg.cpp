#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "susyg/bg.hpp"
#include "susyg/errors.hpp"

using namespace susyg;
using namespace susyg::bg;
using susy::Case;

namespace {

SusyContext ctx_of(double eps, double w0) { return SusyContext::make(1.0, 1.0, eps, w0); }

double energy_of(const SpectrumTable& t, Label l) {
  for (const auto& e : t.entries) {
    if (e.label == l) return e.energy;
  }
  FAIL("label not in table");
  return NAN;
}

double max_abs(const Samples& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(const Grid& g, const Spinor& s) { return inner(g, s.upper, s.upper) + inner(g, s.lower, s.lower); }

double overlap(const Grid& g, const Spinor& a, const Spinor& b) {
  return inner(g, a.upper, b.upper) + inner(g, a.lower, b.lower);
}

std::vector<Label> labels_upto(const SusyContext& ctx, int n_max) {
  std::vector<Label> out;
  if (ctx.case_tag == Case::CIII) out.push_back(Label::nu());
  for (int n = 0; n <= n_max; ++n) out.push_back(Label::level(n));
  return out;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("epsilon = 0.7 regular") {
    const auto t = spectrum(ctx_of(0.7, 1.0), 5);
    CHECK(t.includes_E_nu);
    const std::vector<double> want = {0.0, 0.7, 0.3, 1.3, 2.3, 3.3, 4.3};
    REQUIRE(t.entries.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) CHECK(std::abs(t.entries[i].energy - want[i]) <= 1e-12);
    CHECK(t.entries[0].label == Label::nu());
  }

  TEST_CASE("epsilon = 2 in both cases") {
    for (double w0 : {0.0, 1.0}) {
      const auto t = spectrum(ctx_of(2.0, w0), 5);
      CHECK(t.includes_E_nu);
      CHECK(std::abs(energy_of(t, Label::level(0)) - 2) <= 1e-12);
      CHECK(std::abs(energy_of(t, Label::level(4)) - 2) <= 1e-12);
      CHECK(std::abs(energy_of(t, Label::level(1)) - 1) <= 1e-12);
      CHECK(std::abs(energy_of(t, Label::level(3)) - 1) <= 1e-12);
      CHECK(std::abs(energy_of(t, Label::level(2))) <= 1e-12);
      CHECK(std::abs(energy_of(t, Label::level(5)) - 3) <= 1e-12);
    }
  }

  TEST_CASE("epsilon = 1/2 regular") {
    const auto t = spectrum(ctx_of(0.5, 1.0), 8);
    for (int n = 0; n <= 8; ++n) CHECK(std::abs(energy_of(t, Label::level(n)) - std::abs(n - 0.5)) <= 1e-12);
    CHECK(energy_of(t, Label::nu()) == 0.0);
  }

  TEST_CASE("E_nu only where the case admits it") {
    CHECK(spectrum(ctx_of(0.5, 1.0), 3).includes_E_nu);
    CHECK_FALSE(spectrum(ctx_of(0.5, 0.0), 3).includes_E_nu);
    CHECK(spectrum(ctx_of(1.0, 0.0), 3).includes_E_nu);
    CHECK(spectrum(ctx_of(1.0, 1.0), 3).includes_E_nu);
    for (const auto& e : spectrum(ctx_of(0.5, 0.0), 3).entries) CHECK_FALSE(e.label.is_nu);
  }

  TEST_CASE("table invariants") {
    for (double eps : {-1.0, 0.0, 0.5, 0.7, 2.0, 1.5}) {
      for (double w0 : {0.0, 1.0}) {
        const auto t = spectrum(ctx_of(eps, w0), 12);
        std::vector<int> ranks;
        for (const auto& e : t.entries) {
          ranks.push_back(e.rank);
          CHECK(e.energy >= 0.0);
          CHECK((e.degeneracy == 1 || e.degeneracy == 2));
        }
        std::sort(ranks.begin(), ranks.end());
        for (size_t i = 0; i < ranks.size(); ++i) CHECK(ranks[i] == static_cast<int>(i));
        // Rank order is energy order.
        for (const auto& a : t.entries) {
          for (const auto& b : t.entries) {
            if (a.rank < b.rank) CHECK(a.energy <= b.energy + 1e-12);
          }
        }
        CHECK(t.equidistant != t.partially_equidistant);
      }
    }
  }

  TEST_CASE("ties keep label order") {
    const auto t = spectrum(ctx_of(2.0, 1.0), 5);
    CHECK(t.entries[1].rank < t.entries[3].rank);  // E_1 = E_3
    CHECK(t.entries[0].rank < t.entries[4].rank);  // E_0 = E_4
  }

  TEST_CASE("n_max must be positive") { CHECK_THROWS_AS(spectrum(ctx_of(0.5, 1.0), 0), ConfigError); }
}

TEST_SUITE("spacing") {
  TEST_CASE("rules over the epsilon x w0 table") {
    struct Row {
      double eps, w0;
      Spacing want;
    };
    const auto E = Spacing::equidistant, P = Spacing::partially_equidistant;
    for (const Row& r : {Row{-1.0, 1.0, E}, Row{-1.0, 0.0, E}, Row{0.0, 1.0, E}, Row{0.0, 0.0, E},
                         Row{0.5, 1.0, P}, Row{0.5, 0.0, E}, Row{0.7, 1.0, P}, Row{0.7, 0.0, P},
                         Row{2.0, 1.0, E}, Row{2.0, 0.0, E}, Row{1.5, 1.0, P}, Row{1.5, 0.0, E}}) {
      CAPTURE(r.eps);
      CAPTURE(r.w0);
      const auto t = spectrum(ctx_of(r.eps, r.w0), 10);
      CHECK(classify_spacing(t) == r.want);
      CHECK(t.equidistant == (r.want == E));
    }
  }

  TEST_CASE("other negative energies") {
    // Regular below -E_1 leaves a gap above the isolated zero level.
    CHECK(classify_spacing(spectrum(ctx_of(-0.4, 1.0), 6)) == Spacing::partially_equidistant);
    CHECK(classify_spacing(spectrum(ctx_of(-2.0, 1.0), 6)) == Spacing::partially_equidistant);
    CHECK(classify_spacing(spectrum(ctx_of(-0.4, 0.0), 6)) == Spacing::equidistant);
  }
}

TEST_SUITE("degeneracy") {
  TEST_CASE("epsilon = 2: levels 1 and 2 doubly degenerate") {
    const auto levels = degeneracies(spectrum(ctx_of(2.0, 1.0), 8));
    REQUIRE(levels.size() >= 4);
    CHECK(levels[0].energy == 0.0);
    CHECK(levels[0].degeneracy == 1);
    CHECK(levels[1].degeneracy == 2);
    CHECK(levels[1].labels == std::vector<Label>{Label::level(1), Label::level(3)});
    CHECK(levels[2].degeneracy == 2);
    CHECK(levels[3].degeneracy == 1);
  }

  TEST_CASE("epsilon = 1/2 regular: E_0 = E_1 doubly degenerate, E_nu single") {
    const auto levels = degeneracies(spectrum(ctx_of(0.5, 1.0), 6));
    CHECK(levels[0].energy == 0.0);
    CHECK(levels[0].degeneracy == 1);
    CHECK(levels[1].energy == doctest::Approx(0.5));
    CHECK(levels[1].degeneracy == 2);
    CHECK(levels[2].degeneracy == 1);
  }

  TEST_CASE("epsilon = 1/2 critical: the ground level is doubly degenerate") {
    const auto levels = degeneracies(spectrum(ctx_of(0.5, 0.0), 6));
    CHECK(levels[0].energy == doctest::Approx(0.5));
    CHECK(levels[0].degeneracy == 2);
  }

  TEST_CASE("epsilon = 0 regular: nothing degenerate") {
    for (const auto& l : degeneracies(spectrum(ctx_of(0.0, 1.0), 8))) CHECK(l.degeneracy == 1);
  }

  TEST_CASE("epsilon = 3/2: first excited levels pair up") {
    const auto levels = degeneracies(spectrum(ctx_of(1.5, 1.0), 8));
    CHECK(levels[0].degeneracy == 1);  // E_nu
    CHECK(levels[1].degeneracy == 2);
    CHECK(levels[2].degeneracy == 2);
    CHECK(levels[3].degeneracy == 1);
  }
}

TEST_SUITE("eigenspinors") {
  TEST_CASE("orthonormal for n <= 8") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{0.5, 0.0}, std::pair{2.0, 1.0}, std::pair{2.0, 0.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      std::vector<Spinor> s;
      for (const auto& l : labels_upto(ctx, 8)) s.push_back(eigenspinor(t, l));
      for (size_t a = 0; a < s.size(); ++a) {
        for (size_t b = a; b < s.size(); ++b) {
          CHECK(std::abs(overlap(t.grid(), s[a], s[b]) - (a == b ? 1.0 : 0.0)) <= 1e-8);
        }
      }
    }
  }

  TEST_CASE("special rows of the zero-energy state") {
    const auto g = Grid::standard();
    {
      Transform t(ctx_of(2.0, 0.0), g);
      const auto s = eigenspinor(t, Label::nu());
      CHECK(max_abs(s.upper) == 0.0);
      CHECK(norm2(g, s) == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
      Transform t(ctx_of(0.5, 1.0), g);
      const auto s = eigenspinor(t, Label::nu());
      CHECK(max_abs(s.lower) == 0.0);
      CHECK(norm2(g, s) == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
      Transform t(ctx_of(2.0, 1.0), g);
      const auto s = eigenspinor(t, Label::nu());
      CHECK(inner(g, s.upper, s.upper) == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(inner(g, s.lower, s.lower) == doctest::Approx(0.5).epsilon(1e-10));
      // Level j and the nu label are the same state in CI.
      const auto sj = eigenspinor(t, Label::level(2));
      CHECK(sj.upper == s.upper);
    }
    {
      Transform t(ctx_of(0.5, 0.0), g);
      CHECK_THROWS_AS(eigenspinor(t, Label::nu()), NoSuchState);
    }
  }

  TEST_CASE("energies are |n - nu|") {
    Transform t(ctx_of(0.7, 1.0), Grid::standard());
    for (int n = 0; n <= 5; ++n) CHECK(eigenspinor(t, Label::level(n)).energy == doctest::Approx(std::abs(n - 0.7)));
  }

  TEST_CASE("block construction equals single construction") {
    Transform t(ctx_of(2.0, 1.0), Grid::standard());
    const auto block = eigenspinors(t, 0, 6);
    for (int n = 0; n < 6; ++n) {
      const auto s = eigenspinor(t, Label::level(n));
      for (int i = 0; i < t.grid().size(); i += 41) {
        CHECK(block[n].upper[i] == doctest::Approx(s.upper[i]).epsilon(1e-12));
        CHECK(block[n].lower[i] == doctest::Approx(s.lower[i]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("degenerate pair is orthogonal") {
    Transform t(ctx_of(0.5, 0.0), Grid::standard());
    CHECK(std::abs(overlap(t.grid(), eigenspinor(t, Label::level(0)), eigenspinor(t, Label::level(1)))) <= 1e-8);
  }

  TEST_CASE("Rayleigh quotients reproduce the spectrum") {
    for (auto [eps, w0] : {std::pair{0.7, 1.0}, std::pair{2.0, 0.0}, std::pair{-1.0, 1.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      const auto& g = t.grid();
      const auto v2 = t.v2();
      const auto table = spectrum(ctx, 6);
      for (int n = 0; n <= 6; ++n) {
        if (n == ctx.j) continue;
        const auto s = eigenspinor(t, Label::level(n));
        auto rq = [&](const Samples& psi, const Samples& v) {
          const auto dd = second_derivative(g, psi);
          Samples h(psi.size());
          for (size_t i = 0; i < psi.size(); ++i) h[i] = -dd[i] + v[i] * psi[i];
          return inner(g, psi, h) / inner(g, psi, psi);
        };
        const double e0 = rq(s.lower, t.v0()), e2 = rq(s.upper, v2);
        CHECK(std::abs(std::abs(e0 - ctx.epsilon) - energy_of(table, Label::level(n))) <= 1e-6);
        CHECK(std::abs(std::abs(e2 - ctx.epsilon) - energy_of(table, Label::level(n))) <= 1e-6);
      }
    }
  }

  TEST_CASE("lower component solves the decoupled fourth-order equation") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      for (int n = 0; n <= 5; ++n) {
        const auto s = eigenspinor(t, Label::level(n));
        const auto q = t.apply_L2_plus(t.apply_L2_minus(s.lower));
        double r = 0.0;
        for (size_t i = 0; i < q.size(); ++i) r = std::max(r, std::abs(q[i] - s.energy * s.energy * s.lower[i]));
        CHECK(r <= 1e-5 * max_abs(s.lower));
      }
    }
  }
}

TEST_SUITE("currents") {
  TEST_CASE("density integrates to one") {
    Transform t(ctx_of(0.5, 1.0), Grid::standard());
    for (const auto& l : labels_upto(t.context(), 5)) {
      CHECK(integrate(t.grid(), density_n(eigenspinor(t, l))) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  TEST_CASE("J_x vanishes for every eigenstate") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.0}, std::pair{2.0, 1.0}}) {
      const auto ctx = ctx_of(eps, w0);
      Transform t(ctx, Grid::standard());
      for (const auto& l : labels_upto(ctx, 5)) CHECK(max_abs(current_x_n(t, eigenspinor(t, l))) <= 1e-10);
    }
  }

  TEST_CASE("regular epsilon = 1/2 ground state carries no J_y") {
    Transform t(ctx_of(0.5, 1.0), Grid::standard());
    CHECK(max_abs(current_y_n(t, eigenspinor(t, Label::nu()))) <= 1e-8);
  }

  TEST_CASE("excited states do carry J_y") {
    Transform t(ctx_of(0.5, 1.0), Grid::standard());
    CHECK(max_abs(current_y_n(t, eigenspinor(t, Label::level(2)))) > 1e-3);
  }

  TEST_CASE("component swap flips only the Wronskian term") {
    Transform t(ctx_of(0.7, 1.0), Grid::standard());
    const auto s = eigenspinor(t, Label::level(3));
    Spinor w = s;
    std::swap(w.upper, w.lower);
    std::swap(w.upper_dx, w.lower_dx);
    const auto a = current_y_n(t, s), b = current_y_n(t, w);
    for (size_t i = 0; i < a.size(); ++i) {
      const double wr = s.lower[i] * s.upper_dx[i] - s.lower_dx[i] * s.upper[i];
      CHECK(a[i] - b[i] == doctest::Approx(4 * wr).epsilon(1e-12).scale(1.0));
      CHECK(a[i] + b[i] == doctest::Approx(-4 * t.eta()[i] * s.upper[i] * s.lower[i]).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("general spinor observables reduce to the eigenstate formulas") {
    Transform t(ctx_of(0.7, 1.0), Grid::standard());
    const auto s = eigenspinor(t, Label::level(2));
    auto c = [](const Samples& v) { return CSamples(v.begin(), v.end()); };
    const auto o = spinor_observables(t, c(s.upper), c(s.lower), c(s.upper_dx), c(s.lower_dx));
    CHECK(o.rho == density_n(s));
    const auto jy = current_y_n(t, s);
    for (size_t i = 0; i < jy.size(); ++i) CHECK(std::abs(o.jy[i] - jy[i]) <= 1e-14);
    CHECK(max_abs(o.jx) == 0.0);
  }
}

TEST_SUITE("completeness") {
  TEST_CASE("deficit shrinks with n_max") {
    for (auto [eps, w0] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.0}, std::pair{0.5, 0.0}}) {
      const auto ctx = ctx_of(eps, w0);
      const auto g = Grid::standard();
      const double d10 = completeness_check(ctx, 10, g), d40 = completeness_check(ctx, 40, g);
      CAPTURE(eps);
      CAPTURE(w0);
      CHECK(d40 < d10);
    }
  }

  TEST_CASE("oscillator-ground probe is reconstructed at n_max = 40") {
    const auto ctx = ctx_of(0.5, 1.0);
    Transform t(ctx, Grid::standard());
    Samples p;
    for (double x : t.grid().points()) p.push_back(susy::psi0_n(ctx, 0, x));
    CHECK(probe_reconstruction_error(t, 40, p, p) <= 1e-3);
  }

  TEST_CASE("the missing state is needed in CIII") {
    // Only the basis element for E_nu can carry the missing state.
    const auto ctx = ctx_of(0.5, 1.0);
    Transform t(ctx, Grid::standard());
    const auto m = t.missing_state();
    const Samples zero(m.size(), 0.0);
    CHECK(probe_reconstruction_error(t, 40, m, zero) <= 1e-6);
    for (int n = 0; n <= 40; ++n) CHECK(std::abs(inner(t.grid(), m, t.psi2_n(n, false))) <= 1e-7);
  }
}
