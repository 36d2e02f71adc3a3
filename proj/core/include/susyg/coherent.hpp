#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "susyg/bg.hpp"
#include "susyg/susy.hpp"

namespace susyg::coherent {

using susy::SusyContext;
using Complex = std::complex<double>;
using CSamples = std::vector<Complex>;

enum class LadderKind { diagonal, nondiagonal };

std::string_view to_string(LadderKind k);

// The weight g(E_n) of the ladder action. Levels not in g_values have g = 1.
struct LadderSpec {
  LadderKind kind = LadderKind::diagonal;
  std::map<int, double> g_values;
  std::vector<int> roots;  // sorted, exactly the n with g(E_n) = 0
  // Set when the case requires g(E_j) = g(E_{j+1}) = 0.
  bool needs_roots = false;
  int j = -1;

  double g(int n) const;
  bool is_root(int n) const;
  // Base index of the BGCS: the largest root, or 0 without roots.
  int top_root() const { return roots.empty() ? 0 : roots.back(); }
  // True when g = 1 on every level.
  bool trivial() const;
};

// Builds g from f for this context. f defaults to 1; f_values overrides it
// level by level. Roots at {j, j+1} are inserted whenever the case requires
// them; the non-diagonal critical case scales g by 1/sqrt(2) at j and j+1.
LadderSpec make_ladder(const SusyContext& ctx, LadderKind kind,
                       const std::map<int, double>& f_values = {});

enum class Direction { lower, raise };

struct Action {
  double coefficient = 0.0;
  std::optional<bg::Label> target;  // none when the state is annihilated
};

Action ladder_action(const LadderSpec& spec, const SusyContext& ctx, Direction dir, bg::Label n);

enum class Family { BGCS, GPCS, standard };

std::string_view to_string(Family f);

inline constexpr int kInfinite = -1;
inline constexpr int kMaxTerms = 512;

// Normalized superposition sum_n c_n |Psi_{K+n}>.
struct CoherentState {
  Family family = Family::standard;
  LadderSpec spec;
  int K = 0;
  int N = kInfinite;  // last relative index, or kInfinite
  Complex alpha{0.0, 0.0};
  CSamples coeffs;    // c_n for level K + n
  double log_norm = 0.0;  // log of the normalization constant

  double r() const { return std::abs(alpha); }
  double theta() const;
  int level(int n) const { return K + n; }
  int size() const { return static_cast<int>(coeffs.size()); }
};

// log G(K, n) for the BGCS and GPCS weights; sign of the g-product in *sign.
double log_g_bgcs(const LadderSpec& spec, int K, int n, int* sign = nullptr);
double log_g_gpcs(const LadderSpec& spec, int K, int n, int* sign = nullptr);

// Adaptive truncation unless n_max > 0, in which case exactly n_max + 1 terms.
CoherentState bgcs(const LadderSpec& spec, const SusyContext& ctx, Complex alpha, int n_max = 0);
CoherentState gpcs(const LadderSpec& spec, const SusyContext& ctx, Complex alpha, int extremal_index);
// g = 1 on every level, K = 0.
CoherentState standard_cs(Complex alpha, int n_max = 0);

// Level n -> P_n, for levels K .. K + size - 1.
std::map<int, double> transition_probs(const CoherentState& cs);

// <cs1|cs2> by the defining series of the normalization at complex argument.
Complex inner_product(const CoherentState& cs1, const CoherentState& cs2);

enum class MeasureFamily { standard, bgcs_above_root, gpcs_ground };

std::string_view to_string(MeasureFamily f);

// Max relative residual of int_0^inf N^2 r^{2n+1} m dr = G^2(K,n)/(2 pi),
// n = 0..n_probe (capped at j-1 for gpcs_ground). j is the root level for
// the two families with roots; ignored for standard.
double measure_check(MeasureFamily family, int j, int n_probe);

// Eigenspinors of levels K .. K + count - 1 on the transform's grid, kept
// for repeated superpositions (theta or time sweeps). The transform must
// outlive the table.
class LevelTable {
 public:
  LevelTable(const susy::Transform& t, int K, int count);

  int K() const { return K_; }
  int size() const { return static_cast<int>(a_.size()); }

  // Density and currents of sum_n c_n Psi_{K+n} by the double sum over
  // (n, m); coefficients past size() must be negligible.
  bg::Observables observables(const CSamples& coeffs) const;

 private:
  const susy::Transform* t_;
  int K_;
  std::vector<Samples> a_, b_, da_, db_;
};

// Number of leading coefficients that matter in position space.
int significant_terms(const CSamples& coeffs);

// Density and currents of sum_n c_n Psi_{K+n} by the double sum over (n, m).
bg::Observables superposition_observables(const susy::Transform& t, int K, const CSamples& coeffs);
bg::Observables cs_observables(const CoherentState& cs, const susy::Transform& t);

struct Quadratures {
  double mean_x = 0.0, mean_p = 0.0;
  double mean_x2 = 0.0, mean_p2 = 0.0;
  double dx = 0.0, dp = 0.0;
  double product = 0.0;      // dX dP
  double commutator = 0.0;   // |<[X, P]>|
};

// X = (A- + A+)/sqrt2, P = (A- - A+)/(i sqrt2) from the ladder action on the
// coefficient table.
Quadratures uncertainty(const CoherentState& cs);

// Closed forms for the families with roots at {j, j+1} and g = 1 elsewhere.
double bgcs_product_closed(int j, double r);
double gpcs_commutator_closed(int j, Complex alpha);
double gpcs_product_closed(int j, Complex alpha);

}  // namespace susyg::coherent
