#pragma once

#include <optional>
#include <string>
#include <vector>

#include "susyg/coherent.hpp"

namespace susyg::dynamics {

using coherent::CoherentState;
using coherent::CSamples;
using susy::SusyContext;

// Index where |n + K - nu| changes branch: ceil(nu - K) for nu >= K, else 0.
int k_split(double nu, int K);

// Time in units of 1/omega0, energies in units of hbar omega0.
struct EvolutionSpec {
  SusyContext ctx;
  CoherentState cs;
  double t = 0.0;
  int k_split = 0;

  static EvolutionSpec make(const SusyContext& ctx, const CoherentState& cs, double t);
};

// E_{K+n} = |n + K - nu| for each coefficient of cs.
std::vector<double> energies(const SusyContext& ctx, const CoherentState& cs);

// c_n(t): the branch below k_split rotates as e^{-i(nu-K-n)t}, the one
// above as e^{+i(nu-K-n)t}.
CSamples evolve(const EvolutionSpec& spec);

// Density at time t on the table's grid.
Samples density_t(const EvolutionSpec& spec, const coherent::LevelTable& table);
Samples density_t(const EvolutionSpec& spec, const susy::Transform& t);

// |<Psi(0)|Psi(t)>|^2.
double fidelity(const SusyContext& ctx, const CoherentState& cs, double t);
std::vector<double> fidelity_series(const SusyContext& ctx, const CoherentState& cs,
                                    const std::vector<double>& times);

// Reduces a phase into [0, 2 pi).
double reduce_phase(double phi);
// Distance between two phases on the circle.
double phase_distance(double a, double b);

struct Rational {
  long p = 0, q = 1;
};

// p/q with q <= max_den and |x - p/q| < tol by continued fractions.
std::optional<Rational> rationalize(double x, long max_den = 64, double tol = 1e-9);

struct CyclicReport {
  bool cyclic = false;
  bool is_coherent_evolution = false;
  std::optional<double> tau;
  double global_phase_raw = 0.0;  // as the family rule gives it
  double global_phase = 0.0;      // extracted from the evolved state, in [0, 2 pi)
  std::optional<double> geometric_phase;  // in [0, 2 pi)
  std::optional<Rational> two_nu;         // 2 nu = p/q when rational
  std::optional<double> approx_tau;       // best period with q <= 64 otherwise
  std::string rule;
};

CyclicReport cyclic_analysis(const SusyContext& ctx, const CoherentState& cs);

// beta = phi + tau sum |c_n|^2 E_n (mod 2 pi). Throws NotCyclic.
double geometric_phase(const SusyContext& ctx, const CoherentState& cs);

// The family closed forms, when one applies:
//   K = 0, nu < 0, g = 1:        2 pi r^2
//   BGCS K = j+1, nu = j:        2 pi (r^2 + (j+1) P_{j+1})
//   GPCS below the roots, N < k: -2 pi <n>
//   g = 1, 2 nu = p/q:           pi p + 2 pi q [(r^2 - nu)(1 - 2 sum_{n<k} P_n) + 2 k P_k]
std::optional<double> geometric_phase_closed(const SusyContext& ctx, const CoherentState& cs);

}  // namespace susyg::dynamics
