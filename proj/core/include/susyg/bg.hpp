#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "susyg/grid.hpp"
#include "susyg/susy.hpp"

namespace susyg::bg {

using susy::SusyContext;
using susy::Transform;

// Eigenstate label: an oscillator index n, or the special level nu.
struct Label {
  bool is_nu = false;
  int n = 0;

  static Label level(int n) { return {false, n}; }
  static Label nu() { return {true, 0}; }
  bool operator==(const Label&) const = default;
};

std::string to_string(const Label& l);

struct SpectrumEntry {
  Label label;
  double energy = 0.0;  // units of hbar*omega0
  int degeneracy = 1;
  int rank = 0;         // position in the energy ordering
};

struct SpectrumTable {
  std::vector<SpectrumEntry> entries;
  bool equidistant = false;
  bool partially_equidistant = false;
  bool includes_E_nu = false;
  double nu = 0.0;
  susy::Case case_tag = susy::Case::CI;
};

enum class Spacing { equidistant, partially_equidistant };

std::string_view to_string(Spacing s);

// Levels n = 0..n_max, plus E_nu = 0 when it belongs to the spectrum.
SpectrumTable spectrum(const SusyContext& ctx, int n_max);

Spacing classify_spacing(const SpectrumTable& table);

struct Level {
  double energy = 0.0;
  int degeneracy = 1;
  std::vector<Label> labels;  // members present in the table
};

// Distinct levels of the table in increasing energy. Multiplicities refer to
// the full spectrum, not just the truncated table.
std::vector<Level> degeneracies(const SpectrumTable& table);

// Real eigenspinor; the plane wave in y is dropped. Derivatives are analytic.
struct Spinor {
  Label label;
  double energy = 0.0;
  Samples upper, lower;
  Samples upper_dx, lower_dx;
};

// Eigenspinor on the transform's grid. The upper component of an ordinary
// level is renormalized on the grid unless renormalize is false.
Spinor eigenspinor(const Transform& t, Label label, bool renormalize = true);
Spinor eigenspinor(const SusyContext& ctx, Label label, const Grid& grid);

// Eigenspinors of levels n_lo .. n_lo + count - 1, built in one pass.
std::vector<Spinor> eigenspinors(const Transform& t, int n_lo, int count, bool renormalize = true);

Samples density_n(const Spinor& s);
Samples current_x_n(const Transform& t, const Spinor& s);
Samples current_y_n(const Transform& t, const Spinor& s);

// Density and currents of a general complex spinor (a, b) with hbar/m* = 2.
struct Observables {
  Samples rho, jx, jy;
};

using CSamples = std::vector<std::complex<double>>;

Observables spinor_observables(const Transform& t, const CSamples& a, const CSamples& b,
                               const CSamples& a_dx, const CSamples& b_dx);

// Largest Parseval deficit sqrt(1 - sum |<phi_n|chi>|^2 / ||chi||^2) over
// narrow Gaussian probes, separately for the upper basis
// {psi2_n, n <= n_max} (+ missing state when normalizable) and the lower
// basis {psi0_n, n <= n_max}.
double completeness_check(const SusyContext& ctx, int n_max, const Grid& grid);

// Parseval deficit of one two-component probe in the same component bases.
double probe_reconstruction_error(const Transform& t, int n_max, std::span<const double> upper,
                                  std::span<const double> lower);

}  // namespace susyg::bg
