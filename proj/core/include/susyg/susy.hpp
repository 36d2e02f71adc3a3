#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "susyg/grid.hpp"
#include "susyg/specfun.hpp"

namespace susyg::susy {

// Table of confluent transformations: factorization energy on/off the
// oscillator spectrum, times regular (w0 > 0) or critical (w0 = 0).
enum class Case { CI, CII, CIII, CIV };

std::string_view to_string(Case c);

enum class WMethod { integral, differential };

std::string_view to_string(WMethod m);

// Threshold on |nu - round(nu)| for treating epsilon as an oscillator level.
inline constexpr double kIntegerTol = 1e-9;

struct SusyContext {
  double omega = 1.0;
  double k_wave = 1.0;
  double epsilon = 0.0;
  double nu = 0.0;
  double w0 = 1.0;
  Case case_tag = Case::CI;
  int j = -1;  // oscillator level equal to epsilon, or -1

  // Validates and classifies. On-spectrum energies are snapped to j*omega.
  static SusyContext make(double omega, double k_wave, double epsilon, double w0);

  bool on_spectrum() const { return j >= 0; }
  bool regular() const { return w0 > 0.0; }
  double z(double x) const;
  double level_energy(int n) const { return n * omega; }
};

double v0(const SusyContext& ctx, double x);

// Normalized oscillator eigenfunction and its x-derivative.
double psi0_n(const SusyContext& ctx, int n, double x);
double psi0_n_dx(const SusyContext& ctx, int n, double x);

// psi0_0 .. psi0_{n_max} at x, by the stable normalized recurrence.
std::vector<double> psi0_upto(const SusyContext& ctx, int n_max, double x);

// psi0_n and its x-derivative on a grid for n = n_lo .. n_lo + count - 1.
struct Psi0Block {
  std::vector<Samples> v, dv;
};
Psi0Block psi0_block(const SusyContext& ctx, const Grid& grid, int n_lo, int count);

struct WField {
  Samples values;
  WMethod method = WMethod::differential;
};

WField w_integral(const SusyContext& ctx, const Grid& grid);
WField w_differential(const SusyContext& ctx, const Grid& grid);

// All position-space quantities of one transformation on one grid.
// Built once; read-only afterwards.
class Transform {
 public:
  Transform(const SusyContext& ctx, const Grid& grid,
            WMethod method = WMethod::differential);

  const SusyContext& context() const { return ctx_; }
  const Grid& grid() const { return grid_; }

  const WField& w() const { return w_; }
  const Samples& seed() const { return u_; }      // u = D_nu(z)
  const Samples& seed_dx() const { return u_dx_; }
  const Samples& eta() const { return eta_; }
  const Samples& eta_dx() const { return eta_dx_; }
  const Samples& eta_dxx() const { return eta_dxx_; }
  const Samples& f() const { return f_; }
  const Samples& gamma() const { return gamma_; }
  const Samples& v0() const { return v0_; }
  Samples v2() const;
  Samples magnetic_field() const;
  Samples vector_potential() const;

  Samples apply_L2_minus(std::span<const double> psi) const;
  Samples apply_L2_plus(std::span<const double> psi) const;

  // psi_n^(2) = L2^- psi_n^(0) / |E_n - epsilon| built from the analytic
  // oscillator derivatives. With renormalize, rescaled to unit grid norm.
  Samples psi2_n(int n, bool renormalize = true) const;
  Samples psi2_n_dx(int n, bool renormalize = true) const;

  // psi2_n and derivative for n = n_lo .. n_lo + count - 1 with one
  // oscillator recurrence per grid point. The entry of a level equal to
  // epsilon is left empty.
  struct Block {
    std::vector<Samples> v, dv;
  };
  Block psi2_block(int n_lo, int count, bool renormalize = true) const;

  bool missing_state_normalizable() const;
  Samples missing_state() const;
  Samples missing_state_dx() const;

 private:
  void check_level(int n) const;

  SusyContext ctx_;
  Grid grid_;
  WField w_;
  Samples u_, u_dx_, eta_, eta_dx_, eta_dxx_, f_, gamma_, v0_;
};

// Single-call forms of the Transform accessors.
Samples eta(const SusyContext& ctx, const Grid& grid);
Samples eta_dx(const SusyContext& ctx, const Grid& grid);
Samples eta_dxx(const SusyContext& ctx, const Grid& grid);
Samples f_term(const SusyContext& ctx, const Grid& grid);
Samples v2(const SusyContext& ctx, const Grid& grid);
Samples magnetic_field(const SusyContext& ctx, const Grid& grid);
Samples vector_potential(const SusyContext& ctx, const Grid& grid);
Samples apply_L2_minus(const SusyContext& ctx, const Grid& grid, std::span<const double> psi);
Samples apply_L2_plus(const SusyContext& ctx, const Grid& grid, std::span<const double> psi);
Samples psi2_n(const SusyContext& ctx, int n, const Grid& grid);
Samples missing_state(const SusyContext& ctx, const Grid& grid);

// The w-function at a single point by the Wronskian route.
double w_at(const SusyContext& ctx, double x);

}  // namespace susyg::susy
