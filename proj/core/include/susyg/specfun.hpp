#pragma once

#include <memory>

namespace susyg::specfun {

// Kernel tolerances. Series are summed well past these; they bound what the
// asymptotic branches must reach before they are trusted.
struct Tolerances {
  double kernel = 1e-12;
  double derived = 1e-8;
};

// |z| at which D_nu switches from the extended-precision series to the
// large-argument expansion. For 1F1 the same point maps to x = z^2/2 = 32.
inline constexpr double kSwitchZ = 8.0;

// Confluent hypergeometric 1F1(a; b; x).
double hyp1f1(double a, double b, double x, const Tolerances& tol = {});

// Digamma function psi(x).
double digamma(double x);

// Physicists' Hermite polynomial H_n(x).
double hermite(int n, double x);

// Parabolic cylinder function D_nu(z).
double pcf_d(double nu, double z, const Tolerances& tol = {});

// dD_nu/dz = (z/2) D_nu - D_{nu+1}.
double pcf_d_dz(double nu, double z, const Tolerances& tol = {});

// Parametric derivative dD_nu/dnu.
double pcf_d_dnu(double nu, double z, const Tolerances& tol = {});

// W_nu = D_{nu+1} dD_nu/dnu - dD_{nu+1}/dnu D_nu.
double wronskian_nu(double nu, double z, const Tolerances& tol = {});

struct PcfValue {
  double d = 0.0;
  double d_nu = 0.0;
};

// D_nu(z) and dD_nu/dnu from a single pass.
PcfValue pcf_d_with_dnu(double nu, double z, const Tolerances& tol = {});

// Everything the SUSY engine needs at one point.
struct PcfBundle {
  double d0 = 0.0;     // D_nu
  double d1 = 0.0;     // D_{nu+1}
  double d2 = 0.0;     // D_{nu+2}
  double w_nu = 0.0;   // wronskian_nu
};

PcfBundle pcf_bundle(double nu, double z, const Tolerances& tol = {});

struct PcfCoefficients;

// Fixed-order evaluator: the gamma and digamma prefactors are computed once.
// Immutable after construction, safe to share across threads.
class PcfEvaluator {
 public:
  explicit PcfEvaluator(double nu, const Tolerances& tol = {});
  double nu() const { return nu_; }
  PcfBundle bundle(double z) const;
  double d(double z) const;

 private:
  double nu_;
  Tolerances tol_;
  std::shared_ptr<const PcfCoefficients> c0_, c1_;
};

}  // namespace susyg::specfun
