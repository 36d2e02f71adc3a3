#include "susyg/specfun.hpp"

#include <cmath>
#include <string>

#include "quad.hpp"
#include "susyg/errors.hpp"

namespace susyg::specfun {

using detail::quad;
using detail::qabs;

namespace {

constexpr int kMaxSeriesTerms = 20000;
constexpr int kMaxAsymptoticTerms = 400;
// Beyond this the series fallback loses more than ~1e-12 to cancellation.
constexpr double kSeriesFallbackLimit = 10.0;

// Below this z the 80-bit series is accurate enough; above it the
// cancellation between the two series needs quad precision.
constexpr double kLongDoubleLimit = 4.0;

template <class T>
T tabs(T x) {
  return x < 0 ? -x : x;
}

template <class T>
struct Series {
  T m = 0;
  T dm = 0;  // d/da of the sum
};

template <class T>
constexpr T series_eps() {
  if constexpr (sizeof(T) == sizeof(quad)) return T(1e-33);
  else return T(1e-20);
}

// sum_k (a)_k x^k / ((b)_k k!) and its a-derivative, x >= 0 expected.
template <class T>
Series<T> kummer_series(T a, T b, T x, bool want_da) {
  const T eps = series_eps<T>();
  Series<T> s;
  T t = 1, dt = 0;
  s.m = 1;
  const T past_peak = x + tabs(a) + 2;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    T den = (b + k) * (k + 1);
    T nt = t * (a + k) * x / den;
    T ndt = want_da ? (dt * (a + k) + t) * x / den : T(0);
    s.m += nt;
    s.dm += ndt;
    t = nt;
    dt = ndt;
    if (k + 1 > past_peak && tabs(t) <= eps * tabs(s.m) &&
        (!want_da || tabs(dt) <= eps * (tabs(s.dm) + tabs(s.m)))) {
      return s;
    }
    if (t == 0 && (!want_da || dt == 0)) return s;
  }
  throw NonConvergence("1F1 series did not converge");
}

struct QPcf {
  quad d = 0;
  quad d_nu = 0;
};

}  // namespace

// Order-dependent prefactors of the two-series representation.
struct PcfCoefficients {
  quad nu = 0;
  quad A = 0, B = 0;          // series weights
  quad a_psi = 0, b_psi = 0;  // their digamma-weighted nu-derivative parts
};

namespace {

PcfCoefficients make_coefficients(quad nu) {
  PcfCoefficients c;
  c.nu = nu;
  const quad a1 = -nu / 2, a2 = (1 - nu) / 2;
  const quad sqrt_pi = sqrtq(detail::kPiQ);
  const quad p1 = powq(2, nu / 2) * sqrt_pi;
  const quad p2 = -powq(2, (nu + 1) / 2) * sqrt_pi;
  c.A = p1 * detail::rgamma(a2);
  c.B = p2 * detail::rgamma(a1);
  c.a_psi = p1 * detail::psi_over_gamma(a2);
  c.b_psi = p2 * detail::psi_over_gamma(a1);
  return c;
}

// D_nu(z) from the two-series representation, with a pole-free dD/dnu.
template <class T>
QPcf pcf_series(const PcfCoefficients& c, quad z, bool want_dnu) {
  const quad nu = c.nu;
  const quad x = z * z / 2;
  const quad a1 = -nu / 2, a2 = (1 - nu) / 2;
  Series<T> s1 = kummer_series<T>(T(a1), T(0.5), T(x), want_dnu);
  Series<T> s2 = kummer_series<T>(T(a2), T(1.5), T(x), want_dnu);
  Series<quad> m1{quad(s1.m), quad(s1.dm)};
  Series<quad> m2{quad(s2.m), quad(s2.dm)};
  const quad pre = expq(-z * z / 4);
  QPcf out;
  const quad core = c.A * m1.m + c.B * z * m2.m;
  out.d = pre * core;
  if (want_dnu) {
    const quad ln2 = logq(quad(2));
    out.d_nu = pre * (ln2 / 2 * core + (c.a_psi * m1.m + c.b_psi * z * m2.m) / 2 -
                      (c.A * m1.dm + c.B * z * m2.dm) / 2);
  }
  return out;
}

// Large positive z: D_nu ~ e^{-z^2/4} z^nu sum_s (-1)^s (-nu)_{2s} / (s! (2z^2)^s).
// Returns false if the expansion cannot reach double precision.
bool pcf_asymptotic(quad nu, quad z, bool want_dnu, QPcf& out) {
  const quad eps = 1e-17;
  const quad two_z2 = 2 * z * z;
  quad t = 1, dt = 0, s = 1, ds = 0;
  quad prev = 1;
  bool converged = false;
  for (int k = 0; k < kMaxAsymptoticTerms; ++k) {
    quad c = -(2 * k - nu) * (2 * k - nu + 1) / ((k + 1) * two_z2);
    quad dc = (2 * (2 * k - nu) + 1) / ((k + 1) * two_z2);
    quad nt = t * c;
    quad ndt = dt * c + t * dc;
    if (k > 2 && qabs(nt) > prev && qabs(nt) > eps * qabs(s)) {
      // Divergent tail: optimal truncation is still good when the smallest
      // term is below double rounding. The quad series fallback is worse here.
      converged = prev <= quad(1e-15) * qabs(s) && (!want_dnu || qabs(dt) <= quad(1e-13) * (qabs(ds) + qabs(s)));
      break;
    }
    s += nt;
    ds += ndt;
    prev = qabs(nt) > 0 ? qabs(nt) : prev;
    t = nt;
    dt = ndt;
    if (qabs(t) <= eps * qabs(s) && (!want_dnu || qabs(dt) <= eps * (qabs(ds) + qabs(s)))) {
      converged = true;
      break;
    }
    if (t == 0 && dt == 0) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;
  const quad lz = logq(z);
  const quad pre = expq(-z * z / 4 + nu * lz);
  out.d = pre * s;
  if (want_dnu) out.d_nu = pre * (lz * s + ds);
  return true;
}

QPcf pcf_q(const PcfCoefficients& c, double z, bool want_dnu) {
  if (!std::isfinite(z)) throw NonConvergence("pcf_d: non-finite argument");
  QPcf out;
  if (z >= kSwitchZ) {
    if (pcf_asymptotic(c.nu, z, want_dnu, out)) return out;
    if (z > kSeriesFallbackLimit) {
      throw NonConvergence("pcf_d: asymptotic expansion failed at z=" + std::to_string(z));
    }
  }
  if (z < kLongDoubleLimit) return pcf_series<long double>(c, z, want_dnu);
  return pcf_series<quad>(c, z, want_dnu);
}

QPcf pcf_q(double nu, double z, bool want_dnu) {
  if (!std::isfinite(nu)) throw NonConvergence("pcf_d: non-finite order");
  return pcf_q(make_coefficients(nu), z, want_dnu);
}

double to_double(quad v, const char* what) {
  double d = static_cast<double>(v);
  if (!std::isfinite(d)) throw NonConvergence(std::string(what) + ": result overflows double");
  return d;
}

// Large positive x, both exponential branches (the recessive one with cos(pi a)).
bool hyp1f1_asymptotic(quad a, quad b, quad x, double tol, quad& out) {
  auto sum = [&](quad p, quad q, quad sign, quad& res) {
    quad t = 1, s = 1, prev = 1;
    for (int k = 0; k < kMaxAsymptoticTerms; ++k) {
      quad nt = t * (p + k) * (q + k) / ((k + 1) * x) * sign;
      if (k > 2 && qabs(nt) > prev) {
        res = s;
        return qabs(t) <= tol * qabs(s);
      }
      s += nt;
      t = nt;
      prev = qabs(nt) > 0 ? qabs(nt) : prev;
      if (qabs(t) <= quad(1e-17) * qabs(s) || t == 0) {
        res = s;
        return true;
      }
    }
    return false;
  };
  quad s1 = 0, s2 = 0;
  if (!sum(1 - a, b - a, 1, s1)) return false;
  if (!sum(a, a - b + 1, -1, s2)) return false;
  const quad g = tgammaq(b);
  out = g * (expq(x + (a - b) * logq(x)) * detail::rgamma(a) * s1 +
             detail::cospi(a) * expq(-a * logq(x)) * detail::rgamma(b - a) * s2);
  return true;
}

}  // namespace

double hyp1f1(double a, double b, double x, const Tolerances& tol) {
  if (detail::is_nonpositive_integer(b)) {
    throw PoleError("hyp1f1: b is a non-positive integer");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x)) {
    throw NonConvergence("hyp1f1: non-finite argument");
  }
  if (a == 0.0 || x == 0.0) return 1.0;
  if (detail::is_nonpositive_integer(a)) {
    // Terminating polynomial; direct sum is exact up to rounding.
    quad t = 1, s = 1;
    for (int k = 0; k < -static_cast<int>(a); ++k) {
      t *= (quad(a) + k) * quad(x) / ((quad(b) + k) * (k + 1));
      s += t;
    }
    return to_double(s, "hyp1f1");
  }
  if (x < 0) {
    // Kummer transformation keeps the series positive-argument.
    if (detail::is_nonpositive_integer(b - a)) {
      return to_double(expq(quad(x)), "hyp1f1") * hyp1f1(b - a, b, -x, tol);
    }
    quad v = 0;
    quad bx = -quad(x);
    if (bx >= kSwitchZ * kSwitchZ / 2 && hyp1f1_asymptotic(b - a, b, bx, tol.kernel, v)) {
      return to_double(expq(quad(x)) * v, "hyp1f1");
    }
    Series<quad> s = kummer_series<quad>(quad(b) - a, b, bx, false);
    return to_double(expq(quad(x)) * s.m, "hyp1f1");
  }
  quad v = 0;
  if (x >= kSwitchZ * kSwitchZ / 2 && hyp1f1_asymptotic(a, b, x, tol.kernel, v)) {
    return to_double(v, "hyp1f1");
  }
  return to_double(kummer_series<quad>(a, b, x, false).m, "hyp1f1");
}

double digamma(double x) {
  if (detail::is_nonpositive_integer(x)) throw PoleError("digamma: pole at non-positive integer");
  if (!std::isfinite(x)) throw NonConvergence("digamma: non-finite argument");
  return static_cast<double>(detail::digamma_q(x));
}

double hermite(int n, double x) {
  if (n < 0) return 0.0;
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double pcf_d(double nu, double z, const Tolerances&) {
  return to_double(pcf_q(nu, z, false).d, "pcf_d");
}

double pcf_d_dz(double nu, double z, const Tolerances&) {
  quad d0 = pcf_q(nu, z, false).d;
  quad d1 = pcf_q(nu + 1, z, false).d;
  return to_double(quad(z) / 2 * d0 - d1, "pcf_d_dz");
}

double pcf_d_dnu(double nu, double z, const Tolerances&) {
  return to_double(pcf_q(nu, z, true).d_nu, "pcf_d_dnu");
}

PcfValue pcf_d_with_dnu(double nu, double z, const Tolerances&) {
  QPcf v = pcf_q(nu, z, true);
  return {to_double(v.d, "pcf_d"), to_double(v.d_nu, "pcf_d_dnu")};
}

double wronskian_nu(double nu, double z, const Tolerances& tol) {
  return pcf_bundle(nu, z, tol).w_nu;
}

PcfEvaluator::PcfEvaluator(double nu, const Tolerances& tol) : nu_(nu), tol_(tol) {
  if (!std::isfinite(nu)) throw NonConvergence("pcf_d: non-finite order");
  c0_ = std::make_shared<const PcfCoefficients>(make_coefficients(nu));
  c1_ = std::make_shared<const PcfCoefficients>(make_coefficients(quad(nu) + 1));
}

PcfBundle PcfEvaluator::bundle(double z) const {
  QPcf v0 = pcf_q(*c0_, z, true);
  QPcf v1 = pcf_q(*c1_, z, true);
  // Three-term recurrence D_{nu+2} = z D_{nu+1} - (nu+1) D_nu.
  quad d2 = quad(z) * v1.d - (quad(nu_) + 1) * v0.d;
  PcfBundle b;
  b.d0 = to_double(v0.d, "pcf_d");
  b.d1 = to_double(v1.d, "pcf_d");
  b.d2 = to_double(d2, "pcf_d");
  b.w_nu = to_double(v1.d * v0.d_nu - v1.d_nu * v0.d, "wronskian_nu");
  return b;
}

double PcfEvaluator::d(double z) const { return to_double(pcf_q(*c0_, z, false).d, "pcf_d"); }

PcfBundle pcf_bundle(double nu, double z, const Tolerances& tol) {
  return PcfEvaluator(nu, tol).bundle(z);
}

}  // namespace susyg::specfun
