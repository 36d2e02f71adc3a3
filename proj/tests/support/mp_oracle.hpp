#pragma once

// 50-digit reference values, independent of the library kernels.

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

template <class T>
T hyp1f1_series(const T& a, const T& b, const T& x) {
  T sum = 1, term = 1;
  const T eps = pow(T(10), -(std::numeric_limits<T>::digits10 - 2));
  for (int k = 0; k < 20000; ++k) {
    term *= (a + k) / (b + k) * x / (k + 1);
    sum += term;
    if (term == 0 || (k > 10 && abs(term) < abs(sum) * eps)) break;
  }
  return sum;
}

inline mp hyp1f1(const mp& a, const mp& b, const mp& x) { return hyp1f1_series(a, b, x); }

// 120 digits: at x = -50 the alternating series cancels ~42 digits.
inline double hyp1f1_wide(double a, double b, double x) {
  using wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;
  return static_cast<double>(hyp1f1_series(wide(a), wide(b), wide(x)));
}

inline mp rgamma(const mp& x) {
  if (x <= 0 && x == floor(x)) return 0;
  return 1 / boost::math::tgamma(x);
}

// D_nu(z) from the two Kummer series.
inline mp pcf_d(const mp& nu, const mp& z) {
  const mp half = mp(1) / 2;
  const mp x = z * z / 2;
  const mp pi = boost::math::constants::pi<mp>();
  return pow(mp(2), nu / 2) * exp(-z * z / 4) * sqrt(pi) *
         (rgamma((1 - nu) / 2) * hyp1f1(-nu / 2, half, x) -
          sqrt(mp(2)) * z * rgamma(-nu / 2) * hyp1f1((1 - nu) / 2, 3 * half, x));
}

// Central difference in nu at 50 digits; h^2 error is far below double.
inline mp pcf_d_dnu(const mp& nu, const mp& z) {
  const mp h("1e-15");
  return (pcf_d(nu + h, z) - pcf_d(nu - h, z)) / (2 * h);
}

inline double d(double nu, double z) { return static_cast<double>(pcf_d(mp(nu), mp(z))); }
inline double d_dnu(double nu, double z) { return static_cast<double>(pcf_d_dnu(mp(nu), mp(z))); }

inline double wronskian_nu(double nu, double z) {
  const mp n(nu), x(z);
  return static_cast<double>(pcf_d(n + 1, x) * pcf_d_dnu(n, x) - pcf_d_dnu(n + 1, x) * pcf_d(n, x));
}

}  // namespace oracle
