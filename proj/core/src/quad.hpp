#pragma once

// Internal extended-precision helpers built on libquadmath.

#include <quadmath.h>

#include <cmath>

namespace susyg::detail {

using quad = __float128;

inline constexpr quad kPiQ = M_PIq;

inline quad qabs(quad x) { return x < 0 ? -x : x; }

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::nearbyint(x) == x;
}

// sin(pi x) and cos(pi x) with exact zeros at the integers and half-integers.
inline quad sinpi(quad x) {
  quad n = roundq(x);
  quad r = x - n;
  quad s = sinq(kPiQ * r);
  long long ni = static_cast<long long>(n);
  return (ni % 2 == 0) ? s : -s;
}

inline quad cospi(quad x) {
  quad n = roundq(x);
  quad r = x - n;
  long long ni = static_cast<long long>(n);
  quad c = (qabs(r) == quad(0.5)) ? 0 : cosq(kPiQ * r);
  return (ni % 2 == 0) ? c : -c;
}

// 1/Gamma(s), entire; exact zeros at non-positive integers.
inline quad rgamma(quad s) {
  if (s >= quad(0.5)) return 1 / tgammaq(s);
  return tgammaq(1 - s) * sinpi(s) / kPiQ;
}

// psi(x) for x not a non-positive integer.
inline quad digamma_q(quad x) {
  if (x < quad(0.5)) {
    return digamma_q(1 - x) - kPiQ * cospi(x) / sinpi(x);
  }
  quad acc = 0;
  while (x < 40) {
    acc -= 1 / x;
    x += 1;
  }
  // Asymptotic series with Bernoulli numbers B_2 .. B_28.
  static const quad bern[] = {
      quad(1.0) / 6,         -quad(1.0) / 30,         quad(1.0) / 42,          -quad(1.0) / 30,
      quad(5.0) / 66,        -quad(691.0) / 2730,     quad(7.0) / 6,           -quad(3617.0) / 510,
      quad(43867.0) / 798,   -quad(174611.0) / 330,   quad(854513.0) / 138,    -quad(236364091.0) / 2730,
      quad(8553103.0) / 6,   -quad(23749461029.0) / 870};
  quad inv2 = 1 / (x * x);
  quad p = inv2;
  quad s = 0;
  for (int k = 1; k <= 14; ++k) {
    s += bern[k - 1] / (2 * k) * p;
    p *= inv2;
  }
  return acc + logq(x) - 1 / (2 * x) - s;
}

// psi(s)/Gamma(s), entire. Near the poles the reflection form
// Gamma(1-s)[sin(pi s) psi(1-s)/pi - cos(pi s)] has no cancellation.
inline quad psi_over_gamma(quad s) {
  if (s >= quad(0.5)) return digamma_q(s) / tgammaq(s);
  return tgammaq(1 - s) * (sinpi(s) * digamma_q(1 - s) / kPiQ - cospi(s));
}

}  // namespace susyg::detail
