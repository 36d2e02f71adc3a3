#include "susyg/coherent.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "susyg/errors.hpp"
#include "susyg/parallel.hpp"

namespace susyg::coherent {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Stop once |term|^2 is this far (natural log) below the peak.
constexpr double kTailDrop = 80.0;
// |c|^2 at the cap must at least be below this.
constexpr double kTailMass = 1e-14;

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// log|G(K,n)|^{-2} r^{2n} terms and the signs of G, built incrementally.
struct Terms {
  std::vector<double> log_sq;  // log(r^{2n}/G^2)
  std::vector<int> sign;
};

enum class Weight { bgcs, gpcs };

Terms build_terms(const LadderSpec& spec, Weight w, int K, int N, double r) {
  Terms t;
  const double lr = r > 0.0 ? std::log(r) : kNegInf;
  double log_prod = 0.0;
  int sgn = 1;
  double peak = kNegInf;
  const int cap = N == kInfinite ? kMaxTerms : N + 1;
  for (int n = 0; n < cap; ++n) {
    if (n > 0) {
      const double g = spec.g(K + n);
      if (g == 0.0) throw InvalidAction("coherent state crosses a root of g at level " + std::to_string(K + n));
      log_prod += std::log(std::abs(g));
      if (g < 0.0) sgn = -sgn;
    }
    const double lf = 0.5 * std::lgamma(n + K + 1.0);
    const double log_g = w == Weight::bgcs ? lf + log_prod : std::lgamma(n + 1.0) - lf - log_prod;
    const double lpow = n == 0 ? 0.0 : 2.0 * n * lr;
    const double x = lpow - 2.0 * log_g;
    t.log_sq.push_back(x);
    t.sign.push_back(sgn);
    if (n == 0 && r == 0.0) break;
    peak = std::max(peak, x);
    if (N == kInfinite && n > 0 && x < t.log_sq[n - 1] && x < peak - kTailDrop) break;
  }
  if (N == kInfinite && static_cast<int>(t.log_sq.size()) == kMaxTerms) {
    const double tail = t.log_sq.back() - log_sum_exp(t.log_sq);
    if (tail > std::log(kTailMass)) {
      throw NonConvergence("coherent state needs more than " + std::to_string(kMaxTerms) + " terms");
    }
  }
  return t;
}

CoherentState assemble(const LadderSpec& spec, Family fam, Weight w, int K, int N, Complex alpha) {
  const double r = std::abs(alpha);
  const double th = std::arg(alpha);
  Terms t = build_terms(spec, w, K, N, r);
  const double ls = log_sum_exp(t.log_sq);
  CoherentState cs;
  cs.family = fam;
  cs.spec = spec;
  cs.K = K;
  cs.N = N;
  cs.alpha = alpha;
  cs.log_norm = -0.5 * ls;
  cs.coeffs.resize(t.log_sq.size());
  for (size_t n = 0; n < t.log_sq.size(); ++n) {
    const double mag = std::exp(0.5 * (t.log_sq[n] - ls));
    cs.coeffs[n] = std::polar(t.sign[n] * mag, static_cast<double>(n) * th);
  }
  return cs;
}

double log_g_impl(const LadderSpec& spec, Weight w, int K, int n, int* sign) {
  if (n < 0) throw ConfigError("G(K, n): n must be >= 0");
  double log_prod = 0.0;
  int sgn = 1;
  for (int m = 1; m <= n; ++m) {
    const double g = spec.g(K + m);
    if (g == 0.0) throw InvalidAction("G(K, n) crosses a root of g");
    log_prod += std::log(std::abs(g));
    if (g < 0.0) sgn = -sgn;
  }
  if (sign) *sign = sgn;
  const double lf = 0.5 * std::lgamma(n + K + 1.0);
  return w == Weight::bgcs ? lf + log_prod : std::lgamma(n + 1.0) - lf - log_prod;
}

bool same_spec(const LadderSpec& a, const LadderSpec& b) {
  return a.g_values == b.g_values && a.roots == b.roots;
}

}  // namespace

std::string_view to_string(LadderKind k) { return k == LadderKind::diagonal ? "diagonal" : "nondiagonal"; }

std::string_view to_string(Family f) {
  switch (f) {
    case Family::BGCS: return "BGCS";
    case Family::GPCS: return "GPCS";
    case Family::standard: return "standard";
  }
  return "?";
}

std::string_view to_string(MeasureFamily f) {
  switch (f) {
    case MeasureFamily::standard: return "standard";
    case MeasureFamily::bgcs_above_root: return "bgcs_above_root";
    case MeasureFamily::gpcs_ground: return "gpcs_ground";
  }
  return "?";
}

double LadderSpec::g(int n) const {
  auto it = g_values.find(n);
  return it == g_values.end() ? 1.0 : it->second;
}

bool LadderSpec::is_root(int n) const { return std::binary_search(roots.begin(), roots.end(), n); }

bool LadderSpec::trivial() const {
  return std::all_of(g_values.begin(), g_values.end(), [](const auto& kv) { return kv.second == 1.0; });
}

double CoherentState::theta() const {
  double t = std::arg(alpha);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return t;
}

LadderSpec make_ladder(const SusyContext& ctx, LadderKind kind, const std::map<int, double>& f_values) {
  LadderSpec s;
  s.kind = kind;
  for (const auto& [n, f] : f_values) {
    if (n < 0) throw ConfigError("ladder: level index must be >= 0");
    if (!std::isfinite(f)) throw ConfigError("ladder: f values must be finite");
    s.g_values[n] = f;
  }
  if (ctx.on_spectrum()) {
    const int j = ctx.j;
    s.j = j;
    const bool critical_nondiag = kind == LadderKind::nondiagonal && ctx.case_tag == susy::Case::CII;
    if (critical_nondiag) {
      for (int n : {j, j + 1}) s.g_values[n] = s.g(n) / std::numbers::sqrt2;
    } else {
      s.needs_roots = true;
      s.g_values[j] = 0.0;
      s.g_values[j + 1] = 0.0;
    }
  }
  for (const auto& [n, g] : s.g_values) {
    if (g == 0.0) s.roots.push_back(n);
  }
  return s;
}

Action ladder_action(const LadderSpec& spec, const SusyContext& ctx, Direction dir, bg::Label label) {
  if (label.is_nu) {
    switch (ctx.case_tag) {
      case susy::Case::CIV: throw NoSuchState("no eigenstate at E_nu = 0 in case CIV");
      case susy::Case::CIII: return {0.0, std::nullopt};
      default: label = bg::Label::level(ctx.j);
    }
  }
  const int n = label.n;
  if (n < 0) throw ConfigError("ladder_action: level index must be >= 0");
  // Level whose g enters the coefficient.
  const int m = dir == Direction::lower ? n : n + 1;
  const double g = spec.g(m);
  if (spec.needs_roots && (m == spec.j || m == spec.j + 1) && g != 0.0) {
    throw InvalidAction("ladder action through level " + std::to_string(m) +
                        " leaves the state space; g needs a root there");
  }
  if (dir == Direction::lower) {
    if (n == 0) return {0.0, std::nullopt};
    const double c = g * std::sqrt(double(n));
    if (c == 0.0) return {0.0, std::nullopt};
    return {c, bg::Label::level(n - 1)};
  }
  const double c = g * std::sqrt(double(n + 1));
  if (c == 0.0) return {0.0, std::nullopt};
  return {c, bg::Label::level(n + 1)};
}

double log_g_bgcs(const LadderSpec& spec, int K, int n, int* sign) {
  return log_g_impl(spec, Weight::bgcs, K, n, sign);
}

double log_g_gpcs(const LadderSpec& spec, int K, int n, int* sign) {
  return log_g_impl(spec, Weight::gpcs, K, n, sign);
}

CoherentState bgcs(const LadderSpec& spec, const SusyContext&, Complex alpha, int n_max) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw ConfigError("alpha must be finite");
  const Family fam = spec.trivial() ? Family::standard : Family::BGCS;
  const int K = spec.top_root();
  CoherentState cs = assemble(spec, fam, Weight::bgcs, K, n_max > 0 ? n_max : kInfinite, alpha);
  cs.N = kInfinite;
  return cs;
}

CoherentState gpcs(const LadderSpec& spec, const SusyContext&, Complex alpha, int extremal) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw ConfigError("alpha must be finite");
  if (extremal != 0 && !spec.is_root(extremal)) {
    throw ConfigError("gpcs: extremal index must be 0 or a root of g");
  }
  auto next = std::upper_bound(spec.roots.begin(), spec.roots.end(), extremal);
  int N = kInfinite;
  if (next != spec.roots.end()) {
    if (*next - extremal == 1 && spec.is_root(extremal)) {
      throw ConsecutiveRoots("gpcs: roots " + std::to_string(extremal) + " and " + std::to_string(*next) +
                             " are consecutive");
    }
    N = *next - extremal - 1;
  }
  const Family fam = spec.trivial() && N == kInfinite ? Family::standard : Family::GPCS;
  return assemble(spec, fam, Weight::gpcs, extremal, N, alpha);
}

CoherentState standard_cs(Complex alpha, int n_max) {
  LadderSpec s;
  if (n_max > 0) {
    CoherentState cs = assemble(s, Family::standard, Weight::bgcs, 0, n_max, alpha);
    cs.N = kInfinite;
    return cs;
  }
  return assemble(s, Family::standard, Weight::bgcs, 0, kInfinite, alpha);
}

std::map<int, double> transition_probs(const CoherentState& cs) {
  std::map<int, double> p;
  for (int n = 0; n < cs.size(); ++n) p[cs.level(n)] = std::norm(cs.coeffs[n]);
  return p;
}

Complex inner_product(const CoherentState& a, const CoherentState& b) {
  if (a.family != b.family || a.K != b.K || a.N != b.N || !same_spec(a.spec, b.spec)) {
    throw ConfigError("inner_product: states belong to different families");
  }
  const Weight w = a.family == Family::GPCS ? Weight::gpcs : Weight::bgcs;
  // Series of N^{-2} at the complex argument conj(alpha_a) alpha_b.
  const Complex z = std::conj(a.alpha) * b.alpha;
  const double lz = std::abs(z) > 0.0 ? std::log(std::abs(z)) : kNegInf;
  const int len = std::max(a.size(), b.size());
  Terms t = build_terms(a.spec, w, a.K, len - 1, 1.0);  // log(1/G^2), signs
  Complex s{0.0, 0.0};
  for (int n = 0; n < len; ++n) {
    if (n > 0 && lz == kNegInf) break;
    const double lm = (n == 0 ? 0.0 : n * lz) + t.log_sq[n] + a.log_norm + b.log_norm;
    s += std::polar(std::exp(lm), n * std::arg(z));
  }
  return s;
}

double measure_check(MeasureFamily family, int j, int n_probe) {
  if (n_probe < 0) throw ConfigError("measure_check: n_probe must be >= 0");
  if (family != MeasureFamily::standard && j < 1) {
    throw ConfigError("measure_check: root level j must be >= 1");
  }
  LadderSpec spec;
  int K = 0, N = kInfinite, top = n_probe;
  Weight w = Weight::bgcs;
  switch (family) {
    case MeasureFamily::standard: break;
    case MeasureFamily::bgcs_above_root:
      spec.g_values = {{j, 0.0}, {j + 1, 0.0}};
      spec.roots = {j, j + 1};
      K = j + 1;
      break;
    case MeasureFamily::gpcs_ground:
      spec.g_values = {{j, 0.0}, {j + 1, 0.0}};
      spec.roots = {j, j + 1};
      N = j - 1;
      top = std::min(n_probe, N);
      w = Weight::gpcs;
      break;
  }
  // N^2(r) from the defining series, m(r) in closed form. For the BGCS
  // r^{2j+2} e^{-r^2} / N_closed^2 = P(j+1, r^2); for the GPCS
  // e^{-r^2} / N_closed^2 = Q(j, r^2).
  auto norm2 = [&](double r) { return std::exp(-log_sum_exp(build_terms(spec, w, K, N, r).log_sq)); };
  auto m = [&](double r) {
    const double x = r * r;
    switch (family) {
      case MeasureFamily::standard: return 1.0 / std::numbers::pi;
      case MeasureFamily::bgcs_above_root: return boost::math::gamma_p(j + 1, x) / std::numbers::pi;
      case MeasureFamily::gpcs_ground: return boost::math::gamma_q(j, x) / std::numbers::pi;
    }
    return 0.0;
  };
  double worst = 0.0;
  for (int n = 0; n <= top; ++n) {
    auto integrand = [&](double r) {
      if (r <= 0.0) return 0.0;
      return norm2(r) * m(r) * std::pow(r, 2 * n + 1);
    };
    const double peak = std::sqrt(n + K + 1.0);
    double err = 0.0;
    double val = 0.0;
    for (auto [a, b] : {std::pair{0.0, peak}, std::pair{peak, peak + 10.0}}) {
      double e = 0.0;
      val += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, 1e-14, &e);
      err += e;
    }
    if (!(err <= 1e-10 * std::abs(val))) {
      throw QuadratureFailure("measure_check: quadrature error " + std::to_string(err));
    }
    const double lg = w == Weight::bgcs ? log_g_bgcs(spec, K, n) : log_g_gpcs(spec, K, n);
    const double target = std::exp(2.0 * lg) / (2.0 * std::numbers::pi);
    worst = std::max(worst, std::abs(val / target - 1.0));
  }
  return worst;
}

namespace {

// Coefficients below this magnitude are dropped from position-space sums.
constexpr double kCoeffFloor = 1e-17;

}  // namespace

int significant_terms(const CSamples& coeffs) {
  int count = static_cast<int>(coeffs.size());
  while (count > 1 && std::abs(coeffs[count - 1]) < kCoeffFloor) --count;
  return count;
}

LevelTable::LevelTable(const susy::Transform& t, int K, int count) : t_(&t), K_(K) {
  if (K < 0 || count < 1) throw ConfigError("LevelTable: bad level range");
  auto sp = bg::eigenspinors(t, K, count);
  for (auto& s : sp) {
    a_.push_back(std::move(s.upper));
    b_.push_back(std::move(s.lower));
    da_.push_back(std::move(s.upper_dx));
    db_.push_back(std::move(s.lower_dx));
  }
}

bg::Observables LevelTable::observables(const CSamples& coeffs) const {
  const int count = std::min(significant_terms(coeffs), size());
  for (size_t n = count; n < coeffs.size(); ++n) {
    if (std::abs(coeffs[n]) >= kCoeffFloor) throw ConfigError("LevelTable: too few levels for coefficients");
  }
  // Re and Im of conj(c_n) c_m.
  std::vector<double> re(count * count), im(count * count);
  for (int n = 0; n < count; ++n) {
    for (int m = 0; m < count; ++m) {
      const Complex w = std::conj(coeffs[n]) * coeffs[m];
      re[n * count + m] = w.real();
      im[n * count + m] = w.imag();
    }
  }
  const auto& eta = t_->eta();
  const int size = t_->grid().size();
  const auto& s = *this;
  bg::Observables o{Samples(size), Samples(size), Samples(size)};
  parallel_for(size, [&](int i) {
    double rho = 0.0, jx = 0.0, jy = 0.0;
    const double e = eta[i];
    // Re(conj(c_n) c_m) is symmetric and Im antisymmetric in (n, m).
    for (int n = 0; n < count; ++n) {
      const double an = s.a_[n][i], bn = s.b_[n][i], dan = s.da_[n][i], dbn = s.db_[n][i];
      const double wd = re[n * count + n];
      rho += wd * (an * an + bn * bn);
      jy += wd * (bn * dan - an * dbn - e * an * bn);
      for (int m = n + 1; m < count; ++m) {
        const double am = s.a_[m][i], bm = s.b_[m][i], dam = s.da_[m][i], dbm = s.db_[m][i];
        const double wr = re[n * count + m], wi = im[n * count + m];
        rho += 2.0 * wr * (an * am + bn * bm);
        jx += wi * ((an * dbm + bn * dam + e * an * bm) - (am * dbn + bm * dan + e * am * bn));
        jy += wr * ((bn * dam - an * dbm) + (bm * dan - am * dbn) - e * (an * bm + am * bn));
      }
    }
    o.rho[i] = rho;
    o.jx[i] = 2.0 * jx;
    o.jy[i] = 2.0 * jy;
  });
  return o;
}

bg::Observables superposition_observables(const susy::Transform& t, int K, const CSamples& coeffs) {
  return LevelTable(t, K, significant_terms(coeffs)).observables(coeffs);
}

bg::Observables cs_observables(const CoherentState& cs, const susy::Transform& t) {
  return superposition_observables(t, cs.K, cs.coeffs);
}

Quadratures uncertainty(const CoherentState& cs) {
  // lambda(n) = g(E_n) sqrt(n): A- |n> = lambda(n) |n-1>.
  auto lambda = [&](int n) { return n <= 0 ? 0.0 : cs.spec.g(n) * std::sqrt(double(n)); };
  const int size = cs.size();
  auto c = [&](int i) { return i >= 0 && i < size ? cs.coeffs[i] : Complex{0.0, 0.0}; };
  Complex a{0.0, 0.0};
  for (int i = 1; i < size; ++i) a += std::conj(c(i - 1)) * lambda(cs.level(i)) * c(i);
  // Centered moments through B = A- - <A->, without cancellation:
  // v = B psi, u = B+ psi on relative indices -1 .. size.
  CSamples v(size + 1), u(size + 2);
  for (int i = -1; i < size; ++i) v[i + 1] = lambda(cs.level(i + 1)) * c(i + 1) - a * c(i);
  for (int i = -1; i <= size; ++i) u[i + 1] = lambda(cs.level(i)) * c(i - 1) - std::conj(a) * c(i);
  double bb = 0.0, bbd = 0.0;  // <B+B>, <BB+>
  Complex b2{0.0, 0.0};        // <B^2> = <B+ psi | B psi>
  for (int i = -1; i < size; ++i) {
    bb += std::norm(v[i + 1]);
    b2 += std::conj(u[i + 1]) * v[i + 1];
  }
  for (int i = -1; i <= size; ++i) bbd += std::norm(u[i + 1]);
  Quadratures q;
  q.mean_x = std::numbers::sqrt2 * a.real();
  q.mean_p = std::numbers::sqrt2 * a.imag();
  const double vx = std::max(0.0, 0.5 * (2.0 * b2.real() + bb + bbd));
  const double vp = std::max(0.0, 0.5 * (-2.0 * b2.real() + bb + bbd));
  q.mean_x2 = vx + q.mean_x * q.mean_x;
  q.mean_p2 = vp + q.mean_p * q.mean_p;
  q.dx = std::sqrt(vx);
  q.dp = std::sqrt(vp);
  q.product = q.dx * q.dp;
  q.commutator = std::abs(bbd - bb);
  return q;
}

double bgcs_product_closed(int j, double r) {
  if (j < 0) throw ConfigError("bgcs_product_closed: j must be >= 0");
  if (r == 0.0) return 0.5 * (1.0 + (j + 1));
  const double x = r * r;
  // P_{j+1} = e^{-r^2} r^{2j+2} / ((j+1)! P(j+1, r^2)).
  const double p = boost::math::gamma_p_derivative(j + 2.0, x) / boost::math::gamma_p(j + 1.0, x);
  return 0.5 * (1.0 + (j + 1) * p);
}

namespace {

// GPCS probabilities on levels 0..j-1 with g = 1 below the root.
std::vector<double> gpcs_ground_probs(int j, double r) {
  if (j < 1) throw ConfigError("gpcs closed form: j must be >= 1");
  std::vector<double> l(j);
  const double lr = r > 0.0 ? std::log(r) : kNegInf;
  for (int n = 0; n < j; ++n) l[n] = n == 0 ? 0.0 : 2.0 * n * lr - std::lgamma(n + 1.0);
  const double ls = log_sum_exp(l);
  for (double& x : l) x = std::exp(x - ls);
  return l;
}

}  // namespace

double gpcs_commutator_closed(int j, Complex alpha) {
  const auto p = gpcs_ground_probs(j, std::abs(alpha));
  return std::abs(1.0 - j * p[j - 1]);
}

double gpcs_product_closed(int j, Complex alpha) {
  const double r = std::abs(alpha), th = std::arg(alpha);
  const auto p = gpcs_ground_probs(j, r);
  const double p1 = p[j - 1], p2 = j >= 2 ? p[j - 2] : 0.0;
  const double r2 = r * r;
  const double u = (1.0 + 2.0 * r2 * p1) * (1.0 - p1) - r2 * p2;
  const double v = 2.0 * r2 * std::cos(2.0 * th) * ((1.0 - p1) * p1 - p2);
  return 0.5 * std::sqrt(std::max(0.0, u * u - v * v));
}

}  // namespace susyg::coherent
