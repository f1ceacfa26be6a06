#include "bianchi/lfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "bianchi/error.hpp"
#include "bianchi/special.hpp"

namespace bianchi {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2j} / (2j)! for j = 1..14.
constexpr double kBernoulliOverFactorial[14] = {
    8.3333333333333333e-02,  -1.3888888888888889e-03, 3.3068783068783069e-05,
    -8.2671957671957672e-07, 2.0876756987868099e-08,  -5.2841901386874932e-10,
    1.3382536530684679e-11,  -3.3896802963225829e-13, 8.5860620562778446e-15,
    -2.1748686985580619e-16, 5.5090028283602295e-18,  -1.3954464685812523e-19,
    3.5347070396294675e-21,  -8.9535174270375469e-23};
constexpr int kEulerMaclaurinTerms = 14;

// Value with its derivative in s.
struct Dual {
  cplx v{0.0};
  cplx d{0.0};
  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
  friend Dual operator*(const Dual& a, cplx c) { return {a.v * c, a.d * c}; }
  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
};

// x^{-s} as a dual in s.
inline Dual power_neg(double logx, cplx s) {
  const cplx v = std::exp(-s * logx);
  return {v, -logx * v};
}

int em_cutoff(cplx s) { return static_cast<int>(std::ceil(std::abs(s) + 2.0 * kEulerMaclaurinTerms)) / 2 + 8; }

// Euler-Maclaurin tail of the Hurwitz zeta sum starting at x: sum_{k>=0} (x+k)^{-s} minus nothing,
// i.e. x^{1-s}/(s-1) + x^{-s}/2 + sum_j B_2j/(2j)! (s)_{2j-1} x^{-s-2j+1}. Also returns the size of
// the first omitted correction as an error estimate.
Dual em_tail(cplx s, double x, double* err) {
  const double lx = std::log(x);
  const Dual xs = power_neg(lx, s);  // x^{-s}
  Dual out;
  // x^{1-s}/(s-1)
  if (s == cplx(1.0, 0.0)) {
    // Finite part; the 1/(s-1) pieces cancel across the residue classes of a
    // nontrivial character.
    out.v = -lx;
    out.d = 0.5 * lx * lx;
  } else {
    const cplx inv = 1.0 / (s - 1.0);
    out.v = x * xs.v * inv;
    out.d = x * (xs.d * inv - xs.v * inv * inv);
  }
  out += xs * 0.5;
  Dual poch{s, 1.0};  // (s)_1
  double xpow = 1.0 / x;
  Dual term;
  for (int j = 1; j <= kEulerMaclaurinTerms; ++j) {
    term = poch * xs * (kBernoulliOverFactorial[j - 1] * xpow);
    out += term;
    // (s)_{2j+1} = (s)_{2j-1} (s+2j-1)(s+2j)
    poch = poch * Dual{s + (2.0 * j - 1.0), 1.0} * Dual{s + 2.0 * j, 1.0};
    xpow /= x * x;
  }
  if (err) *err = std::abs(term.v) * std::abs(s + 2.0 * kEulerMaclaurinTerms) / (2.0 * kPi * x);
  return out;
}

void check_region(cplx s, const char* who) {
  if (!(s.real() >= kZetaMinRe && s.real() <= kZetaMaxRe && std::abs(s.imag()) <= kZetaMaxIm))
    throw Error(ErrorCode::OutOfRange, std::string(who) + ": argument outside the supported region");
}

struct Evaluated {
  Dual value;
  double abs_err = 0.0;
  double magnitude = 0.0;  // scale of the summed terms, for the rounding estimate
};

// sum_{n>=1} chi(n) n^{-s} for a character of modulus q given by the table chi[0..q-1].
Evaluated dirichlet_series_em(const std::vector<int>& chi, cplx s) {
  const int q = static_cast<int>(chi.size());
  const int N = em_cutoff(s);
  Evaluated out;
  // Partial sum over n < qN, then per residue class the tail from k = N.
  const long long limit = static_cast<long long>(q) * N;
  double mag = 0.0;
  for (long long n = 1; n < limit; ++n) {
    const int c = chi[n % q];
    if (c == 0) continue;
    const Dual t = power_neg(std::log(static_cast<double>(n)), s);
    mag += std::abs(t.v);
    if (c > 0)
      out.value += t;
    else
      out.value += t * cplx(-1.0);
  }
  // q^{-s} sum_a chi(a) tail(s, N + a/q), a = 0..q-1
  const Dual qs = power_neg(std::log(static_cast<double>(q)), s);
  Dual tails;
  double err = 0.0;
  for (int a = 0; a < q; ++a) {
    const int c = chi[a];
    if (c == 0) continue;
    double e = 0.0;
    const Dual t = em_tail(s, N + static_cast<double>(a) / q, &e);
    mag += std::abs(t.v) * std::abs(qs.v);
    err += e;
    tails += c > 0 ? t : t * cplx(-1.0);
  }
  out.value += qs * tails;
  out.abs_err = err * std::abs(qs.v);
  out.magnitude = mag;
  return out;
}

const std::vector<int>& trivial_character() {
  static const std::vector<int> chi{1};
  return chi;
}

const std::vector<int>& character_table(const FieldContext& ctx) {
  static std::mutex mu;
  static std::map<int, std::vector<int>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& t = tables[ctx.d_K()];
  if (t.empty()) {
    const int q = ctx.abs_dk();
    t.resize(q);
    for (int n = 0; n < q; ++n) t[n] = kronecker_symbol(ctx.d_K(), n);
  }
  return t;
}

ZetaValue pack(cplx s, const Evaluated& e) {
  ZetaValue z;
  z.s = s;
  z.value = e.value.v;
  z.method = ZetaMethod::EulerMaclaurin;
  const double mag = std::max(std::abs(e.value.v), 1e-300);
  z.est_error = (e.abs_err + 4e-16 * e.magnitude) / mag;
  return z;
}

// Left of Re s = 0 the direct sums cancel badly; reflect through
//   zeta(s)    = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
//   L(s, chi)  = q^{1/2-s} 2^s pi^{s-1} cos(pi s/2) Gamma(1-s) L(1-s, chi)   (chi odd, primitive, real)
// The trigonometric factor is carried divided by e^{|Im(pi s/2)|} and that
// scale folded into the Gamma exponent, so nothing overflows at large |Im s|.
constexpr double kReflectBelow = 0.0;

struct Reflected {
  Dual value;
  double est_error = 0.0;
  bool used = false;
};

Reflected reflect(const std::vector<int>& chi, bool odd, cplx s) {
  Reflected out;
  if (s.real() >= kReflectBelow) return out;
  const double q = static_cast<double>(chi.size());
  const cplx z = kPi * s / 2.0;
  const cplx I(0.0, 1.0);
  cplx sh, ch;  // sin z and cos z times e^{-|Im z|}
  if (z.imag() >= 0.0) {
    const cplx e2 = std::exp(2.0 * I * z), ph = std::exp(-I * z.real());
    sh = ph * (e2 - 1.0) / (2.0 * I);
    ch = ph * (e2 + 1.0) / 2.0;
  } else {
    const cplx e2 = std::exp(-2.0 * I * z), ph = std::exp(I * z.real());
    sh = ph * (1.0 - e2) / (2.0 * I);
    ch = ph * (1.0 + e2) / 2.0;
  }
  const cplx logp = (0.5 - s) * std::log(q) + s * std::log(2.0 * kPi) - std::log(kPi) + log_gamma(1.0 - s) +
                    std::abs(z.imag());
  const cplx P = std::exp(logp);
  const cplx dlog = -std::log(q) + std::log(2.0 * kPi) - digamma(1.0 - s);
  const cplx trig = odd ? ch : sh;
  const cplx dtrig = odd ? -kPi / 2.0 * sh : kPi / 2.0 * ch;
  const Evaluated inner = dirichlet_series_em(chi, 1.0 - s);
  const cplx B = P * trig, dB = P * (dlog * trig + dtrig);
  out.value.v = B * inner.value.v;
  // d/ds of f(1-s) is -f'(1-s)
  out.value.d = dB * inner.value.v - B * inner.value.d;
  const double mag = std::max(std::abs(inner.value.v), 1e-300);
  out.est_error = (inner.abs_err + 4e-16 * inner.magnitude) / mag + 1e-14;
  out.used = true;
  return out;
}

ZetaValue pack_reflected(cplx s, const Reflected& r) {
  ZetaValue z;
  z.s = s;
  z.value = r.value.v;
  z.method = ZetaMethod::FunctionalEquation;
  z.est_error = r.est_error;
  return z;
}

}  // namespace

const char* zeta_method_name(ZetaMethod m) {
  switch (m) {
    case ZetaMethod::Series: return "series";
    case ZetaMethod::EulerMaclaurin: return "euler_maclaurin";
    case ZetaMethod::FunctionalEquation: return "functional_equation";
  }
  return "unknown";
}

const char* zero_source_name(ZeroSource s) {
  return s == ZeroSource::RiemannFactor ? "riemann_factor" : "dirichlet_factor";
}

int kronecker_symbol(int d, long long n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (d < 0) result = -result;
  }
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    const int r = ((d % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (d / n), n odd positive.
  long long a = ((d % n) + n) % n;
  long long m = n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const long long r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

ValueAndDerivative riemann_zeta_d(cplx s) {
  check_region(s, "riemann_zeta");
  if (s == cplx(1.0, 0.0)) throw Error(ErrorCode::Pole, "riemann_zeta: pole at s = 1");
  if (const Reflected r = reflect(trivial_character(), false, s); r.used) return {r.value.v, r.value.d};
  const Evaluated e = dirichlet_series_em(trivial_character(), s);
  return {e.value.v, e.value.d};
}

ZetaValue riemann_zeta(cplx s) {
  check_region(s, "riemann_zeta");
  if (s == cplx(1.0, 0.0)) throw Error(ErrorCode::Pole, "riemann_zeta: pole at s = 1");
  if (const Reflected r = reflect(trivial_character(), false, s); r.used) return pack_reflected(s, r);
  return pack(s, dirichlet_series_em(trivial_character(), s));
}

ValueAndDerivative dirichlet_l_d(const FieldContext& ctx, cplx s) {
  check_region(s, "dirichlet_l");
  if (const Reflected r = reflect(character_table(ctx), true, s); r.used) return {r.value.v, r.value.d};
  const Evaluated e = dirichlet_series_em(character_table(ctx), s);
  return {e.value.v, e.value.d};
}

ZetaValue dirichlet_l(const FieldContext& ctx, cplx s) {
  check_region(s, "dirichlet_l");
  if (const Reflected r = reflect(character_table(ctx), true, s); r.used) return pack_reflected(s, r);
  return pack(s, dirichlet_series_em(character_table(ctx), s));
}

ValueAndDerivative dedekind_zeta_d(const FieldContext& ctx, cplx s) {
  const auto z = riemann_zeta_d(s);
  const auto l = dirichlet_l_d(ctx, s);
  return {z.value * l.value, z.derivative * l.value + z.value * l.derivative};
}

ZetaValue dedekind_zeta(const FieldContext& ctx, cplx s) {
  if (s == cplx(1.0, 0.0)) throw Error(ErrorCode::Pole, "dedekind_zeta: pole at s = 1");
  const ZetaValue z = riemann_zeta(s);
  const ZetaValue l = dirichlet_l(ctx, s);
  ZetaValue out;
  out.s = s;
  out.value = z.value * l.value;
  out.method = z.method;
  out.est_error = z.est_error + l.est_error;
  return out;
}

cplx log_completed_xi(const FieldContext& ctx, cplx s) {
  if (s == cplx(0.0, 0.0) || s == cplx(1.0, 0.0))
    throw Error(ErrorCode::Pole, "completed_xi: pole at s = 0 or s = 1");
  const ZetaValue z = dedekind_zeta(ctx, s);
  return s * std::log(ctx.sqrt_abs_dk() / (2.0 * kPi)) + log_gamma(s) + std::log(z.value);
}

ZetaValue completed_xi(const FieldContext& ctx, cplx s) {
  if (s == cplx(0.0, 0.0) || s == cplx(1.0, 0.0))
    throw Error(ErrorCode::Pole, "completed_xi: pole at s = 0 or s = 1");
  const ZetaValue z = dedekind_zeta(ctx, s);
  ZetaValue out = z;
  out.value = std::exp(s * std::log(ctx.sqrt_abs_dk() / (2.0 * kPi)) + log_gamma(s)) * z.value;
  out.est_error = z.est_error + 1e-14;
  return out;
}

double dedekind_zeta_residue(const FieldContext& ctx) {
  return 2.0 * kPi / (ctx.unit_count() * ctx.sqrt_abs_dk());
}

double printed_residue(const FieldContext& ctx) { return 2.0 * kPi / ctx.unit_count(); }

double hardy_z_riemann(double t) {
  const cplx s(0.5, t);
  const double theta = log_gamma(cplx(0.25, t / 2)).imag() - t / 2 * std::log(kPi);
  return (std::exp(cplx(0.0, theta)) * riemann_zeta(s).value).real();
}

double hardy_z_dirichlet(const FieldContext& ctx, double t) {
  const cplx s(0.5, t);
  const double q = ctx.abs_dk();
  const double theta = log_gamma(cplx(0.75, t / 2)).imag() + t / 2 * std::log(q / kPi);
  return (std::exp(cplx(0.0, theta)) * dirichlet_l(ctx, s).value).real();
}

namespace {

template <class F>
void scan_sign_changes(F f, double t_max, ZeroSource source, std::vector<CriticalZero>& out) {
  const double step = 0.01;
  double t0 = 1e-3;
  double f0 = f(t0);
  while (t0 < t_max) {
    const double t1 = std::min(t0 + step, t_max);
    const double f1 = f(t1);
    if ((f0 < 0.0) != (f1 < 0.0) || f1 == 0.0) {
      double lo = t0, hi = t1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      if (hi - lo > 1e-6) {
        std::ostringstream msg;
        msg << "find_critical_zeros: bracket refinement failed on [" << lo << ", " << hi << "]";
        throw Error(ErrorCode::Convergence, msg.str());
      }
      out.push_back({0.5 * (lo + hi), source, lo, hi});
    }
    t0 = t1;
    f0 = f1;
  }
}

}  // namespace

std::vector<CriticalZero> find_critical_zeros(const FieldContext& ctx, double t_max) {
  if (!(t_max > 0.0) || t_max > 120.0)
    throw Error(ErrorCode::OutOfRange, "find_critical_zeros: t_max must be in (0, 120]");
  std::vector<CriticalZero> zeros;
  scan_sign_changes([](double t) { return hardy_z_riemann(t); }, t_max, ZeroSource::RiemannFactor, zeros);
  scan_sign_changes([&ctx](double t) { return hardy_z_dirichlet(ctx, t); }, t_max, ZeroSource::DirichletFactor,
                    zeros);
  std::sort(zeros.begin(), zeros.end(), [](const CriticalZero& a, const CriticalZero& b) { return a.gamma < b.gamma; });
  return zeros;
}

int argument_principle_count(const FieldContext& ctx, double T) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "argument_principle_count: T must be positive");
  const double lq = std::log(ctx.sqrt_abs_dk() / (2.0 * kPi));
  auto log_lambda = [&](cplx s) {
    return std::log(s) + std::log(s - 1.0) + s * lq + log_gamma(s) + std::log(dedekind_zeta(ctx, s).value);
  };
  double total = 0.0;
  auto walk = [&](cplx from, cplx to) {
    cplx prev = log_lambda(from);
    double u = 0.0;
    double h = 0.05;
    while (u < 1.0) {
      const double next_u = std::min(1.0, u + h);
      const cplx cur = log_lambda(from + (to - from) * next_u);
      const double dphi = std::arg(std::exp(cur - prev - cplx((cur - prev).real(), 0.0)));
      if (std::abs(dphi) > 0.5 && h > 1e-6) {
        h *= 0.5;
        continue;
      }
      total += dphi;
      prev = cur;
      u = next_u;
      h = std::min(h * 1.5, 0.05);
    }
  };
  const double a = 3.0;
  walk(cplx(a, 0.0), cplx(a, T));
  walk(cplx(a, T), cplx(0.5, T));
  return static_cast<int>(std::lround(total / kPi));
}

}  // namespace bianchi
