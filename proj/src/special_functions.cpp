#include "bianchi/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>

#include "bianchi/error.hpp"
#include "bianchi/quadrature.hpp"

namespace bianchi {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2k} for k = 1..10.
constexpr double kBernoulli[10] = {1.0 / 6,         -1.0 / 30,       1.0 / 42,
                                   -1.0 / 30,       5.0 / 66,        -691.0 / 2730,
                                   7.0 / 6,         -3617.0 / 510,   43867.0 / 798,
                                   -174611.0 / 330};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// Smallest shift n with Re(z+n) >= 0 and |z+n| >= 16, where Stirling is accurate.
int stirling_shift(cplx z) {
  int n = 0;
  if (z.real() < 0.0) n = static_cast<int>(std::ceil(-z.real()));
  while (std::abs(z + static_cast<double>(n)) < 16.0) ++n;
  return n;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw Error(ErrorCode::Domain, "log_gamma: pole at non-positive integer");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::Domain, "log_gamma: non-finite argument");
  const int n = stirling_shift(z);
  cplx correction = 0.0;
  for (int k = 0; k < n; ++k) correction += std::log(z + static_cast<double>(k));
  const cplx w = z + static_cast<double>(n);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
    p *= inv2;
  }
  const cplx stirling = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
  return stirling - correction;
}

cplx digamma(cplx z) {
  if (is_nonpositive_integer(z)) throw Error(ErrorCode::Domain, "digamma: pole at non-positive integer");
  const int n = stirling_shift(z);
  cplx correction = 0.0;
  for (int k = 0; k < n; ++k) correction += 1.0 / (z + static_cast<double>(k));
  const cplx w = z + static_cast<double>(n);
  const cplx inv2 = 1.0 / (w * w);
  cplx series = 0.0;
  cplx p = inv2;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * p;
    p *= inv2;
  }
  return std::log(w) - 0.5 / w - series - correction;
}

// K_nu(x) = (1/2) int exp(-x cosh t + nu t) dt along t = tau + i phi(tau), with
// sin phi = min-capped b / (x cosh tau), b = Im nu >= 0. On this path the phase
// b tau is largely cancelled by the sinh term and the modulus carries the
// exp(-pi b / 2) factor explicitly, which the scaling removes.
ScaledBesselValue bessel_k_scaled(cplx nu_in, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::Domain, "bessel_k_scaled: x must be positive");
  const cplx nu = nu_in.imag() < 0.0 ? -nu_in : nu_in;
  const double a = nu.real(), b = nu.imag();
  constexpr double m = 16.0;

  struct Sample {
    double log_mod;
    double phase;
    cplx jac;
  };
  auto sample = [&](double tau) -> Sample {
    const double ch = std::cosh(tau), sh = std::sinh(tau), th = std::tanh(tau);
    double us = 0.0, cosphi = 1.0, dphi = 0.0, comp = kPi / 2;  // comp = pi/2 - phi
    if (b > 0.0) {
      const double lu = std::log(b) - std::log(x) - std::log(ch);
      double one_minus_us2, dus_factor;
      if (lu > 0.0) {
        const double tinv = std::exp(-m * lu);  // u^{-m}
        const double l1p = std::log1p(tinv);
        us = std::exp(-l1p / m);
        one_minus_us2 = -std::expm1(-(2.0 / m) * l1p);
        // u (1+u^m)^{-1-1/m} = u^{-m} (1+u^{-m})^{-1-1/m}
        dus_factor = tinv * std::exp(-(1.0 + 1.0 / m) * l1p);
      } else {
        const double um = std::exp(m * lu);
        const double l1p = std::log1p(um);
        const double u = std::exp(lu);
        us = u * std::exp(-l1p / m);
        one_minus_us2 = (1.0 - us) * (1.0 + us);
        dus_factor = u * std::exp(-(1.0 + 1.0 / m) * l1p);
      }
      cosphi = std::sqrt(std::max(one_minus_us2, 0.0));
      comp = std::atan2(cosphi, us);
      dphi = cosphi > 0.0 ? -th * dus_factor / cosphi : 0.0;
    }
    const double phi = kPi / 2 - comp;
    Sample s;
    s.log_mod = -x * ch * cosphi + a * tau + b * comp;
    s.phase = -x * sh * us + b * tau + a * phi;
    s.jac = cplx(1.0, dphi);
    return s;
  };

  // Bracket the region where the modulus is within e^-46 of its maximum.
  double peak = sample(0.0).log_mod;
  const double cut = 46.0;
  auto extend = [&](double dir) {
    double tau = 0.0, step = 0.125;
    for (int i = 0; i < 4000; ++i) {
      tau += dir * step;
      const double lm = sample(tau).log_mod;
      peak = std::max(peak, lm);
      const double past_turn = x * std::sinh(std::abs(tau)) - std::abs(a) - 1.0;
      if (past_turn > 0.0 && x * std::cosh(tau) > 2.0 * b && lm < peak - cut) break;
      if (std::abs(tau) > 8.0) step = 0.25;
    }
    return tau;
  };
  const double hi = extend(1.0);
  const double lo = extend(-1.0);

  auto term = [&](double tau, double& absval) -> cplx {
    const Sample s = sample(tau);
    const double mod = std::exp(s.log_mod - peak);
    absval = mod * std::abs(s.jac);
    return mod * cplx(std::cos(s.phase), std::sin(s.phase)) * s.jac;
  };

  int intervals = 64;
  double h = (hi - lo) / intervals;
  cplx sum = 0.0;
  double abs_sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    double av;
    const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
    sum += w * term(lo + i * h, av);
    abs_sum += w * av;
  }
  cplx estimate = sum * h;
  bool converged = false;
  double prev_change = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 14; ++level) {
    cplx mid = 0.0;
    double mid_abs = 0.0;
    for (int i = 0; i < intervals; ++i) {
      double av;
      mid += term(lo + (i + 0.5) * h, av);
      mid_abs += av;
    }
    sum += mid;
    abs_sum += mid_abs;
    intervals *= 2;
    h *= 0.5;
    const cplx next = sum * h;
    const double change = std::abs(next - estimate);
    estimate = next;
    if (level >= 1 && change <= 1e-14 * std::abs(next) + 1e-16 * abs_sum * h) {
      converged = true;
      break;
    }
    // Stalled at the rounding floor of a badly cancelling sum.
    if (level >= 2 && change <= 1e-12 * (std::abs(next) + abs_sum * h) && change >= 0.25 * prev_change) {
      converged = true;
      break;
    }
    prev_change = change;
  }
  if (!converged) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "bessel_k_scaled: trapezoid refinement did not converge (nu = %.17g%+.17gi, x = %.17g)",
                  nu_in.real(), nu_in.imag(), x);
    throw Error(ErrorCode::Convergence, msg);
  }

  ScaledBesselValue out;
  out.nu = nu_in;
  out.x = x;
  estimate *= 0.5;
  const double mag = std::abs(estimate);
  if (mag == 0.0) {
    out.mantissa = 0.0;
    out.log_scale = peak;
    out.condition = std::numeric_limits<double>::infinity();
  } else {
    out.mantissa = estimate / mag;
    out.log_scale = peak + std::log(mag);
    out.condition = abs_sum * h / mag;
  }
  out.value = out.scaled_by(0.0);
  return out;
}

cplx ScaledBesselValue::scaled_by(double shift) const { return mantissa * std::exp(log_scale + shift); }

cplx bessel_k(cplx nu, double x) {
  const ScaledBesselValue v = bessel_k_scaled(nu, x);
  return v.scaled_by(-kPi * std::abs(nu.imag()) / 2);
}

namespace {

double bump(double y, double lo, double hi) {
  const double u = (2.0 * y - lo - hi) / (hi - lo);
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / d);
}

std::map<std::string, TestFunction> build_registry() {
  std::map<std::string, TestFunction> reg;
  TestFunction b23{"bump23", [](double y) { return bump(y, 2.0, 3.0); }, 2.0, 3.0, 1000};
  reg[b23.name] = b23;
  TestFunction wide{"bump_1p5_4", [](double y) { return bump(y, 1.5, 4.0); }, 1.5, 4.0, 1000};
  reg[wide.name] = wide;
  TestFunction e{"exp_decay", [](double y) { return std::exp(-y); }, 0.0,
                 std::numeric_limits<double>::infinity(), 1000};
  reg[e.name] = e;
  // Normalise so that H(0) = 1.
  const double c = mellin_transform(b23, 0.0).real();
  TestFunction unit{"bump23_unit", [c](double y) { return bump(y, 2.0, 3.0) / c; }, 2.0, 3.0, 1000};
  reg[unit.name] = unit;
  return reg;
}

const std::map<std::string, TestFunction>& registry() {
  static const std::map<std::string, TestFunction> reg = build_registry();
  return reg;
}

}  // namespace

const TestFunction& test_function(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw Error(ErrorCode::InvalidArgument, "unknown test function '" + name + "'");
  return it->second;
}

std::vector<std::string> test_function_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

TestFunction scaled_test_function(const TestFunction& base, double factor) {
  TestFunction out = base;
  auto inner = base.h;
  out.h = [inner, factor](double y) { return factor * inner(y); };
  out.name = base.name + "*" + std::to_string(factor);
  return out;
}

cplx mellin_transform(const TestFunction& h, cplx s) {
  // Work in v = log y: H(s) = int h(e^v) e^{-s v} dv.
  double vlo, vhi;
  if (h.support_lo > 0.0) {
    vlo = std::log(h.support_lo);
  } else {
    // h(0+) is finite and nonzero: need Re s < 0.
    if (s.real() >= 0.0)
      throw Error(ErrorCode::Domain, "mellin_transform: integral diverges at y = 0 for Re s >= 0");
    vlo = std::log(1e-300) / 1.0;
    vlo = std::max(vlo, std::log(1e-18) / (-s.real()) - 1.0);
  }
  if (std::isfinite(h.support_hi)) {
    vhi = std::log(h.support_hi);
  } else {
    double y = std::max(1.0, h.support_lo * 2.0);
    for (int i = 0; i < 200; ++i) {
      const double val = std::abs(h(y)) * std::exp(-s.real() * std::log(y));
      if (val < 1e-20 && y > 1.0) break;
      y *= 1.25;
    }
    vhi = std::log(y);
  }
  auto f = [&](double v) -> cplx { return h(std::exp(v)) * std::exp(-s * v); };
  auto r = integrate_adaptive<cplx>(f, vlo, vhi, 1e-14, 1e-14, 20000);
  if (!r.converged && r.error > 1e-11)
    throw Error(ErrorCode::Convergence, "mellin_transform: quadrature did not converge");
  return r.value;
}

}  // namespace bianchi
