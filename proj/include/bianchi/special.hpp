#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace bianchi {

using cplx = std::complex<double>;

// Principal (analytically continued) log Gamma. Throws Domain at poles.
cplx log_gamma(cplx z);
cplx digamma(cplx z);

// exp(pi |Im nu| / 2) K_nu(x) held as mantissa * exp(log_scale) so that it never
// underflows. value is the product, which is representable for x below ~700.
struct ScaledBesselValue {
  cplx value;
  cplx mantissa;
  double log_scale = 0.0;
  cplx nu;
  double x = 0.0;
  // Ratio of the integral of |integrand| to |result|; relative error grows with it.
  double condition = 1.0;

  // exp(log_scale + shift) * mantissa, for combining scales before exponentiating.
  cplx scaled_by(double shift) const;
};

ScaledBesselValue bessel_k_scaled(cplx nu, double x);

// Unscaled K_nu(x); underflows for large |Im nu|.
cplx bessel_k(cplx nu, double x);

struct TestFunction {
  std::string name;
  std::function<double(double)> h;
  double support_lo = 0.0;
  double support_hi = std::numeric_limits<double>::infinity();
  // Highest derivative order for which h is certified continuous (large for C-infinity bumps).
  int smoothness = 0;

  bool compact() const { return support_lo > 0.0 && std::isfinite(support_hi); }
  double operator()(double y) const { return (y <= support_lo || y >= support_hi) ? 0.0 : h(y); }
};

// Registry: "bump23" (C-infinity bump on [2,3], peak 1), "bump23_unit" (same, scaled so that
// the integral of h dy/y is 1), "bump_1p5_4" and "exp_decay" (e^{-y}, not compact).
const TestFunction& test_function(const std::string& name);
std::vector<std::string> test_function_names();
TestFunction scaled_test_function(const TestFunction& base, double factor);

// H(s) = int_0^inf h(y) y^{-s} dy / y.
cplx mellin_transform(const TestFunction& h, cplx s);

}  // namespace bianchi
