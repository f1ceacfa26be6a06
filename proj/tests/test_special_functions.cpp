#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bianchi/error.hpp"
#include "bianchi/special.hpp"
#include "support.hpp"

using namespace bianchi;
using testing_support::rel_err;

namespace {

struct BesselRef {
  cplx nu;
  double x;
  cplx scaled;  // exp(pi |Im nu| / 2) K_nu(x), 40-digit reference
};

// Frozen from an arbitrary-precision reference implementation.
const BesselRef kBesselRefs[] = {
    {{0.5, 0.0}, 2.0, {0.11993777196806145, 0.0}},
    {{0.0, 10.0}, 5.0, {-0.71833271665681596, 0.0}},
    {{0.3, 40.0}, 30.0, {-0.015177025495921667, -0.1387695081165857}},
    {{2.5, 0.0}, 0.1, {1187.0212236418929, 0.0}},
    {{0.5, 100.0}, 50.0, {0.17770404111070727, 0.26450946237485146}},
    {{1.7, 3.0}, 0.7, {11.96511912338606, -25.720674181739259}},
    {{0.0, 20.0}, 25.0, {0.037408772540851838, 0.0}},
};

}  // namespace

TEST_CASE("scaled Bessel K against frozen reference values") {
  for (const auto& r : kBesselRefs) {
    CAPTURE(r.nu);
    CAPTURE(r.x);
    const ScaledBesselValue v = bessel_k_scaled(r.nu, r.x);
    CHECK(rel_err(v.value, r.scaled) < 1e-11);
    CHECK(rel_err(v.mantissa * std::exp(v.log_scale), r.scaled) < 1e-11);
  }
}

TEST_CASE("Bessel K closed form at half-integer order") {
  for (double x : {0.05, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    const double want = std::sqrt(M_PI / (2 * x)) * std::exp(-x);
    CHECK(rel_err(bessel_k(0.5, x), cplx(want)) < 1e-12);
    CHECK(rel_err(bessel_k(1.5, x), cplx(want * (1 + 1 / x))) < 1e-12);
  }
}

TEST_CASE("Bessel K is even in the order and real for imaginary order") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(0.0, 1.0), im(-60.0, 60.0), xs(0.2, 80.0);
  for (int i = 0; i < 40; ++i) {
    const cplx nu(re(rng), im(rng));
    const double x = xs(rng);
    const auto a = bessel_k_scaled(nu, x);
    const auto b = bessel_k_scaled(-nu, x);
    CHECK(rel_err(a.value, b.value) < 1e-10);
    const auto c = bessel_k_scaled(std::conj(nu), x);
    CHECK(rel_err(c.value, std::conj(a.value)) < 1e-10);
    const auto p = bessel_k_scaled(cplx(0.0, nu.imag()), x);
    CHECK(std::abs(p.value.imag()) <= 1e-12 * std::max(1.0, std::abs(p.value)));
  }
}

TEST_CASE("Bessel K recurrence K_{nu+1} - K_{nu-1} = (2 nu / x) K_nu") {
  for (cplx nu : {cplx(0.3, 7.0), cplx(1.2, -15.0), cplx(0.0, 30.0)}) {
    for (double x : {2.0, 20.0, 45.0}) {
      const cplx lhs = bessel_k_scaled(nu + 1.0, x).value - bessel_k_scaled(nu - 1.0, x).value;
      const cplx rhs = 2.0 * nu / x * bessel_k_scaled(nu, x).value;
      CHECK(std::abs(lhs - rhs) < 1e-9 * (std::abs(rhs) + std::abs(bessel_k_scaled(nu + 1.0, x).value)));
    }
  }
}

TEST_CASE("scaled Bessel K never underflows far past the turning point") {
  const auto v = bessel_k_scaled(cplx(0.5, 40.0), 600.0);
  CHECK(std::isfinite(v.log_scale));
  CHECK(v.log_scale < -500.0);
  CHECK(std::abs(v.mantissa) > 0.0);
}

TEST_CASE("Bessel K rejects non-positive arguments") {
  CHECK_THROWS_AS(bessel_k_scaled(0.5, 0.0), Error);
  CHECK_THROWS_AS(bessel_k_scaled(0.5, -1.0), Error);
}

TEST_CASE("log Gamma against frozen reference values") {
  CHECK(rel_err(log_gamma(cplx(0.5, 20.0)), cplx(-30.49698800269326, 39.916729108473326)) < 1e-13);
  CHECK(rel_err(log_gamma(cplx(-2.5, 1.0)), cplx(-2.3441906524655926, -8.3041279866579259)) < 1e-13);
  CHECK(std::abs(log_gamma(cplx(1.0))) < 1e-15);
  CHECK(rel_err(log_gamma(cplx(0.5)), cplx(0.5 * std::log(M_PI))) < 1e-14);
  CHECK_THROWS_AS(log_gamma(cplx(-3.0)), Error);
}

TEST_CASE("log Gamma recurrence and digamma") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> re(-8.0, 8.0), im(-50.0, 50.0);
  for (int i = 0; i < 50; ++i) {
    const cplx z(re(rng), im(rng));
    const cplx d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
    // equal modulo 2 pi i
    CHECK(std::abs(d.real()) < 1e-11 * std::max(1.0, std::abs(log_gamma(z))));
    CHECK(std::abs(std::remainder(d.imag(), 2 * M_PI)) < 1e-10 * std::max(1.0, std::abs(log_gamma(z))));
  }
  CHECK(rel_err(digamma(cplx(1.0)), cplx(-0.57721566490153286)) < 1e-14);
  const cplx z(2.3, 4.1);
  const double h = 1e-5;
  const cplx fd = (log_gamma(z + h) - log_gamma(z - h)) / (2 * h);
  CHECK(rel_err(digamma(z), fd) < 1e-8);
}

TEST_CASE("test function registry") {
  const auto names = test_function_names();
  CHECK(names.size() >= 4);
  const TestFunction& b = test_function("bump23");
  CHECK(b.compact());
  CHECK(b.support_lo == 2.0);
  CHECK(b.support_hi == 3.0);
  CHECK(b(2.5) == doctest::Approx(1.0));
  CHECK(b(2.0) == 0.0);
  CHECK(b(3.5) == 0.0);
  CHECK_FALSE(test_function("exp_decay").compact());
  CHECK(mellin_transform(test_function("bump23_unit"), 0.0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(test_function("no_such_function"), Error);
  const TestFunction twice = scaled_test_function(b, 2.0);
  CHECK(twice(2.5) == doctest::Approx(2.0));
}

TEST_CASE("Mellin transform of e^{-y} is Gamma(-s)") {
  const TestFunction& e = test_function("exp_decay");
  for (cplx s : {cplx(-1.5, 0.0), cplx(-0.5, 3.0), cplx(-2.0, -1.0)}) {
    CHECK(rel_err(mellin_transform(e, s), std::exp(log_gamma(-s))) < 1e-10);
  }
  CHECK_THROWS_AS(mellin_transform(e, cplx(0.5, 0.0)), Error);
}

TEST_CASE("Mellin transform of the [2, 3] bump at 60 i matches the reference") {
  // Slow decay of the Fourier transform of a compact bump in log y.
  CHECK(std::abs(mellin_transform(test_function("bump23"), cplx(0.0, 60.0))) ==
        doctest::Approx(0.00287786668810299629940532924519).epsilon(1e-9));
}
