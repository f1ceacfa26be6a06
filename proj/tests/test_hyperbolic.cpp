#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bianchi/error.hpp"
#include "bianchi/hyperbolic.hpp"
#include "support.hpp"

using namespace bianchi;
using testing_support::rel_err;

namespace {

// Hyperbolic distance via cosh d = 1 + (|z-w|^2 + (y-v)^2) / (2 y v).
double cosh_distance(const PointH3& p, const PointH3& q) {
  return 1.0 + (std::norm(p.z() - q.z()) + (p.y - q.y) * (p.y - q.y)) / (2 * p.y * q.y);
}

Mat2 random_element(const FieldContext& K, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> step(0, 4), shift(-3, 3);
  Mat2 g;
  for (int i = 0; i < 6; ++i) {
    const Mat2 h = step(rng) == 0 ? inversion() : translation(AlgInt{shift(rng), shift(rng)});
    g = mat_mul(K, g, h);
  }
  return g;
}

}  // namespace

TEST_CASE("matrix algebra over O_K") {
  const auto K = FieldContext::get(-2);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Mat2 g = random_element(*K, rng);
    CHECK(mat_det(*K, g) == AlgInt{1, 0});
  }
  const Mat2 s = inversion();
  const Mat2 s2 = mat_mul(*K, s, s);
  CHECK(s2.a == AlgInt{-1, 0});
  CHECK(s2.d == AlgInt{-1, 0});
}

TEST_CASE("isometries preserve hyperbolic distance") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0), h(0.2, 3.0);
  for (int D : {-1, -3, -19}) {
    const auto K = FieldContext::get(D);
    for (int i = 0; i < 40; ++i) {
      const Mat2 g = random_element(*K, rng);
      const PointH3 p{u(rng), u(rng), h(rng)}, q{u(rng), u(rng), h(rng)};
      const PointH3 gp = apply_isometry(*K, g, p), gq = apply_isometry(*K, g, q);
      CHECK(rel_err(cosh_distance(gp, gq), cosh_distance(p, q)) < 1e-9);
      CHECK(rel_err(gp.y, image_height(*K, g.c, g.d, p)) < 1e-12);
    }
  }
  Mat2 bad;
  bad.a = AlgInt{2, 0};
  CHECK_THROWS_AS(apply_isometry(*FieldContext::get(-1), bad, PointH3{0, 0, 1}), Error);
}

TEST_CASE("completing a coprime bottom row") {
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    for (const AlgInt& c : enumerate_up_to_units(*K, 30))
      for (const AlgInt& d : {AlgInt{1, 0}, AlgInt{3, 1}, AlgInt{-2, 5}}) {
        if (!coprime(*K, c, d)) continue;
        const Mat2 g = complete_bottom_row(*K, c, d);
        CHECK(g.c == c);
        CHECK(g.d == d);
        CHECK(mat_det(*K, g) == AlgInt{1, 0});
      }
  }
  const auto gi = FieldContext::get(-1);
  CHECK_FALSE(coprime(*gi, AlgInt{2, 0}, AlgInt{4, 0}));
  CHECK(coprime(*gi, AlgInt{2, 0}, AlgInt{3, 0}));
}

TEST_CASE("reduction lands in the fundamental domain and is idempotent") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0), h(0.01, 2.0);
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    for (int i = 0; i < 60; ++i) {
      const PointH3 p{u(rng), u(rng), h(rng)};
      const Reduction r = reduce_to_fundamental(*K, p);
      CHECK(r.iterations < kReductionIterationCap);
      CHECK(r.point.y >= p.y * (1 - 1e-12));
      // gamma maps p to the reduced point
      const PointH3 q = apply_isometry(*K, r.gamma, p);
      CHECK(std::abs(q.y - r.point.y) < 1e-9 * r.point.y);
      CHECK(r.point.y * r.point.y >= floor_height_sq(*K, r.point.z()) * (1 - 1e-9));
      const auto c = K->reduced_coords(r.point.z());
      CHECK(std::abs(c[0]) <= 0.5 + 1e-12);
      CHECK(std::abs(c[1]) <= 0.5 + 1e-12);
      const Reduction again = reduce_to_fundamental(*K, r.point);
      CHECK(std::abs(again.point.y - r.point.y) < 1e-12 * r.point.y);
    }
  }
}

TEST_CASE("floor of the Q(i) domain is the unit sphere near the origin") {
  const auto K = FieldContext::get(-1);
  CHECK(floor_height_sq(*K, 0.0) == doctest::Approx(1.0));
  CHECK(floor_height_sq(*K, cplx(0.3, 0.2)) == doctest::Approx(1.0 - 0.13));
}

TEST_CASE("default regions are certified inside the fundamental domain") {
  for (int D : {-1, -3}) {
    const auto K = FieldContext::get(D);
    Region a = default_region_a(), b = default_region_b();
    CHECK(certify_region(*K, a));
    CHECK(a.inside_certificate);
    CHECK(certify_region(*K, b));
  }
  Region low{"low", {0.0, 0.25}, {0.0, 0.25}, {0.2, 0.5}, {8, 8, 8}, false};
  CHECK_FALSE(certify_region(*FieldContext::get(-1), low));
  Region wide{"wide", {-0.9, 0.9}, {0.0, 0.25}, {1.0, 1.5}, {8, 8, 8}, false};
  CHECK_FALSE(certify_region(*FieldContext::get(-1), wide));
}

TEST_CASE("measure quadrature of 1 and of y^k has closed forms") {
  const Region a = default_region_a();
  const double area = a.x1.length() * a.x2.length();
  const auto one = integrate_measure(a, [](const PointH3&) { return 1.0; });
  CHECK(one.converged);
  CHECK(rel_err(one.value, area * 0.5 * (1 / (a.y.lo * a.y.lo) - 1 / (a.y.hi * a.y.hi))) < 1e-12);
  const auto cube = integrate_measure(a, [](const PointH3& p) { return p.y * p.y * p.y * p.x1; });
  CHECK(rel_err(cube.value, 0.5 * a.x1.hi * a.x1.hi * a.x2.length() * a.y.length()) < 1e-12);
  const auto osc = integrate_measure(a, [](const PointH3& p) { return std::cos(40 * p.x1) * p.y * p.y; }, 1e-8);
  CHECK(osc.converged);
  CHECK(rel_err(osc.value, std::sin(40 * a.x1.hi) / 40 * a.x2.length() * std::log(a.y.hi / a.y.lo)) < 1e-7);
}

TEST_CASE("sliced and pointwise measure quadrature agree") {
  Region a = default_region_a();
  const auto f = [](const PointH3& p) { return std::exp(-p.x1 * p.x2) / p.y; };
  const auto point = integrate_measure(a, f);
  const auto sliced = integrate_measure_sliced(
      a, [&](double y, const std::vector<double>& x1, const std::vector<double>& x2, std::vector<double>& out) {
        out.resize(x1.size() * x2.size());
        for (std::size_t i = 0; i < x1.size(); ++i)
          for (std::size_t j = 0; j < x2.size(); ++j) out[i * x2.size() + j] = f(PointH3{x1[i], x2[j], y});
      });
  CHECK(point.value == sliced.value);
}

TEST_CASE("volume of the fundamental domain matches the closed form") {
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    const VolumeResult v = fundamental_volume(*K);
    CAPTURE(D);
    CHECK(v.rel_gap < 1e-3);
    const double closed = std::pow(double(K->abs_dk()), 1.5) * K->zeta_k_2() / (4 * M_PI * M_PI);
    CHECK(rel_err(v.closed_form, closed) < 1e-14);
  }
  CHECK(fundamental_volume(*FieldContext::get(-1)).closed_form == doctest::Approx(0.30532186472).epsilon(1e-9));
}
