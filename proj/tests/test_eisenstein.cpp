#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bianchi/eisenstein.hpp"
#include "bianchi/error.hpp"
#include "support.hpp"

using namespace bianchi;
using testing_support::rel_err;

namespace {

PointH3 random_cell_point(const FieldContext& K, std::mt19937_64& rng, double ylo, double yhi) {
  std::uniform_real_distribution<double> u(-0.5, 0.5), h(ylo, yhi);
  const cplx z = u(rng) + u(rng) * K.reduced_omega();
  return PointH3::from(z, h(rng));
}

}  // namespace

TEST_CASE("scattering coefficient: two formulas, unitarity, functional equation") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> re(-1.0, 3.0), im(-40.0, 40.0);
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    for (int i = 0; i < 10; ++i) {
      const cplx s(re(rng), im(rng));
      const cplx phi = scattering_phi(*K, s);
      CHECK(rel_err(scattering_phi_xi(*K, s), phi) < 1e-10);
      CHECK(std::abs(phi * scattering_phi(*K, 2.0 - s) - 1.0) < 1e-8);
    }
    for (double t : {1.0, 5.0, 20.0}) CHECK(std::abs(std::abs(scattering_phi(*K, cplx(1.0, t))) - 1.0) < 1e-8);
  }
}

TEST_CASE("phi'/phi agrees with a finite difference of log phi") {
  const auto K = FieldContext::get(-1);
  for (cplx s : {cplx(1.1, 20.0), cplx(1.5, 7.0), cplx(1.05, -33.0)}) {
    const double h = 1e-5;
    const cplx fd = (std::log(scattering_phi(*K, s + h)) - std::log(scattering_phi(*K, s - h))) / (2 * h);
    CHECK(rel_err(phi_log_derivative(*K, s), fd) < 1e-7);
  }
}

TEST_CASE("Fourier evaluator agrees with the coset sum at s = 3") {
  std::mt19937_64 rng(13);
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    const EisensteinEvaluator ev(K, 3.0, 0.6);
    for (int i = 0; i < 4; ++i) {
      const PointH3 p = random_cell_point(*K, rng, 0.8, 2.0);
      CAPTURE(D);
      CHECK(rel_err(ev.eval(p), coset_sum_eval(*K, p, 3.0).value) < 1e-6);
    }
  }
}

TEST_CASE("coset sum: tail closure agrees with the slowly convergent plain sum") {
  const auto K = FieldContext::get(-1);
  const PointH3 p{0.1, 0.2, 1.1};
  const cplx s(4.0, 1.0);
  const cplx fast = coset_sum_eval(*K, p, s).value;
  const cplx slow = coset_sum_naive(*K, p, s, 400, 60.0);
  CHECK(rel_err(slow, fast) < 1e-3);
  CHECK_THROWS_AS(coset_sum_eval(*K, p, cplx(1.5, 0.0)), Error);
}

TEST_CASE("automorphy under the Bianchi group") {
  std::mt19937_64 rng(21);
  for (int D : {-1, -2, -3, -7}) {
    const auto K = FieldContext::get(D);
    for (cplx s : {cplx(1.5, 10.0), cplx(1.2, 25.0), cplx(3.0, 0.0)}) {
      const EisensteinEvaluator ev(K, s, 0.3);
      for (int i = 0; i < 4; ++i) {
        const PointH3 p = random_cell_point(*K, rng, 0.9, 1.6);
        const Mat2 g = mat_mul(*K, translation(AlgInt{1, 1}), mat_mul(*K, inversion(), translation(AlgInt{0, 1})));
        const PointH3 q = apply_isometry(*K, g, p);
        if (q.y < ev.y_min()) continue;
        CHECK(rel_err(ev.eval(q), ev.eval(p)) < 1e-7);
      }
    }
  }
}

TEST_CASE("functional equation E(p, s) = phi(s) E(p, 2 - s)") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> re(1.05, 1.95), im(-30.0, 30.0);
  for (int i = 0; i < 20; ++i) {
    const int D = kClassNumberOneFields[i % kClassNumberOneFields.size()];
    const auto K = FieldContext::get(D);
    const cplx s(re(rng), im(rng));
    const PointH3 p = random_cell_point(*K, rng, 0.8, 2.0);
    const cplx a = EisensteinEvaluator(K, s, p.y).eval(p);
    const cplx b = EisensteinEvaluator(K, 2.0 - s, p.y).eval(p);
    CHECK(std::abs(a - scattering_phi(*K, s) * b) < 1e-6 * std::abs(a));
  }
}

TEST_CASE("constant term is the cell average") {
  const auto K = FieldContext::get(-3);
  const cplx s(1.4, 9.0);
  const EisensteinEvaluator ev(K, s, 0.9);
  const double y = 1.3;
  const auto sl = ev.slice(y);
  const int m = 64;
  cplx sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sum += sl.eval((i + 0.5) / m - 0.5 + ((j + 0.5) / m - 0.5) * K->reduced_omega());
  sum /= double(m * m);
  const cplx want = std::pow(y, s) + ev.phi() * std::pow(y, 2.0 - s);
  CHECK(rel_err(sum, want) < 1e-10);
}

TEST_CASE("slices evaluate the same values as points") {
  const auto K = FieldContext::get(-1);
  const EisensteinEvaluator ev(K, cplx(1.5, 20.0), 1.0);
  const auto sl = ev.slice(1.2);
  const std::vector<double> x1{0.0, 0.1, 0.2}, x2{0.05, 0.15};
  std::vector<cplx> grid;
  sl.eval_grid(x1, x2, grid);
  for (std::size_t i = 0; i < x1.size(); ++i)
    for (std::size_t j = 0; j < x2.size(); ++j)
      CHECK(rel_err(grid[i * x2.size() + j], ev.eval(PointH3{x1[i], x2[j], 1.2})) < 1e-12);
}

TEST_CASE("simple pole at s = 2") {
  for (int D : {-1, -3, -11}) {
    const auto K = FieldContext::get(D);
    const PointH3 p{0.1, 0.05, 1.3};
    const double d = 1e-4;
    const cplx v = d * EisensteinEvaluator(K, 2.0 + d, 1.0).eval(p);
    CHECK(rel_err(v, cplx(eisenstein_pole_residue(*K))) < 1e-3);
  }
}

TEST_CASE("Laplace eigenfunction: fourth-order finite differences") {
  const auto K = FieldContext::get(-1);
  const cplx s(1.5, 6.0);
  const EisensteinEvaluator ev(K, s, 0.8);
  const PointH3 p{0.12, 0.07, 1.25};
  const double h = 2e-3;
  auto E = [&](double a, double b, double c) { return ev.eval(PointH3{p.x1 + a, p.x2 + b, p.y + c}); };
  auto d2 = [&](int axis) {
    auto at = [&](double k) {
      return E(axis == 0 ? k * h : 0, axis == 1 ? k * h : 0, axis == 2 ? k * h : 0);
    };
    return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12 * h * h);
  };
  const cplx dy = (-E(0, 0, 2 * h) + 8.0 * E(0, 0, h) - 8.0 * E(0, 0, -h) + E(0, 0, -2 * h)) / (12 * h);
  const cplx lap = p.y * p.y * (d2(0) + d2(1) + d2(2)) - p.y * dy;
  const cplx e = E(0, 0, 0);
  CHECK(std::abs(lap + s * (2.0 - s) * e) / std::abs(e) < 1e-4);
}

TEST_CASE("truncation is certified against the requested tolerance") {
  const auto K = FieldContext::get(-1);
  const EisensteinEvaluator coarse(K, cplx(1.5, 40.0), 1.0, 1e-6);
  const EisensteinEvaluator fine(K, cplx(1.5, 40.0), 1.0, 1e-12);
  CHECK(coarse.trunc_norm() <= fine.trunc_norm());
  CHECK(fine.tail_bound() <= 1e-12);
  const PointH3 p{0.2, 0.1, 1.1};
  CHECK(std::abs(coarse.eval(p) - fine.eval(p)) < 1e-5 * std::abs(fine.eval(p)));
  CHECK_THROWS_AS(coarse.eval(PointH3{0.2, 0.1, 0.5}), Error);
}

TEST_CASE("residue measure density is E at 2 - rho") {
  const auto K = FieldContext::get(-1);
  const CriticalZero z{6.020948904697597, ZeroSource::DirichletFactor, 6.0209489, 6.0209490};
  const PointH3 p{0.1, 0.1, 1.2};
  const cplx want = EisensteinEvaluator(K, cplx(1.5, -z.gamma), p.y).eval(p);
  CHECK(rel_err(residue_measure_eval(*K, z, p), want) < 1e-12);
}

TEST_CASE("incomplete Eisenstein series counts the heights of the orbit") {
  const auto K = FieldContext::get(-1);
  const TestFunction& h = test_function("bump23");
  // At height 2.5 above the cell only the identity coset reaches [2, 3].
  CHECK(incomplete_eisenstein(*K, h, PointH3{0.1, 0.2, 2.5}) == doctest::Approx(h(2.5)));
  CHECK(incomplete_eisenstein(*K, h, PointH3{0.1, 0.2, 1.2}) == 0.0);
  CHECK_THROWS_AS(incomplete_eisenstein(*K, test_function("exp_decay"), PointH3{0, 0, 1}), Error);
}
