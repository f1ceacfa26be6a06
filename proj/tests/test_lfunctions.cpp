#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bianchi/error.hpp"
#include "bianchi/lfunctions.hpp"
#include "support.hpp"

using namespace bianchi;
using testing_support::rel_err;

TEST_CASE("Riemann zeta against frozen reference values") {
  CHECK(rel_err(riemann_zeta(3.0).value, cplx(1.2020569031595943)) < 1e-14);
  CHECK(rel_err(riemann_zeta(cplx(0.5, 14.0)).value, cplx(0.022241142609993589, -0.10325812326645006)) < 1e-11);
  CHECK(rel_err(riemann_zeta(-1.5).value, cplx(-0.025485201889833036)) < 1e-12);
  CHECK(rel_err(riemann_zeta(cplx(2.0, 30.0)).value, cplx(0.82587982431582638, -0.26903382749730631)) < 1e-12);
  CHECK(rel_err(riemann_zeta(2.0).value, cplx(M_PI * M_PI / 6)) < 1e-15);
  CHECK(rel_err(riemann_zeta(-1.0).value, cplx(-1.0 / 12)) < 1e-13);
  CHECK(std::abs(riemann_zeta(-2.0).value) < 1e-14);
}

TEST_CASE("Dirichlet L and Dedekind zeta against frozen reference values") {
  const auto gi = FieldContext::get(-1);
  const auto eis = FieldContext::get(-3);
  const auto k7 = FieldContext::get(-7);
  CHECK(rel_err(dirichlet_l(*gi, 2.0).value, cplx(0.91596559417721902)) < 1e-14);  // Catalan
  CHECK(rel_err(dirichlet_l(*gi, 1.0).value, cplx(M_PI / 4)) < 1e-13);
  CHECK(rel_err(dirichlet_l(*gi, cplx(0.5, 10.0)).value, cplx(0.02776895261690277, -0.44306067559374077)) < 1e-11);
  CHECK(rel_err(dirichlet_l(*eis, cplx(1.5, 3.0)).value, cplx(1.1124861149099118, 0.34317349061406732)) < 1e-12);
  CHECK(rel_err(dedekind_zeta(*k7, cplx(1.5, 3.0)).value, cplx(0.64470131429377289, -0.37450358921655238)) < 1e-12);
  CHECK(rel_err(dedekind_zeta(*eis, 2.0).value, cplx(1.2851909554841494)) < 1e-14);
  CHECK(rel_err(dedekind_zeta(*gi, 2.0).value, cplx(1.5067030099229854)) < 1e-14);
  CHECK(rel_err(dedekind_zeta(*gi, cplx(-0.5, 5.0)).value, cplx(1.5031457798825284, -1.1954624961911294)) < 1e-11);
  CHECK(rel_err(completed_xi(*gi, cplx(0.3, 7.0)).value, cplx(3.5115869842965432e-5, -3.1296064648434979e-6)) <
        1e-10);
  CHECK(gi->zeta_k_2() == doctest::Approx(1.5067030099229854).epsilon(1e-14));
}

TEST_CASE("left half-plane values against frozen reference values") {
  const auto k43 = FieldContext::get(-43);
  CHECK(rel_err(riemann_zeta(cplx(-3.0, 5.0)).value, cplx(-0.0993951131828536960, 0.538820048985487082)) < 1e-12);
  CHECK(rel_err(riemann_zeta(cplx(-2.99485, -0.253699)).value, cplx(0.00882010492701447940, -0.00143021584198799393)) <
        1e-12);
  CHECK(rel_err(dirichlet_l(*k43, cplx(-3.0, 5.0)).value, cplx(304156.233121266725, 87646.5986246425896)) < 1e-12);
  CHECK(rel_err(dirichlet_l(*k43, cplx(-1.0, 0.1)).value, cplx(0.406578624392797712, 1.49844919639781484)) < 1e-12);
  CHECK(std::abs(riemann_zeta(cplx(-4.0, 0.0)).value) < 1e-15);
  CHECK(std::abs(dirichlet_l(*k43, cplx(-3.0, 0.0)).value) < 1e-12);
}

TEST_CASE("Kronecker symbol") {
  CHECK(kronecker_symbol(-4, 3) == -1);
  CHECK(kronecker_symbol(-4, 5) == 1);
  CHECK(kronecker_symbol(-4, 2) == 0);
  CHECK(kronecker_symbol(-3, 2) == -1);
  CHECK(kronecker_symbol(-3, 7) == 1);
  CHECK(kronecker_symbol(-8, 3) == 1);
  CHECK(kronecker_symbol(-7, 2) == 1);
  CHECK(kronecker_symbol(-163, 37) == -1);
  CHECK(kronecker_symbol(-163, 41) == 1);  // n^2 + n + 41 at n = 0
}

TEST_CASE("Dedekind zeta equals the lattice sum over O_K for Re s >= 2.5") {
  for (int D : {-1, -3, -7}) {
    const auto K = FieldContext::get(D);
    const auto elements = K->elements_up_to(20000);
    for (cplx s : {cplx(2.5, 0.0), cplx(3.0, 4.0), cplx(4.0, -9.0)}) {
      cplx sum = 0.0;
      for (auto it = elements.rbegin(); it != elements.rend(); ++it)
        sum += std::exp(-s * std::log(static_cast<double>(K->norm(*it))));
      sum /= static_cast<double>(K->unit_count());
      CHECK(rel_err(dedekind_zeta(*K, s).value, sum) < 1e-6);
    }
  }
}

TEST_CASE("functional equation of the completed zeta function") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(-3.0, 4.0), im(-30.0, 30.0);
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    for (int i = 0; i < 25; ++i) {
      const cplx s(re(rng), im(rng));
      const cplx a = completed_xi(*K, s).value;
      const cplx b = completed_xi(*K, 1.0 - s).value;
      CHECK(std::abs(a - b) / std::abs(a) < 1e-9);
    }
  }
}

TEST_CASE("residues at s = 1 and the class-number display") {
  const double h = 1e-5;
  for (int D : kClassNumberOneFields) {
    const auto K = FieldContext::get(D);
    // symmetric difference removes the O(h) term
    const cplx zr = 0.5 * (h * dedekind_zeta(*K, 1.0 + h).value - h * dedekind_zeta(*K, 1.0 - h).value);
    CHECK(rel_err(zr, cplx(dirichlet_l(*K, 1.0).value)) < 1e-6);
    CHECK(rel_err(zr, cplx(dedekind_zeta_residue(*K))) < 1e-6);
    const cplx xr = 0.5 * (h * completed_xi(*K, 1.0 + h).value - h * completed_xi(*K, 1.0 - h).value);
    CHECK(rel_err(xr, cplx(1.0 / K->unit_count())) < 1e-6);
    // The printed residue omits the 1/sqrt|d_K| factor.
    CHECK(printed_residue(*K) == doctest::Approx(dedekind_zeta_residue(*K) * std::sqrt(double(K->abs_dk()))));
  }
  CHECK(dedekind_zeta_residue(*FieldContext::get(-1)) == doctest::Approx(M_PI / 4).epsilon(1e-15));
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const auto K = FieldContext::get(-7);
  for (cplx s : {cplx(1.3, 12.0), cplx(0.5, 3.0), cplx(2.5, -20.0), cplx(-1.5, 4.0), cplx(-6.0, -30.0)}) {
    const double h = 1e-5;
    const auto fd = [&](auto f) { return (f(s + h) - f(s - h)) / (2 * h); };
    CHECK(rel_err(riemann_zeta_d(s).derivative, fd([](cplx z) { return riemann_zeta(z).value; })) < 1e-7);
    CHECK(rel_err(dirichlet_l_d(*K, s).derivative, fd([&](cplx z) { return dirichlet_l(*K, z).value; })) < 1e-7);
    CHECK(rel_err(dedekind_zeta_d(*K, s).derivative, fd([&](cplx z) { return dedekind_zeta(*K, z).value; })) <
          1e-7);
    CHECK(rel_err(dedekind_zeta_d(*K, s).value, dedekind_zeta(*K, s).value) < 1e-13);
  }
}

TEST_CASE("evaluation outside the supported region is rejected") {
  CHECK_THROWS_AS(riemann_zeta(cplx(kZetaMaxRe + 5.0, 0.0)), Error);
  CHECK_THROWS_AS(riemann_zeta(cplx(0.5, kZetaMaxIm + 10.0)), Error);
  CHECK_THROWS_AS(riemann_zeta(1.0), Error);
  CHECK_THROWS_AS(dedekind_zeta(*FieldContext::get(-1), 1.0), Error);
}

TEST_CASE("Hardy Z functions are real rotations with the expected zeros") {
  CHECK(std::abs(hardy_z_riemann(14.134725141734693)) < 1e-9);
  CHECK(hardy_z_riemann(14.0) * hardy_z_riemann(14.3) < 0.0);
  const auto gi = FieldContext::get(-1);
  CHECK(hardy_z_dirichlet(*gi, 5.9) * hardy_z_dirichlet(*gi, 6.1) < 0.0);
  const double t = 9.3;
  CHECK(std::abs(std::abs(hardy_z_riemann(t)) - std::abs(riemann_zeta(cplx(0.5, t)).value)) < 1e-12);
}

TEST_CASE("critical zeros for Q(i)") {
  const auto gi = FieldContext::get(-1);
  const auto low = find_critical_zeros(*gi, 7.0);
  REQUIRE(low.size() == 1);
  CHECK(low[0].gamma == doctest::Approx(6.0210).epsilon(1e-4));
  CHECK(low[0].source == ZeroSource::DirichletFactor);
  CHECK(low[0].bracket_lo <= low[0].gamma);
  CHECK(low[0].gamma <= low[0].bracket_hi);
  CHECK(low[0].bracket_hi - low[0].bracket_lo < 1e-7);

  const auto mid = find_critical_zeros(*gi, 15.0);
  bool has_riemann = false;
  for (const auto& z : mid)
    if (z.source == ZeroSource::RiemannFactor && std::abs(z.gamma - 14.134725141734693) < 1e-7) has_riemann = true;
  CHECK(has_riemann);
  for (std::size_t i = 1; i < mid.size(); ++i) CHECK(mid[i - 1].gamma < mid[i].gamma);
}

TEST_CASE("zero counts match the argument principle on (0, 30]") {
  for (int D : {-1, -3, -7}) {
    const auto K = FieldContext::get(D);
    CHECK(static_cast<int>(find_critical_zeros(*K, 30.0).size()) == argument_principle_count(*K, 30.0));
  }
  CHECK_THROWS_AS(find_critical_zeros(*FieldContext::get(-1), 500.0), Error);
}

TEST_CASE("|zeta_K(sigma_t + i t)| stays within log-power bounds on the sweep schedules") {
  // Empirical check with c1 = 1/10 and c2 = 10 on both schedules.
  for (int D : {-1, -3}) {
    const auto K = FieldContext::get(D);
    for (double t : {5.0, 10.0, 20.0, 40.0}) {
      const double L = std::log(t);
      for (double sigma : {1.5, 1.0 + 1.0 / (L * L)}) {
        const double v = std::abs(dedekind_zeta(*K, cplx(sigma, t)).value);
        CHECK(v >= 0.1 / (L * L));
        CHECK(v <= 10.0 * L * L);
      }
    }
  }
}
