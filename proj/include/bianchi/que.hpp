#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "bianchi/eisenstein.hpp"
#include "bianchi/hyperbolic.hpp"
#include "bianchi/lfunctions.hpp"
#include "bianchi/special.hpp"

namespace bianchi {

struct IdentityCheck {
  cplx lhs;
  cplx rhs;
  double rel_error = 0.0;
  double tail_estimate = 0.0;  // relative size of what the truncated side leaves out
};

// Sum over nonzero ideals of sigma_a(n) sigma_b(n) / N(n)^{s/2} against the
// product zeta_K(s/2) zeta_K(s/2-a) zeta_K(s/2-b) zeta_K(s/2-a-b) / zeta_K(s-a-b).
IdentityCheck verify_divisor_identity(const FieldContext& ctx, cplx a, cplx b, cplx s, std::int64_t norm_bound);

// int_0^inf y^s |K_{nu}(y)|^2 dy/y with nu = sigma_t - 1 + i t, against
// 2^{s-3} / Gamma(s) * Gamma(s/2-sigma_t+1) Gamma(s/2+it) Gamma(s/2-it) Gamma(s/2+sigma_t-1).
IdentityCheck verify_bessel_moment(double sigma_t, double t, cplx s);

struct ConstantTerm {
  double first = 0.0;   // H(2 - 2 sigma)
  double second = 0.0;  // 2 Re(phi(s) H(2 i t))
  double third = 0.0;   // |phi(s)|^2 H(2 sigma - 2)
  double total = 0.0;
  cplx phi;
};

ConstantTerm constant_term_contribution(const FieldContext& ctx, const TestFunction& h, const SpectralParam& sp);

enum class ScheduleKind { ConstantSigma, ApproachOne };
const char* schedule_kind_name(ScheduleKind k);
ScheduleKind parse_schedule_kind(const std::string& name);

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::ConstantSigma;
  double sigma_inf = 1.5;  // constant_sigma
  double rate = 1.0;       // approach_one: sigma_t = 1 + rate / log(t)^2
  std::vector<double> t_grid{5.0, 10.0, 20.0, 40.0};

  double sigma(double t) const;
  // (sigma_t - 1) log t; NaN for constant schedules.
  double hypothesis(double t) const;
  SpectralParam param(double t) const;
  std::string tag() const;
  // Throws InvalidArgument for empty or non-increasing grids, t <= 1, bad parameters.
  void validate() const;
};

struct LemmaContResult {
  double lhs = 0.0;
  double rhs_main = 0.0;
  double ratio = 0.0;
  double quad_delta = 0.0;
  double sigma_t = 0.0;
  double t = 0.0;
};

inline constexpr double kCuspHeight = 10.0;

// Integral of F_h |E(., s)|^2 over the manifold. The schedule is read from
// sp.schedule_tag: tags beginning with "approach_one" use the sigma -> 1 main
// term, anything else is treated as constant sigma = sp.sigma > 1.
LemmaContResult lemma_cont_check(std::shared_ptr<const FieldContext> ctx, const TestFunction& h, const SpectralParam& sp,
                                 double eps = kDefaultEisensteinEps);

struct SweepOptions {
  double eps = kDefaultEisensteinEps;
  double rel_tol = kMeasureRelTol;
  int max_nodes = kMeasureMaxNodes;
};

struct SweepResult {
  int field = 0;
  double t = 0.0;
  double sigma_t = 0.0;
  std::string region;
  double mu_st = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  double quad_delta = 0.0;
  double trunc_eps = 0.0;
  double hypothesis = 0.0;  // NaN off the approach-one schedule
  bool inconclusive = false;
};

// A deviation |ratio - 1| smaller than ten times the larger error budget
// cannot be told apart from numerical noise.
bool numerically_inconclusive(double ratio, double quad_delta, double trunc_eps);

// int_A |E(p, s)|^2 dmu for a certified region.
MeasureResult eisenstein_mass(const EisensteinEvaluator& ev, const Region& region, const SweepOptions& opt);
// int_A E(p, s) dmu for real s.
MeasureResult eisenstein_integral(const EisensteinEvaluator& ev, const Region& region, const SweepOptions& opt);
// mu(A) in closed form.
double hyperbolic_measure(const Region& region);

// 2 (2 pi)^2 / (|O^x| |d_K| zeta_K(2)).
double que_constant(const FieldContext& ctx);
// The constant 2 / zeta_K(2) from the earlier literature.
double koyama_constant(const FieldContext& ctx);

// Rows per t: region A (mass vs int_A E(., 2 sigma_inf)) and "A:nu" (the
// mass of |E|^2 / E(., 2 sigma_inf) vs mu(A)).
std::vector<SweepResult> theorem3_sweep(std::shared_ptr<const FieldContext> ctx, Region region,
                                        const ScheduleSpec& schedule, const SweepOptions& opt = {});

// Rows per t: A and B against mu(.) c_K log t, and "A/B" against mu(A)/mu(B).
std::vector<SweepResult> theorem2_sweep(std::shared_ptr<const FieldContext> ctx, Region a, Region b,
                                        const ScheduleSpec& schedule, const SweepOptions& opt = {});

// Rows per zero: int_A |E(., 3/2 - i gamma)|^2 dmu against int_A E(., 3) dmu.
std::vector<SweepResult> theorem1_sweep(std::shared_ptr<const FieldContext> ctx, Region region,
                                        const std::vector<CriticalZero>& zeros, const SweepOptions& opt = {});

// The first count zeros of zeta_K above the real axis, with the argument-principle
// count over the same range.
struct ZeroCensus {
  std::vector<CriticalZero> zeros;
  int argument_count = 0;
  double height = 0.0;
  bool all_on_line = false;
};
ZeroCensus first_critical_zeros(const FieldContext& ctx, int count);

inline constexpr const char* kSweepCsvHeader = "field,t,sigma_t,region,mu_st,predicted,ratio,quad_delta,trunc_eps";
void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& rows);

}  // namespace bianchi
