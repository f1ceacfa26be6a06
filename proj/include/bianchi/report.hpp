#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bianchi/config.hpp"
#include "bianchi/que.hpp"

namespace bianchi {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

// A CSV table plus named pass/fail checks.
struct Report {
  std::string csv_header;
  std::vector<std::string> csv_rows;  // without trailing newline
  std::vector<Assertion> assertions;
  std::vector<SweepResult> sweep_rows;

  bool all_pass() const;
  void write_csv(std::ostream& os) const;
};

// Trend helpers over a sequence of deviations.
bool strictly_decreasing(const std::vector<double>& v);
// Least-squares slope of y against x.
double trend_slope(const std::vector<double>& x, const std::vector<double>& y);

struct Theorem3Tolerances {
  double final_deviation = 0.1;
};
struct Theorem2Tolerances {
  double ratio_deviation = 0.1;
  double normalized_lo = 0.6;
  double normalized_hi = 1.4;
};
struct Theorem1Tolerances {
  double final_deviation = 0.15;
};

std::vector<Assertion> assess_theorem3(const std::vector<SweepResult>& rows, const Theorem3Tolerances& tol = {});
std::vector<Assertion> assess_theorem2(const std::vector<SweepResult>& rows, const Theorem2Tolerances& tol = {});
std::vector<Assertion> assess_theorem1(const std::vector<SweepResult>& rows, const ZeroCensus& census,
                                       const Theorem1Tolerances& tol = {});

// Symmetrized phi'/phi at sigma divided by -4 log t, for each t.
std::vector<double> phi_log_derivative_ratios(const FieldContext& ctx, double sigma, const std::vector<double>& t);

// Subcommand bodies.
Report run_selftest(int field, std::uint64_t seed = 20240611);
Report run_sweep(const RunConfig& cfg);
Report run_lemma_cont(const RunConfig& cfg);
Report run_volume(int field);
Report run_zeros(int field, double t_max);

}  // namespace bianchi
