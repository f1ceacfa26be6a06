#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bianchi/field.hpp"
#include "bianchi/hyperbolic.hpp"
#include "bianchi/lfunctions.hpp"
#include "bianchi/special.hpp"

namespace bianchi {

struct SpectralParam {
  double sigma = 1.0;
  double t = 0.0;
  std::string schedule_tag;
  cplx s() const { return {sigma, t}; }
};

// phi(s) = (2 pi / sqrt|d_K|) zeta_K(s-1) / ((s-1) zeta_K(s)).
cplx scattering_phi(const FieldContext& ctx, cplx s);
// The same quantity as xi_K(s-1) / xi_K(s).
cplx scattering_phi_xi(const FieldContext& ctx, cplx s);
// phi'/phi(s) from analytic derivatives of zeta_K.
cplx phi_log_derivative(const FieldContext& ctx, cplx s);

// Limit of (s-2) E(p, s) as s -> 2: area of the Gamma_infinity cell over vol(M).
double eisenstein_pole_residue(const FieldContext& ctx);

inline constexpr double kDefaultEisensteinEps = 1e-10;

// Fourier-expansion evaluator for E(., s), valid for heights y >= y_min.
class EisensteinEvaluator {
 public:
  EisensteinEvaluator(std::shared_ptr<const FieldContext> ctx, cplx s, double y_min,
                      double eps = kDefaultEisensteinEps);

  class Slice {
   public:
    double y() const { return y_; }
    cplx eval(cplx z) const;
    // out[i * x2.size() + j] = E(x1[i] + i x2[j], y).
    void eval_grid(const std::vector<double>& x1, const std::vector<double>& x2, std::vector<cplx>& out) const;

   private:
    friend class EisensteinEvaluator;
    const EisensteinEvaluator* ev_ = nullptr;
    double y_ = 0.0;
    cplx constant_;
    std::vector<cplx> amp_;  // per orbit, zero when dropped
    std::size_t active_ = 0;  // orbits [0, active_) contribute
  };

  Slice slice(double y) const;
  cplx eval(const PointH3& p) const;

  const FieldContext& field() const { return *ctx_; }
  cplx s() const { return s_; }
  double y_min() const { return y_min_; }
  double eps() const { return eps_; }
  std::int64_t trunc_norm() const { return trunc_norm_; }
  double tail_bound() const { return tail_bound_; }
  cplx phi() const { return phi_; }
  std::size_t orbit_count() const { return orbits_.size(); }

 private:
  struct Orbit {
    AlgInt rep;
    std::int64_t norm;
    cplx coeff;                 // |n|^{s-1} sigma_{1-s}(n)
    std::vector<cplx> freqs;    // dual frequencies of the unit multiples
  };
  std::shared_ptr<const FieldContext> ctx_;
  cplx s_;
  double y_min_;
  double eps_;
  cplx phi_;
  cplx prefactor_;  // exp(-log xi_K(s) - pi |t| / 2)
  std::int64_t trunc_norm_ = 0;
  double tail_bound_ = 0.0;
  std::vector<Orbit> orbits_;
  std::vector<std::int64_t> norms_;            // distinct norms, ascending
  std::vector<std::size_t> norm_start_;        // first orbit index per distinct norm

  double argument(std::int64_t norm, double y) const;
};

struct CosetSumResult {
  cplx partial;  // identity coset plus all rows with 0 < |c|^2 <= norm_bound
  cplx tail;     // rows beyond norm_bound, by their zero Fourier mode
  cplx value;
  std::int64_t norm_bound = 0;
};

// Coset sum over Gamma_infinity \ Gamma, Re s > 2. norm_bound < 0 selects the
// bound beyond which the zero-mode tail is exact to double precision.
CosetSumResult coset_sum_eval(const FieldContext& ctx, const PointH3& p, cplx s, std::int64_t norm_bound = -1);
std::int64_t default_coset_norm_bound(const FieldContext& ctx, double y);

// Plain truncated sum over coprime (c, d) with |c|^2 <= norm_bound and
// |cz+d| <= radius; slowly convergent, for cross-checks.
cplx coset_sum_naive(const FieldContext& ctx, const PointH3& p, cplx s, std::int64_t norm_bound, double radius);

// Sum of h(y(gamma p)) over Gamma_infinity \ Gamma; requires compact support.
double incomplete_eisenstein(const FieldContext& ctx, const TestFunction& h, const PointH3& p);

// E(p, 2 - rho) for rho = 1/2 + i gamma.
cplx residue_measure_eval(const FieldContext& ctx, const CriticalZero& zero, const PointH3& p,
                          double eps = kDefaultEisensteinEps);

}  // namespace bianchi
