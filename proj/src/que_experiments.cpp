#include "bianchi/que.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>

#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"
#include "bianchi/quadrature.hpp"

namespace bianchi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

IdentityCheck verify_divisor_identity(const FieldContext& ctx, cplx a, cplx b, cplx s, std::int64_t norm_bound) {
  if (norm_bound < 1) throw Error(ErrorCode::InvalidArgument, "verify_divisor_identity: norm_bound must be >= 1");
  const cplx w = 0.5 * s;
  const double margin = std::min({w.real(), (w - a).real(), (w - b).real(), (w - a - b).real()});
  if (!(margin > 1.0))
    throw Error(ErrorCode::Domain, "verify_divisor_identity: series does not converge absolutely");

  IdentityCheck out;
  const auto reps = enumerate_up_to_units(ctx, norm_bound);
  std::vector<cplx> terms(reps.size());
  parallel_for(reps.size(), [&](std::size_t i) {
    const double n = static_cast<double>(ctx.norm(reps[i]));
    terms[i] = divisor_sum(ctx, reps[i], a) * divisor_sum(ctx, reps[i], b) * std::exp(-w * std::log(n));
  });
  // Smallest terms first.
  cplx lhs = 0.0;
  for (std::size_t i = terms.size(); i-- > 0;) lhs += terms[i];

  auto z = [&](cplx x) { return dedekind_zeta(ctx, x).value; };
  const cplx rhs = z(w) * z(w - a) * z(w - b) * z(w - a - b) / z(s - a - b);
  out.lhs = lhs;
  out.rhs = rhs;
  out.rel_error = rel_diff(lhs, rhs);

  const double alpha = std::max(0.0, a.real()) + std::max(0.0, b.real());
  const double expo = w.real() - alpha - 1.0;
  const double B = static_cast<double>(norm_bound);
  const double lb = std::log(B) + 1.0;
  out.tail_estimate = ctx.zeta_k_2_residue() * lb * lb * lb * std::pow(B, -expo) / expo / std::abs(rhs);
  return out;
}

IdentityCheck verify_bessel_moment(double sigma_t, double t, cplx s) {
  const double lo_order = 2.0 * std::abs(sigma_t - 1.0);
  if (!(s.real() > lo_order) || !(s.real() > 0.0))
    throw Error(ErrorCode::Domain, "verify_bessel_moment: integral diverges at y = 0");
  const cplx nu(sigma_t - 1.0, t);
  // Scaled Bessel values carry exp(pi |t| / 2); the product below carries it squared.
  const double shift = -kPi * std::abs(t) / 2.0;
  const double decay = s.real() - lo_order;
  const double v_lo = -std::min(60.0 / decay, 700.0);
  const double v_hi = std::log(40.0 + 2.0 * std::abs(s));
  auto f = [&](double v) -> cplx {
    const double y = std::exp(v);
    const ScaledBesselValue k = bessel_k_scaled(nu, y);
    const double mod2 = std::norm(k.mantissa) * std::exp(2.0 * (k.log_scale + shift));
    return std::exp(s * v) * mod2;
  };
  const auto q = integrate_adaptive<cplx>(f, v_lo, v_hi, 0.0, 1e-12, 20000);
  if (!q.converged) throw Error(ErrorCode::Convergence, "verify_bessel_moment: quadrature did not converge");

  const cplx it(0.0, t);
  const cplx log_rhs = (s - 3.0) * std::log(2.0) - log_gamma(s) + log_gamma(0.5 * s - sigma_t + 1.0) +
                       log_gamma(0.5 * s + it) + log_gamma(0.5 * s - it) + log_gamma(0.5 * s + sigma_t - 1.0);
  IdentityCheck out;
  out.lhs = q.value;
  out.rhs = std::exp(log_rhs);
  out.rel_error = rel_diff(out.lhs, out.rhs);
  out.tail_estimate = q.error / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

ConstantTerm constant_term_contribution(const FieldContext& ctx, const TestFunction& h, const SpectralParam& sp) {
  const cplx s = sp.s();
  ConstantTerm out;
  out.phi = scattering_phi(ctx, s);
  out.first = mellin_transform(h, 2.0 - 2.0 * sp.sigma).real();
  out.second = 2.0 * (out.phi * mellin_transform(h, cplx(0.0, 2.0 * sp.t))).real();
  out.third = std::norm(out.phi) * mellin_transform(h, 2.0 * sp.sigma - 2.0).real();
  out.total = out.first + out.second + out.third;
  return out;
}

const char* schedule_kind_name(ScheduleKind k) {
  return k == ScheduleKind::ApproachOne ? "approach_one" : "constant_sigma";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "constant_sigma") return ScheduleKind::ConstantSigma;
  if (name == "approach_one") return ScheduleKind::ApproachOne;
  throw Error(ErrorCode::Parse, "unknown schedule kind '" + name + "'");
}

double ScheduleSpec::sigma(double t) const {
  if (kind == ScheduleKind::ConstantSigma) return sigma_inf;
  const double l = std::log(t);
  return 1.0 + rate / (l * l);
}

double ScheduleSpec::hypothesis(double t) const {
  if (kind == ScheduleKind::ConstantSigma) return std::numeric_limits<double>::quiet_NaN();
  return (sigma(t) - 1.0) * std::log(t);
}

SpectralParam ScheduleSpec::param(double t) const { return SpectralParam{sigma(t), t, tag()}; }

std::string ScheduleSpec::tag() const {
  char buf[64];
  if (kind == ScheduleKind::ConstantSigma)
    std::snprintf(buf, sizeof buf, "constant_sigma:%.17g", sigma_inf);
  else
    std::snprintf(buf, sizeof buf, "approach_one:%.17g", rate);
  return buf;
}

void ScheduleSpec::validate() const {
  if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "schedule: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 1.0) || !std::isfinite(t_grid[i]))
      throw Error(ErrorCode::InvalidArgument, "schedule: t values must be finite and > 1");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "schedule: t grid must be strictly increasing");
  }
  if (kind == ScheduleKind::ConstantSigma) {
    if (!(sigma_inf > 1.0 && sigma_inf <= 1.9))
      throw Error(ErrorCode::InvalidArgument, "schedule: sigma_inf must lie in (1, 1.9]");
  } else {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorCode::InvalidArgument, "schedule: rate must be > 0");
    // (sigma_t - 1) log t = rate / log t decreases once t > 1.
  }
}

LemmaContResult lemma_cont_check(std::shared_ptr<const FieldContext> ctx, const TestFunction& h, const SpectralParam& sp,
                                 double eps) {
  if (!h.compact()) throw Error(ErrorCode::InvalidArgument, "lemma_cont_check: h must have compact support");
  // Above height 1 only the identity coset of F_h can be nonzero on the reduced domain.
  if (h.support_lo < 1.0)
    throw Error(ErrorCode::InvalidArgument, "lemma_cont_check: support of h must lie above height 1");
  if (sp.t == 0.0) throw Error(ErrorCode::InvalidArgument, "lemma_cont_check: t = 0 is excluded");
  const bool approach = sp.schedule_tag.rfind("approach_one", 0) == 0;
  if (!(sp.sigma > 1.0))
    throw Error(ErrorCode::InvalidArgument, "lemma_cont_check: sigma must exceed 1");

  const FieldContext& K = *ctx;
  const double cell = K.lattice_covolume();
  const double w = K.unit_count();
  const cplx s = sp.s();
  const EisensteinEvaluator ev(ctx, s, h.support_lo, eps);
  const cplx w0 = K.reduced_omega();

  // Mean of |E|^2 over the lattice cell at height y; the periodic trapezoid rule
  // is exact once the grid resolves every frequency present.
  auto cell_mean = [&](double y) {
    const auto sl = ev.slice(y);
    double prev = -1.0;
    for (int m = 8;; m *= 2) {
      std::vector<double> vals(static_cast<std::size_t>(m) * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double u = static_cast<double>(i) / m, v = static_cast<double>(j) / m;
          vals[static_cast<std::size_t>(i) * m + j] = std::norm(sl.eval(cplx(u + v * w0.real(), v * w0.imag())));
        }
      const double cur = pairwise_sum(vals) / (static_cast<double>(m) * m);
      if (prev >= 0.0 && std::abs(cur - prev) <= 1e-13 * std::abs(cur)) return cur;
      if (m >= 512) throw Error(ErrorCode::Convergence, "lemma_cont_check: cell grid did not converge");
      prev = cur;
    }
  };

  const double y_lo = h.support_lo, y_hi = std::min(h.support_hi, kCuspHeight);
  auto run = [&](int n) {
    const auto& rule = gauss_legendre(n);
    std::vector<double> parts(static_cast<std::size_t>(n));
    parallel_for(parts.size(), [&](std::size_t k) {
      const double y = 0.5 * (y_lo + y_hi) + 0.5 * (y_hi - y_lo) * rule.nodes[k];
      const double hy = h(y);
      parts[k] = hy == 0.0 ? 0.0 : rule.weights[k] * hy * cell_mean(y) / (y * y * y);
    });
    return pairwise_sum(parts) * 0.5 * (y_hi - y_lo);
  };

  LemmaContResult out;
  out.sigma_t = sp.sigma;
  out.t = sp.t;
  double prev = run(16), cur = prev;
  bool converged = false;
  for (int n = 32; n <= 1024; n *= 2) {
    cur = run(n);
    out.quad_delta = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    prev = cur;
    if (out.quad_delta < 1e-9 || cur == 0.0) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::Convergence, "lemma_cont_check: height quadrature did not converge");

  double tail = 0.0;
  if (h.support_hi > kCuspHeight) {
    // Above the cusp height only the constant term survives the cell average.
    const cplx phi = ev.phi();
    auto f = [&](double y) {
      const cplx a0 = std::exp(s * std::log(y)) + phi * std::exp((2.0 - s) * std::log(y));
      return h(y) * std::norm(a0) / (y * y * y);
    };
    tail = integrate_adaptive<double>(f, kCuspHeight, h.support_hi, 0.0, 1e-12).value;
  }
  out.lhs = (2.0 / w) * cell * (cur + tail);

  const double vol_cusp = 2.0 * cell / w;
  if (!approach) {
    const double s2 = 2.0 * sp.sigma;
    const double phi2 = scattering_phi(K, s2).real();
    out.rhs_main =
        vol_cusp * (mellin_transform(h, 2.0 - s2).real() + phi2 * mellin_transform(h, s2).real());
  } else {
    const double xi2 = completed_xi(K, 2.0).value.real();
    const double phi_mod2 = std::norm(scattering_phi(K, s));
    out.rhs_main = vol_cusp * mellin_transform(h, 2.0).real() * (1.0 - phi_mod2) / (2.0 * w * xi2 * (sp.sigma - 1.0));
  }
  if (out.rhs_main == 0.0)
    out.ratio = out.lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  else
    out.ratio = out.lhs / out.rhs_main;
  return out;
}

bool numerically_inconclusive(double ratio, double quad_delta, double trunc_eps) {
  return !(std::abs(ratio - 1.0) >= 10.0 * std::max(quad_delta, trunc_eps));
}

namespace {

// Slices keyed by height, shared between integrands evaluated on the same grid.
class SliceCache {
 public:
  explicit SliceCache(const EisensteinEvaluator& ev) : ev_(ev) {}
  std::shared_ptr<const EisensteinEvaluator::Slice> get(double y) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(y);
      if (it != cache_.end()) return it->second;
    }
    auto sl = std::make_shared<const EisensteinEvaluator::Slice>(ev_.slice(y));
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(y, sl).first->second;
  }

 private:
  const EisensteinEvaluator& ev_;
  std::mutex mu_;
  std::map<double, std::shared_ptr<const EisensteinEvaluator::Slice>> cache_;
};

MeasureResult measure_of(const Region& region, const SweepOptions& opt,
                         const std::function<void(double, const std::vector<double>&, const std::vector<double>&,
                                                  std::vector<double>&)>& f) {
  return integrate_measure_sliced(region, f, opt.rel_tol, opt.max_nodes);
}

MeasureResult mass_with_cache(SliceCache& cache, const Region& region, const SweepOptions& opt,
                              SliceCache* weight) {
  return measure_of(region, opt,
                    [&](double y, const std::vector<double>& x1, const std::vector<double>& x2,
                        std::vector<double>& out) {
                      std::vector<cplx> e;
                      cache.get(y)->eval_grid(x1, x2, e);
                      if (weight == nullptr) {
                        for (std::size_t i = 0; i < e.size(); ++i) out[i] = std::norm(e[i]);
                        return;
                      }
                      std::vector<cplx> g;
                      weight->get(y)->eval_grid(x1, x2, g);
                      for (std::size_t i = 0; i < e.size(); ++i) out[i] = std::norm(e[i]) / g[i].real();
                    });
}

void require_certified(const FieldContext& ctx, Region& region) {
  if (!certify_region(ctx, region))
    throw Error(ErrorCode::Domain, "region '" + region.name + "' is not certified inside the fundamental domain");
}

SweepResult make_row(int field, double t, double sigma, const std::string& region, double mu, double predicted,
                     double quad_delta, double trunc_eps, double hypothesis) {
  SweepResult r;
  r.field = field;
  r.t = t;
  r.sigma_t = sigma;
  r.region = region;
  r.mu_st = mu;
  r.predicted = predicted;
  r.ratio = mu / predicted;
  r.quad_delta = quad_delta;
  r.trunc_eps = trunc_eps;
  r.hypothesis = hypothesis;
  r.inconclusive = numerically_inconclusive(r.ratio, quad_delta, trunc_eps);
  return r;
}

void require_converged(const MeasureResult& m, const char* what) {
  if (!m.converged) throw Error(ErrorCode::Convergence, std::string(what) + ": measure quadrature did not converge");
}

}  // namespace

MeasureResult eisenstein_mass(const EisensteinEvaluator& ev, const Region& region, const SweepOptions& opt) {
  SliceCache cache(ev);
  return mass_with_cache(cache, region, opt, nullptr);
}

MeasureResult eisenstein_integral(const EisensteinEvaluator& ev, const Region& region, const SweepOptions& opt) {
  if (ev.s().imag() != 0.0) throw Error(ErrorCode::InvalidArgument, "eisenstein_integral: s must be real");
  return measure_of(region, opt,
                    [&](double y, const std::vector<double>& x1, const std::vector<double>& x2,
                        std::vector<double>& out) {
                      std::vector<cplx> e;
                      ev.slice(y).eval_grid(x1, x2, e);
                      for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i].real();
                    });
}

double hyperbolic_measure(const Region& region) {
  const double a = region.y.lo, b = region.y.hi;
  return region.x1.length() * region.x2.length() * 0.5 * (1.0 / (a * a) - 1.0 / (b * b));
}

double que_constant(const FieldContext& ctx) {
  const double two_pi = 2.0 * kPi;
  return 2.0 * two_pi * two_pi / (ctx.unit_count() * ctx.abs_dk() * ctx.zeta_k_2());
}

double koyama_constant(const FieldContext& ctx) { return 2.0 / ctx.zeta_k_2(); }

std::vector<SweepResult> theorem3_sweep(std::shared_ptr<const FieldContext> ctx, Region region,
                                        const ScheduleSpec& schedule, const SweepOptions& opt) {
  schedule.validate();
  if (schedule.kind != ScheduleKind::ConstantSigma)
    throw Error(ErrorCode::InvalidArgument, "theorem3_sweep: needs a constant_sigma schedule");
  require_certified(*ctx, region);
  const double y_min = region.y.lo;
  const EisensteinEvaluator target_ev(ctx, 2.0 * schedule.sigma_inf, y_min, opt.eps);
  SliceCache target_cache(target_ev);
  const MeasureResult target = eisenstein_integral(target_ev, region, opt);
  require_converged(target, "theorem3_sweep");
  const double mu_a = hyperbolic_measure(region);

  const auto& grid = schedule.t_grid;
  std::vector<std::array<SweepResult, 2>> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const double t = grid[k];
    const SpectralParam sp = schedule.param(t);
    const EisensteinEvaluator ev(ctx, sp.s(), y_min, opt.eps);
    SliceCache cache(ev);
    const MeasureResult mass = mass_with_cache(cache, region, opt, nullptr);
    const MeasureResult nu = mass_with_cache(cache, region, opt, &target_cache);
    require_converged(mass, "theorem3_sweep");
    require_converged(nu, "theorem3_sweep");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rows[k][0] = make_row(ctx->D(), t, sp.sigma, region.name, mass.value, target.value,
                          std::max(mass.delta, target.delta), opt.eps, nan);
    rows[k][1] = make_row(ctx->D(), t, sp.sigma, region.name + ":nu", nu.value, mu_a, nu.delta, opt.eps, nan);
  });
  std::vector<SweepResult> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<SweepResult> theorem2_sweep(std::shared_ptr<const FieldContext> ctx, Region a, Region b,
                                        const ScheduleSpec& schedule, const SweepOptions& opt) {
  schedule.validate();
  if (schedule.kind != ScheduleKind::ApproachOne)
    throw Error(ErrorCode::InvalidArgument, "theorem2_sweep: needs an approach_one schedule");
  require_certified(*ctx, a);
  require_certified(*ctx, b);
  const double mu_a = hyperbolic_measure(a), mu_b = hyperbolic_measure(b);
  const double c_k = que_constant(*ctx);
  const double y_min = std::min(a.y.lo, b.y.lo);

  const auto& grid = schedule.t_grid;
  std::vector<std::array<SweepResult, 3>> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const double t = grid[k];
    const SpectralParam sp = schedule.param(t);
    const double hyp = schedule.hypothesis(t);
    const EisensteinEvaluator ev(ctx, sp.s(), y_min, opt.eps);
    SliceCache cache(ev);
    const MeasureResult ma = mass_with_cache(cache, a, opt, nullptr);
    const MeasureResult mb = mass_with_cache(cache, b, opt, nullptr);
    require_converged(ma, "theorem2_sweep");
    require_converged(mb, "theorem2_sweep");
    const double lt = std::log(t);
    rows[k][0] = make_row(ctx->D(), t, sp.sigma, a.name, ma.value, mu_a * c_k * lt, ma.delta, opt.eps, hyp);
    rows[k][1] = make_row(ctx->D(), t, sp.sigma, b.name, mb.value, mu_b * c_k * lt, mb.delta, opt.eps, hyp);
    rows[k][2] = make_row(ctx->D(), t, sp.sigma, a.name + "/" + b.name, ma.value / mb.value, mu_a / mu_b,
                          ma.delta + mb.delta, 2.0 * opt.eps, hyp);
  });
  std::vector<SweepResult> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<SweepResult> theorem1_sweep(std::shared_ptr<const FieldContext> ctx, Region region,
                                        const std::vector<CriticalZero>& zeros, const SweepOptions& opt) {
  if (zeros.empty()) throw Error(ErrorCode::InvalidArgument, "theorem1_sweep: no zeros given");
  require_certified(*ctx, region);
  const double y_min = region.y.lo;
  const EisensteinEvaluator target_ev(ctx, 3.0, y_min, opt.eps);
  const MeasureResult target = eisenstein_integral(target_ev, region, opt);
  require_converged(target, "theorem1_sweep");

  std::vector<SweepResult> rows(zeros.size());
  parallel_for(zeros.size(), [&](std::size_t k) {
    const double g = zeros[k].gamma;
    const EisensteinEvaluator ev(ctx, cplx(1.5, -g), y_min, opt.eps);
    const MeasureResult mass = eisenstein_mass(ev, region, opt);
    require_converged(mass, "theorem1_sweep");
    rows[k] = make_row(ctx->D(), g, 1.5, region.name, mass.value, target.value, std::max(mass.delta, target.delta),
                       opt.eps, std::numeric_limits<double>::quiet_NaN());
  });
  return rows;
}

ZeroCensus first_critical_zeros(const FieldContext& ctx, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "first_critical_zeros: count must be positive");
  ZeroCensus out;
  std::vector<CriticalZero> found;
  for (double t_max = 30.0;; t_max = std::min(2.0 * t_max, 120.0)) {
    found = find_critical_zeros(ctx, t_max);
    if (static_cast<int>(found.size()) > count) break;
    if (t_max >= 120.0) throw Error(ErrorCode::OutOfRange, "first_critical_zeros: too many zeros requested");
  }
  out.zeros.assign(found.begin(), found.begin() + count);
  out.height = 0.5 * (found[count - 1].gamma + found[count].gamma);
  out.argument_count = argument_principle_count(ctx, out.height);
  out.all_on_line = out.argument_count == count;
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& rows) {
  os << kSweepCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.field, r.t, r.sigma_t,
                  r.region.c_str(), r.mu_st, r.predicted, r.ratio, r.quad_delta, r.trunc_eps);
    os << buf;
  }
}

}  // namespace bianchi
