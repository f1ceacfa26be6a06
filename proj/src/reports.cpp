#include "bianchi/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"

namespace bianchi {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt("%.4g", v[i]);
  return out + "]";
}

std::string csv_row(const SweepResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g", r.field, r.t, r.sigma_t,
                r.region.c_str(), r.mu_st, r.predicted, r.ratio, r.quad_delta, r.trunc_eps);
  return buf;
}

struct Series {
  std::string region;
  std::vector<double> t, dev, ratio, hyp;
  int inconclusive = 0;
};

// Rows grouped by region, in order of first appearance.
std::vector<Series> by_region(const std::vector<SweepResult>& rows) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    auto it = index.find(r.region);
    if (it == index.end()) {
      it = index.emplace(r.region, out.size()).first;
      out.push_back(Series{r.region, {}, {}, {}, {}, 0});
    }
    Series& s = out[it->second];
    s.t.push_back(r.t);
    s.dev.push_back(std::abs(r.ratio - 1.0));
    s.ratio.push_back(r.ratio);
    s.hyp.push_back(r.hypothesis);
    s.inconclusive += r.inconclusive ? 1 : 0;
  }
  return out;
}

std::vector<double> logs(const std::vector<double>& t) {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = std::log(t[i]);
  return out;
}

std::string flagged(const Series& s) {
  return s.inconclusive ? "; " + std::to_string(s.inconclusive) + " row(s) numerically inconclusive" : "";
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

void Report::write_csv(std::ostream& os) const {
  os << csv_header << '\n';
  for (const auto& r : csv_rows) os << r << '\n';
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

double trend_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidArgument, "trend_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::vector<Assertion> assess_theorem3(const std::vector<SweepResult>& rows, const Theorem3Tolerances& tol) {
  std::vector<Assertion> out;
  for (const auto& s : by_region(rows)) {
    const bool nu = s.region.size() > 3 && s.region.compare(s.region.size() - 3, 3, ":nu") == 0;
    const std::string base = nu ? "corollary[" + s.region + "]" : "theorem3[" + s.region + "]";
    if (!nu)
      out.push_back({base + " deviation decreasing over t", strictly_decreasing(s.dev),
                     "deviations " + list(s.dev) + flagged(s)});
    out.push_back({base + " final deviation <= " + fmt("%g", tol.final_deviation),
                   s.dev.back() <= tol.final_deviation, "final " + fmt("%.4g", s.dev.back()) + flagged(s)});
  }
  return out;
}

std::vector<Assertion> assess_theorem2(const std::vector<SweepResult>& rows, const Theorem2Tolerances& tol) {
  std::vector<Assertion> out;
  bool hyp_done = false;
  for (const auto& s : by_region(rows)) {
    if (!hyp_done) {
      out.push_back({"schedule hypothesis (sigma_t-1)log t decreasing", strictly_decreasing(s.hyp),
                     "values " + list(s.hyp)});
      hyp_done = true;
    }
    if (s.region.find('/') != std::string::npos) {
      out.push_back({"theorem2[" + s.region + "] final ratio within " + fmt("%g", 100 * tol.ratio_deviation) + "%",
                     s.dev.back() <= tol.ratio_deviation,
                     "measured/expected " + list(s.ratio) + flagged(s)});
      continue;
    }
    const double last = s.ratio.back();
    out.push_back({"theorem2[" + s.region + "] normalized ratio in [" + fmt("%g", tol.normalized_lo) + ", " +
                       fmt("%g", tol.normalized_hi) + "] at final t",
                   last >= tol.normalized_lo && last <= tol.normalized_hi, "ratios " + list(s.ratio) + flagged(s)});
    const double slope = trend_slope(logs(s.t), s.dev);
    out.push_back({"theorem2[" + s.region + "] normalized ratio improving", slope < 0.0,
                   "slope of |ratio-1| against log t " + fmt("%.4g", slope) + flagged(s)});
  }
  return out;
}

std::vector<Assertion> assess_theorem1(const std::vector<SweepResult>& rows, const ZeroCensus& census,
                                       const Theorem1Tolerances& tol) {
  std::vector<Assertion> out;
  out.push_back({"zeros on the critical line", census.all_on_line,
                 std::to_string(census.zeros.size()) + " sign changes, argument count " +
                     std::to_string(census.argument_count) + " up to height " + fmt("%.6g", census.height)});
  for (const auto& s : by_region(rows)) {
    const double slope = trend_slope(logs(s.t), s.dev);
    out.push_back({"theorem1[" + s.region + "] deviation decreasing in trend", slope < 0.0,
                   "deviations " + list(s.dev) + ", slope " + fmt("%.4g", slope) + flagged(s)});
    out.push_back({"theorem1[" + s.region + "] final deviation <= " + fmt("%g", tol.final_deviation),
                   s.dev.back() <= tol.final_deviation, "final " + fmt("%.4g", s.dev.back()) + flagged(s)});
  }
  return out;
}

std::vector<double> phi_log_derivative_ratios(const FieldContext& ctx, double sigma, const std::vector<double>& t) {
  std::vector<double> out;
  for (double tt : t) {
    const cplx sym = phi_log_derivative(ctx, cplx(sigma, tt)) + phi_log_derivative(ctx, cplx(sigma, -tt));
    out.push_back(sym.real() / (-4.0 * std::log(tt)));
  }
  return out;
}

Report run_selftest(int field, std::uint64_t seed) {
  auto ctx = FieldContext::get(field);
  const FieldContext& K = *ctx;
  Report rep;
  rep.csv_header = "check,max_error,tolerance,pass";
  auto add = [&](const std::string& name, double err, double tol, const std::string& detail) {
    const bool pass = err < tol;
    rep.assertions.push_back({name, pass, detail + " max error " + fmt("%.3g", err)});
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.6e,%.1e,%d", name.c_str(), err, tol, pass ? 1 : 0);
    rep.csv_rows.push_back(buf);
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-3.0, 4.0), im(-30.0, 30.0), unit(0.0, 1.0);

  double fe = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx s(re(rng), im(rng));
    const cplx a = completed_xi(K, s).value, b = completed_xi(K, 1.0 - s).value;
    fe = std::max(fe, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  add("functional_equation", fe, 1e-9, "xi_K(s) = xi_K(1-s) at 100 random points;");

  const double d0 = verify_divisor_identity(K, 0.0, 0.0, 10.0, 10000).rel_error;
  add("divisor_identity", d0, 1e-6, "a = b = 0, s = 10, norm bound 1e4;");
  const double sig = 1.2, t = 2.0;
  const cplx a(1.0 - sig, -t);
  const double d1 = verify_divisor_identity(K, a, std::conj(a), cplx(12.0 - 2.0 * sig + 2.0, 0.0), 10000).rel_error;
  add("divisor_identity_specialized", d1, 1e-5, "a = conj(b) = 1 - s(t), sigma_t = 1.2, t = 2, Re s = 12;");

  double bm = std::max(verify_bessel_moment(1.0, 0.0, 3.0).rel_error, verify_bessel_moment(1.2, 5.0, 3.0).rel_error);
  add("bessel_moment", bm, 1e-8, "(sigma_t, t, s) = (1, 0, 3), (1.2, 5, 3);");
  const auto plus = verify_bessel_moment(1.2, 5.0, 3.0), minus = verify_bessel_moment(1.2, -5.0, 3.0);
  add("bessel_moment_symmetry", std::abs(plus.lhs - minus.lhs) / std::abs(plus.lhs), 1e-12, "t -> -t;");

  std::vector<PointH3> pts;
  const cplx w0 = K.reduced_omega();
  for (int i = 0; i < 10; ++i) {
    const double u = unit(rng) - 0.5, v = unit(rng) - 0.5, y = 0.8 + 1.2 * unit(rng);
    pts.push_back(PointH3::from(cplx(u + v * w0.real(), v * w0.imag()), y));
  }
  const EisensteinEvaluator ev(ctx, 3.0, 0.8);
  std::vector<double> errs(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const cplx f = ev.eval(pts[i]);
    const cplx c = coset_sum_eval(K, pts[i], 3.0).value;
    errs[i] = std::abs(f - c) / std::abs(c);
  });
  double oe = 0.0;
  for (double e : errs) oe = std::max(oe, e);
  add("oracle_equivalence", oe, 1e-6, "Fourier vs coset sum for E(p, 3) at 10 random points;");
  return rep;
}

Report run_sweep(const RunConfig& cfg) {
  auto ctx = FieldContext::get(cfg.field);
  set_thread_count(cfg.threads);
  const auto regions = effective_regions(cfg);
  const SweepOptions opt = sweep_options(cfg);
  Report rep;
  rep.csv_header = kSweepCsvHeader;
  switch (cfg.theorem) {
    case 3:
      rep.sweep_rows = theorem3_sweep(ctx, regions.at(0), cfg.schedule, opt);
      rep.assertions = assess_theorem3(rep.sweep_rows);
      break;
    case 2:
      if (regions.size() < 2) throw Error(ErrorCode::InvalidArgument, "theorem 2 needs two regions");
      rep.sweep_rows = theorem2_sweep(ctx, regions[0], regions[1], cfg.schedule, opt);
      rep.assertions = assess_theorem2(rep.sweep_rows);
      break;
    case 1: {
      const ZeroCensus census = first_critical_zeros(*ctx, cfg.zero_count);
      rep.sweep_rows = theorem1_sweep(ctx, regions.at(0), census.zeros, opt);
      rep.assertions = assess_theorem1(rep.sweep_rows, census);
      break;
    }
    default:
      throw Error(ErrorCode::InvalidArgument, "theorem must be 1, 2 or 3");
  }
  for (const auto& r : rep.sweep_rows) rep.csv_rows.push_back(csv_row(r));
  return rep;
}

Report run_lemma_cont(const RunConfig& cfg) {
  auto ctx = FieldContext::get(cfg.field);
  set_thread_count(cfg.threads);
  cfg.schedule.validate();
  const TestFunction& h = test_function(cfg.test_function);
  const auto& grid = cfg.schedule.t_grid;
  std::vector<LemmaContResult> res(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) res[i] = lemma_cont_check(ctx, h, cfg.schedule.param(grid[i]), cfg.eps);

  Report rep;
  rep.csv_header = "field,t,sigma_t,lhs,rhs_main,ratio,quad_delta";
  std::vector<double> dev, hyp;
  for (const auto& r : res) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", cfg.field, r.t, r.sigma_t, r.lhs,
                  r.rhs_main, r.ratio, r.quad_delta);
    rep.csv_rows.push_back(buf);
    dev.push_back(std::abs(r.ratio - 1.0));
    hyp.push_back(cfg.schedule.hypothesis(r.t));
  }
  if (cfg.schedule.kind == ScheduleKind::ConstantSigma) {
    rep.assertions.push_back({"lemma ratio final within 10%", dev.back() <= 0.1, "deviations " + list(dev)});
    if (dev.size() >= 2) {
      const double slope = trend_slope(logs(grid), dev);
      rep.assertions.push_back({"lemma ratio tending to 1", slope < 0.0, "slope " + fmt("%.4g", slope)});
    }
  } else {
    rep.assertions.push_back({"schedule hypothesis (sigma_t-1)log t decreasing", strictly_decreasing(hyp),
                              "values " + list(hyp)});
    rep.assertions.push_back({"lemma ratio monotone toward 1", strictly_decreasing(dev), "deviations " + list(dev)});
  }
  return rep;
}

Report run_volume(int field) {
  const auto ctx = FieldContext::get(field);
  const VolumeResult v = fundamental_volume(*ctx);
  Report rep;
  rep.csv_header = "field,quadrature,closed_form,rel_gap";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.6e", field, v.quadrature, v.closed_form, v.rel_gap);
  rep.csv_rows.push_back(buf);
  rep.assertions.push_back({"volume matches |d_K|^{3/2} zeta_K(2) / (4 pi^2) to 1e-3", v.rel_gap < 1e-3,
                            "quadrature " + fmt("%.12g", v.quadrature) + ", closed form " +
                                fmt("%.12g", v.closed_form) + ", gap " + fmt("%.3g", v.rel_gap)});
  return rep;
}

Report run_zeros(int field, double t_max) {
  const auto ctx = FieldContext::get(field);
  const auto zeros = find_critical_zeros(*ctx, t_max);
  Report rep;
  rep.csv_header = "gamma,source,bracket_lo,bracket_hi";
  for (const auto& z : zeros) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.15g,%s,%.15g,%.15g", z.gamma, zero_source_name(z.source), z.bracket_lo,
                  z.bracket_hi);
    rep.csv_rows.push_back(buf);
  }
  const int count = argument_principle_count(*ctx, t_max);
  rep.assertions.push_back({"sign changes account for every zero up to t_max", count == static_cast<int>(zeros.size()),
                            std::to_string(zeros.size()) + " sign changes, argument count " + std::to_string(count)});
  return rep;
}

}  // namespace bianchi
