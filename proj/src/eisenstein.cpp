#include "bianchi/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bianchi/error.hpp"
#include "bianchi/quadrature.hpp"

namespace bianchi {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_integer(cplx s, double k) { return s == cplx(k, 0.0); }

}  // namespace

cplx scattering_phi(const FieldContext& ctx, cplx s) {
  if (near_integer(s, 1.0) || near_integer(s, 2.0))
    throw Error(ErrorCode::Pole, "scattering_phi: s must avoid 1 and 2");
  const cplx num = dedekind_zeta(ctx, s - 1.0).value;
  const cplx den = dedekind_zeta(ctx, s).value;
  if (den == 0.0) throw Error(ErrorCode::Pole, "scattering_phi: zeta_K(s) vanishes");
  return 2.0 * kPi / ctx.sqrt_abs_dk() * num / ((s - 1.0) * den);
}

cplx scattering_phi_xi(const FieldContext& ctx, cplx s) {
  if (near_integer(s, 1.0) || near_integer(s, 2.0))
    throw Error(ErrorCode::Pole, "scattering_phi: s must avoid 1 and 2");
  const cplx den = completed_xi(ctx, s).value;
  if (den == 0.0) throw Error(ErrorCode::Pole, "scattering_phi: xi_K(s) vanishes");
  return completed_xi(ctx, s - 1.0).value / den;
}

cplx phi_log_derivative(const FieldContext& ctx, cplx s) {
  if (near_integer(s, 1.0) || near_integer(s, 2.0))
    throw Error(ErrorCode::Pole, "phi_log_derivative: s must avoid 1 and 2");
  const auto a = dedekind_zeta_d(ctx, s - 1.0);
  const auto b = dedekind_zeta_d(ctx, s);
  if (a.value == 0.0 || b.value == 0.0) throw Error(ErrorCode::Pole, "phi_log_derivative: zeta_K vanishes");
  return -1.0 / (s - 1.0) + a.derivative / a.value - b.derivative / b.value;
}

double eisenstein_pole_residue(const FieldContext& ctx) {
  const double cell = 2.0 * ctx.lattice_covolume() / ctx.unit_count();
  return cell / ctx.manifold_volume();
}

double EisensteinEvaluator::argument(std::int64_t norm, double y) const {
  return 4.0 * kPi * std::sqrt(static_cast<double>(norm)) * y / ctx_->sqrt_abs_dk();
}

EisensteinEvaluator::EisensteinEvaluator(std::shared_ptr<const FieldContext> ctx, cplx s, double y_min, double eps)
    : ctx_(std::move(ctx)), s_(s), y_min_(y_min), eps_(eps) {
  if (!(y_min_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "EisensteinEvaluator: y_min must be positive");
  if (!(eps_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "EisensteinEvaluator: eps must be positive");
  const FieldContext& K = *ctx_;
  phi_ = scattering_phi(K, s_);
  const double t = s_.imag();
  const cplx logxi = log_completed_xi(K, s_);
  prefactor_ = std::exp(-logxi - kPi * std::abs(t) / 2);
  const cplx nu = s_ - 1.0;
  const int w = K.unit_count();
  const double turn = std::abs(nu) + 5.0;

  // Grow the orbit list shell by shell until the discarded tail at y_min is below eps.
  std::int64_t bound = 0;
  std::vector<AlgInt> reps;
  std::size_t next_rep = 0;
  double window_sum = 0.0, prev_window = -1.0, window_end = 0.0;
  bool done = false;
  std::int64_t target = 64;
  while (!done) {
    if (next_rep >= reps.size()) {
      target = std::max<std::int64_t>(target, 2 * bound);
      reps = enumerate_up_to_units(K, target);
      bound = target;
      if (bound > 50'000'000) throw Error(ErrorCode::Convergence, "EisensteinEvaluator: truncation did not converge");
    }
    // Process one distinct norm.
    const std::int64_t nrm = K.norm(reps[next_rep]);
    std::size_t end = next_rep;
    while (end < reps.size() && K.norm(reps[end]) == nrm) ++end;
    const double x = argument(nrm, y_min_);
    const ScaledBesselValue kv = bessel_k_scaled(nu, x);
    const double kabs = std::abs(kv.value);
    const std::size_t first = orbits_.size();
    double shell = 0.0;
    for (std::size_t i = next_rep; i < end; ++i) {
      Orbit o;
      o.rep = reps[i];
      o.norm = nrm;
      o.coeff = std::exp((s_ - 1.0) * 0.5 * std::log(static_cast<double>(nrm))) * divisor_sum(K, o.rep, 1.0 - s_);
      for (const auto& u : K.units()) o.freqs.push_back(dual_frequency(K, K.mul(u, o.rep)));
      shell += w * std::abs(o.coeff);
      orbits_.push_back(std::move(o));
    }
    norms_.push_back(nrm);
    norm_start_.push_back(first);
    next_rep = end;
    trunc_norm_ = nrm;
    shell *= 2.0 * y_min_ * std::abs(prefactor_) * kabs;
    if (x < turn) continue;
    if (window_end == 0.0) window_end = x + 2.0;
    window_sum += shell;
    if (x >= window_end) {
      if (prev_window > 0.0) {
        const double ratio = window_sum / prev_window;
        if (ratio < 0.8) {
          const double tail = window_sum * ratio / (1.0 - ratio);
          if (tail < eps_) {
            tail_bound_ = tail;
            done = true;
          }
        }
      }
      prev_window = window_sum;
      window_sum = 0.0;
      window_end = x + 2.0;
    }
  }
  norm_start_.push_back(orbits_.size());
}

EisensteinEvaluator::Slice EisensteinEvaluator::slice(double y) const {
  if (!(y >= y_min_ * (1.0 - 1e-12)))
    throw Error(ErrorCode::OutOfRange, "eisenstein_eval: y below the evaluator range");
  Slice sl;
  sl.ev_ = this;
  sl.y_ = y;
  const double ly = std::log(y);
  sl.constant_ = std::exp(s_ * ly) + phi_ * std::exp((2.0 - s_) * ly);
  sl.amp_.assign(orbits_.size(), 0.0);
  const cplx nu = s_ - 1.0;
  const double turn = std::abs(nu) + 5.0;
  const int w = ctx_->unit_count();
  const double drop = eps_ * 1e-4 / std::max<std::size_t>(orbits_.size(), 1);
  sl.active_ = orbits_.size();
  for (std::size_t k = 0; k + 1 < norm_start_.size(); ++k) {
    const double x = argument(norms_[k], y);
    const ScaledBesselValue kv = bessel_k_scaled(nu, x);
    const cplx scale = 2.0 * y * prefactor_ * kv.value;
    double shell = 0.0;
    for (std::size_t i = norm_start_[k]; i < norm_start_[k + 1]; ++i) {
      sl.amp_[i] = scale * orbits_[i].coeff;
      shell = std::max(shell, w * std::abs(sl.amp_[i]));
    }
    if (x > turn && shell < drop) {
      sl.active_ = norm_start_[k + 1];
      break;
    }
  }
  return sl;
}

cplx EisensteinEvaluator::Slice::eval(cplx z) const {
  cplx sum = 0.0;
  const double twopi = 2.0 * kPi;
  for (std::size_t i = 0; i < active_; ++i) {
    cplx ph = 0.0;
    for (const cplx& mu : ev_->orbits_[i].freqs) {
      const double ang = twopi * (mu.real() * z.real() + mu.imag() * z.imag());
      ph += cplx(std::cos(ang), std::sin(ang));
    }
    sum += amp_[i] * ph;
  }
  return constant_ + sum;
}

void EisensteinEvaluator::Slice::eval_grid(const std::vector<double>& x1, const std::vector<double>& x2,
                                           std::vector<cplx>& out) const {
  const std::size_t n1 = x1.size(), n2 = x2.size();
  out.assign(n1 * n2, constant_);
  std::vector<cplx> e1(n1), e2(n2);
  const double twopi = 2.0 * kPi;
  for (std::size_t i = 0; i < active_; ++i) {
    for (const cplx& mu : ev_->orbits_[i].freqs) {
      for (std::size_t a = 0; a < n1; ++a) {
        const double ang = twopi * mu.real() * x1[a];
        e1[a] = amp_[i] * cplx(std::cos(ang), std::sin(ang));
      }
      for (std::size_t b = 0; b < n2; ++b) {
        const double ang = twopi * mu.imag() * x2[b];
        e2[b] = cplx(std::cos(ang), std::sin(ang));
      }
      for (std::size_t a = 0; a < n1; ++a) {
        cplx* row = out.data() + a * n2;
        const cplx ea = e1[a];
        for (std::size_t b = 0; b < n2; ++b) row[b] += ea * e2[b];
      }
    }
  }
}

cplx EisensteinEvaluator::eval(const PointH3& p) const { return slice(p.y).eval(p.z()); }

namespace {

// Parameters of the smoothed row sums in the coset oracle.
struct RowPlan {
  double delta;   // width of the erfc window
  double R;       // window centre
  double reach;   // direct summation radius
};

RowPlan row_plan(const FieldContext& ctx) {
  const double mu_min = 2.0 / ctx.sqrt_abs_dk();
  RowPlan p;
  p.delta = 2.5 / mu_min;
  p.R = 6.0 * p.delta;
  p.reach = p.R + 6.0 * p.delta;
  return p;
}

template <class F>
void lattice_disc(const FieldContext& ctx, cplx center, double r, F&& visit) {
  const cplx w0 = ctx.reduced_omega();
  const double vlo = (-center.imag() - r) / w0.imag(), vhi = (-center.imag() + r) / w0.imag();
  for (std::int64_t v = static_cast<std::int64_t>(std::ceil(vlo)); v <= static_cast<std::int64_t>(std::floor(vhi)); ++v) {
    const double im = v * w0.imag() + center.imag();
    const double rem = r * r - im * im;
    if (rem < 0.0) continue;
    const double half = std::sqrt(rem);
    const double base = -center.real() - v * w0.real();
    for (std::int64_t u = static_cast<std::int64_t>(std::ceil(base - half));
         u <= static_cast<std::int64_t>(std::floor(base + half)); ++u)
      visit(u, v, cplx(u + v * w0.real() + center.real(), im));
  }
}

}  // namespace

std::int64_t default_coset_norm_bound(const FieldContext& ctx, double y) {
  const double mu_min = 2.0 / ctx.sqrt_abs_dk();
  const double c = 36.0 / (2.0 * kPi * mu_min * y);
  return static_cast<std::int64_t>(std::ceil(c * c));
}

CosetSumResult coset_sum_eval(const FieldContext& ctx, const PointH3& p, cplx s, std::int64_t norm_bound) {
  if (!(s.real() > 2.0)) throw Error(ErrorCode::Domain, "coset_sum_eval: requires Re s > 2");
  if (!(p.y > 0.0)) throw Error(ErrorCode::InvalidArgument, "coset_sum_eval: y must be positive");
  const std::int64_t B = norm_bound < 0 ? default_coset_norm_bound(ctx, p.y) : norm_bound;
  const RowPlan plan = row_plan(ctx);
  const double y = p.y, ly = std::log(y);
  const double F = ctx.lattice_covolume();
  const int w = ctx.unit_count();
  const cplx z = p.z();

  cplx rows = 0.0;
  cplx near_norms = 0.0;  // sum over c != 0, N(c) <= B of N(c)^{1-s}
  for (const auto& c : enumerate_up_to_units(ctx, B)) {
    const double nc = static_cast<double>(ctx.norm(c));
    const double a2 = nc * y * y;
    const cplx cz = ctx.to_complex(c) * z;
    cplx direct = 0.0;
    lattice_disc(ctx, cz, plan.reach, [&](std::int64_t, std::int64_t, cplx pt) {
      const double r2 = std::norm(pt);
      const double r = std::sqrt(r2);
      const double win = 0.5 * std::erfc((r - plan.R) / plan.delta);
      if (win == 0.0) return;
      direct += win * std::exp(s * (ly - std::log(r2 + a2)));
    });
    // (1/|F|) int over the plane of f (1 - window), split at the reach radius.
    auto integrand = [&](double r) -> cplx {
      return std::exp(s * (ly - std::log(r * r + a2))) * (0.5 * std::erfc((plan.R - r) / plan.delta)) * r;
    };
    const double r0 = plan.reach;
    auto inner = integrate_adaptive<cplx>(integrand, 0.0, r0, 1e-300, 1e-14, 2000);
    const cplx outer = std::exp(s * ly + (1.0 - s) * std::log(r0 * r0 + a2)) / (2.0 * (s - 1.0));
    const cplx tail_row = 2.0 * kPi / F * (inner.value + outer);
    rows += static_cast<double>(w) * (direct + tail_row);
    near_norms += static_cast<double>(w) * std::exp((1.0 - s) * std::log(nc));
  }
  const cplx zk = dedekind_zeta(ctx, s).value;
  const cplx zk1 = dedekind_zeta(ctx, s - 1.0).value;
  const cplx norm = static_cast<double>(w) * zk;
  CosetSumResult out;
  out.norm_bound = B;
  out.partial = std::exp(s * ly) + rows / norm;
  out.tail = kPi * std::exp((2.0 - s) * ly) / ((s - 1.0) * F) * (static_cast<double>(w) * zk1 - near_norms) / norm;
  out.value = out.partial + out.tail;
  return out;
}

cplx coset_sum_naive(const FieldContext& ctx, const PointH3& p, cplx s, std::int64_t norm_bound, double radius) {
  if (!(s.real() > 2.0)) throw Error(ErrorCode::Domain, "coset_sum_naive: requires Re s > 2");
  const double y = p.y, ly = std::log(y);
  const cplx z = p.z();
  cplx sum = std::exp(s * ly);
  const std::int64_t shift = ctx.omega_shift();
  for (const auto& c : enumerate_up_to_units(ctx, norm_bound)) {
    const double nc = static_cast<double>(ctx.norm(c));
    const cplx cz = ctx.to_complex(c) * z;
    lattice_disc(ctx, cz, radius, [&](std::int64_t u, std::int64_t v, cplx pt) {
      const AlgInt d{u - v * shift, v};
      if (!coprime(ctx, c, d)) return;
      sum += std::exp(s * (ly - std::log(std::norm(pt) + nc * y * y)));
    });
  }
  return sum;
}

double incomplete_eisenstein(const FieldContext& ctx, const TestFunction& h, const PointH3& p) {
  if (!h.compact()) throw Error(ErrorCode::InvalidArgument, "incomplete_eisenstein: h must have compact support");
  if (!(p.y > 0.0)) throw Error(ErrorCode::InvalidArgument, "incomplete_eisenstein: y must be positive");
  const double lo = h.support_lo, y = p.y;
  const cplx z = p.z();
  const std::int64_t shift = ctx.omega_shift();
  double sum = h(y);
  const double cmax = 1.0 / (y * lo);
  for (const auto& c : enumerate_up_to_units(ctx, static_cast<std::int64_t>(std::floor(cmax)))) {
    const double nc = static_cast<double>(ctx.norm(c));
    const double room = y / lo - nc * y * y;
    if (room <= 0.0) continue;
    const cplx cz = ctx.to_complex(c) * z;
    lattice_disc(ctx, cz, std::sqrt(room), [&](std::int64_t u, std::int64_t v, cplx pt) {
      const AlgInt d{u - v * shift, v};
      if (!coprime(ctx, c, d)) return;
      sum += h(y / (std::norm(pt) + nc * y * y));
    });
  }
  return sum;
}

cplx residue_measure_eval(const FieldContext& ctx, const CriticalZero& zero, const PointH3& p, double eps) {
  auto shared = FieldContext::get(ctx.D());
  const EisensteinEvaluator ev(shared, cplx(1.5, -zero.gamma), p.y, eps);
  return ev.eval(p);
}

}  // namespace bianchi
