#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "bianchi/error.hpp"
#include "bianchi/field.hpp"
#include "bianchi/lfunctions.hpp"

namespace bianchi {

bool is_supported_field(int D) {
  return std::find(kClassNumberOneFields.begin(), kClassNumberOneFields.end(), D) != kClassNumberOneFields.end();
}

FieldContext::FieldContext(int D) : D_(D) {
  if (!is_supported_field(D))
    throw Error(ErrorCode::InvalidArgument,
                "field D=" + std::to_string(D) + " is not one of the nine class-number-one fields");
  const int dmod4 = ((D % 4) + 4) % 4;
  dK_ = dmod4 == 1 ? D : 4 * D;
  sqrt_q_ = std::sqrt(static_cast<double>(-dK_));
  omega_ = cplx(dK_ / 2.0, sqrt_q_ / 2.0);
  shift_ = static_cast<std::int64_t>(std::round(omega_.real()));
  omega0_ = omega_ - static_cast<double>(shift_);
  trace_ = dK_;
  omnorm_ = (static_cast<std::int64_t>(dK_) * dK_ - dK_) / 4;
  covolume_ = sqrt_q_ / 2.0;
  units_ = elements_up_to(1);
  zeta_k2_ = dedekind_zeta(*this, cplx(2.0, 0.0)).value.real();
  residue_ = 2.0 * std::numbers::pi / (unit_count() * sqrt_q_);
  manifold_volume_ = std::pow(static_cast<double>(-dK_), 1.5) * zeta_k2_ / (4.0 * std::numbers::pi * std::numbers::pi);
}

std::shared_ptr<const FieldContext> FieldContext::get(int D) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const FieldContext>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(D);
    if (it != cache.end()) return it->second;
  }
  auto ctx = std::make_shared<const FieldContext>(D);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(D, ctx).first->second;
}

std::int64_t FieldContext::norm(const AlgInt& n) const {
  return n.a * n.a + n.a * n.b * trace_ + n.b * n.b * omnorm_;
}

AlgInt FieldContext::conj(const AlgInt& n) const { return {n.a + n.b * trace_, -n.b}; }

AlgInt FieldContext::mul(const AlgInt& x, const AlgInt& y) const {
  return {x.a * y.a - x.b * y.b * omnorm_, x.a * y.b + x.b * y.a + x.b * y.b * trace_};
}

bool FieldContext::divides(const AlgInt& d, const AlgInt& n) const {
  if (d.is_zero()) return n.is_zero();
  const AlgInt m = mul(n, conj(d));
  const std::int64_t nd = norm(d);
  return m.a % nd == 0 && m.b % nd == 0;
}

AlgInt FieldContext::exact_div(const AlgInt& n, const AlgInt& d) const {
  if (!divides(d, n)) throw Error(ErrorCode::Domain, "exact_div: divisor does not divide");
  const AlgInt m = mul(n, conj(d));
  const std::int64_t nd = norm(d);
  return {m.a / nd, m.b / nd};
}

std::array<double, 2> FieldContext::reduced_coords(cplx z) const {
  const double v = z.imag() / omega0_.imag();
  const double u = z.real() - v * omega0_.real();
  return {u, v};
}

cplx FieldContext::reduce_to_cell(cplx z, AlgInt* shift) const {
  auto [u, v] = reduced_coords(z);
  const double fu = std::floor(u + 0.5), fv = std::floor(v + 0.5);
  const std::int64_t iu = static_cast<std::int64_t>(fu), iv = static_cast<std::int64_t>(fv);
  // iu + iv*omega0 rewritten in the (1, omega) basis
  const AlgInt lam{iu - iv * shift_, iv};
  if (shift) *shift = lam;
  return z - to_complex(lam);
}

AlgInt FieldContext::nearest(cplx z) const {
  auto [u, v] = reduced_coords(z);
  const std::int64_t u0 = static_cast<std::int64_t>(std::llround(u));
  const std::int64_t v0 = static_cast<std::int64_t>(std::llround(v));
  AlgInt best{};
  double bestd = INFINITY;
  for (std::int64_t dv = -1; dv <= 1; ++dv)
    for (std::int64_t du = -1; du <= 1; ++du) {
      const AlgInt cand{u0 + du - (v0 + dv) * shift_, v0 + dv};
      const double d = std::norm(z - to_complex(cand));
      if (d < bestd) {
        bestd = d;
        best = cand;
      }
    }
  return best;
}

AlgInt FieldContext::canonical(const AlgInt& n) const {
  AlgInt best = n;
  for (const auto& u : units_) {
    const AlgInt c = mul(u, n);
    if (c < best) best = c;
  }
  return best;
}

std::vector<AlgInt> FieldContext::elements_up_to(std::int64_t bound) const {
  std::vector<AlgInt> out;
  if (bound <= 0) return out;
  const double B = static_cast<double>(bound);
  const std::int64_t vmax = static_cast<std::int64_t>(std::floor(std::sqrt(B) / omega0_.imag() + 1e-9));
  for (std::int64_t v = -vmax; v <= vmax; ++v) {
    const double yv = v * omega0_.imag();
    const double rem = B - yv * yv;
    if (rem < -1e-9) continue;
    const double r = std::sqrt(std::max(rem, 0.0));
    const double c = -v * omega0_.real();
    const std::int64_t ulo = static_cast<std::int64_t>(std::ceil(c - r - 1e-9));
    const std::int64_t uhi = static_cast<std::int64_t>(std::floor(c + r + 1e-9));
    for (std::int64_t u = ulo; u <= uhi; ++u) {
      const AlgInt n{u - v * shift_, v};
      if (n.is_zero()) continue;
      if (norm(n) <= bound) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end(), [this](const AlgInt& x, const AlgInt& y) {
    const auto nx = norm(x), ny = norm(y);
    return nx != ny ? nx < ny : x < y;
  });
  return out;
}

std::vector<AlgInt> enumerate_up_to_units(const FieldContext& ctx, std::int64_t norm_bound) {
  if (norm_bound < 0) throw Error(ErrorCode::InvalidArgument, "enumerate_up_to_units: negative norm bound");
  std::vector<AlgInt> out;
  for (const auto& n : ctx.elements_up_to(norm_bound))
    if (ctx.canonical(n) == n) out.push_back(n);
  return out;
}

std::vector<AlgInt> elements_of_norm(const FieldContext& ctx, std::int64_t m) {
  std::vector<AlgInt> out;
  if (m <= 0) return out;
  const cplx w0 = ctx.reduced_omega();
  const std::int64_t shift = ctx.omega_shift();
  const double M = static_cast<double>(m);
  const std::int64_t vmax = static_cast<std::int64_t>(std::floor(std::sqrt(M) / w0.imag() + 1e-9));
  for (std::int64_t v = -vmax; v <= vmax; ++v) {
    const double yv = v * w0.imag();
    const double rem = M - yv * yv;
    if (rem < -1e-9) continue;
    const double r = std::sqrt(std::max(rem, 0.0));
    const double c = -v * w0.real();
    for (double cand : {c - r, c + r}) {
      const std::int64_t u = static_cast<std::int64_t>(std::llround(cand));
      const AlgInt n{u - v * shift, v};
      if (ctx.norm(n) == m && ctx.canonical(n) == n) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AlgInt> ideal_divisors(const FieldContext& ctx, const AlgInt& n) {
  if (n.is_zero()) throw Error(ErrorCode::InvalidArgument, "ideal_divisors: n must be nonzero");
  const std::int64_t N = ctx.norm(n);
  std::vector<std::int64_t> ms;
  for (std::int64_t k = 1; k * k <= N; ++k)
    if (N % k == 0) {
      ms.push_back(k);
      if (k * k != N) ms.push_back(N / k);
    }
  std::sort(ms.begin(), ms.end());
  std::vector<AlgInt> out;
  for (auto m : ms)
    for (const auto& d : elements_of_norm(ctx, m))
      if (ctx.divides(d, n)) out.push_back(d);
  return out;
}

cplx divisor_sum(const FieldContext& ctx, const AlgInt& n, cplx s) {
  if (n.is_zero()) throw Error(ErrorCode::InvalidArgument, "divisor_sum: n must be nonzero");
  cplx sum = 0.0;
  for (const auto& d : ideal_divisors(ctx, n)) {
    const double nd = static_cast<double>(ctx.norm(d));
    sum += nd == 1.0 ? cplx(1.0) : std::exp(s * std::log(nd));
  }
  return sum;
}

cplx dual_frequency(const FieldContext& ctx, const AlgInt& n) {
  // 2 conj(n) / sqrt(d_K) with sqrt(d_K) = i sqrt|d_K|.
  const cplx nc = std::conj(ctx.to_complex(n));
  return cplx(0.0, -2.0) * nc / ctx.sqrt_abs_dk();
}

cplx dual_pairing_phase(const FieldContext& ctx, const AlgInt& n, cplx z) {
  if (n.is_zero()) return 1.0;
  const cplx mu = dual_frequency(ctx, n);
  const double pairing = mu.real() * z.real() + mu.imag() * z.imag();
  const double ang = 2.0 * std::numbers::pi * pairing;
  return {std::cos(ang), std::sin(ang)};
}

}  // namespace bianchi
