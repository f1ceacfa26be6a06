#include "bianchi/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"
#include "bianchi/quadrature.hpp"

namespace bianchi {

namespace {

using i128 = __int128;

struct LatticeSolve {
  i128 index;                 // |det| of the sublattice generated by the columns
  std::array<i128, 4> x{};    // solution of M x = (1, 0) when index == 1
};

i128 iabs(i128 v) { return v < 0 ? -v : v; }

// Extended gcd: returns g = gcd(a, b) >= 0 and p, q with p a + q b = g.
i128 ext_gcd(i128 a, i128 b, i128& p, i128& q) {
  i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i128 quo = old_r / r;
    i128 tmp = old_r - quo * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quo * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quo * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  p = old_s;
  q = old_t;
  return old_r;
}

// Column-style Hermite reduction of a 2x4 integer matrix with unimodular bookkeeping.
LatticeSolve solve_lattice(std::array<std::array<i128, 2>, 4> cols) {
  std::array<std::array<i128, 4>, 4> U{};
  for (int i = 0; i < 4; ++i) U[i][i] = 1;
  auto combine = [&](int row, int k, int j) {
    const i128 m0 = cols[k][row], mj = cols[j][row];
    if (mj == 0) return;
    i128 p, q;
    const i128 g = ext_gcd(m0, mj, p, q);
    const i128 a = m0 / g, b = mj / g;
    // new_k = p col_k + q col_j ; new_j = -b col_k + a col_j
    for (int r = 0; r < 2; ++r) {
      const i128 ck = cols[k][r], cj = cols[j][r];
      cols[k][r] = p * ck + q * cj;
      cols[j][r] = -b * ck + a * cj;
    }
    for (int r = 0; r < 4; ++r) {
      const i128 uk = U[r][k], uj = U[r][j];
      U[r][k] = p * uk + q * uj;
      U[r][j] = -b * uk + a * uj;
    }
  };
  for (int j = 1; j < 4; ++j) combine(0, 0, j);
  for (int j = 2; j < 4; ++j) combine(1, 1, j);
  LatticeSolve out;
  const i128 g = cols[0][0], h = cols[1][1];
  out.index = iabs(g * h);
  if (out.index == 1) {
    const i128 x0 = g;  // g = +-1
    const i128 x1 = -cols[0][1] * x0 * h;
    for (int r = 0; r < 4; ++r) out.x[r] = U[r][0] * x0 + U[r][1] * x1;
  }
  return out;
}

std::array<i128, 2> coords(const AlgInt& n) { return {n.a, n.b}; }

// Canonical representatives of norm < bound, cached per field.
std::vector<AlgInt> reps_below(const FieldContext& ctx, double bound) {
  static std::mutex mu;
  static std::map<int, std::pair<std::int64_t, std::vector<AlgInt>>> cache;
  const std::int64_t need = static_cast<std::int64_t>(std::ceil(bound));
  std::vector<AlgInt> all;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[ctx.D()];
    if (slot.first < need) {
      slot.first = std::max<std::int64_t>(need, 2 * slot.first);
      slot.second = enumerate_up_to_units(ctx, slot.first);
    }
    all = slot.second;
  }
  std::vector<AlgInt> out;
  for (const auto& c : all) {
    if (static_cast<double>(ctx.norm(c)) < bound) out.push_back(c);
    else break;
  }
  return out;
}

// Lattice points d with |center + d| <= r.
template <class F>
void lattice_points_in_disc(const FieldContext& ctx, cplx center, double r, F&& visit) {
  const cplx w0 = ctx.reduced_omega();
  const std::int64_t shift = ctx.omega_shift();
  const double vlo = (-center.imag() - r) / w0.imag(), vhi = (-center.imag() + r) / w0.imag();
  for (std::int64_t v = static_cast<std::int64_t>(std::ceil(vlo)); v <= static_cast<std::int64_t>(std::floor(vhi)); ++v) {
    const double im = v * w0.imag() + center.imag();
    const double rem = r * r - im * im;
    if (rem < 0.0) continue;
    const double half = std::sqrt(rem);
    const double base = -center.real() - v * w0.real();
    for (std::int64_t u = static_cast<std::int64_t>(std::ceil(base - half));
         u <= static_cast<std::int64_t>(std::floor(base + half)); ++u)
      visit(AlgInt{u - v * shift, v});
  }
}

bool in_cell(const FieldContext& ctx, cplx z) {
  auto [u, v] = ctx.reduced_coords(z);
  return u >= -0.5 && u < 0.5 && v >= -0.5 && v < 0.5;
}

}  // namespace

Mat2 mat_mul(const FieldContext& ctx, const Mat2& g, const Mat2& h) {
  Mat2 r;
  r.a = ctx.add(ctx.mul(g.a, h.a), ctx.mul(g.b, h.c));
  r.b = ctx.add(ctx.mul(g.a, h.b), ctx.mul(g.b, h.d));
  r.c = ctx.add(ctx.mul(g.c, h.a), ctx.mul(g.d, h.c));
  r.d = ctx.add(ctx.mul(g.c, h.b), ctx.mul(g.d, h.d));
  return r;
}

AlgInt mat_det(const FieldContext& ctx, const Mat2& g) { return ctx.sub(ctx.mul(g.a, g.d), ctx.mul(g.b, g.c)); }

Mat2 translation(const AlgInt& lambda) { return Mat2{{1, 0}, lambda, {0, 0}, {1, 0}}; }
Mat2 inversion() { return Mat2{{0, 0}, {-1, 0}, {1, 0}, {0, 0}}; }

PointH3 apply_isometry(const FieldContext& ctx, const Mat2& g, const PointH3& p) {
  if (!(mat_det(ctx, g) == AlgInt{1, 0})) throw Error(ErrorCode::InvalidArgument, "apply_isometry: det g != 1");
  if (!(p.y > 0.0)) throw Error(ErrorCode::InvalidArgument, "apply_isometry: y must be positive");
  const cplx a = ctx.to_complex(g.a), b = ctx.to_complex(g.b), c = ctx.to_complex(g.c), d = ctx.to_complex(g.d);
  const cplx z = p.z();
  const cplx czd = c * z + d;
  const double y2 = p.y * p.y;
  const double den = std::norm(czd) + std::norm(c) * y2;
  const cplx zn = ((a * z + b) * std::conj(czd) + a * std::conj(c) * y2) / den;
  return PointH3::from(zn, p.y / den);
}

double image_height(const FieldContext& ctx, const AlgInt& c, const AlgInt& d, const PointH3& p) {
  const cplx cc = ctx.to_complex(c);
  return p.y / (std::norm(cc * p.z() + ctx.to_complex(d)) + std::norm(cc) * p.y * p.y);
}

bool coprime(const FieldContext& ctx, const AlgInt& c, const AlgInt& d) {
  if (c.is_zero() && d.is_zero()) return false;
  const AlgInt om{0, 1};
  return solve_lattice({coords(c), coords(ctx.mul(om, c)), coords(d), coords(ctx.mul(om, d))}).index == 1;
}

Mat2 complete_bottom_row(const FieldContext& ctx, const AlgInt& c, const AlgInt& d) {
  const AlgInt om{0, 1};
  // alpha d + beta omega d - gamma c - delta omega c = 1, a = alpha + beta omega, b = gamma + delta omega.
  const AlgInt mc = ctx.neg(c);
  const LatticeSolve s =
      solve_lattice({coords(d), coords(ctx.mul(om, d)), coords(mc), coords(ctx.mul(om, mc))});
  if (s.index != 1) throw Error(ErrorCode::InvalidArgument, "complete_bottom_row: (c, d) not coprime");
  Mat2 g;
  g.a = {static_cast<std::int64_t>(s.x[0]), static_cast<std::int64_t>(s.x[1])};
  g.b = {static_cast<std::int64_t>(s.x[2]), static_cast<std::int64_t>(s.x[3])};
  g.c = c;
  g.d = d;
  if (!(mat_det(ctx, g) == AlgInt{1, 0})) throw Error(ErrorCode::Internal, "complete_bottom_row: det check failed");
  return g;
}

namespace {

struct Improvement {
  bool found = false;
  AlgInt c, d;
  double height = 0.0;
};

Improvement best_improvement(const FieldContext& ctx, const PointH3& p, double cbound) {
  Improvement best;
  best.height = p.y * (1.0 + 1e-13);
  const double y2 = p.y * p.y;
  for (const auto& c : reps_below(ctx, cbound)) {
    const double nc = static_cast<double>(ctx.norm(c));
    const double room = 1.0 - nc * y2;
    if (room <= 0.0) continue;
    const cplx cz = ctx.to_complex(c) * p.z();
    lattice_points_in_disc(ctx, cz, std::sqrt(room), [&](const AlgInt& d) {
      const double h = p.y / (std::norm(cz + ctx.to_complex(d)) + nc * y2);
      if (h > best.height) {
        best.found = true;
        best.height = h;
        best.c = c;
        best.d = d;
      }
    });
  }
  if (best.found && !coprime(ctx, best.c, best.d)) throw Error(ErrorCode::Internal, "reduction: non-coprime maximiser");
  return best;
}

}  // namespace

Reduction reduce_to_fundamental(const FieldContext& ctx, const PointH3& p) {
  if (!(p.y > 0.0)) throw Error(ErrorCode::InvalidArgument, "reduce_to_fundamental: y must be positive");
  Reduction r;
  r.point = p;
  r.gamma = Mat2{};
  constexpr double kQuickBound = 16.0;
  for (int iter = 0; iter < kReductionIterationCap; ++iter) {
    r.iterations = iter + 1;
    AlgInt lam;
    const cplx z = ctx.reduce_to_cell(r.point.z(), &lam);
    if (!lam.is_zero()) {
      r.point.x1 = z.real();
      r.point.x2 = z.imag();
      r.gamma = mat_mul(ctx, translation(ctx.neg(lam)), r.gamma);
    }
    const double full = 1.0 / (r.point.y * r.point.y);
    Improvement imp = best_improvement(ctx, r.point, std::min(full, kQuickBound));
    if (!imp.found && full > kQuickBound) imp = best_improvement(ctx, r.point, full);
    if (!imp.found) return r;
    const Mat2 g = complete_bottom_row(ctx, imp.c, imp.d);
    r.point = apply_isometry(ctx, g, r.point);
    r.gamma = mat_mul(ctx, g, r.gamma);
  }
  throw Error(ErrorCode::Convergence, "reduce_to_fundamental: iteration cap reached");
}

double floor_height_sq(const FieldContext& ctx, cplx z) {
  double best = 0.0;
  double bound = 4.0;
  for (;;) {
    for (const auto& c : reps_below(ctx, bound + 1e-9)) {
      const double nc = static_cast<double>(ctx.norm(c));
      if (1.0 / nc <= best) continue;
      const cplx cz = ctx.to_complex(c) * z;
      lattice_points_in_disc(ctx, cz, 1.0, [&](const AlgInt& d) {
        const double v = (1.0 - std::norm(cz + ctx.to_complex(d))) / nc;
        best = std::max(best, v);
      });
    }
    if (best >= 1.0 / bound) return best;
    bound *= 2.0;
    if (bound > 1e7) throw Error(ErrorCode::Convergence, "floor_height_sq: no covering hemisphere found");
  }
}

Region default_region_a() { return Region{"A", {0.0, 0.25}, {0.0, 0.25}, {1.0, 1.5}, {8, 8, 8}, false}; }
Region default_region_b() { return Region{"B", {0.0, 0.25}, {0.0, 0.25}, {1.5, 2.25}, {8, 8, 8}, false}; }

bool certify_region(const FieldContext& ctx, Region& region) {
  region.inside_certificate = false;
  if (!(region.y.lo > 0.0) || region.x1.hi < region.x1.lo || region.x2.hi < region.x2.lo || region.y.hi < region.y.lo)
    return false;
  for (double a : {region.x1.lo, region.x1.hi})
    for (double b : {region.x2.lo, region.x2.hi}) {
      const cplx z(a, b);
      auto [u, v] = ctx.reduced_coords(z);
      // Closed box: allow the upper cell edge only if it is not reached.
      if (!(u >= -0.5 && u < 0.5 && v >= -0.5 && v < 0.5)) return false;
      if (region.y.lo * region.y.lo < floor_height_sq(ctx, z)) return false;
    }
  if (region.y.lo < 1.0) {
    for (int level = 0; level < 2; ++level) {
      const int f = 1 << level;
      const auto& r1 = gauss_legendre(region.nodes[0] * f);
      const auto& r2 = gauss_legendre(region.nodes[1] * f);
      const auto& r3 = gauss_legendre(region.nodes[2] * f);
      auto map = [](const Interval& I, double t) { return 0.5 * (I.lo + I.hi) + 0.5 * (I.hi - I.lo) * t; };
      for (double t1 : r1.nodes)
        for (double t2 : r2.nodes)
          for (double t3 : r3.nodes) {
            const PointH3 p{map(region.x1, t1), map(region.x2, t2), map(region.y, t3)};
            if (!in_cell(ctx, p.z())) return false;
            const Reduction red = reduce_to_fundamental(ctx, p);
            if (!(red.gamma == Mat2{})) return false;
          }
    }
  }
  region.inside_certificate = true;
  return true;
}

MeasureResult integrate_measure_sliced(const Region& region, const SliceIntegrand& f, double rel_tol, int max_nodes) {
  MeasureResult out;
  if (region.x1.length() < 0.0 || region.x2.length() < 0.0 || region.y.length() < 0.0 || !(region.y.lo > 0.0))
    throw Error(ErrorCode::InvalidArgument, "integrate_measure: malformed region");
  if (region.x1.length() == 0.0 || region.x2.length() == 0.0 || region.y.length() == 0.0) {
    out.converged = true;
    out.nodes = region.nodes;
    return out;
  }
  std::array<int, 3> n = region.nodes;
  for (int k = 0; k < 3; ++k)
    if (n[k] < 1) throw Error(ErrorCode::InvalidArgument, "integrate_measure: node counts must be positive");
  auto run = [&](const std::array<int, 3>& nn) {
    const auto& r1 = gauss_legendre(nn[0]);
    const auto& r2 = gauss_legendre(nn[1]);
    const auto& r3 = gauss_legendre(nn[2]);
    auto mapped = [](const Interval& I, const std::vector<double>& t) {
      std::vector<double> v(t.size());
      for (size_t i = 0; i < t.size(); ++i) v[i] = 0.5 * (I.lo + I.hi) + 0.5 * (I.hi - I.lo) * t[i];
      return v;
    };
    const auto X1 = mapped(region.x1, r1.nodes);
    const auto X2 = mapped(region.x2, r2.nodes);
    const auto Y = mapped(region.y, r3.nodes);
    std::vector<double> slice_sums(Y.size());
    parallel_for(Y.size(), [&](size_t k) {
      std::vector<double> vals(X1.size() * X2.size());
      f(Y[k], X1, X2, vals);
      std::vector<double> rows(X1.size());
      std::vector<double> row(X2.size());
      for (size_t i = 0; i < X1.size(); ++i) {
        for (size_t j = 0; j < X2.size(); ++j) row[j] = vals[i * X2.size() + j] * r2.weights[j];
        rows[i] = pairwise_sum(row) * r1.weights[i];
      }
      const double y = Y[k];
      slice_sums[k] = pairwise_sum(rows) * r3.weights[k] / (y * y * y);
    });
    const double scale = 0.125 * region.x1.length() * region.x2.length() * region.y.length();
    return pairwise_sum(slice_sums) * scale;
  };
  double prev = run(n);
  for (;;) {
    std::array<int, 3> next{n[0] * 2, n[1] * 2, n[2] * 2};
    if (next[0] > max_nodes || next[1] > max_nodes || next[2] > max_nodes) {
      out.value = prev;
      out.nodes = n;
      out.converged = false;
      return out;
    }
    const double cur = run(next);
    out.delta = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    n = next;
    prev = cur;
    if (out.delta < rel_tol) {
      out.value = cur;
      out.nodes = n;
      out.converged = true;
      return out;
    }
  }
}

MeasureResult integrate_measure(const Region& region, const std::function<double(const PointH3&)>& f, double rel_tol,
                                int max_nodes) {
  return integrate_measure_sliced(
      region,
      [&f](double y, const std::vector<double>& x1, const std::vector<double>& x2, std::vector<double>& out) {
        for (size_t i = 0; i < x1.size(); ++i)
          for (size_t j = 0; j < x2.size(); ++j) out[i * x2.size() + j] = f(PointH3{x1[i], x2[j], y});
      },
      rel_tol, max_nodes);
}

VolumeResult fundamental_volume(const FieldContext& ctx, double rel_tol) {
  const cplx w0 = ctx.reduced_omega();
  auto g = [&](double u, double v) {
    const double h2 = floor_height_sq(ctx, cplx(u + v * w0.real(), v * w0.imag()));
    return 0.5 / h2;
  };
  // Globally adaptive tensor Gauss-Kronrod over squares of the (u, v) cell.
  struct Cell {
    double u0, u1, v0, v1, value, error;
    bool operator<(const Cell& o) const { return error < o.error; }
  };
  auto rule = [&](double u0, double u1, double v0, double v1) {
    const double cu = 0.5 * (u0 + u1), hu = 0.5 * (u1 - u0), cv = 0.5 * (v0 + v1), hv = 0.5 * (v1 - v0);
    double xk[15], wk[15], wg[15];
    for (int j = 0; j < 7; ++j) {
      xk[j] = -detail::kKronrodNodes[j];
      xk[14 - j] = detail::kKronrodNodes[j];
      wk[j] = wk[14 - j] = detail::kKronrodWeights[j];
      wg[j] = wg[14 - j] = (j % 2 == 1) ? detail::kGaussWeights[j / 2] : 0.0;
    }
    xk[7] = 0.0;
    wk[7] = detail::kKronrodWeights[7];
    wg[7] = detail::kGaussWeights[3];
    double k = 0.0, gsum = 0.0;
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) {
        const double val = g(cu + hu * xk[i], cv + hv * xk[j]);
        k += wk[i] * wk[j] * val;
        gsum += wg[i] * wg[j] * val;
      }
    const double area = hu * hv;
    return std::pair<double, double>{k * area, std::abs(k - gsum) * area};
  };
  std::priority_queue<Cell> heap;
  double total = 0.0, err = 0.0;
  const int init = 4;
  for (int i = 0; i < init; ++i)
    for (int j = 0; j < init; ++j) {
      const double u0 = -0.5 + i * 1.0 / init, v0 = -0.5 + j * 1.0 / init;
      auto [val, e] = rule(u0, u0 + 1.0 / init, v0, v0 + 1.0 / init);
      heap.push({u0, u0 + 1.0 / init, v0, v0 + 1.0 / init, val, e});
      total += val;
      err += e;
    }
  int cells = init * init;
  while (err > rel_tol * std::abs(total) && cells < 20000) {
    const Cell c = heap.top();
    heap.pop();
    total -= c.value;
    err -= c.error;
    const double um = 0.5 * (c.u0 + c.u1), vm = 0.5 * (c.v0 + c.v1);
    const double us[3] = {c.u0, um, c.u1}, vs[3] = {c.v0, vm, c.v1};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto [val, e] = rule(us[i], us[i + 1], vs[j], vs[j + 1]);
        heap.push({us[i], us[i + 1], vs[j], vs[j + 1], val, e});
        total += val;
        err += e;
      }
    cells += 3;
  }
  VolumeResult out;
  const double copies = ctx.unit_count() / 2.0;
  out.quadrature = total * w0.imag() / copies;
  out.cubature_error = err * w0.imag() / copies;
  out.closed_form = ctx.manifold_volume();
  out.rel_gap = std::abs(out.quadrature - out.closed_form) / out.closed_form;
  return out;
}

}  // namespace bianchi
