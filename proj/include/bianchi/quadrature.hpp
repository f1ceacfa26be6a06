#pragma once

#include <cmath>
#include <complex>
#include <queue>
#include <utility>
#include <vector>

#include "bianchi/error.hpp"

namespace bianchi {

// Gauss-Legendre rule on [-1, 1]; cached, thread-safe.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T, class F>
std::pair<T, double> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T center = f(c);
  T kronrod = center * kKronrodWeights[7];
  T gauss = center * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    T pair = f(c - dx) + f(c + dx);
    kronrod += pair * kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * kGaussWeights[j / 2];
  }
  return {kronrod * h, magnitude((kronrod - gauss) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
template <class T, class F>
QuadResult<T> integrate_adaptive(F f, double a, double b, double abs_tol, double rel_tol,
                                 int max_intervals = 4000) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  QuadResult<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Piece> heap;
  auto [v0, e0] = detail::kronrod15<T>(f, a, b);
  heap.push({a, b, v0, e0});
  T total = v0;
  double err = e0;
  out.evaluations = 15;
  while (err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) break;
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      heap.push(p);
      break;
    }
    auto [vl, el] = detail::kronrod15<T>(f, p.a, m);
    auto [vr, er] = detail::kronrod15<T>(f, m, p.b);
    out.evaluations += 30;
    total += vl + vr - p.value;
    err += el + er - p.error;
    heap.push({p.a, m, vl, el});
    heap.push({m, p.b, vr, er});
  }
  // Re-sum to shed accumulated rounding from the running updates.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  out.converged = esum <= std::max(abs_tol, rel_tol * detail::magnitude(sum));
  return out;
}

// Fixed Gauss-Legendre rule with n nodes on [a, b].
template <class T, class F>
T integrate_gauss_legendre(F f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T sum{};
  for (int i = 0; i < n; ++i) sum += f(c + h * rule.nodes[i]) * rule.weights[i];
  return sum * h;
}

}  // namespace bianchi
