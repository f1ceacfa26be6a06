#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace bianchi {

using cplx = std::complex<double>;

// a + b*omega with omega = (d_K + sqrt(d_K)) / 2.
struct AlgInt {
  std::int64_t a = 0;
  std::int64_t b = 0;
  bool operator==(const AlgInt&) const = default;
  auto operator<=>(const AlgInt&) const = default;
  bool is_zero() const { return a == 0 && b == 0; }
};

inline constexpr std::array<int, 9> kClassNumberOneFields = {-1, -2, -3, -7, -11, -19, -43, -67, -163};

bool is_supported_field(int D);

class FieldContext {
 public:
  explicit FieldContext(int D);

  // Shared immutable instance per field.
  static std::shared_ptr<const FieldContext> get(int D);

  int D() const { return D_; }
  int d_K() const { return dK_; }
  int abs_dk() const { return -dK_; }
  cplx omega() const { return omega_; }
  int unit_count() const { return static_cast<int>(units_.size()); }
  double lattice_covolume() const { return covolume_; }
  double manifold_volume() const { return manifold_volume_; }
  double sqrt_abs_dk() const { return sqrt_q_; }
  double zeta_k_2() const { return zeta_k2_; }
  double zeta_k_2_residue() const { return residue_; }

  const std::vector<AlgInt>& units() const { return units_; }

  // Lattice reduced basis {1, omega0} with omega0 = omega - round(Re omega).
  cplx reduced_omega() const { return omega0_; }
  std::int64_t omega_shift() const { return shift_; }

  cplx to_complex(const AlgInt& n) const { return static_cast<double>(n.a) + static_cast<double>(n.b) * omega_; }
  std::int64_t norm(const AlgInt& n) const;
  AlgInt conj(const AlgInt& n) const;
  AlgInt mul(const AlgInt& x, const AlgInt& y) const;
  AlgInt add(const AlgInt& x, const AlgInt& y) const { return {x.a + y.a, x.b + y.b}; }
  AlgInt sub(const AlgInt& x, const AlgInt& y) const { return {x.a - y.a, x.b - y.b}; }
  AlgInt neg(const AlgInt& x) const { return {-x.a, -x.b}; }
  bool divides(const AlgInt& d, const AlgInt& n) const;
  // n / d; throws if d does not divide n.
  AlgInt exact_div(const AlgInt& n, const AlgInt& d) const;
  // Element with value closest to z (Euclidean rounding in the reduced basis plus neighbours).
  AlgInt nearest(cplx z) const;
  // Coordinates of z in the reduced basis (1, omega0).
  std::array<double, 2> reduced_coords(cplx z) const;
  // z minus a lattice element (stored in *shift), landing in {u + v*omega0 : u, v in [-1/2, 1/2)}.
  cplx reduce_to_cell(cplx z, AlgInt* shift = nullptr) const;

  AlgInt canonical(const AlgInt& n) const;
  // All nonzero elements with norm <= bound, ordered by (norm, a, b).
  std::vector<AlgInt> elements_up_to(std::int64_t bound) const;

 private:
  int D_;
  int dK_;
  cplx omega_;
  cplx omega0_;
  std::int64_t shift_;
  std::int64_t trace_;    // omega + conj(omega)
  std::int64_t omnorm_;   // omega * conj(omega)
  double sqrt_q_;
  double covolume_;
  double zeta_k2_ = 0.0;
  double residue_ = 0.0;
  double manifold_volume_ = 0.0;
  std::vector<AlgInt> units_;
};

// One representative per unit class of nonzero elements of norm <= norm_bound,
// canonical (smallest (norm, a, b)) and in that order.
std::vector<AlgInt> enumerate_up_to_units(const FieldContext& ctx, std::int64_t norm_bound);

// sigma_s(n) = sum over ideal divisors (d) | (n) of N(d)^s.
cplx divisor_sum(const FieldContext& ctx, const AlgInt& n, cplx s);

// Canonical representatives of the ideal divisors of (n).
std::vector<AlgInt> ideal_divisors(const FieldContext& ctx, const AlgInt& n);

// exp(2 pi i <2 conj(n) / sqrt(d_K), z>) with the Euclidean pairing <u, v> = Re(u conj(v)).
cplx dual_pairing_phase(const FieldContext& ctx, const AlgInt& n, cplx z);
// The frequency vector 2 conj(n) / sqrt(d_K) as a plane vector.
cplx dual_frequency(const FieldContext& ctx, const AlgInt& n);

// Canonical representatives of norm exactly m.
std::vector<AlgInt> elements_of_norm(const FieldContext& ctx, std::int64_t m);

}  // namespace bianchi
