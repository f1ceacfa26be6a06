#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bianchi/field.hpp"

namespace bianchi {

struct PointH3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double y = 1.0;
  cplx z() const { return {x1, x2}; }
  static PointH3 from(cplx z, double y) { return {z.real(), z.imag(), y}; }
};

// 2x2 matrix over O_K, acting on H^3 by the Poincare extension.
struct Mat2 {
  AlgInt a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
  bool operator==(const Mat2&) const = default;
};

Mat2 mat_mul(const FieldContext& ctx, const Mat2& g, const Mat2& h);
AlgInt mat_det(const FieldContext& ctx, const Mat2& g);
Mat2 translation(const AlgInt& lambda);
Mat2 inversion();

// Throws InvalidArgument unless det g = 1.
PointH3 apply_isometry(const FieldContext& ctx, const Mat2& g, const PointH3& p);

// Height of g p for a bottom row (c, d): y / (|cz+d|^2 + |c|^2 y^2).
double image_height(const FieldContext& ctx, const AlgInt& c, const AlgInt& d, const PointH3& p);

// True iff the ideal (c, d) is the unit ideal.
bool coprime(const FieldContext& ctx, const AlgInt& c, const AlgInt& d);
// A matrix in SL_2(O_K) with bottom row (c, d); requires coprime (c, d).
Mat2 complete_bottom_row(const FieldContext& ctx, const AlgInt& c, const AlgInt& d);

struct Reduction {
  PointH3 point;
  Mat2 gamma;
  int iterations = 0;
};

inline constexpr int kReductionIterationCap = 1000;

// Maximal-height representative with z in the reduced lattice cell.
Reduction reduce_to_fundamental(const FieldContext& ctx, const PointH3& p);

// Squared height of the floor of the reduced domain above z: the largest
// (1 - |cz+d|^2) / |c|^2 over c != 0, or 0 if z is above no hemisphere.
double floor_height_sq(const FieldContext& ctx, cplx z);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct Region {
  std::string name;
  Interval x1, x2, y;
  std::array<int, 3> nodes{8, 8, 8};
  bool inside_certificate = false;
};

Region default_region_a();
Region default_region_b();

// Checks that reduction is the identity at every node of the base grid and of
// one doubling, and that the box is inside the lattice cell and above the floor.
bool certify_region(const FieldContext& ctx, Region& region);

struct MeasureResult {
  double value = 0.0;
  double delta = 0.0;  // relative change at the last node doubling
  std::array<int, 3> nodes{0, 0, 0};
  bool converged = false;
};

// Integrand evaluated on a horizontal slice: out[i * x2.size() + j] = f(x1[i], x2[j], y).
using SliceIntegrand =
    std::function<void(double y, const std::vector<double>& x1, const std::vector<double>& x2, std::vector<double>& out)>;

inline constexpr double kMeasureRelTol = 1e-5;
inline constexpr int kMeasureMaxNodes = 256;

MeasureResult integrate_measure_sliced(const Region& region, const SliceIntegrand& f,
                                       double rel_tol = kMeasureRelTol, int max_nodes = kMeasureMaxNodes);
MeasureResult integrate_measure(const Region& region, const std::function<double(const PointH3&)>& f,
                                double rel_tol = kMeasureRelTol, int max_nodes = kMeasureMaxNodes);

struct VolumeResult {
  double quadrature = 0.0;
  double closed_form = 0.0;
  double rel_gap = 0.0;
  double cubature_error = 0.0;
};

// Volume of the reduced fundamental domain, integrating 1/(2 h(z)^2) over the
// lattice cell and dividing by the number of cell copies (|O^x| / 2).
VolumeResult fundamental_volume(const FieldContext& ctx, double rel_tol = 1e-6);

}  // namespace bianchi
