#pragma once

#include <complex>
#include <string>
#include <vector>

#include "bianchi/field.hpp"

namespace bianchi {

enum class ZetaMethod { Series, EulerMaclaurin, FunctionalEquation };
const char* zeta_method_name(ZetaMethod m);

struct ZetaValue {
  cplx s;
  cplx value;
  ZetaMethod method = ZetaMethod::EulerMaclaurin;
  double est_error = 0.0;  // relative
};

struct ValueAndDerivative {
  cplx value;
  cplx derivative;
};

// Evaluation is supported for kMinRe <= Re s <= kMaxRe and |Im s| <= kMaxIm.
inline constexpr double kZetaMinRe = -20.0;
inline constexpr double kZetaMaxRe = 60.0;
inline constexpr double kZetaMaxIm = 1000.0;

int kronecker_symbol(int d, long long n);

ZetaValue riemann_zeta(cplx s);
ZetaValue dirichlet_l(const FieldContext& ctx, cplx s);
ZetaValue dedekind_zeta(const FieldContext& ctx, cplx s);
ZetaValue completed_xi(const FieldContext& ctx, cplx s);
// log xi_K(s); imaginary part is only meaningful modulo 2 pi.
cplx log_completed_xi(const FieldContext& ctx, cplx s);

ValueAndDerivative riemann_zeta_d(cplx s);
ValueAndDerivative dirichlet_l_d(const FieldContext& ctx, cplx s);
ValueAndDerivative dedekind_zeta_d(const FieldContext& ctx, cplx s);

// Standard class-number formula with h = 1: 2 pi / (|O^x| sqrt|d_K|).
double dedekind_zeta_residue(const FieldContext& ctx);
// The same residue with the 1/sqrt|d_K| factor dropped, 2 pi / |O^x|.
double printed_residue(const FieldContext& ctx);

enum class ZeroSource { RiemannFactor, DirichletFactor };
const char* zero_source_name(ZeroSource s);

struct CriticalZero {
  double gamma = 0.0;
  ZeroSource source = ZeroSource::RiemannFactor;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Real rotations of zeta(1/2+it) and L(1/2+it, chi) whose sign changes are zeros.
double hardy_z_riemann(double t);
double hardy_z_dirichlet(const FieldContext& ctx, double t);

std::vector<CriticalZero> find_critical_zeros(const FieldContext& ctx, double t_max);

// Zeros of zeta_K with 0 < Im s <= T counted by the change of argument of
// s(s-1) xi_K(s) along 3 -> 3+iT -> 1/2+iT.
int argument_principle_count(const FieldContext& ctx, double T);

}  // namespace bianchi
