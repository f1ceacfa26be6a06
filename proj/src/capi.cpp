#include "bianchi/bianchi.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "bianchi/config.hpp"
#include "bianchi/eisenstein.hpp"
#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"
#include "bianchi/report.hpp"

using namespace bianchi;

struct bq_field {
  std::shared_ptr<const FieldContext> ctx;
};

struct bq_eisenstein {
  std::unique_ptr<EisensteinEvaluator> ev;
};

struct bq_config {
  RunConfig cfg;
};

struct bq_report {
  Report rep;
};

namespace {

thread_local std::string t_last_error;

bq_status set_error(bq_status st, const std::string& msg) {
  t_last_error = msg;
  return st;
}

bq_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return BQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return BQ_ERR_DOMAIN;
    case ErrorCode::Pole: return BQ_ERR_POLE;
    case ErrorCode::OutOfRange: return BQ_ERR_OUT_OF_RANGE;
    case ErrorCode::Convergence: return BQ_ERR_CONVERGENCE;
    case ErrorCode::Parse: return BQ_ERR_PARSE;
    case ErrorCode::Io: return BQ_ERR_IO;
    case ErrorCode::Internal: return BQ_ERR_INTERNAL;
  }
  return BQ_ERR_INTERNAL;
}

template <class F>
bq_status guarded(F&& f) {
  try {
    f();
    t_last_error.clear();
    return BQ_OK;
  } catch (const Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(BQ_ERR_INTERNAL, "unknown failure");
  }
}

cplx to_cplx(bq_complex z) { return {z.re, z.im}; }
bq_complex from_cplx(cplx z) { return {z.real(), z.imag()}; }

#define BQ_REQUIRE(ptr)                                                       \
  do {                                                                        \
    if ((ptr) == nullptr) return set_error(BQ_ERR_NULL_POINTER, #ptr " is null"); \
  } while (0)

bq_status complex_fn(const bq_field* f, bq_complex s, bq_complex* out, cplx (*fn)(const FieldContext&, cplx)) {
  BQ_REQUIRE(f);
  BQ_REQUIRE(out);
  return guarded([&] { *out = from_cplx(fn(*f->ctx, to_cplx(s))); });
}

}  // namespace

extern "C" {

const char* bq_version(void) { return "1.0.0"; }

const char* bq_status_string(bq_status status) {
  switch (status) {
    case BQ_OK: return "ok";
    case BQ_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BQ_ERR_DOMAIN: return "domain";
    case BQ_ERR_POLE: return "pole";
    case BQ_ERR_OUT_OF_RANGE: return "out_of_range";
    case BQ_ERR_CONVERGENCE: return "convergence";
    case BQ_ERR_PARSE: return "parse";
    case BQ_ERR_IO: return "io";
    case BQ_ERR_INTERNAL: return "internal";
    case BQ_ERR_NULL_POINTER: return "null_pointer";
    case BQ_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
  }
  return "unknown";
}

const char* bq_last_error(void) { return t_last_error.c_str(); }

bq_status bq_set_threads(int n) {
  if (n < 0) return set_error(BQ_ERR_INVALID_ARGUMENT, "thread count must be >= 0");
  set_thread_count(n);
  return BQ_OK;
}

int bq_get_threads(void) { return thread_count(); }

bq_status bq_supported_fields(int* out, size_t capacity, size_t* count) {
  BQ_REQUIRE(count);
  *count = kClassNumberOneFields.size();
  if (out == nullptr || capacity < *count) return set_error(BQ_ERR_BUFFER_TOO_SMALL, "buffer too small");
  for (size_t i = 0; i < *count; ++i) out[i] = kClassNumberOneFields[i];
  return BQ_OK;
}

bq_status bq_field_create(int D, bq_field** out) {
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_field{FieldContext::get(D)}; });
}

void bq_field_destroy(bq_field* field) { delete field; }

bq_status bq_field_info_get(const bq_field* field, bq_field_info* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  const FieldContext& K = *field->ctx;
  out->D = K.D();
  out->d_K = K.d_K();
  out->unit_count = K.unit_count();
  out->lattice_covolume = K.lattice_covolume();
  out->manifold_volume = K.manifold_volume();
  out->zeta_k_2 = K.zeta_k_2();
  out->zeta_k_residue = dedekind_zeta_residue(K);
  out->printed_residue = printed_residue(K);
  return BQ_OK;
}

bq_status bq_norm(const bq_field* field, int64_t a, int64_t b, int64_t* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  return guarded([&] { *out = field->ctx->norm(AlgInt{a, b}); });
}

bq_status bq_divisor_sum(const bq_field* field, int64_t a, int64_t b, bq_complex s, bq_complex* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  return guarded([&] { *out = from_cplx(divisor_sum(*field->ctx, AlgInt{a, b}, to_cplx(s))); });
}

bq_status bq_riemann_zeta(bq_complex s, bq_complex* out) {
  BQ_REQUIRE(out);
  return guarded([&] { *out = from_cplx(riemann_zeta(to_cplx(s)).value); });
}

bq_status bq_dirichlet_l(const bq_field* field, bq_complex s, bq_complex* out) {
  return complex_fn(field, s, out, [](const FieldContext& K, cplx z) { return dirichlet_l(K, z).value; });
}

bq_status bq_dedekind_zeta(const bq_field* field, bq_complex s, bq_complex* out) {
  return complex_fn(field, s, out, [](const FieldContext& K, cplx z) { return dedekind_zeta(K, z).value; });
}

bq_status bq_completed_xi(const bq_field* field, bq_complex s, bq_complex* out) {
  return complex_fn(field, s, out, [](const FieldContext& K, cplx z) { return completed_xi(K, z).value; });
}

bq_status bq_scattering_phi(const bq_field* field, bq_complex s, bq_complex* out) {
  return complex_fn(field, s, out, [](const FieldContext& K, cplx z) { return scattering_phi(K, z); });
}

bq_status bq_phi_log_derivative(const bq_field* field, bq_complex s, bq_complex* out) {
  return complex_fn(field, s, out, [](const FieldContext& K, cplx z) { return phi_log_derivative(K, z); });
}

bq_status bq_critical_zeros(const bq_field* field, double t_max, bq_zero* out, size_t capacity, size_t* count) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(count);
  std::vector<CriticalZero> zeros;
  const bq_status st = guarded([&] { zeros = find_critical_zeros(*field->ctx, t_max); });
  if (st != BQ_OK) return st;
  *count = zeros.size();
  if (out == nullptr || capacity < zeros.size()) return set_error(BQ_ERR_BUFFER_TOO_SMALL, "buffer too small");
  for (size_t i = 0; i < zeros.size(); ++i)
    out[i] = bq_zero{zeros[i].gamma, zeros[i].source == ZeroSource::RiemannFactor ? 0 : 1, zeros[i].bracket_lo,
                     zeros[i].bracket_hi};
  return BQ_OK;
}

bq_status bq_argument_count(const bq_field* field, double height, int* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  return guarded([&] { *out = argument_principle_count(*field->ctx, height); });
}

bq_status bq_log_gamma(bq_complex z, bq_complex* out) {
  BQ_REQUIRE(out);
  return guarded([&] { *out = from_cplx(log_gamma(to_cplx(z))); });
}

bq_status bq_bessel_k(bq_complex nu, double x, bq_complex* out) {
  BQ_REQUIRE(out);
  return guarded([&] { *out = from_cplx(bessel_k(to_cplx(nu), x)); });
}

bq_status bq_bessel_k_scaled(bq_complex nu, double x, bq_complex* mantissa, double* log_scale) {
  BQ_REQUIRE(mantissa);
  BQ_REQUIRE(log_scale);
  return guarded([&] {
    const ScaledBesselValue v = bessel_k_scaled(to_cplx(nu), x);
    *mantissa = from_cplx(v.mantissa);
    *log_scale = v.log_scale;
  });
}

bq_status bq_reduce(const bq_field* field, bq_point p, bq_point* out, int64_t* gamma) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  return guarded([&] {
    const Reduction r = reduce_to_fundamental(*field->ctx, PointH3{p.x1, p.x2, p.y});
    *out = bq_point{r.point.x1, r.point.x2, r.point.y};
    if (gamma != nullptr) {
      const AlgInt e[4] = {r.gamma.a, r.gamma.b, r.gamma.c, r.gamma.d};
      for (int k = 0; k < 4; ++k) {
        gamma[2 * k] = e[k].a;
        gamma[2 * k + 1] = e[k].b;
      }
    }
  });
}

bq_status bq_volume(const bq_field* field, double* quadrature, double* closed_form) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(quadrature);
  BQ_REQUIRE(closed_form);
  return guarded([&] {
    const VolumeResult v = fundamental_volume(*field->ctx);
    *quadrature = v.quadrature;
    *closed_form = v.closed_form;
  });
}

bq_status bq_eisenstein_create(const bq_field* field, bq_complex s, double y_min, double eps, bq_eisenstein** out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto ev = std::make_unique<EisensteinEvaluator>(field->ctx, to_cplx(s), y_min, eps);
    *out = new bq_eisenstein{std::move(ev)};
  });
}

void bq_eisenstein_destroy(bq_eisenstein* e) { delete e; }

bq_status bq_eisenstein_eval(const bq_eisenstein* e, bq_point p, bq_complex* out) {
  BQ_REQUIRE(e);
  BQ_REQUIRE(out);
  return guarded([&] { *out = from_cplx(e->ev->eval(PointH3{p.x1, p.x2, p.y})); });
}

bq_status bq_eisenstein_orbits(const bq_eisenstein* e, size_t* out) {
  BQ_REQUIRE(e);
  BQ_REQUIRE(out);
  *out = e->ev->orbit_count();
  return BQ_OK;
}

bq_status bq_coset_sum(const bq_field* field, bq_point p, bq_complex s, bq_complex* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  return guarded(
      [&] { *out = from_cplx(coset_sum_eval(*field->ctx, PointH3{p.x1, p.x2, p.y}, to_cplx(s)).value); });
}

bq_status bq_eisenstein_pole_residue(const bq_field* field, double* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(out);
  return guarded([&] { *out = eisenstein_pole_residue(*field->ctx); });
}

bq_status bq_verify_divisor_identity(const bq_field* field, bq_complex a, bq_complex b, bq_complex s,
                                     int64_t norm_bound, double* rel_error) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(rel_error);
  return guarded([&] {
    *rel_error = verify_divisor_identity(*field->ctx, to_cplx(a), to_cplx(b), to_cplx(s), norm_bound).rel_error;
  });
}

bq_status bq_verify_bessel_moment(double sigma_t, double t, bq_complex s, double* rel_error) {
  BQ_REQUIRE(rel_error);
  return guarded([&] { *rel_error = verify_bessel_moment(sigma_t, t, to_cplx(s)).rel_error; });
}

bq_status bq_lemma_cont(const bq_field* field, const char* test_function_name, double sigma, double t,
                        int approach_one, bq_lemma_result* out) {
  BQ_REQUIRE(field);
  BQ_REQUIRE(test_function_name);
  BQ_REQUIRE(out);
  return guarded([&] {
    const SpectralParam sp{sigma, t, approach_one ? "approach_one" : "constant_sigma"};
    const LemmaContResult r = lemma_cont_check(field->ctx, test_function(test_function_name), sp);
    *out = bq_lemma_result{r.lhs, r.rhs_main, r.ratio, r.quad_delta};
  });
}

bq_status bq_config_parse(const char* json, bq_config** out) {
  BQ_REQUIRE(json);
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_config{parse_run_config(json)}; });
}

bq_status bq_config_load(const char* path, bq_config** out) {
  BQ_REQUIRE(path);
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_config{load_run_config(path)}; });
}

void bq_config_destroy(bq_config* cfg) { delete cfg; }

bq_status bq_config_to_json(const bq_config* cfg, char* buf, size_t capacity, size_t* needed) {
  BQ_REQUIRE(cfg);
  BQ_REQUIRE(needed);
  std::string text;
  const bq_status st = guarded([&] { text = serialize_run_config(cfg->cfg); });
  if (st != BQ_OK) return st;
  *needed = text.size() + 1;
  if (buf == nullptr || capacity < *needed) return set_error(BQ_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, text.c_str(), *needed);
  return BQ_OK;
}

bq_status bq_run_selftest(int field, uint64_t seed, bq_report** out) {
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_report{run_selftest(field, seed)}; });
}

bq_status bq_run_sweep(const bq_config* cfg, bq_report** out) {
  BQ_REQUIRE(cfg);
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_report{run_sweep(cfg->cfg)}; });
}

bq_status bq_run_lemma_cont(const bq_config* cfg, bq_report** out) {
  BQ_REQUIRE(cfg);
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_report{run_lemma_cont(cfg->cfg)}; });
}

bq_status bq_run_volume(int field, bq_report** out) {
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_report{run_volume(field)}; });
}

bq_status bq_run_zeros(int field, double t_max, bq_report** out) {
  BQ_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new bq_report{run_zeros(field, t_max)}; });
}

void bq_report_destroy(bq_report* r) { delete r; }

size_t bq_report_row_count(const bq_report* r) { return r == nullptr ? 0 : r->rep.csv_rows.size(); }

const char* bq_report_csv_header(const bq_report* r) { return r == nullptr ? nullptr : r->rep.csv_header.c_str(); }

const char* bq_report_csv_row(const bq_report* r, size_t i) {
  if (r == nullptr || i >= r->rep.csv_rows.size()) return nullptr;
  return r->rep.csv_rows[i].c_str();
}

size_t bq_report_assertion_count(const bq_report* r) { return r == nullptr ? 0 : r->rep.assertions.size(); }

bq_status bq_report_assertion(const bq_report* r, size_t i, const char** name, int* pass, const char** detail) {
  BQ_REQUIRE(r);
  if (i >= r->rep.assertions.size()) return set_error(BQ_ERR_OUT_OF_RANGE, "assertion index out of range");
  const Assertion& a = r->rep.assertions[i];
  if (name) *name = a.name.c_str();
  if (pass) *pass = a.pass ? 1 : 0;
  if (detail) *detail = a.detail.c_str();
  return BQ_OK;
}

int bq_report_all_pass(const bq_report* r) { return r != nullptr && r->rep.all_pass() ? 1 : 0; }

bq_status bq_report_write_csv(const bq_report* r, const char* path) {
  BQ_REQUIRE(r);
  BQ_REQUIRE(path);
  std::ofstream os(path, std::ios::binary);
  if (!os) return set_error(BQ_ERR_IO, std::string("cannot open '") + path + "' for writing");
  r->rep.write_csv(os);
  os.flush();
  if (!os) return set_error(BQ_ERR_IO, std::string("write to '") + path + "' failed");
  return BQ_OK;
}

}  // extern "C"
