// Command-line front end over the C interface.
//
// Exit status: 0 when every assertion passes, 1 when one fails, 2 for usage
// and configuration errors, 3 when a computation fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bianchi/bianchi.h"
#include "json.hpp"

namespace {

constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCompute = 3;

struct Failure {
  int exit_code;
  std::string message;
};

void check(bq_status st, const char* what) {
  if (st == BQ_OK) return;
  const int code = (st == BQ_ERR_PARSE || st == BQ_ERR_INVALID_ARGUMENT || st == BQ_ERR_IO) ? kExitUsage : kExitCompute;
  throw Failure{code, std::string(what) + ": " + bq_status_string(st) + ": " + bq_last_error()};
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{kExitUsage, std::string(what) + ": cannot parse '" + text + "'"};
    }
  }
  if (expected == 2 && out.size() == 1) out.push_back(0.0);
  if (out.size() != expected) throw Failure{kExitUsage, std::string(what) + ": expected " + std::to_string(expected) + " values"};
  return out;
}

std::string output_dir(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("BIANCHI_OUTPUT_DIR"); env != nullptr && *env) return env;
  return ".";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot open config file '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads the config file (or an empty one) and applies command-line overrides.
bq_config* build_config(const std::string& path, const nlohmann::json& overrides, std::string* out_dir) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Failure{kExitUsage, "config: " + std::string(e.what())};
    }
    if (!j.is_object()) throw Failure{kExitUsage, "config: top level must be an object"};
  }
  for (auto it = overrides.begin(); it != overrides.end(); ++it) j[it.key()] = it.value();
  bq_config* cfg = nullptr;
  check(bq_config_parse(j.dump().c_str(), &cfg), "config");
  if (out_dir != nullptr) *out_dir = j.value("output", std::string());
  return cfg;
}

int finish(bq_report* rep, const std::string& dir, const std::string& file) {
  for (size_t i = 0; i < bq_report_assertion_count(rep); ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int pass = 0;
    bq_report_assertion(rep, i, &name, &pass, &detail);
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail);
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = (std::filesystem::path(dir) / file).string();
  const bq_status st = bq_report_write_csv(rep, path.c_str());
  const bool ok = bq_report_all_pass(rep) != 0;
  bq_report_destroy(rep);
  check(st, "write");
  std::printf("wrote %s\n", path.c_str());
  return ok ? 0 : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eisenstein series on Bianchi orbifolds: evaluation and equidistribution experiments"};
  app.require_subcommand(1);
  int threads = -1;
  std::string out_flag;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--output", out_flag, "output directory (default $BIANCHI_OUTPUT_DIR or .)");

  int field = -1;
  std::string config_path;

  auto* eval = app.add_subcommand("eval", "evaluate a single function value at s = sigma + i t");
  std::string function = "eisenstein", point_text, nu_text = "0";
  double sigma = 2.0, t_im = 0.0, x = 1.0, y_min = 0.0;
  bool oracle = false;
  eval->add_option("--field", field, "D with K = Q(sqrt D)");
  eval->add_option("--function", function, "eisenstein | zeta | l | riemann | xi | phi | phi_log_derivative | bessel")
      ->check(CLI::IsMember({"eisenstein", "zeta", "l", "riemann", "xi", "phi", "phi_log_derivative", "bessel"}));
  eval->add_option("--sigma", sigma, "real part of s");
  eval->add_option("--t", t_im, "imaginary part of s");
  eval->add_option("--point", point_text, "x1,x2,y");
  eval->add_flag("--oracle", oracle, "compare with the coset sum (needs sigma > 2)");
  eval->add_option("--nu", nu_text, "Bessel order re[,im]");
  eval->add_option("--x", x, "Bessel argument");
  eval->add_option("--y-min", y_min, "lowest height for the Fourier evaluator (default: the point's height)");

  auto* zeros = app.add_subcommand("zeros", "critical zeros of zeta_K");
  double t_max = 30.0;
  zeros->add_option("--field", field, "D");
  zeros->add_option("--tmax,--t-max", t_max, "upper ordinate (<= 120)");

  auto* selftest = app.add_subcommand("selftest", "functional equation, identity and oracle checks");
  std::uint64_t seed = 20240611;
  selftest->add_option("--field", field, "D");
  selftest->add_option("--seed", seed, "random seed for sample points");

  auto* sweep = app.add_subcommand("sweep", "equidistribution sweep");
  int theorem = 3;
  sweep->add_option("--theorem", theorem, "1, 2 or 3")->check(CLI::IsMember({1, 2, 3}));
  auto* sweep_field = sweep->add_option("--field", field, "D");
  sweep->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);

  auto* lemma = app.add_subcommand("lemma-cont", "whole-manifold mass against the predicted main term");
  auto* lemma_field = lemma->add_option("--field", field, "D");
  lemma->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);

  auto* volume = app.add_subcommand("volume", "volume of the fundamental domain");
  volume->add_option("--field", field, "D");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (threads >= 0) check(bq_set_threads(threads), "threads");

    if (eval->parsed()) {
      bq_field* f = nullptr;
      check(bq_field_create(field, &f), "field");
      std::unique_ptr<bq_field, void (*)(bq_field*)> guard(f, bq_field_destroy);
      const bq_complex s{sigma, t_im};
      bq_complex out{};
      nlohmann::json j;
      j["function"] = function;
      if (function == "zeta") check(bq_dedekind_zeta(f, s, &out), "zeta");
      if (function == "l") check(bq_dirichlet_l(f, s, &out), "l");
      if (function == "riemann") check(bq_riemann_zeta(s, &out), "riemann");
      if (function == "xi") check(bq_completed_xi(f, s, &out), "xi");
      if (function == "phi") check(bq_scattering_phi(f, s, &out), "phi");
      if (function == "phi_log_derivative") check(bq_phi_log_derivative(f, s, &out), "phi_log_derivative");
      if (function == "bessel") {
        const auto nv = parse_list(nu_text, 2, "--nu");
        check(bq_bessel_k(bq_complex{nv[0], nv[1]}, x, &out), "bessel");
      }
      bool ok = true;
      if (function == "eisenstein") {
        if (point_text.empty()) throw Failure{kExitUsage, "--point is required"};
        const auto pv = parse_list(point_text, 3, "--point");
        const bq_point p{pv[0], pv[1], pv[2]};
        bq_eisenstein* e = nullptr;
        check(bq_eisenstein_create(f, s, y_min > 0.0 ? y_min : p.y, 1e-10, &e), "eisenstein");
        const bq_status st = bq_eisenstein_eval(e, p, &out);
        bq_eisenstein_destroy(e);
        check(st, "eisenstein");
        if (oracle) {
          bq_complex coset{};
          check(bq_coset_sum(f, p, s, &coset), "coset");
          const double diff = std::hypot(out.re - coset.re, out.im - coset.im) / std::hypot(coset.re, coset.im);
          ok = diff < 1e-6;
          j["oracle"] = {{"real", coset.re}, {"imag", coset.im}, {"rel_diff", diff}};
          std::printf("%s oracle_equivalence: rel_diff=%.3e (tol 1e-06)\n", ok ? "PASS" : "FAIL", diff);
        }
      }
      j["real"] = out.re;
      j["imag"] = out.im;
      j["abs2"] = out.re * out.re + out.im * out.im;
      std::printf("%s\n", j.dump().c_str());
      return ok ? 0 : kExitAssertion;
    }

    if (zeros->parsed()) {
      bq_report* rep = nullptr;
      check(bq_run_zeros(field, t_max, &rep), "zeros");
      return finish(rep, output_dir(out_flag, ""), "zeros_field" + std::to_string(field) + ".csv");
    }

    if (selftest->parsed()) {
      bq_report* rep = nullptr;
      check(bq_run_selftest(field, seed, &rep), "selftest");
      return finish(rep, output_dir(out_flag, ""), "selftest_field" + std::to_string(field) + ".csv");
    }

    if (volume->parsed()) {
      bq_report* rep = nullptr;
      check(bq_run_volume(field, &rep), "volume");
      return finish(rep, output_dir(out_flag, ""), "volume_field" + std::to_string(field) + ".csv");
    }

    if (sweep->parsed() || lemma->parsed()) {
      nlohmann::json overrides = nlohmann::json::object();
      const bool is_sweep = sweep->parsed();
      if (is_sweep) {
        overrides["subcommand"] = "sweep";
        overrides["theorem"] = theorem;
        if (sweep_field->count() || config_path.empty()) overrides["field"] = field;
        // Theorem 2 lives on the approach-one schedule.
        if (theorem == 2 && config_path.empty()) overrides["schedule"] = {{"kind", "approach_one"}};
      } else {
        overrides["subcommand"] = "lemma-cont";
        if (lemma_field->count() || config_path.empty()) overrides["field"] = field;
      }
      if (threads >= 0) overrides["threads"] = threads;
      std::string cfg_dir;
      bq_config* cfg = build_config(config_path, overrides, &cfg_dir);
      std::unique_ptr<bq_config, void (*)(bq_config*)> guard(cfg, bq_config_destroy);
      bq_report* rep = nullptr;
      if (is_sweep) {
        check(bq_run_sweep(cfg, &rep), "sweep");
      } else {
        check(bq_run_lemma_cont(cfg, &rep), "lemma-cont");
      }
      // The field actually used is the first column of every row.
      std::string used = std::to_string(field);
      if (bq_report_row_count(rep) > 0) {
        const std::string row = bq_report_csv_row(rep, 0);
        used = row.substr(0, row.find(','));
      }
      const std::string file = is_sweep ? "sweep_theorem" + std::to_string(theorem) + "_field" + used + ".csv"
                                        : "lemma_cont_field" + used + ".csv";
      return finish(rep, output_dir(out_flag, cfg_dir), file);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.exit_code;
  }
  return kExitUsage;
}
