#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + BIANCHI_CLI_PATH + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p) != nullptr) r.out += buf;
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("bianchi_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool empty_dir(const fs::path& d) { return fs::is_empty(d); }

}  // namespace

TEST_CASE("unknown flag is a usage error and writes nothing") {
  const fs::path d = fresh_dir("unknown");
  const Run r = run("--output " + d.string() + " selftest --field -1 --bogus");
  CHECK(r.status == 2);
  CHECK(empty_dir(d));
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
}

TEST_CASE("selftest passes and writes its table") {
  const fs::path d = fresh_dir("selftest");
  const Run r = run("--output " + d.string() + " selftest --field -1");
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS functional_equation") != std::string::npos);
  CHECK(r.out.find("PASS oracle_equivalence") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const std::string csv = slurp(d / "selftest_field-1.csv");
  CHECK(csv.rfind("check,max_error,tolerance,pass\n", 0) == 0);
}

TEST_CASE("volume prints both sides") {
  const fs::path d = fresh_dir("volume");
  const Run r = run("--output " + d.string() + " volume --field -1");
  CHECK(r.status == 0);
  CHECK(r.out.find("closed form 0.30532") != std::string::npos);
  CHECK(fs::exists(d / "volume_field-1.csv"));
}

TEST_CASE("output directory from the environment") {
  const fs::path d = fresh_dir("env");
  const Run r = run("zeros --field -1 --tmax 7", "BIANCHI_OUTPUT_DIR=" + d.string());
  CHECK(r.status == 0);
  const std::string csv = slurp(d / "zeros_field-1.csv");
  CHECK(csv.rfind("gamma,source,bracket_lo,bracket_hi\n", 0) == 0);
  CHECK(csv.find("6.0209") != std::string::npos);
}

TEST_CASE("malformed config is a usage error distinct from assertion failure") {
  const fs::path d = fresh_dir("badconfig");
  const fs::path cfg = d / "bad.json";
  std::ofstream(cfg) << R"({"field": -1, "schedul": {}})";
  const Run r = run("--output " + d.string() + " sweep --theorem 3 --config " + cfg.string());
  CHECK(r.status == 2);
  std::ofstream(cfg) << "{ not json";
  CHECK(run("--output " + d.string() + " lemma-cont --config " + cfg.string()).status == 2);
  CHECK(run("sweep --theorem 3 --config /nonexistent/file.json").status == 2);
  CHECK(!fs::exists(d / "sweep_theorem3_field-1.csv"));
}

TEST_CASE("identical config gives byte-identical CSV across thread counts") {
  const fs::path d = fresh_dir("determinism");
  const fs::path cfg = d / "cfg.json";
  std::ofstream(cfg) << R"({"field": -3, "schedule": {"kind": "constant_sigma", "t_grid": [5, 10]}})";
  std::string first;
  for (const char* threads : {"1", "4", "1"}) {
    const fs::path out = d / threads;
    const Run r = run(std::string("--threads ") + threads + " --output " + out.string() + " sweep --theorem 3 --config " +
                      cfg.string());
    CHECK(r.status <= 1);
    const std::string csv = slurp(out / "sweep_theorem3_field-3.csv");
    CHECK(!csv.empty());
    if (first.empty()) first = csv;
    CHECK(csv == first);
  }
}

TEST_CASE("eval prints real, imaginary and squared modulus") {
  const Run r = run("eval --field -1 --sigma 3 --t 0 --point 0.1,0.2,1.1 --oracle");
  CHECK(r.status == 0);
  CHECK(r.out.find("\"abs2\"") != std::string::npos);
  CHECK(r.out.find("PASS oracle_equivalence") != std::string::npos);
  const Run z = run("eval --field -1 --function zeta --sigma 2");
  CHECK(z.out.find("1.50670300992298") != std::string::npos);
  CHECK(run("eval --field -1 --sigma 1.5 --t 10").status == 2);  // missing point
  CHECK(run("eval --field -5 --function zeta --sigma 2").status == 2);
}

TEST_CASE("sweep writes the documented columns") {
  const fs::path d = fresh_dir("sweep");
  const Run r = run("--output " + d.string() + " sweep --theorem 1 --field -1");
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS zeros on the critical line") != std::string::npos);
  const std::string csv = slurp(d / "sweep_theorem1_field-1.csv");
  CHECK(csv.rfind("field,t,sigma_t,region,mu_st,predicted,ratio,quad_delta,trunc_eps\n", 0) == 0);
}
