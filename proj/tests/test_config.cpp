#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bianchi/config.hpp"
#include "bianchi/error.hpp"

using namespace bianchi;

TEST_CASE("defaults") {
  const RunConfig c = parse_run_config("{}");
  CHECK(c == RunConfig{});
  CHECK(c.field == -1);
  CHECK(c.schedule.kind == ScheduleKind::ConstantSigma);
  CHECK(c.schedule.t_grid == std::vector<double>{5, 10, 20, 40});
  CHECK(effective_regions(c).size() == 2);
}

TEST_CASE("round trip through serialization") {
  RunConfig c;
  c.field = -7;
  c.subcommand = "lemma-cont";
  c.theorem = 2;
  c.schedule.kind = ScheduleKind::ApproachOne;
  c.schedule.rate = 0.75;
  c.schedule.t_grid = {6.5, 13.0, 26.0};
  c.eps = 1e-9;
  c.nodes = {6, 10, 12};
  c.rel_tol = 3e-6;
  c.max_nodes = 128;
  c.test_function = "bump_1p5_4";
  c.zero_count = 5;
  c.output = "out/dir";
  c.threads = 3;
  c.regions.push_back(Region{"C", {0.05, 0.2}, {-0.1, 0.1}, {1.1, 1.7}, {8, 8, 8}, false});
  const std::string text = serialize_run_config(c);
  const RunConfig back = parse_run_config(text);
  CHECK(back == c);
  CHECK(serialize_run_config(back) == text);
  const auto regions = effective_regions(back);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].nodes == std::array<int, 3>{6, 10, 12});
  const SweepOptions opt = sweep_options(back);
  CHECK(opt.eps == 1e-9);
  CHECK(opt.max_nodes == 128);
}

TEST_CASE("round trip of the sample config from the README") {
  const char* text = R"({
    "field": -3,
    "regions": [{"name": "A", "x1": [0, 0.25], "x2": [0, 0.25], "y": [1, 1.5]}],
    "schedule": {"kind": "approach_one", "params": {"rate": 1.0}, "t_grid": [5, 10, 20, 40]},
    "eps": 1e-10,
    "nodes": [8, 8, 8]
  })";
  const RunConfig c = parse_run_config(text);
  CHECK(c.field == -3);
  CHECK(c.schedule.kind == ScheduleKind::ApproachOne);
  CHECK(parse_run_config(serialize_run_config(c)) == c);
}

TEST_CASE("malformed configs raise parse errors") {
  const char* bad[] = {
      "not json",
      "[1, 2]",
      R"({"field": "minus one"})",
      R"({"unknown_key": 1})",
      R"({"schedule": {"kind": "sideways"}})",
      R"({"schedule": {"t_grid": [10, 5]}})",
      R"({"schedule": {"kind": "constant_sigma", "params": {"sigma_inf": 2.5}}})",
      R"({"nodes": [8, 8]})",
      R"({"regions": [{"name": "A", "x1": [0, 1]}]})",
      R"({"field": -5})",
      R"({"threads": -2})",
  };
  for (const char* text : bad) {
    const std::string shown = text;
    CAPTURE(shown);
    try {
      parse_run_config(text);
      FAIL("accepted a malformed config");
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::Parse || e.code() == ErrorCode::InvalidArgument));
    }
  }
}

TEST_CASE("missing config file is an io error") {
  try {
    load_run_config("/nonexistent/config.json");
    FAIL("loaded a missing file");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}
