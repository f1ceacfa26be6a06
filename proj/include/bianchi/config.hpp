#pragma once

#include <array>
#include <string>
#include <vector>

#include "bianchi/hyperbolic.hpp"
#include "bianchi/que.hpp"

namespace bianchi {

struct RunConfig {
  int field = -1;
  std::string subcommand = "sweep";
  int theorem = 3;
  std::vector<Region> regions;  // empty selects the default boxes A and B
  ScheduleSpec schedule;
  double eps = kDefaultEisensteinEps;
  std::array<int, 3> nodes{8, 8, 8};
  double rel_tol = kMeasureRelTol;
  int max_nodes = kMeasureMaxNodes;
  std::string test_function = "bump23";
  int zero_count = 8;
  std::string output;  // empty selects the default output directory
  int threads = 0;

  bool operator==(const RunConfig&) const;
};

// Strict JSON reader: unknown keys and wrong types raise ErrorCode::Parse.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
// Canonical form; parse_run_config(serialize_run_config(c)) == c.
std::string serialize_run_config(const RunConfig& cfg);

// Regions from the config with node counts applied, or the defaults.
std::vector<Region> effective_regions(const RunConfig& cfg);
SweepOptions sweep_options(const RunConfig& cfg);

}  // namespace bianchi
