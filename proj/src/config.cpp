#include "bianchi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bianchi/error.hpp"
#include "json.hpp"

namespace bianchi {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::Parse, "config: " + what); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) parse_fail(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) parse_fail("unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) parse_fail("'" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) parse_fail("'" + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) parse_fail("'" + key + "' must be a string");
  return v.get<std::string>();
}

Interval get_interval(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    parse_fail("'" + key + "' must be a [lo, hi] pair");
  Interval out{v[0].get<double>(), v[1].get<double>()};
  if (!(out.hi >= out.lo)) parse_fail("'" + key + "' has hi < lo");
  return out;
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_region = [](const Region& a, const Region& b) {
    return a.name == b.name && a.x1.lo == b.x1.lo && a.x1.hi == b.x1.hi && a.x2.lo == b.x2.lo &&
           a.x2.hi == b.x2.hi && a.y.lo == b.y.lo && a.y.hi == b.y.hi;
  };
  if (regions.size() != o.regions.size()) return false;
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (!same_region(regions[i], o.regions[i])) return false;
  return field == o.field && subcommand == o.subcommand && theorem == o.theorem &&
         schedule.kind == o.schedule.kind && schedule.sigma_inf == o.schedule.sigma_inf &&
         schedule.rate == o.schedule.rate && schedule.t_grid == o.schedule.t_grid && eps == o.eps &&
         nodes == o.nodes && rel_tol == o.rel_tol && max_nodes == o.max_nodes && test_function == o.test_function &&
         zero_count == o.zero_count && output == o.output && threads == o.threads;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    parse_fail(e.what());
  }
  check_keys(j,
             {"field", "subcommand", "theorem", "regions", "schedule", "eps", "nodes", "rel_tol", "max_nodes",
              "test_function", "zero_count", "output", "threads"},
             "config");
  RunConfig c;
  try {
    if (j.contains("field")) c.field = get_int(j, "field");
    if (j.contains("subcommand")) c.subcommand = get_string(j, "subcommand");
    if (j.contains("theorem")) c.theorem = get_int(j, "theorem");
    if (j.contains("eps")) c.eps = get_number(j, "eps");
    if (j.contains("rel_tol")) c.rel_tol = get_number(j, "rel_tol");
    if (j.contains("max_nodes")) c.max_nodes = get_int(j, "max_nodes");
    if (j.contains("test_function")) c.test_function = get_string(j, "test_function");
    if (j.contains("zero_count")) c.zero_count = get_int(j, "zero_count");
    if (j.contains("output")) c.output = get_string(j, "output");
    if (j.contains("threads")) c.threads = get_int(j, "threads");
    if (j.contains("nodes")) {
      const auto& n = j.at("nodes");
      if (!n.is_array() || n.size() != 3) parse_fail("'nodes' must be a list of three integers");
      for (int k = 0; k < 3; ++k) {
        if (!n[k].is_number_integer() || n[k].get<int>() < 1) parse_fail("'nodes' entries must be positive integers");
        c.nodes[k] = n[k].get<int>();
      }
    }
    if (j.contains("regions")) {
      const auto& rs = j.at("regions");
      if (!rs.is_array()) parse_fail("'regions' must be a list");
      for (const auto& r : rs) {
        check_keys(r, {"name", "x1", "x2", "y"}, "region");
        Region reg;
        reg.name = get_string(r, "name");
        reg.x1 = get_interval(r, "x1");
        reg.x2 = get_interval(r, "x2");
        reg.y = get_interval(r, "y");
        c.regions.push_back(reg);
      }
    }
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      check_keys(s, {"kind", "params", "t_grid"}, "schedule");
      if (s.contains("kind")) c.schedule.kind = parse_schedule_kind(get_string(s, "kind"));
      if (s.contains("params")) {
        const auto& p = s.at("params");
        check_keys(p, {"sigma_inf", "rate"}, "schedule.params");
        if (p.contains("sigma_inf")) c.schedule.sigma_inf = get_number(p, "sigma_inf");
        if (p.contains("rate")) c.schedule.rate = get_number(p, "rate");
      }
      if (s.contains("t_grid")) {
        const auto& g = s.at("t_grid");
        if (!g.is_array()) parse_fail("'t_grid' must be a list");
        c.schedule.t_grid.clear();
        for (const auto& t : g) {
          if (!t.is_number()) parse_fail("'t_grid' entries must be numbers");
          c.schedule.t_grid.push_back(t.get<double>());
        }
      }
    }
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  if (!(c.eps > 0.0)) parse_fail("'eps' must be positive");
  if (!(c.rel_tol > 0.0)) parse_fail("'rel_tol' must be positive");
  if (c.max_nodes < 1) parse_fail("'max_nodes' must be positive");
  if (c.threads < 0) parse_fail("'threads' must be >= 0");
  if (!is_supported_field(c.field)) parse_fail("'field' must be one of -1, -2, -3, -7, -11, -19, -43, -67, -163");
  if (c.zero_count < 1) parse_fail("'zero_count' must be positive");
  c.schedule.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string serialize_run_config(const RunConfig& c) {
  json regions = json::array();
  for (const auto& r : c.regions)
    regions.push_back({{"name", r.name}, {"x1", interval_json(r.x1)}, {"x2", interval_json(r.x2)}, {"y", interval_json(r.y)}});
  json j = {
      {"field", c.field},
      {"subcommand", c.subcommand},
      {"theorem", c.theorem},
      {"regions", regions},
      {"schedule",
       {{"kind", schedule_kind_name(c.schedule.kind)},
        {"params", {{"sigma_inf", c.schedule.sigma_inf}, {"rate", c.schedule.rate}}},
        {"t_grid", c.schedule.t_grid}}},
      {"eps", c.eps},
      {"nodes", c.nodes},
      {"rel_tol", c.rel_tol},
      {"max_nodes", c.max_nodes},
      {"test_function", c.test_function},
      {"zero_count", c.zero_count},
      {"output", c.output},
      {"threads", c.threads},
  };
  return j.dump(2);
}

std::vector<Region> effective_regions(const RunConfig& cfg) {
  std::vector<Region> out = cfg.regions;
  if (out.empty()) out = {default_region_a(), default_region_b()};
  for (auto& r : out) r.nodes = cfg.nodes;
  return out;
}

SweepOptions sweep_options(const RunConfig& cfg) {
  SweepOptions o;
  o.eps = cfg.eps;
  o.rel_tol = cfg.rel_tol;
  o.max_nodes = cfg.max_nodes;
  return o;
}

}  // namespace bianchi
