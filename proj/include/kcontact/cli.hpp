#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kcontact/maps.hpp"
#include "kcontact/types.hpp"

namespace kcontact {

// Fully resolved plan for one CLI run. Config file values come first; command
// line flags override them.
struct RunConfig {
  std::string example;
  std::string section;
  std::string solution;
  std::optional<Mode> mode;
  Params params;
  unsigned seed = 1;

  std::optional<GridSpec> grid;
  int steps_per_cell = 4;

  int sample_count = 500;
  std::vector<double> lo, hi;  // empty: the section's own box
  int param_points = 5;
  int base_points = 9;

  double tol_hj = 1e-10;
  std::optional<double> tol_map;  // default 1e-6, or the solution's own tolerance
  double tol_closed = 1e-8;
  double tol_order = 1e-8;

  std::string out_dir = "kcontact-out";
};

// Parses a TOML run file. Unknown tables or keys and type mismatches raise
// ConfigError with the file position.
RunConfig load_run_config(const std::string& path);

// name=value → (name, value); ConfigError on anything else.
std::pair<std::string, double> parse_assignment(const std::string& text);

// Entry point of the `kcontact` tool. Exit codes: 0 PASS, 1 FAIL, 2 config,
// 3 contract, 4 divergence, 5 integrability.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kcontact
