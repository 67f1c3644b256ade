#include "kcontact/types.hpp"

#include <algorithm>
#include <cmath>

namespace kcontact {

const char* to_string(Mode m) { return m == Mode::standard ? "standard" : "evolution"; }

Mode parse_mode(const std::string& s) {
  if (s == "standard") return Mode::standard;
  if (s == "evolution") return Mode::evolution;
  throw ConfigError("mode must be 'standard' or 'evolution', got '" + s + "'");
}

double param(const Params& p, const std::string& name) {
  auto it = p.find(name);
  if (it == p.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

double param_or(const Params& p, const std::string& name, double fallback) {
  auto it = p.find(name);
  return it == p.end() ? fallback : it->second;
}

double max_abs_diff(const DarbouxPoint& a, const DarbouxPoint& b) {
  if (a.size() != b.size()) throw ShapeError("phase vectors differ in size");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs(const DarbouxPoint& a) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

}  // namespace kcontact
