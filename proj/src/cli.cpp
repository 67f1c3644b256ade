#include "kcontact/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include "kcontact/corpus.hpp"
#include "kcontact/geometry.hpp"
#include "kcontact/hdw.hpp"
#include "kcontact/hj.hpp"
#include "kcontact/integrate.hpp"

namespace kcontact {

using json = nlohmann::json;

namespace {

// ------------------------------------------------------------------ config

std::string where(const toml::node& n) {
  const auto& src = n.source();
  std::ostringstream os;
  if (src.path) os << *src.path << ":";
  os << src.begin.line << ":" << src.begin.column;
  return os.str();
}

[[noreturn]] void bad(const toml::node& n, const std::string& field, const std::string& what) {
  throw ConfigError(where(n) + ": " + field + " " + what);
}

double as_double(const toml::node& n, const std::string& field) {
  if (auto v = n.value_exact<double>()) return *v;
  if (auto v = n.value_exact<int64_t>()) return static_cast<double>(*v);
  bad(n, field, "must be a number");
}

int as_int(const toml::node& n, const std::string& field) {
  if (auto v = n.value_exact<int64_t>()) return static_cast<int>(*v);
  bad(n, field, "must be an integer");
}

std::string as_string(const toml::node& n, const std::string& field) {
  if (auto v = n.value_exact<std::string>()) return *v;
  bad(n, field, "must be a string");
}

std::vector<double> as_doubles(const toml::node& n, const std::string& field) {
  const auto* arr = n.as_array();
  if (!arr) bad(n, field, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) out.push_back(as_double(e, field));
  return out;
}

std::vector<int> as_ints(const toml::node& n, const std::string& field) {
  const auto* arr = n.as_array();
  if (!arr) bad(n, field, "must be an array of integers");
  std::vector<int> out;
  for (const auto& e : *arr) out.push_back(as_int(e, field));
  return out;
}

const toml::table& as_table(const toml::node& n, const std::string& field) {
  const auto* t = n.as_table();
  if (!t) bad(n, field, "must be a table");
  return *t;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  toml::table root;
  try {
    root = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << path << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ConfigError(os.str());
  }

  RunConfig cfg;
  GridSpec grid;
  bool has_grid = false;
  for (const auto& [tkey, tnode] : root) {
    const std::string table(tkey.str());
    const toml::table& t = as_table(tnode, "[" + table + "]");
    for (const auto& [k, node] : t) {
      const std::string key(k.str());
      const std::string field = table + "." + key;
      if (table == "run") {
        if (key == "example") cfg.example = as_string(node, field);
        else if (key == "section") cfg.section = as_string(node, field);
        else if (key == "solution") cfg.solution = as_string(node, field);
        else if (key == "mode") {
          try {
            cfg.mode = parse_mode(as_string(node, field));
          } catch (const ConfigError& e) {
            bad(node, field, e.message());
          }
        } else if (key == "seed") {
          const int s = as_int(node, field);
          if (s < 0) bad(node, field, "must be nonnegative");
          cfg.seed = static_cast<unsigned>(s);
        } else bad(node, field, "is not a known key");
      } else if (table == "params") {
        cfg.params[key] = as_double(node, field);
      } else if (table == "grid") {
        has_grid = true;
        if (key == "origin") grid.origin = as_doubles(node, field);
        else if (key == "spacing") grid.spacing = as_doubles(node, field);
        else if (key == "counts") grid.counts = as_ints(node, field);
        else if (key == "steps_per_cell") cfg.steps_per_cell = as_int(node, field);
        else bad(node, field, "is not a known key");
      } else if (table == "samples") {
        if (key == "count") cfg.sample_count = as_int(node, field);
        else if (key == "lo") cfg.lo = as_doubles(node, field);
        else if (key == "hi") cfg.hi = as_doubles(node, field);
        else if (key == "param_points") cfg.param_points = as_int(node, field);
        else if (key == "base_points") cfg.base_points = as_int(node, field);
        else bad(node, field, "is not a known key");
      } else if (table == "tolerance") {
        const double v = as_double(node, field);
        if (!(v > 0.0)) bad(node, field, "must be positive");
        if (key == "hj") cfg.tol_hj = v;
        else if (key == "map") cfg.tol_map = v;
        else if (key == "closed_form") cfg.tol_closed = v;
        else if (key == "order") cfg.tol_order = v;
        else bad(node, field, "is not a known key");
      } else if (table == "output") {
        if (key == "dir") cfg.out_dir = as_string(node, field);
        else bad(node, field, "is not a known key");
      } else {
        bad(tnode, "[" + table + "]", "is not a known table");
      }
    }
  }
  if (has_grid) {
    if (grid.origin.empty() && !grid.counts.empty()) grid.origin.assign(grid.counts.size(), 0.0);
    try {
      grid.validate(3);
    } catch (const Error& e) {
      throw ConfigError(path + ": [grid] " + e.message());
    }
    cfg.grid = grid;
  }
  if (cfg.lo.size() != cfg.hi.size()) throw ConfigError(path + ": [samples] lo and hi differ in length");
  if (cfg.sample_count < 1 || cfg.param_points < 1 || cfg.base_points < 1) {
    throw ConfigError(path + ": [samples] counts must be positive");
  }
  if (cfg.steps_per_cell < 1) throw ConfigError(path + ": [grid] steps_per_cell must be at least 1");
  return cfg;
}

std::pair<std::string, double> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects name=value, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v)) {
    throw ConfigError("--set " + name + ": '" + value + "' is not a finite number");
  }
  return {name, v};
}

namespace {

// ----------------------------------------------------------------- output

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  return dir;
}

void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream f(file);
  if (!f) throw ConfigError("cannot write " + file.string());
  f << j.dump(2) << "\n";
}

json params_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

json worst_json(const std::vector<Offender>& w) {
  json arr = json::array();
  for (const auto& o : w) arr.push_back({{"point", o.point}, {"value", o.value}});
  return arr;
}

// RFC 4180: header row, CRLF line ends, no quoting needed for numbers.
void write_csv(const std::filesystem::path& file, const GridSpec& grid, const std::vector<DarbouxPoint>& psi,
               const std::vector<HdwResidual>& res) {
  std::ofstream f(file, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + file.string());
  const int k = grid.dims();
  const int n = psi.empty() ? 0 : psi.front().n;
  std::vector<std::string> head;
  for (int a = 0; a < k; ++a) head.push_back("t" + std::to_string(a + 1));
  for (int i = 0; i < n; ++i) head.push_back("q" + std::to_string(i + 1));
  for (int a = 0; a < k; ++a) {
    for (int i = 0; i < n; ++i) head.push_back("p" + std::to_string(a + 1) + "_" + std::to_string(i + 1));
  }
  for (int a = 0; a < k; ++a) head.push_back("z" + std::to_string(a + 1));
  head.insert(head.end(), {"r_q", "r_p", "r_z"});
  for (std::size_t c = 0; c < head.size(); ++c) f << (c ? "," : "") << head[c];
  f << "\r\n";
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    const auto t = grid.node(idx);
    std::string line;
    for (double v : t) line += fmt17(v) + ",";
    const DarbouxPoint& x = psi[idx];
    for (int j = 0; j < x.size(); ++j) line += fmt17(x[j]) + ",";
    const HdwResidual r = idx < res.size() ? res[idx] : HdwResidual{};
    line += fmt17(r.r_q) + "," + fmt17(r.r_p) + "," + fmt17(r.r_z);
    f << line << "\r\n";
  }
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// ------------------------------------------------------------ commands

int cmd_list(const std::string& filter, std::ostream& out) {
  if (filter.empty()) {
    out << "example                   n  k  sections  solutions  title\n";
    for (const auto& name : example_names()) {
      const ExampleSystem ex = load(name);
      char line[256];
      std::snprintf(line, sizeof line, "%-25s %2d %2d  %8zu  %9zu  %s\n", ex.name.c_str(), ex.chart.n, ex.chart.k,
                    ex.sections.size(), ex.solutions.size(), ex.title.c_str());
      out << line;
    }
    return 0;
  }
  const ExampleSystem ex = load(filter);
  out << ex.name << ": " << ex.title << " (n=" << ex.chart.n << ", k=" << ex.chart.k << ")\n";
  out << "  affine in z: " << (ex.affine_in_z ? "yes" : "no") << ", regular: " << (ex.regular ? "yes" : "no")
      << "\n";
  if (!ex.pde.empty()) out << "  PDE: " << ex.pde << "\n";
  out << "  parameters:";
  for (const auto& [k, v] : ex.defaults) out << " " << k << "=" << v;
  for (const auto& k : ex.optional) out << " " << k << "=(derived)";
  out << "\n  sections:\n";
  for (const auto& s : ex.sections) {
    char line[512];
    const std::string status = std::string(s.valid ? "valid" : "invalid") + (s.integrable ? "" : "*");
    std::snprintf(line, sizeof line, "    %-24s %-16s %-10s %-8s %s\n", s.key.c_str(), to_string(s.kind),
                  to_string(s.mode), status.c_str(), s.description.c_str());
    out << line;
  }
  if (std::any_of(ex.sections.begin(), ex.sections.end(), [](const auto& s) { return !s.integrable; })) {
    out << "    (* solves the HJ equation, but the projected flows of its gauge do not commute)\n";
  }
  out << "  solutions:\n";
  for (const auto& s : ex.solutions) {
    char line[512];
    std::snprintf(line, sizeof line, "    %-24s %-10s %s\n", s.key.c_str(), to_string(s.mode), s.description.c_str());
    out << line;
  }
  return 0;
}

struct Target {
  ExampleSystem ex;
  const SectionEntry* entry = nullptr;
  Params params;
  Mode mode = Mode::standard;
  ScalarField h;
};

Target resolve_section(const RunConfig& cfg) {
  if (cfg.example.empty()) throw ConfigError("no example selected (use --example or [run] example)");
  Target t;
  t.ex = load(cfg.example);
  if (t.ex.sections.empty()) throw ConfigError("example '" + cfg.example + "' ships no sections");
  t.entry = cfg.section.empty() ? &t.ex.sections.front() : &t.ex.section(cfg.section);
  t.params = t.ex.resolve(cfg.params, t.entry->overrides);
  t.mode = cfg.mode.value_or(t.entry->mode);
  t.h = t.ex.hamiltonian(t.params);
  return t;
}

Samples box_samples(const RunConfig& cfg, const SectionEntry& e) {
  const auto& lo = cfg.lo.empty() ? e.lo : cfg.lo;
  const auto& hi = cfg.hi.empty() ? e.hi : cfg.hi;
  return sample_box(lo, hi, cfg.sample_count, cfg.seed);
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(stage);
    throw;
  }
}

int cmd_check_hj(const RunConfig& cfg, std::ostream& out) {
  Target t = resolve_section(cfg);
  const SectionEntry& e = *t.entry;
  const auto dir = prepare_out(cfg);

  json rep = {{"command", "check-hj"}, {"example", t.ex.name}, {"section", e.key},
              {"kind", to_string(e.kind)}, {"mode", to_string(t.mode)}, {"params", params_json(t.params)},
              {"seed", cfg.seed},        {"tolerance", cfg.tol_hj}};
  bool pass = false;
  double sup = 0.0;
  std::size_t samples = 0;

  if (e.kind == SectionKind::family) {
    const CompleteSolutionFamily fam = staged("hj", [&] { return e.family(t.params); });
    const Samples lam = grid_box(fam.param_lo, fam.param_hi, cfg.param_points);
    const Samples base = grid_box(fam.base_lo, fam.base_hi, cfg.base_points);
    const CompleteReport cr = staged("hj", [&] { return verify_complete(fam, t.h, t.mode, lam, base, cfg.tol_hj); });
    pass = cr.passed;
    sup = cr.hj.sup_residual;
    samples = cr.hj.sample_count;
    json table = json::array();
    out << "  parameter point            sup residual   round trip   verdict\n";
    for (const auto& pr : cr.per_param) {
      json row = {{"lambda", pr.lambda}, {"sup_residual", pr.sup_residual}, {"roundtrip", pr.roundtrip},
                  {"verdict", verdict(pr.passed)}};
      if (!pr.error.empty()) row["error"] = pr.error;
      table.push_back(row);
      char line[256];
      std::snprintf(line, sizeof line, "  (%9.4f, %9.4f)   %12.3e   %10.3e   %s\n", pr.lambda.at(0), pr.lambda.at(1),
                    pr.sup_residual, pr.roundtrip, verdict(pr.passed));
      out << line;
    }
    rep["per_param"] = table;
    rep["roundtrip_max"] = cr.roundtrip_max;
    rep["gauge"] = cr.hj.gauge;
    rep["worst"] = worst_json(cr.hj.worst);
  } else if (e.kind == SectionKind::zdep) {
    const Samples qz = box_samples(cfg, e);
    const HJReport r = staged("hj", [&] {
      const SectionZDep g = e.zdep(t.params);
      const GaugeMatrix C = e.gauge ? e.gauge(t.params, t.h) : diagonal_gauge(t.h, g, t.mode);
      return hj_zdep_residual(t.h, g, C, t.mode, qz);
    });
    sup = r.sup_residual;
    samples = r.sample_count;
    pass = sup <= cfg.tol_hj;
    rep["gauge"] = r.gauge;
    rep["worst"] = worst_json(r.worst);
  } else {
    const Samples qs = box_samples(cfg, e);
    const HJReport r = staged("hj", [&] {
      const SectionZInd g = e.zind(t.params);
      return t.mode == Mode::standard ? hj_classical_zind(t.h, g, qs) : hj_evolution_zind(t.h, g, qs);
    });
    sup = r.sup_residual;
    samples = r.sample_count;
    pass = sup <= cfg.tol_hj;
    rep["worst"] = worst_json(r.worst);
  }
  rep["sup_residual"] = sup;
  rep["samples"] = samples;
  rep["verdict"] = verdict(pass);
  write_json(dir / "check-hj.json", rep);
  out << t.ex.name << "/" << e.key << " [" << to_string(t.mode) << "] sup residual " << fmt17(sup) << " over "
      << samples << " samples: " << verdict(pass) << "\n";
  return pass ? 0 : 1;
}

GridSpec default_grid(int k) {
  GridSpec g;
  const int count = k <= 2 ? 50 : 21;
  const double h = k <= 2 ? 0.01 : 0.002;
  g.origin.assign(k, 0.0);
  g.spacing.assign(k, h);
  g.counts.assign(k, count);
  return g;
}

int simulate_solution(const RunConfig& cfg, std::ostream& out) {
  if (cfg.example.empty()) throw ConfigError("no example selected (use --example or [run] example)");
  const ExampleSystem ex = load(cfg.example);
  const SolutionEntry& sol = ex.solution(cfg.solution);
  const Params prm = ex.resolve(cfg.params, sol.overrides);
  const Mode mode = cfg.mode.value_or(sol.mode);
  const ScalarField h = ex.hamiltonian(prm);
  const ClosedForm cf = sol.make(prm);
  const GridSpec grid = cfg.grid.value_or(sol.grid.counts.empty() ? default_grid(ex.chart.k) : sol.grid);
  if (grid.dims() != ex.chart.k) throw ConfigError("grid dimension must equal k = " + std::to_string(ex.chart.k));
  const auto dir = prepare_out(cfg);

  const SolutionMap psi = staged("sample", [&] { return sample_closed_form(cf, grid); });
  MapResidual mr;
  if (sol.full) mr = staged("map_residual", [&] { return map_residual(psi, h, mode); });
  double pde = 0.0;
  if (ex.pde_residual) {
    staged("pde_residual", [&] {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        pde = std::max(pde, std::fabs(ex.pde_residual(jet_at(cf, grid.node(i)), prm)));
      }
      return 0;
    });
  }
  const double map_tol = cfg.tol_map.value_or(sol.tolerance);
  const double pde_tol = cfg.tol_map.value_or(1e-6);
  const bool pass = (!sol.full || mr.max.max() <= map_tol) && (!ex.pde_residual || pde <= pde_tol);

  write_csv(dir / "psi.csv", grid, psi.values, mr.nodes);
  json rep = {{"command", "simulate"},
              {"example", ex.name},
              {"solution", sol.key},
              {"mode", to_string(mode)},
              {"params", params_json(prm)},
              {"seed", cfg.seed},
              {"grid", {{"origin", grid.origin}, {"spacing", grid.spacing}, {"counts", grid.counts}}},
              {"verdict", verdict(pass)}};
  if (sol.full) {
    rep["map_residual"] = {{"r_q", mr.max.r_q}, {"r_p", mr.max.r_p}, {"r_z", mr.max.r_z}};
    rep["map_tolerance"] = map_tol;
  }
  if (ex.pde_residual) {
    rep["pde"] = ex.pde;
    rep["pde_residual"] = pde;
    rep["pde_tolerance"] = pde_tol;
  }
  write_json(dir / "simulate.json", rep);
  out << ex.name << "/" << sol.key << " [" << to_string(mode) << "] closed form on " << grid.size() << " nodes";
  if (sol.full) out << ", map residual " << fmt17(mr.max.max());
  if (ex.pde_residual) out << ", PDE residual " << fmt17(pde);
  out << ": " << verdict(pass) << "\n";
  return pass ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.section.empty() && !cfg.solution.empty()) return simulate_solution(cfg, out);

  Target t = resolve_section(cfg);
  const SectionEntry& e = *t.entry;
  if (e.kind == SectionKind::family) {
    throw ConfigError("section '" + e.key + "' is a family; simulate needs a single member");
  }
  const GridSpec grid = cfg.grid.value_or(default_grid(t.ex.chart.k));
  if (grid.dims() != t.ex.chart.k) throw ConfigError("grid dimension must equal k = " + std::to_string(t.ex.chart.k));
  const auto dir = prepare_out(cfg);

  EndToEndOptions opt;
  opt.hj_samples = box_samples(cfg, e);
  opt.hj_tol = cfg.tol_hj;
  opt.map_tol = cfg.tol_map.value_or(1e-6);
  opt.order_tol = cfg.tol_order;
  opt.steps_per_cell = cfg.steps_per_cell;
  opt.stop_on_hj_failure = false;
  const std::vector<double> start = e.start(t.params);

  EndToEndReport rep;
  if (e.kind == SectionKind::zdep) {
    const SectionZDep g = e.zdep(t.params);
    const GaugeMatrix C = e.gauge ? e.gauge(t.params, t.h) : diagonal_gauge(t.h, g, t.mode);
    rep = end_to_end(t.h, g, C, t.mode, grid, start, opt);
  } else {
    rep = end_to_end(t.h, e.zind(t.params), t.mode, grid, start, opt);
  }

  // Closed-form comparison: the named solution, or the one the section reproduces.
  const std::string sol_key = cfg.solution.empty() ? e.solution : cfg.solution;
  json closed = nullptr;
  bool closed_ok = true;
  if (!sol_key.empty()) {
    const SolutionEntry& sol = t.ex.solution(sol_key);
    std::optional<ClosedForm> cf;
    try {
      cf = sol.make(t.params);
    } catch (const ConfigError&) {
      if (!cfg.solution.empty()) throw;
    }
    if (cf) {
      double err = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const DarbouxPoint ref = cf->f.f0(grid.node(i));
        const DarbouxPoint& num = rep.psi.values[i];
        if (sol.full) {
          err = std::max(err, max_abs_diff(ref, num));
        } else {
          for (int j = 0; j < ref.n; ++j) err = std::max(err, std::fabs(ref.q[j] - num.q[j]));
        }
      }
      closed_ok = err <= cfg.tol_closed;
      closed = {{"solution", sol.key}, {"max_error", err}, {"tolerance", cfg.tol_closed}};
    }
  }
  const bool pass = rep.passed && closed_ok;

  write_csv(dir / "psi.csv", grid, rep.psi.values, rep.map.nodes);
  json j = {{"command", "simulate"},
            {"example", t.ex.name},
            {"section", e.key},
            {"kind", to_string(e.kind)},
            {"mode", rep.mode},
            {"params", params_json(t.params)},
            {"seed", cfg.seed},
            {"grid", {{"origin", grid.origin}, {"spacing", grid.spacing}, {"counts", grid.counts}}},
            {"steps_per_cell", cfg.steps_per_cell},
            {"hj", {{"sup_residual", rep.hj.sup_residual}, {"samples", rep.hj.sample_count},
                    {"tolerance", cfg.tol_hj}, {"worst", worst_json(rep.hj.worst)}}},
            {"order_defect", rep.order_defect},
            {"commutator_max", rep.commutator_max},
            {"commutator_warning", rep.sigma.commutator_warning},
            {"map_residual", {{"r_q", rep.map.max.r_q}, {"r_p", rep.map.max.r_p}, {"r_z", rep.map.max.r_z}}},
            {"map_tolerance", opt.map_tol},
            {"closed_form", closed},
            {"failed_stage", rep.failed_stage.empty() && !closed_ok ? "closed_form" : rep.failed_stage},
            {"verdict", verdict(pass)}};
  write_json(dir / "simulate.json", j);

  out << t.ex.name << "/" << e.key << " [" << rep.mode << "] " << grid.size() << " nodes: hj "
      << fmt17(rep.hj.sup_residual) << ", map residual " << fmt17(rep.map.max.max());
  if (!closed.is_null()) out << ", closed-form error " << fmt17(closed["max_error"].get<double>());
  if (rep.sigma.commutator_warning) out << " (warning: commutator " << fmt17(rep.commutator_max) << ")";
  out << ": " << verdict(pass);
  if (!pass) out << " at " << j["failed_stage"].get<std::string>();
  out << "\n";
  return pass ? 0 : 1;
}

int cmd_gauge(int n, int k, int points, unsigned seed, std::ostream& out) {
  const ChartSpec chart{n, k};
  try {
    chart.validate();
  } catch (const Error& e) {
    throw ConfigError(e.message());
  }
  const int analytic = gauge_dimension(chart);
  const Samples pts = sample_box(std::vector<double>(chart.dim(), -1.0), std::vector<double>(chart.dim(), 1.0),
                                 points, seed);
  int lo = -1, hi = -1;
  for (const auto& s : pts) {
    DarbouxPoint x(chart);
    for (int j = 0; j < chart.dim(); ++j) x[j] = s[j];
    const int d = kernel_deficiency(chart, x);
    lo = lo < 0 ? d : std::min(lo, d);
    hi = std::max(hi, d);
  }
  const bool pass = lo == analytic && hi == analytic;
  out << "n=" << n << " k=" << k << ": analytic (n+1)(k^2-1) = " << analytic << ", numeric kernel dimension ";
  if (lo == hi) out << lo;
  else out << lo << ".." << hi;
  out << " over " << points << " points: " << lo << "/" << analytic << " " << verdict(pass) << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-contact Hamilton-Jacobi and HdDW toolkit"};
  app.require_subcommand(1);

  std::string config_path, example, section, solution, mode, out_dir;
  std::vector<std::string> sets;
  std::optional<unsigned> seed;
  int gn = 1, gk = 2, gpoints = 20;

  auto* list = app.add_subcommand("list", "list built-in examples, sections and solutions");
  list->add_option("--example", example, "show one example in detail");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML run file");
    sub->add_option("--example", example, "example key");
    sub->add_option("--section", section, "section key");
    sub->add_option("--solution", solution, "closed-form solution key");
    sub->add_option("--set", sets, "parameter override name=value (repeatable)");
    sub->add_option("--mode", mode, "standard | evolution");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "sampling seed");
  };
  auto* check = app.add_subcommand("check-hj", "check a section against the Hamilton-Jacobi equation");
  common(check);
  auto* sim = app.add_subcommand("simulate", "integrate, lift and check a solution on a grid");
  common(sim);
  auto* gauge = app.add_subcommand("gauge", "compare the gauge kernel dimension with (n+1)(k^2-1)");
  gauge->add_option("--n", gn, "dim Q")->check(CLI::PositiveNumber);
  gauge->add_option("--k", gk, "number of independent variables")->check(CLI::PositiveNumber);
  gauge->add_option("--points", gpoints, "random points")->check(CLI::PositiveNumber);
  gauge->add_option("--seed", seed, "sampling seed");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) return cmd_list(example, out);
    if (gauge->parsed()) return cmd_gauge(gn, gk, gpoints, seed.value_or(1), out);

    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (!example.empty()) cfg.example = example;
    if (!section.empty()) cfg.section = section;
    if (!solution.empty()) cfg.solution = solution;
    if (!mode.empty()) cfg.mode = parse_mode(mode);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.seed = *seed;
    for (const auto& s : sets) {
      const auto [name, value] = parse_assignment(s);
      cfg.params[name] = value;
    }

    if (check->parsed()) return cmd_check_hj(cfg, out);
    return cmd_simulate(cfg, out);
  } catch (const Error& e) {
    err << "error (" << e.kind() << "): " << e.what() << "\n";
    return e.exit_code();
  }
}

}  // namespace kcontact
