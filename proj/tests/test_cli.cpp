#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "kcontact/cli.hpp"
#include "kcontact/errors.hpp"
#include "json.hpp"

using namespace kcontact;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Fresh scratch directory per call, removed with the object.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("kcontact-cli-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return path(name);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

}  // namespace

TEST_CASE("parse_assignment") {
  const auto [name, value] = parse_assignment("kappa=0.25");
  CHECK(name == "kappa");
  CHECK(value == 0.25);
  CHECK(parse_assignment("a=-2e-1").second == -0.2);
  CHECK_THROWS_AS(parse_assignment("kappa"), ConfigError);
  CHECK_THROWS_AS(parse_assignment("=1"), ConfigError);
  CHECK_THROWS_AS(parse_assignment("kappa=1x"), ConfigError);
  CHECK_THROWS_AS(parse_assignment("kappa=nan"), ConfigError);
  CHECK_THROWS_AS(parse_assignment("kappa="), ConfigError);
}

TEST_CASE("TOML run files") {
  Scratch s("toml");
  const std::string ok = s.write("ok.toml", R"([run]
example = "telegrapher"
section = "classical"
mode = "standard"
seed = 7

[params]
kappa = 1.0
a = -0.6666666666666666

[grid]
counts = [10, 12]
spacing = [0.01, 0.02]
steps_per_cell = 8

[samples]
count = 40
lo = [0.5]
hi = [2.0]

[tolerance]
hj = 1e-9
map = 1e-5

[output]
dir = "out"
)");
  const RunConfig c = load_run_config(ok);
  CHECK(c.example == "telegrapher");
  CHECK(c.section == "classical");
  CHECK(c.mode == Mode::standard);
  CHECK(c.seed == 7);
  CHECK(c.params.at("a") == doctest::Approx(-2.0 / 3.0));
  REQUIRE(c.grid);
  CHECK(c.grid->origin == std::vector<double>{0.0, 0.0});
  CHECK(c.grid->counts == std::vector<int>{10, 12});
  CHECK(c.steps_per_cell == 8);
  CHECK(c.sample_count == 40);
  CHECK(c.tol_hj == 1e-9);
  CHECK(*c.tol_map == 1e-5);
  CHECK(c.out_dir == "out");

  auto message = [&](const std::string& text) {
    try {
      load_run_config(s.write("bad.toml", text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("[run]\nexample = \"telegrapher\"\ncolour = 3\n").find("bad.toml:3:") != std::string::npos);
  CHECK(message("[run]\nexample = \"telegrapher\"\ncolour = 3\n").find("run.colour") != std::string::npos);
  CHECK(message("[run]\nexample = = 1\n").find("bad.toml:2:") != std::string::npos);
  CHECK(message("[extras]\nx = 1\n").find("not a known table") != std::string::npos);
  CHECK(message("[params]\nkappa = \"one\"\n").find("params.kappa") != std::string::npos);
  CHECK(message("[tolerance]\nhj = -1.0\n").find("must be positive") != std::string::npos);
  CHECK(message("[grid]\ncounts = [2, 10]\nspacing = [0.1, 0.1]\n").find("[grid]") != std::string::npos);
  CHECK(message("[run]\nmode = \"sideways\"\n").find("run.mode") != std::string::npos);
  CHECK(message("[samples]\nlo = [0.0]\n").find("differ in length") != std::string::npos);
  CHECK_THROWS_AS(load_run_config(s.path("missing.toml")), ConfigError);
}

TEST_CASE("list") {
  const Run all = run({"list"});
  CHECK(all.code == 0);
  for (const char* name : {"telegrapher ", "telegrapher-quadratic-z", "hunter-saxton", "first-order-dissipative",
                           "membrane", "thermo-eit"}) {
    CHECK(all.out.find(name) != std::string::npos);
  }
  const Run hs = run({"list", "--example", "hunter-saxton"});
  CHECK(hs.code == 0);
  for (const char* key : {"linear", "quadratic", "logarithmic"}) CHECK(hs.out.find(key) != std::string::npos);
  const Run bad = run({"list", "--example", "heat"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("telegrapher") != std::string::npos);
}

TEST_CASE("usage errors exit 2 and help exits 0") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"check-hj", "--bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"check-hj", "--example", "telegrapher", "--section", "nope"}).code == 2);
  CHECK(run({"check-hj", "--example", "telegrapher", "--section", "classical", "--set", "zeta=1"}).code == 2);
  CHECK(run({"check-hj", "--example", "telegrapher", "--section", "classical", "--mode", "up"}).code == 2);
}

TEST_CASE("check-hj verdicts, exit codes and report") {
  Scratch s("check");
  const Run good = run({"check-hj", "--example", "telegrapher", "--section", "classical", "--out", s.path("a")});
  CHECK(good.code == 0);
  CHECK(good.out.find("PASS") != std::string::npos);
  const auto j = read_json(s.path("a/check-hj.json"));
  CHECK(j["verdict"] == "PASS");
  CHECK(j["mode"] == "standard");
  CHECK(j["samples"] == 500);
  CHECK(j["sup_residual"].get<double>() <= 1e-10);
  CHECK(j.contains("seed"));

  const Run flipped = run({"check-hj", "--example", "telegrapher", "--section", "classical", "--set",
                           "a=0.6666666666666666", "--out", s.path("b")});
  CHECK(flipped.code == 1);
  CHECK(read_json(s.path("b/check-hj.json"))["sup_residual"].get<double>() > 1e-2);

  const Run contract = run({"check-hj", "--example", "telegrapher", "--section", "non-holonomic", "--out", s.path("c")});
  CHECK(contract.code == 3);
  CHECK(contract.err.find("[hj]") != std::string::npos);

  const Run fam = run({"check-hj", "--example", "hunter-saxton", "--section", "family", "--out", s.path("d")});
  CHECK(fam.code == 0);
  const auto jf = read_json(s.path("d/check-hj.json"));
  CHECK(jf["per_param"].size() == 25);
  CHECK(jf["roundtrip_max"].get<double>() <= 1e-12);
  CHECK(jf["samples"] == 25 * 729);
}

TEST_CASE("simulate writes full-precision RFC 4180 CSV") {
  Scratch s("sim");
  const Run r = run({"simulate", "--example", "telegrapher", "--section", "classical", "--out", s.dir.string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(s.path("psi.csv"));
  const auto eol = csv.find("\r\n");
  REQUIRE(eol != std::string::npos);
  CHECK(csv.substr(0, eol) == "t1,t2,q1,p1_1,p2_1,z1,z2,r_q,r_p,r_z");
  std::size_t rows = 0, pos = 0;
  while ((pos = csv.find("\r\n", pos)) != std::string::npos) {
    ++rows;
    pos += 2;
  }
  CHECK(rows == 1 + 50 * 50);
  CHECK(csv.find('\n') == eol + 1);  // no bare LF before the first CRLF
  // second row, q1 column: a full 17-digit value
  const std::string row = csv.substr(eol + 2, csv.find("\r\n", eol + 2) - eol - 2);
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 10);
  CHECK(cells[2] == "1");
  CHECK(cells[3].size() >= 17);

  const auto j = read_json(s.path("simulate.json"));
  CHECK(j["verdict"] == "PASS");
  CHECK(j["closed_form"]["max_error"].get<double>() <= 1e-8);
}

TEST_CASE("simulate exit codes") {
  Scratch s("simcodes");
  CHECK(run({"simulate", "--example", "telegrapher", "--section", "wrong-root", "--out", s.path("a")}).code == 1);
  CHECK(run({"simulate", "--example", "telegrapher", "--section", "noncommuting", "--out", s.path("b")}).code == 5);
  const std::string cfg = s.write("div.toml", R"([run]
example = "telegrapher"
section = "classical"
[grid]
spacing = [0.02, 1.0]
counts = [3, 40]
)");
  const Run div = run({"simulate", "--config", cfg, "--out", s.path("c")});
  CHECK(div.code == 4);
  CHECK(div.err.find("[integrate]") != std::string::npos);
  CHECK(run({"simulate", "--example", "hunter-saxton", "--solution", "quadratic", "--out", s.path("d")}).code == 0);
  CHECK(run({"simulate", "--example", "membrane", "--solution", "separable", "--out", s.path("e")}).code == 0);
  CHECK(run({"simulate", "--example", "hunter-saxton", "--section", "family", "--out", s.path("f")}).code == 2);
}

TEST_CASE("gauge diagnostic") {
  const Run a = run({"gauge", "--n", "1", "--k", "2"});
  CHECK(a.code == 0);
  CHECK(a.out.find("6/6 PASS") != std::string::npos);
  CHECK(run({"gauge", "--n", "1", "--k", "1"}).out.find("0/0 PASS") != std::string::npos);
  CHECK(run({"gauge", "--n", "3", "--k", "2"}).out.find("12/12 PASS") != std::string::npos);
  CHECK(run({"gauge", "--n", "0"}).code == 2);
}

TEST_CASE("reports are byte-deterministic for a fixed seed") {
  Scratch s("det");
  for (const char* d : {"a", "b"}) {
    run({"check-hj", "--example", "hunter-saxton", "--section", "wrong-offset", "--seed", "11", "--out", s.path(d)});
    run({"simulate", "--example", "hunter-saxton", "--section", "linear", "--seed", "11", "--out", s.path(d)});
  }
  CHECK(slurp(s.path("a/check-hj.json")) == slurp(s.path("b/check-hj.json")));
  CHECK(slurp(s.path("a/psi.csv")) == slurp(s.path("b/psi.csv")));
  CHECK(slurp(s.path("a/simulate.json")) == slurp(s.path("b/simulate.json")));
  CHECK(read_json(s.path("a/check-hj.json"))["seed"] == 11);
}

TEST_CASE("command-line values override the config file") {
  Scratch s("override");
  const std::string cfg = s.write("run.toml", R"([run]
example = "telegrapher"
section = "classical"
[params]
a = 0.6666666666666666
)");
  CHECK(run({"check-hj", "--config", cfg, "--out", s.path("a")}).code == 1);
  CHECK(run({"check-hj", "--config", cfg, "--set", "a=-0.6666666666666666", "--out", s.path("b")}).code == 0);
  CHECK(run({"check-hj", "--config", cfg, "--section", "evolution", "--out", s.path("c")}).code == 1);
}
