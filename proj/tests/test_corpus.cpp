#include <cmath>
#include <random>

#include "doctest.h"
#include "kcontact/corpus.hpp"
#include "kcontact/hdw.hpp"
#include "support.hpp"

using namespace kcontact;

namespace {

using Vec = std::vector<double>;

double sq(double x) { return x * x; }

ScalarField hamiltonian(const std::string& name, const Params& user = {}) {
  const ExampleSystem ex = load(name);
  return ex.hamiltonian(ex.resolve(user));
}

// k = 2 thermodynamic fields on a small grid, filled node by node.
template <class Fill>
ThermoFields thermo_fields(Fill fill) {
  ThermoFields f;
  f.grid = {{0.0, 0.0}, {0.1, 0.1}, {5, 5}};
  const std::size_t N = f.grid.size();
  f.xi.assign(N, 0.0);
  f.V.assign(N, 0.0);
  f.beta.assign(N, Vec(2, 0.0));
  f.N.assign(N, Vec(2, 0.0));
  f.T.assign(N, Vec(4, 0.0));
  f.P.assign(N, Vec(2, 0.0));
  f.S.assign(N, Vec(2, 0.0));
  for (std::size_t i = 0; i < N; ++i) fill(f, i, f.grid.node(i));
  return f;
}

}  // namespace

TEST_CASE("corpus Hamiltonians against their formulas") {
  std::mt19937 rng(1);
  const Params tp{{"kappa", 0.5}, {"lambda", 0.7}, {"epsilon", 0.3}};
  const ScalarField tel = hamiltonian("telegrapher", tp);
  const ScalarField telq = hamiltonian("telegrapher-quadratic-z", tp);
  const ScalarField hs = hamiltonian("hunter-saxton", {{"mu", 1.3}});
  const ScalarField fo = hamiltonian("first-order-dissipative", {{"lambda", 0.4}});
  const ScalarField mem = hamiltonian("membrane", {{"c", 2.0}, {"kappa", 0.5}, {"lambda", 3.0}});
  const ScalarField th = hamiltonian("thermo-eit", {{"m", 0.6}, {"tau", 0.2}, {"b1", 0.5}, {"b2", 0.25}});
  for (int s = 0; s < 20; ++s) {
    const DarbouxPoint x = testing::random_point(tel.chart, rng);
    const double u = x.q[0], pt = x.p[0], px = x.p[1], zt = x.z[0];
    CHECK(tel(x) == doctest::Approx(0.5 * (pt * pt - px * px / 0.5) + 0.15 * u * u + 0.7 * zt));
    CHECK(telq(x) == doctest::Approx(0.5 * (pt * pt - px * px / 0.5) + 0.15 * u * u + 0.35 * zt * zt));
    CHECK(hs(x) == doctest::Approx(-2 * pt * px + 2 * u * pt * pt + 1.3 * pt + 2.6 * zt));
    CHECK(fo(x) == doctest::Approx(0.5 * (u * u + px * px) + 0.4 * zt));

    const DarbouxPoint y = testing::random_point(mem.chart, rng);
    CHECK(mem(y) == doctest::Approx(0.5 * (sq(y.p[0]) - (sq(y.p[1]) + sq(y.p[2])) / 4.0) + 0.25 * sq(y.q[0]) +
                                    3.0 * y.z[0]));

    const DarbouxPoint w = testing::random_point(th.chart, rng);
    double U = 0.0, Pp = 0.0;
    for (double v : w.q) U += v * v;
    for (double v : w.p) Pp += v * v;
    CHECK(th(w) == doctest::Approx(0.3 * U + 0.5 * w.p[0] + 0.25 * w.p[4] + 0.1 * Pp));
  }
}

TEST_CASE("telegrapher coefficients from line constants") {
  const LineParams lossless = telegrapher_params_from_line(0.0, 2.0, 0.0, 0.5);
  CHECK(lossless.kappa == doctest::Approx(1.0));
  CHECK(lossless.lambda == 0.0);
  CHECK(lossless.epsilon == 0.0);

  const LineParams unit = telegrapher_params_from_line(1.0, 1.0, 1.0, 1.0);
  CHECK(unit.kappa == doctest::Approx(1.0));
  CHECK(unit.lambda == doctest::Approx(2.0));
  CHECK(unit.epsilon == doctest::Approx(1.0));

  // κ = 1/LC, λ = R/L + G/C, ε = RG/LC
  const LineParams lossy = telegrapher_params_from_line(1.0, 2.0, 1.0, 0.5);
  CHECK(lossy.kappa == doctest::Approx(1.0));
  CHECK(lossy.lambda == doctest::Approx(2.5));
  CHECK(lossy.epsilon == doctest::Approx(1.0));

  CHECK_THROWS_AS(telegrapher_params_from_line(1.0, 0.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(telegrapher_params_from_line(1.0, 1.0, 1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(telegrapher_params_from_line(-1.0, 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("telegrapher roots satisfy the quadratic") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  int found = 0;
  for (int s = 0; s < 200; ++s) {
    const double kappa = 0.2 + std::fabs(d(rng)), lambda = d(rng), eps = d(rng), c = d(rng);
    const double A = c * c - 1.0 / kappa, B = lambda * c;
    const double disc = B * B - 4 * A * eps;
    const Vec r = telegrapher_roots(kappa, lambda, eps, c);
    if (disc < 0.0) {
      CHECK(r.empty());
      continue;
    }
    REQUIRE(r.size() == 2);
    CHECK(r[0] <= r[1]);
    ++found;
    const double scale = std::fabs(A) + std::fabs(B) + std::fabs(eps);
    for (double a : r) CHECK(std::fabs(A * a * a + B * a + eps) <= 1e-12 * scale * std::max(1.0, a * a));
  }
  CHECK(found > 50);
  const Vec lin = telegrapher_roots(1.0, 2.0, 1.0, 1.0);  // c² = 1/κ leaves 2a + 1 = 0
  REQUIRE(lin.size() == 1);
  CHECK(lin[0] == doctest::Approx(-0.5));
  const Vec defaults = telegrapher_roots(1.0, 1.0, 0.0, 2.0);
  CHECK(defaults[0] == doctest::Approx(-2.0 / 3.0));
  CHECK(defaults[1] == 0.0);
  CHECK_THROWS_AS(telegrapher_roots(0.0, 1.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("Hunter-Saxton quadratic solution by hand") {
  const ClosedForm cf = analytic("hunter-saxton", "quadratic", {{"c0", 0.5}, {"c1", -0.2}, {"c2", 1.0}});
  for (const Vec& t : {Vec{0.0, 0.0}, Vec{0.3, -0.4}, Vec{1.2, 0.7}}) {
    const DarbouxPoint x = cf.f.f0(t);
    CHECK(x.q[0] == doctest::Approx(sq(t[0] - 0.2) + 0.5));
    CHECK(x.z[0] == doctest::Approx(t[0] - 0.2));
    CHECK(x.z[1] == doctest::Approx(1.0 - t[1]));
  }
}

TEST_CASE("Hunter-Saxton linear solution satisfies the PDE for any mu") {
  const ExampleSystem ex = load("hunter-saxton");
  for (double mu : {0.0, 0.5, 2.0}) {
    const Params p = ex.resolve({{"mu", mu}});
    const ClosedForm cf = ex.solution("linear").make(p);
    for (const Vec& t : {Vec{0.1, 0.2}, Vec{-0.5, 0.9}}) {
      const Jet j = jet_at(cf, t);
      CHECK(j.psi.q[0] == doctest::Approx(1.0 - 2.0 * mu * (t[1] + t[0])));
      CHECK(std::fabs(ex.pde_residual(j, p)) <= 1e-12);
    }
  }
}

TEST_CASE("telegrapher exponential by hand") {
  const ClosedForm cf = analytic("telegrapher", "exponential");
  const double a = -2.0 / 3.0;
  for (const Vec& t : {Vec{0.0, 0.0}, Vec{0.2, -0.3}}) {
    const double u = std::exp(a * (2.0 * t[0] - t[1]));
    const Jet j = jet_at(cf, t);
    CHECK(j.psi.q[0] == doctest::Approx(u));
    CHECK(j.dpsi[0].q[0] == doctest::Approx(2 * a * u));
    CHECK(j.d2u[0] == doctest::Approx(4 * a * a * u));
    CHECK(j.d2u[1] == doctest::Approx(-2 * a * a * u));
    CHECK(j.d2u[3] == doctest::Approx(a * a * u));
  }
}

TEST_CASE("z-quadratic static profile against an RK4 shooting oracle") {
  // With u_t = 0 the equation is κ u'' = ε u; shoot from u(0) = u0, u'(0) = −a u0/κ.
  const double kappa = 1.0, eps = 1.0, u0 = 1.0, a = std::sqrt(eps * kappa);
  const ClosedForm cf = analytic("telegrapher-quadratic-z", "static");
  double u = u0, v = -a * u0 / kappa;
  const int steps = 400;
  const double L = 0.8, h = L / steps;
  auto rhs = [&](double uu, double vv) { return std::pair<double, double>{vv, eps * uu / kappa}; };
  for (int s = 0; s < steps; ++s) {
    const auto [k1u, k1v] = rhs(u, v);
    const auto [k2u, k2v] = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const auto [k3u, k3v] = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const auto [k4u, k4v] = rhs(u + h * k3u, v + h * k3v);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  CHECK(std::fabs(cf.f.f0({0.3, L}).q[0] - u) <= 1e-10);
}

TEST_CASE("every shipped closed form passes its own self-test") {
  for (const auto& name : example_names()) {
    const ExampleSystem ex = load(name);
    for (const SolutionEntry& sol : ex.solutions) {
      CAPTURE(name);
      CAPTURE(sol.key);
      const Params p = ex.resolve({}, sol.overrides);
      const ClosedForm cf = sol.make(p);
      const GridSpec grid = sol.grid.counts.empty() ? GridSpec{Vec(ex.chart.k, 0.0), Vec(ex.chart.k, 0.01),
                                                               std::vector<int>(ex.chart.k, 7)}
                                                    : sol.grid;
      const SolutionMap psi = sample_closed_form(cf, grid);
      if (sol.full) CHECK(map_residual(psi, ex.hamiltonian(p), sol.mode).max.max() <= sol.tolerance);
      if (ex.pde_residual) {
        double pde = 0.0;
        for (std::size_t i = 0; i < grid.size(); i += 7) {
          pde = std::max(pde, std::fabs(ex.pde_residual(jet_at(cf, grid.node(i)), p)));
        }
        CHECK(pde <= 1e-6);
      }
    }
  }
}

TEST_CASE("unknown names are configuration errors") {
  CHECK_THROWS_AS(load("heat"), ConfigError);
  const ExampleSystem ex = load("telegrapher");
  CHECK_THROWS_AS(ex.section("nope"), ConfigError);
  CHECK_THROWS_AS(ex.solution("nope"), ConfigError);
  CHECK_THROWS_AS(ex.resolve({{"gamma", 1.0}}), ConfigError);
  CHECK(ex.resolve({{"a", 0.5}}).at("a") == 0.5);
  CHECK_THROWS_AS(analytic("telegrapher-quadratic-z", "static", {{"epsilon", -1.0}}), ConfigError);
}

TEST_CASE("parameter resolution order") {
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({{"kappa", 3.0}}, {{"kappa", 2.0}, {"C0", 0.3}});
  CHECK(p.at("kappa") == 3.0);
  CHECK(p.at("C0") == 0.3);
  CHECK(p.at("lambda") == 1.0);
}

TEST_CASE("expected verdicts cover sections, solutions and negatives") {
  for (const auto& name : example_names()) {
    const ExampleSystem ex = load(name);
    CHECK(ex.expected.size() == ex.sections.size() + ex.solutions.size() + ex.negatives.size());
    for (const auto& s : ex.sections) CHECK(ex.expected.at("check-hj:" + s.key) == (s.valid ? "PASS" : "FAIL"));
  }
  const ExampleSystem tel = load("telegrapher");
  CHECK(tel.expected.at("negative:non-holonomic section") == "contract");
  CHECK(tel.expected.at("solution:exponential") == "PASS");
}

TEST_CASE("thermodynamic point layout") {
  const ThermoFields f = thermo_fields([](ThermoFields& g, std::size_t i, const Vec&) {
    g.xi[i] = 1.0;
    g.beta[i] = {2.0, 3.0};
    g.V[i] = 4.0;
    g.N[i] = {5.0, 6.0};
    g.T[i] = {7.0, 8.0, 9.0, 10.0};
    g.P[i] = {11.0, 12.0};
    g.S[i] = {13.0, 14.0};
  });
  const DarbouxPoint x = thermo_point(f, 3);
  CHECK(x.q == Vec{1.0, 2.0, 3.0, 4.0});
  CHECK(x.P(0, 0) == 5.0);
  CHECK(x.P(1, 0) == 6.0);
  CHECK(x.P(0, 1) == -7.0);  // T[λ=0, μ=0]
  CHECK(x.P(1, 1) == -8.0);  // T[λ=0, μ=1]
  CHECK(x.P(0, 2) == -9.0);
  CHECK(x.P(1, 3) == 12.0);
  CHECK(x.z == Vec{13.0, 14.0});
}

TEST_CASE("constant thermodynamic fields balance when h vanishes") {
  const ScalarField h = hamiltonian("thermo-eit", {{"m", 0.0}, {"tau", 0.0}, {"b1", 0.0}, {"b2", 0.0}});
  const ThermoFields f = thermo_fields([](ThermoFields& g, std::size_t i, const Vec&) {
    g.xi[i] = 0.4;
    g.beta[i] = {-0.2, 0.9};
    g.S[i] = {1.0, 2.0};
  });
  const ThermoResidual r = thermo_balance_residual(f, h);
  CHECK(r.constitutive_max <= 1e-13);
  CHECK(r.balance_max <= 1e-13);
  CHECK(r.entropy_standard_max <= 1e-13);
  CHECK(r.entropy_evolution_max <= 1e-13);
}

TEST_CASE("linear chemical potential with a quadratic flux potential") {
  // h = ½ΣN²: ξ linear with slopes N, all other fields constant.
  const ScalarField h = hamiltonian("thermo-eit", {{"m", 0.0}, {"tau", 1.0}, {"b1", 0.0}, {"b2", 0.0}});
  const double N1 = 0.3, N2 = -0.7;
  const ThermoFields f = thermo_fields([=](ThermoFields& g, std::size_t i, const Vec& x) {
    g.xi[i] = N1 * x[0] + N2 * x[1];
    g.N[i] = {N1, N2};
  });
  const ThermoResidual r = thermo_balance_residual(f, h);
  CHECK(r.constitutive_max <= 1e-10);
  CHECK(r.balance_max <= 1e-10);
  const double hv = 0.5 * (N1 * N1 + N2 * N2);
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    CHECK(r.h[i] == doctest::Approx(hv));
    CHECK(r.entropy_evolution[i] == doctest::Approx(-2 * hv));
    CHECK(r.entropy_standard[i] - r.entropy_evolution[i] == doctest::Approx(r.h[i]));
  }
}

TEST_CASE("thermodynamic residual shape checks") {
  const ScalarField h = hamiltonian("thermo-eit");
  ThermoFields f = thermo_fields([](ThermoFields&, std::size_t, const Vec&) {});
  f.T[2] = {1.0};
  CHECK_THROWS_AS(thermo_balance_residual(f, h), ShapeError);
  f = thermo_fields([](ThermoFields&, std::size_t, const Vec&) {});
  f.S.pop_back();
  CHECK_THROWS_AS(thermo_balance_residual(f, h), ShapeError);
  CHECK_THROWS_AS(thermo_balance_residual(thermo_fields([](ThermoFields&, std::size_t, const Vec&) {}),
                                          hamiltonian("telegrapher")),
                  ShapeError);
}
