#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "kcontact/corpus.hpp"
#include "kcontact/integrate.hpp"
#include "support.hpp"

using namespace kcontact;

namespace {

using Vec = std::vector<double>;

template <class F>
BaseField base_field(int dim, int k, F f) {
  return BaseField{dim, k, Poly<VecSig>::from(f), {}};
}

GridSpec square(int k, int count, double h) {
  GridSpec g;
  g.origin.assign(k, 0.0);
  g.spacing.assign(k, h);
  g.counts.assign(k, count);
  return g;
}

// Commuting linear fields Z_α(x) = M_α x with M_α polynomials in one matrix.
BaseField commuting_linear(int k) {
  return base_field(2, k, [k](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    // M = [[0.3, 1], [-1, 0.1]], M_α = (α+1)·0.2·M + α·0.1·M²
    const T m0 = 0.3 * x[0] + x[1], m1 = -1.0 * x[0] + 0.1 * x[1];
    const T mm0 = 0.3 * m0 + m1, mm1 = -1.0 * m0 + 0.1 * m1;
    std::vector<T> out;
    for (int a = 0; a < k; ++a) {
      out.push_back(0.2 * (a + 1) * m0 + 0.1 * a * mm0);
      out.push_back(0.2 * (a + 1) * m1 + 0.1 * a * mm1);
    }
    return out;
  });
}

}  // namespace

TEST_CASE("commutator of a telegrapher projection vanishes") {
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({});
  const BaseField f = project_Q(ex.hamiltonian(p), ex.section("classical").zind(p));
  CHECK(commutator_defect(f, sample_box({0.5}, {2.0}, 50, 1)) <= 1e-12);
}

TEST_CASE("commutator of the non-commuting telegrapher section is one") {
  // p = (u, 1): Z_t = u and Z_x = −1, so J_x Z_t − J_t Z_x = 1.
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({});
  const BaseField f = project_Q(ex.hamiltonian(p), ex.section("noncommuting").zind(p));
  CHECK(commutator_defect(f, sample_box({0.5}, {2.0}, 20, 1)) == doctest::Approx(1.0));
}

TEST_CASE("constant fields commute") {
  const BaseField f = base_field(2, 2, [](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>{T(1.0), T(2.0), T(-0.5), T(0.0) * x[0]};
  });
  CHECK(commutator_defect(f, sample_box({-1, -1}, {1, 1}, 20, 2)) == 0.0);
}

TEST_CASE("commutator falls back to differences for double-only fields") {
  BaseField f;
  f.dim = 2;
  f.k = 2;
  f.f.f0 = [](const Vec& x) { return Vec{1.0, 0.0, 0.0, x[0]}; };
  CHECK(commutator_defect(f, {{0.3, 0.4}}) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("telegrapher integral section against the exponential") {
  // Z_t = c a u, Z_x = −a u / κ, so σ(t, x) = u0 exp(c a t − a x / κ).
  const double c = 2.0, a = -2.0 / 3.0, kappa = 1.0, u0 = 1.0;
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({});
  const BaseField f = project_Q(ex.hamiltonian(p), ex.section("classical").zind(p));
  const GridSpec grid = square(2, 50, 0.02);
  const IntegralSection s = integral_section(f, {u0}, grid);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec t = grid.node(i);
    err = std::max(err, std::fabs(s.map.values[i][0] - u0 * std::exp(c * a * t[0] - a * t[1] / kappa)));
  }
  CHECK(err <= 1e-8);
  CHECK(s.order_defect <= 1e-10);
  CHECK_FALSE(s.commutator_warning);
}

TEST_CASE("a zero field leaves the start point fixed") {
  const BaseField f = base_field(3, 2, [](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>(6, T(0.0) * x[0]);
  });
  const IntegralSection s = integral_section(f, {1.0, -2.0, 0.5}, square(2, 7, 0.1));
  for (const auto& v : s.map.values) CHECK(v == Vec{1.0, -2.0, 0.5});
  CHECK(s.order_defect == 0.0);
}

TEST_CASE("Hunter-Saxton linear section integrates to the linear solution") {
  const ExampleSystem ex = load("hunter-saxton");
  const Params p = ex.resolve({});
  const BaseField f = project_Q(ex.hamiltonian(p), ex.section("linear").zind(p));
  const GridSpec grid = square(2, 20, 0.05);
  const IntegralSection s = integral_section(f, {1.0}, grid);
  // u = u0 − 2μ(x + c t) with μ = c = 1
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec t = grid.node(i);
    CHECK(s.map.values[i][0] == doctest::Approx(1.0 - 2.0 * (t[1] + t[0])).epsilon(1e-12));
  }
}

TEST_CASE("flows compose in any direction order") {
  for (int k = 1; k <= 3; ++k) {
    const BaseField f = commuting_linear(k);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    const Vec t{0.4, -0.3, 0.25};
    const Vec ref = compose_flows(f, {1.0, 0.5}, t, order, 64);
    do {
      const Vec x = compose_flows(f, {1.0, 0.5}, t, order, 64);
      CHECK(std::fabs(x[0] - ref[0]) <= 1e-10);
      CHECK(std::fabs(x[1] - ref[1]) <= 1e-10);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const BaseField f = base_field(1, 1, [](const auto& x) { return std::vector<std::decay_t<decltype(x[0])>>{x[0]}; });
  auto err = [&](int steps) { return std::fabs(compose_flows(f, {1.0}, {1.0}, {0}, steps)[0] - std::exp(1.0)); };
  const double e1 = err(4), e2 = err(8), e3 = err(16);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 / e3 >= 8.0);
  CHECK(e3 < 1e-5);
}

TEST_CASE("non-commuting flows raise an integrability error") {
  const BaseField f = base_field(2, 2, [](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>{T(1.0), T(0.0) * x[0], T(0.0), x[0]};
  });
  try {
    integral_section(f, {0.0, 0.0}, square(2, 5, 0.1));
    FAIL("expected an integrability error");
  } catch (const IntegrabilityError& e) {
    CHECK(e.exit_code() == 5);
  }
}

TEST_CASE("blow-up raises a divergence error") {
  const BaseField f = base_field(1, 1, [](const auto& x) {
    return std::vector<std::decay_t<decltype(x[0])>>{x[0] * x[0]};
  });
  CHECK_THROWS_AS(integral_section(f, {1.0}, square(1, 21, 0.1)), DivergenceError);
  // u' = u² from 1 stays bounded up to t = 0.5
  CHECK_NOTHROW(integral_section(f, {1.0}, square(1, 6, 0.1)));
}

TEST_CASE("integral section preconditions") {
  const BaseField f = commuting_linear(2);
  CHECK_THROWS_AS(integral_section(f, {1.0, 0.0}, square(3, 5, 0.1)), ShapeError);
  CHECK_THROWS_AS(integral_section(f, {1.0}, square(2, 5, 0.1)), ShapeError);
  CHECK_THROWS_AS(integral_section(f, {1.0, 0.0}, square(2, 5, 0.1), 0), PreconditionError);
}

TEST_CASE("lift evaluates the section at every node") {
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({});
  const SectionZInd g = ex.section("classical").zind(p);
  BaseMap sigma;
  sigma.grid = square(2, 3, 0.5);
  for (std::size_t i = 0; i < sigma.grid.size(); ++i) sigma.values.push_back({0.5 + 0.1 * i});
  const SolutionMap psi = lift(g, sigma);
  REQUIRE(psi.values.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    const DarbouxPoint x = g(sigma.values[i]);
    CHECK(psi.values[i].q == x.q);
    CHECK(psi.values[i].p == x.p);
    CHECK(psi.values[i].z == x.z);
  }
}

TEST_CASE("end-to-end verdicts on the telegrapher") {
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({});
  const ScalarField h = ex.hamiltonian(p);
  EndToEndOptions opt;
  opt.hj_samples = sample_box({0.5}, {2.0}, 100, 1);
  const GridSpec grid = square(2, 30, 0.01);

  const EndToEndReport good = end_to_end(h, ex.section("classical").zind(p), Mode::standard, grid, {1.0}, opt);
  CHECK(good.passed);
  CHECK(good.failed_stage.empty());
  CHECK(good.map.max.max() <= 1e-6);

  const EndToEndReport bad = end_to_end(h, ex.section("wrong-root").zind(p), Mode::standard, grid, {1.0}, opt);
  CHECK_FALSE(bad.passed);
  CHECK(bad.failed_stage == "hj");
  CHECK(bad.psi.values.empty());

  opt.stop_on_hj_failure = false;
  const EndToEndReport cont = end_to_end(h, ex.section("wrong-root").zind(p), Mode::standard, grid, {1.0}, opt);
  CHECK_FALSE(cont.passed);
  CHECK(cont.failed_stage == "hj");
  CHECK(cont.psi.values.size() == grid.size());
  CHECK(cont.map.max.max() > 1e-3);
}

TEST_CASE("h = 0 passes trivially") {
  const auto h = make_field(ChartSpec{1, 2}, [](const auto& x) { return 0.0 * x.q[0]; });
  const SectionZInd g = from_potentials(1, 2, [](const auto& q) {
    using T = typename std::decay_t<decltype(q)>::value_type;
    return std::vector<T>{q[0] * q[0], T(3.0) * q[0]};
  });
  EndToEndOptions opt;
  opt.hj_samples = sample_box({-1.0}, {1.0}, 20, 1);
  const EndToEndReport r = end_to_end(h, g, Mode::standard, square(2, 6, 0.1), {0.3}, opt);
  CHECK(r.passed);
  CHECK(r.map.max.max() <= 1e-14);
}

TEST_CASE("stage names are attached to library errors") {
  const ExampleSystem ex = load("telegrapher");
  const Params p = ex.resolve({});
  EndToEndOptions opt;
  opt.hj_samples = sample_box({0.5}, {2.0}, 50, 1);
  try {
    end_to_end(ex.hamiltonian(p), ex.section("non-holonomic").zind(p), Mode::standard, square(2, 5, 0.01), {1.0}, opt);
    FAIL("expected a contract error");
  } catch (const ContractError& e) {
    CHECK(e.stage() == "hj");
  }
  opt.stop_on_hj_failure = false;
  try {
    end_to_end(ex.hamiltonian(p), ex.section("noncommuting").zind(p), Mode::evolution, square(2, 5, 0.1), {1.0}, opt);
    FAIL("expected an integrability error");
  } catch (const IntegrabilityError& e) {
    CHECK(e.stage() == "integrate");
  }
}

TEST_CASE("every corpus section round-trips with the expected verdict") {
  for (const auto& name : example_names()) {
    const ExampleSystem ex = load(name);
    for (const SectionEntry& e : ex.sections) {
      if (e.kind == SectionKind::family || !e.start) continue;
      CAPTURE(name);
      CAPTURE(e.key);
      const Params p = ex.resolve({}, e.overrides);
      const ScalarField h = ex.hamiltonian(p);
      EndToEndOptions opt;
      opt.hj_samples = sample_box(e.lo, e.hi, 200, 1);
      const GridSpec grid = square(ex.chart.k, 11, 0.002);
      auto run = [&] {
        if (e.kind == SectionKind::zdep) {
          const SectionZDep g = e.zdep(p);
          const GaugeMatrix C = e.gauge ? e.gauge(p, h) : diagonal_gauge(h, g, e.mode);
          return end_to_end(h, g, C, e.mode, grid, e.start(p), opt);
        }
        return end_to_end(h, e.zind(p), e.mode, grid, e.start(p), opt);
      };
      if (e.valid && !e.integrable) {
        CHECK_THROWS_AS(run(), IntegrabilityError);
      } else if (e.valid) {
        const EndToEndReport r = run();
        CHECK(r.passed);
        CHECK(r.map.max.max() <= 1e-6);
      } else {
        bool failed = false;
        try {
          failed = !run().passed;
        } catch (const Error&) {
          failed = true;
        }
        CHECK(failed);
      }
    }
  }
}
