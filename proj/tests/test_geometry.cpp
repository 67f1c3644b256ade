#include <random>

#include "doctest.h"
#include "kcontact/geometry.hpp"
#include "support.hpp"

using namespace kcontact;

namespace {

// ηᵅ at pt applied to v, written out from the coordinate expression.
double eta_oracle(const DarbouxPoint& pt, const Tangent& v, int a) {
  double s = v.z[a];
  for (int i = 0; i < pt.n; ++i) s -= pt.P(a, i) * v.q[i];
  return s;
}

// dηᵅ(X, Y) for constant fields X, Y: X(ηᵅ(Y)) − Y(ηᵅ(X)), each directional
// derivative taken by central differences along a straight line.
double deta_oracle(const DarbouxPoint& pt, const Tangent& X, const Tangent& Y, int a) {
  const double h = 1e-4;
  auto along = [&](const Tangent& dir, double s) {
    DarbouxPoint y = pt;
    for (int j = 0; j < y.size(); ++j) y[j] += s * dir[j];
    return y;
  };
  const double xy = (eta_oracle(along(X, h), Y, a) - eta_oracle(along(X, -h), Y, a)) / (2 * h);
  const double yx = (eta_oracle(along(Y, h), X, a) - eta_oracle(along(Y, -h), X, a)) / (2 * h);
  return xy - yx;
}

Tangent unit(const ChartSpec& c, int j) {
  Tangent t(c);
  t[j] = 1.0;
  return t;
}

}  // namespace

TEST_CASE("eta at zero momenta is dz") {
  const ChartSpec c{1, 2};
  const auto eta = eval_eta(c, DarbouxPoint(c));
  REQUIRE(eta.size() == 2);
  for (int a = 0; a < 2; ++a) {
    CHECK(eta[a].q[0] == 0.0);
    CHECK(eta[a].z[a] == 1.0);
    CHECK(eta[a].z[1 - a] == 0.0);
  }
}

TEST_CASE("eta picks up the momentum rows") {
  const ChartSpec c{1, 2};
  DarbouxPoint x(c);
  x.p = {3.0, 5.0};
  const auto eta = eval_eta(c, x);
  CHECK(eta[0].q[0] == -3.0);
  CHECK(eta[1].q[0] == -5.0);
  CHECK(eta[0].p == std::vector<double>{0.0, 0.0});
}

TEST_CASE("eval_eta rejects a point from another chart") {
  CHECK_THROWS_AS(eval_eta(ChartSpec{1, 2}, DarbouxPoint(2, 2)), ShapeError);
  CHECK_THROWS_AS(eval_eta(ChartSpec{0, 2}, DarbouxPoint(0, 2)), ShapeError);
}

TEST_CASE("Reeb fields are the unit z directions") {
  CHECK(reeb_fields(ChartSpec{2, 1}).size() == 1);
  const ChartSpec c{2, 2};
  const auto R = reeb_fields(c);
  REQUIRE(R.size() == 2);
  for (int b = 0; b < 2; ++b) {
    int nonzero = 0;
    for (int j = 0; j < R[b].size(); ++j) nonzero += R[b][j] != 0.0;
    CHECK(nonzero == 1);
    CHECK(R[b].z[b] == 1.0);
  }
}

TEST_CASE("Reeb duality and ker d-eta on a 3x3 range of charts") {
  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      const ChartSpec c{n, k};
      const auto R = reeb_fields(c);
      for (int s = 0; s < 100; ++s) {
        const DarbouxPoint x = testing::random_point(c, rng, -3, 3);
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) {
            CHECK(contract_eta(c, x, R[a], b) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
            const Covector d = contract_deta(c, R[a], b);
            CHECK(max_abs(d) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("chi of the zero k-tangent vanishes") {
  const ChartSpec c{2, 3};
  std::mt19937 rng(1);
  const ChiValue v = chi(c, testing::random_point(c, rng), zero_ktangent(c));
  CHECK(max_abs(v.form) == 0.0);
  CHECK(v.scalar == 0.0);
}

TEST_CASE("an off-diagonal momentum insertion lies in ker chi") {
  const ChartSpec c{1, 2};
  std::mt19937 rng(2);
  KTangent kv = zero_ktangent(c);
  kv[0].P(1, 0) = 1.0;
  const ChiValue v = chi(c, testing::random_point(c, rng), kv);
  CHECK(max_abs(v.form) == 0.0);
  CHECK(v.scalar == 0.0);
}

TEST_CASE("chi agrees with finite-difference contractions of eta and d-eta") {
  std::mt19937 rng(3);
  for (const ChartSpec c : {ChartSpec{1, 2}, ChartSpec{2, 2}, ChartSpec{3, 2}, ChartSpec{2, 3}}) {
    for (int s = 0; s < 20; ++s) {
      const DarbouxPoint x = testing::random_point(c, rng);
      KTangent kv(c.k);
      for (auto& t : kv) t = testing::random_point(c, rng);
      const ChiValue v = chi(c, x, kv);
      double scalar = 0.0;
      for (int a = 0; a < c.k; ++a) scalar += eta_oracle(x, kv[a], a);
      CHECK(std::fabs(v.scalar - scalar) < 1e-8);
      for (int j = 0; j < c.dim(); ++j) {
        double form = 0.0;
        for (int a = 0; a < c.k; ++a) form += deta_oracle(x, kv[a], unit(c, j), a);
        CHECK(std::fabs(v.form[j] - form) < 1e-8);
      }
    }
  }
}

TEST_CASE("chi is linear") {
  const ChartSpec c{2, 2};
  std::mt19937 rng(4);
  const DarbouxPoint x = testing::random_point(c, rng);
  for (int s = 0; s < 20; ++s) {
    KTangent u(c.k), w(c.k), mix(c.k);
    const double a = 1.7, b = -0.4;
    for (int al = 0; al < c.k; ++al) {
      u[al] = testing::random_point(c, rng);
      w[al] = testing::random_point(c, rng);
      mix[al] = Tangent(c);
      for (int j = 0; j < c.dim(); ++j) mix[al][j] = a * u[al][j] + b * w[al][j];
    }
    const ChiValue cu = chi(c, x, u), cw = chi(c, x, w), cm = chi(c, x, mix);
    CHECK(std::fabs(cm.scalar - (a * cu.scalar + b * cw.scalar)) < 1e-10);
    for (int j = 0; j < c.dim(); ++j) CHECK(std::fabs(cm.form[j] - (a * cu.form[j] + b * cw.form[j])) < 1e-10);
  }
}

TEST_CASE("kernel deficiency matches (n+1)(k^2-1)") {
  std::mt19937 rng(5);
  CHECK(gauge_dimension(ChartSpec{1, 2}) == 6);
  CHECK(gauge_dimension(ChartSpec{3, 1}) == 0);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      const ChartSpec c{n, k};
      const int expected = (n + 1) * (k * k - 1);
      for (int s = 0; s < 5; ++s) CHECK(kernel_deficiency(c, testing::random_point(c, rng, -2, 2)) == expected);
    }
  }
}

TEST_CASE("numeric rank uses a relative threshold") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  CHECK(numeric_rank(m) == 0);
  m(0, 0) = 1e6;
  m(1, 1) = 1e-2;
  m(2, 2) = 1e-5;
  CHECK(numeric_rank(m) == 2);
}
