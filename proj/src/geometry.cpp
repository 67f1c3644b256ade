#include "kcontact/geometry.hpp"

#include <cmath>
#include <string>

namespace kcontact {

void ChartSpec::validate() const {
  if (n < 1 || k < 1) {
    throw ShapeError("chart needs n >= 1 and k >= 1, got n=" + std::to_string(n) +
                     ", k=" + std::to_string(k));
  }
}

void check_conforms(const ChartSpec& chart, const PhaseVec<double>& x, const char* what) {
  chart.validate();
  if (x.n != chart.n || x.k != chart.k || static_cast<int>(x.q.size()) != chart.n ||
      static_cast<int>(x.p.size()) != chart.n * chart.k || static_cast<int>(x.z.size()) != chart.k) {
    throw ShapeError(std::string(what) + " does not match chart (n=" + std::to_string(chart.n) +
                     ", k=" + std::to_string(chart.k) + ")");
  }
  for (int i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw ShapeError(std::string(what) + " has a non-finite entry");
  }
}

void check_conforms(const ChartSpec& chart, const KTangent& kv) {
  if (static_cast<int>(kv.size()) != chart.k) {
    throw ShapeError("k-tangent has " + std::to_string(kv.size()) + " components, chart has k=" +
                     std::to_string(chart.k));
  }
  for (const auto& t : kv) check_conforms(chart, t, "tangent");
}

std::vector<Covector> eval_eta(const ChartSpec& chart, const DarbouxPoint& pt) {
  check_conforms(chart, pt);
  std::vector<Covector> out;
  out.reserve(chart.k);
  for (int a = 0; a < chart.k; ++a) {
    Covector eta(chart);
    eta.z[a] = 1.0;
    for (int i = 0; i < chart.n; ++i) eta.q[i] = -pt.P(a, i);
    out.push_back(std::move(eta));
  }
  return out;
}

std::vector<Tangent> reeb_fields(const ChartSpec& chart) {
  chart.validate();
  std::vector<Tangent> out;
  for (int b = 0; b < chart.k; ++b) {
    Tangent r(chart);
    r.z[b] = 1.0;
    out.push_back(std::move(r));
  }
  return out;
}

double contract_eta(const ChartSpec& chart, const DarbouxPoint& pt, const Tangent& x, int alpha) {
  double s = x.z[alpha];
  for (int i = 0; i < chart.n; ++i) s -= pt.P(alpha, i) * x.q[i];
  return s;
}

Covector contract_deta(const ChartSpec& chart, const Tangent& x, int alpha) {
  // ι_X (dqⁱ ∧ dpᵢᵅ) = Xⁱ dpᵢᵅ − X_iᵅ dqⁱ
  Covector out(chart);
  for (int i = 0; i < chart.n; ++i) {
    out.P(alpha, i) += x.q[i];
    out.q[i] -= x.P(alpha, i);
  }
  return out;
}

ChiValue chi(const ChartSpec& chart, const DarbouxPoint& pt, const KTangent& kv) {
  check_conforms(chart, pt);
  check_conforms(chart, kv);
  ChiValue out{Covector(chart), 0.0};
  for (int a = 0; a < chart.k; ++a) {
    Covector c = contract_deta(chart, kv[a], a);
    for (int j = 0; j < c.size(); ++j) out.form[j] += c[j];
    out.scalar += contract_eta(chart, pt, kv[a], a);
  }
  return out;
}

Eigen::MatrixXd chi_matrix(const ChartSpec& chart, const DarbouxPoint& pt) {
  check_conforms(chart, pt);
  const int dim = chart.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim + 1, chart.k * dim);
  // χ is linear, so column c is χ applied to the c-th unit k-tangent.
  KTangent kv = zero_ktangent(chart);
  for (int a = 0; a < chart.k; ++a) {
    for (int j = 0; j < dim; ++j) {
      kv[a][j] = 1.0;
      ChiValue v = chi(chart, pt, kv);
      const int col = a * dim + j;
      for (int r = 0; r < dim; ++r) m(r, col) = v.form[r];
      m(dim, col) = v.scalar;
      kv[a][j] = 0.0;
    }
  }
  return m;
}

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

int kernel_deficiency(const ChartSpec& chart, const DarbouxPoint& pt) {
  Eigen::MatrixXd m = chi_matrix(chart, pt);
  return static_cast<int>(m.cols()) - numeric_rank(m);
}

int gauge_dimension(const ChartSpec& chart) {
  chart.validate();
  return (chart.n + 1) * (chart.k * chart.k - 1);
}

KTangent zero_ktangent(const ChartSpec& chart) { return KTangent(chart.k, Tangent(chart)); }

}  // namespace kcontact
