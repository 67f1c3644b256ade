#include "kcontact/sections.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kcontact/geometry.hpp"

namespace kcontact {

void SectionZInd::check_domain(const std::vector<double>& q) const {
  if (static_cast<int>(q.size()) != n) throw ShapeError("base point has the wrong dimension");
  if (domain && !domain(q)) {
    throw DomainError((name.empty() ? std::string("section") : name) + " evaluated outside its domain");
  }
}

void SectionZDep::check_domain(const std::vector<double>& q, const std::vector<double>& z) const {
  if (static_cast<int>(q.size()) != n || static_cast<int>(z.size()) != k) {
    throw ShapeError("base point has the wrong dimension");
  }
  if (domain && !domain(q, z)) {
    throw DomainError((name.empty() ? std::string("section") : name) + " evaluated outside its domain");
  }
}

Eigen::MatrixXd jacobian(const Poly<VecSig>& f, const std::vector<double>& x) {
  std::vector<D1> xd = promote<D1>(x);
  Eigen::MatrixXd J;
  for (size_t j = 0; j < x.size(); ++j) {
    xd[j].d = 1.0;
    auto y = f.get<D1>()(xd);
    xd[j].d = 0.0;
    if (j == 0) J.resize(static_cast<Eigen::Index>(y.size()), static_cast<Eigen::Index>(x.size()));
    for (size_t r = 0; r < y.size(); ++r) J(r, j) = y[r].d;
  }
  return J;
}

namespace {

template <class T>
std::vector<T> potential_gradient(const Poly<VecSig>& W, int n, int k, const std::vector<T>& q) {
  using DT = Dual<T>;
  std::vector<DT> qd;
  qd.reserve(q.size());
  for (const T& v : q) qd.push_back(DT(v));
  std::vector<T> out(n * k, T(0.0));
  for (int i = 0; i < n; ++i) {
    qd[i].d = T(1.0);
    auto w = W.template get<DT>()(qd);
    qd[i].d = T(0.0);
    for (int a = 0; a < k; ++a) out[a * n + i] = w[a].d;
  }
  return out;
}

}  // namespace

SectionZInd from_potentials(int n, int k, const Poly<VecSig>& W, std::string name,
                            std::function<bool(const std::vector<double>&)> domain) {
  SectionZInd s;
  s.n = n;
  s.k = k;
  s.gamma_z = W;
  s.gamma_p.f0 = [W, n, k](const std::vector<double>& q) { return potential_gradient<double>(W, n, k, q); };
  s.gamma_p.f1 = [W, n, k](const std::vector<D1>& q) { return potential_gradient<D1>(W, n, k, q); };
  s.name = std::move(name);
  s.domain = std::move(domain);
  return s;
}

double check_holonomic(const SectionZInd& g, const Samples& qs) {
  double defect = 0.0;
  for (const auto& q : qs) {
    g.check_domain(q);
    const Eigen::MatrixXd dW = jacobian(g.gamma_z, q);  // k × n
    const auto gp = g.gamma_p.f0(q);
    for (int a = 0; a < g.k; ++a) {
      for (int i = 0; i < g.n; ++i) defect = std::max(defect, std::fabs(gp[a * g.n + i] - dW(a, i)));
    }
  }
  return defect;
}

double check_symmetric_jacobian(const SectionZInd& g, const Samples& qs) {
  double defect = 0.0;
  for (const auto& q : qs) {
    g.check_domain(q);
    const Eigen::MatrixXd J = jacobian(g.gamma_p, q);  // (kn) × n
    for (int a = 0; a < g.k; ++a) {
      for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
          defect = std::max(defect, std::fabs(J(a * g.n + i, j) - J(a * g.n + j, i)));
        }
      }
    }
  }
  return defect;
}

ZDepJacobian zdep_jacobian(const SectionZDep& g, const std::vector<double>& q, const std::vector<double>& z) {
  g.check_domain(q, z);
  std::vector<D1> qd = promote<D1>(q);
  std::vector<D1> zd = promote<D1>(z);
  const auto& f = g.gamma_p.get<D1>();
  ZDepJacobian J{Eigen::MatrixXd(g.n * g.k, g.n), Eigen::MatrixXd(g.n * g.k, g.k)};
  for (int j = 0; j < g.n; ++j) {
    qd[j].d = 1.0;
    auto y = f(qd, zd);
    qd[j].d = 0.0;
    for (int r = 0; r < g.n * g.k; ++r) J.dq(r, j) = y[r].d;
  }
  for (int b = 0; b < g.k; ++b) {
    zd[b].d = 1.0;
    auto y = f(qd, zd);
    zd[b].d = 0.0;
    for (int r = 0; r < g.n * g.k; ++r) J.dz(r, b) = y[r].d;
  }
  return J;
}

double check_max_coisotropic(const SectionZDep& g, const Samples& qz) {
  if (g.n == 1) return 0.0;
  double defect = 0.0;
  for (const auto& s : qz) {
    const auto q = g.q_of(s);
    const auto z = g.z_of(s);
    const auto gp = g.gamma_p.f0(q, z);
    const ZDepJacobian J = zdep_jacobian(g, q, z);
    auto A = [&](int a, int i, int j) {
      double v = J.dq(a * g.n + j, i);
      for (int b = 0; b < g.k; ++b) v += gp[b * g.n + i] * J.dz(a * g.n + j, b);
      return v;
    };
    for (int a = 0; a < g.k; ++a) {
      for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) defect = std::max(defect, std::fabs(A(a, i, j) - A(a, j, i)));
      }
    }
  }
  return defect;
}

double check_isotropic_slices(const SectionZDep& g, const std::vector<double>& z, const Samples& qs) {
  double defect = 0.0;
  for (const auto& q : qs) {
    const ZDepJacobian J = zdep_jacobian(g, q, z);
    for (int a = 0; a < g.k; ++a) {
      for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
          defect = std::max(defect, std::fabs(J.dq(a * g.n + i, j) - J.dq(a * g.n + j, i)));
        }
      }
    }
  }
  return defect;
}

double check_vertical_eta(const SectionZDep& g, const Samples& qz) {
  const ChartSpec chart{g.n, g.k};
  double defect = 0.0;
  for (const auto& s : qz) {
    const auto q = g.q_of(s);
    const auto z = g.z_of(s);
    const DarbouxPoint pt = g(q, z);
    const ZDepJacobian J = zdep_jacobian(g, q, z);
    for (int b = 0; b < g.k; ++b) {
      Tangent v(chart);
      v.z[b] = 1.0;
      for (int r = 0; r < g.n * g.k; ++r) v.p[r] = J.dz(r, b);
      for (int a = 0; a < g.k; ++a) {
        defect = std::max(defect, std::fabs(contract_eta(chart, pt, v, a) - (a == b ? 1.0 : 0.0)));
      }
    }
  }
  return defect;
}

Samples sample_box(const std::vector<double>& lo, const std::vector<double>& hi, int count, unsigned seed) {
  if (lo.size() != hi.size()) throw ShapeError("sample box bounds differ in length");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Samples out(count, Sample(lo.size()));
  for (auto& s : out) {
    for (size_t d = 0; d < lo.size(); ++d) s[d] = lo[d] + (hi[d] - lo[d]) * U(rng);
  }
  return out;
}

Samples grid_box(const std::vector<double>& lo, const std::vector<double>& hi, int m) {
  if (lo.size() != hi.size()) throw ShapeError("sample box bounds differ in length");
  if (m < 1) throw ShapeError("grid_box needs at least one point per coordinate");
  const size_t dim = lo.size();
  size_t total = 1;
  for (size_t d = 0; d < dim; ++d) total *= static_cast<size_t>(m);
  Samples out;
  out.reserve(total);
  for (size_t idx = 0; idx < total; ++idx) {
    Sample s(dim);
    size_t r = idx;
    for (size_t d = dim; d-- > 0;) {
      const int i = static_cast<int>(r % m);
      r /= m;
      s[d] = m == 1 ? lo[d] : lo[d] + (hi[d] - lo[d]) * i / (m - 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace kcontact
