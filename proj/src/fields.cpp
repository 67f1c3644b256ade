#include "kcontact/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kcontact/geometry.hpp"

namespace kcontact {

void ScalarField::check_domain(const DarbouxPoint& x) const {
  if (domain && !domain(x)) {
    std::ostringstream os;
    os << (name.empty() ? "field" : name) << " evaluated outside its domain";
    if (!domain_note.empty()) os << " (" << domain_note << ")";
    throw DomainError(os.str());
  }
}

Gradient grad(const ScalarField& h, const DarbouxPoint& pt) {
  check_conforms(h.chart, pt);
  return grad_t(h, pt);
}

Gradient fd_grad(const ScalarField& h, const DarbouxPoint& pt, double step) {
  if (!(step > 0.0)) throw PreconditionError("finite-difference step must be positive");
  check_conforms(h.chart, pt);
  Gradient g(pt.n, pt.k);
  DarbouxPoint x = pt;
  for (int j = 0; j < pt.size(); ++j) {
    x[j] = pt[j] + step;
    double fp = h(x);
    x[j] = pt[j] - step;
    double fm = h(x);
    x[j] = pt[j];
    g[j] = (fp - fm) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd hessian_pp(const ScalarField& h, const DarbouxPoint& pt) {
  check_conforms(h.chart, pt);
  const int m = pt.n * pt.k;
  Eigen::MatrixXd hess(m, m);
  PhaseVec<D2> x = promote<D2>(pt);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      x.p[a].v.d = 1.0;
      x.p[b].d.v = 1.0;
      double val = h.eval(x).d.d;
      hess(a, b) = val;
      hess(b, a) = val;
      x.p[a].v.d = 0.0;
      x.p[b].d.v = 0.0;
    }
  }
  return hess;
}

Regularity check_regularity(const ScalarField& h, const DarbouxPoint& pt, double rel_tol) {
  Eigen::MatrixXd hess = hessian_pp(h, pt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
  Regularity r;
  const auto& ev = es.eigenvalues();
  r.spectrum.assign(ev.data(), ev.data() + ev.size());
  r.min_abs_eigenvalue = ev.cwiseAbs().minCoeff();
  r.max_abs_eigenvalue = ev.cwiseAbs().maxCoeff();
  r.is_regular = r.max_abs_eigenvalue > 0.0 && r.min_abs_eigenvalue > rel_tol * r.max_abs_eigenvalue;
  return r;
}

namespace {

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

FibreInverse invert_fibre_derivative(const ScalarField& h, const std::vector<double>& q,
                                     const std::vector<double>& z, const std::vector<double>& v,
                                     const std::vector<double>& p_init, double tol, int max_iter) {
  const ChartSpec& c = h.chart;
  const int m = c.n * c.k;
  if (static_cast<int>(q.size()) != c.n || static_cast<int>(z.size()) != c.k ||
      static_cast<int>(v.size()) != m || static_cast<int>(p_init.size()) != m) {
    throw ShapeError("fibre inversion inputs do not match the chart");
  }

  DarbouxPoint pt(c);
  pt.q = q;
  pt.z = z;
  pt.p = p_init;

  auto residual = [&](const DarbouxPoint& x) {
    Gradient g = grad(h, x);
    Eigen::VectorXd r(m);
    for (int j = 0; j < m; ++j) r(j) = g.p[j] - v[j];
    return r;
  };

  Eigen::VectorXd F = residual(pt);
  double res = sup_norm(F);
  FibreInverse out;
  for (int it = 0; it <= max_iter; ++it) {
    if (res < tol) {
      out.p = pt.p;
      out.iterations = it;
      out.residual = res;
      return out;
    }
    if (it == max_iter) break;

    Eigen::MatrixXd J = hessian_pp(h, pt);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) <= 1e-9 * s(0)) {
      throw RegularityError("p-Hessian is singular during fibre inversion (sigma_min/sigma_max = " +
                            std::to_string(s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0)) + ")");
    }
    Eigen::VectorXd delta = svd.solve(-F);

    // Halve the step while the residual fails to decrease.
    double step = 1.0;
    bool accepted = false;
    DarbouxPoint trial = pt;
    Eigen::VectorXd Ft;
    for (int halving = 0; halving <= 10; ++halving) {
      for (int j = 0; j < m; ++j) trial.p[j] = pt.p[j] + step * delta(j);
      Ft = residual(trial);
      if (sup_norm(Ft) < res) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      throw SolverError("fibre inversion stalled; last residual " + std::to_string(res));
    }
    pt = trial;
    F = Ft;
    res = sup_norm(F);
  }
  std::ostringstream os;
  os << "fibre inversion did not converge in " << max_iter << " iterations; last residual " << res;
  throw SolverError(os.str());
}

}  // namespace kcontact
