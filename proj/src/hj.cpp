#include "kcontact/hj.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kcontact/parallel.hpp"

namespace kcontact {

namespace {

// Keeps the five largest residuals seen.
class WorstList {
 public:
  void add(const Sample& s, double v) {
    items_.push_back({s, v});
    std::sort(items_.begin(), items_.end(), [](const Offender& a, const Offender& b) { return a.value > b.value; });
    if (items_.size() > 5) items_.pop_back();
  }
  std::vector<Offender> take() { return std::move(items_); }

 private:
  std::vector<Offender> items_;
};

HJReport summarize(const std::string& mode, const Samples& pts, const std::vector<double>& vals) {
  HJReport r;
  r.mode = mode;
  r.sample_count = pts.size();
  WorstList w;
  for (size_t i = 0; i < pts.size(); ++i) {
    r.sup_residual = std::max(r.sup_residual, vals[i]);
    w.add(pts[i], vals[i]);
  }
  r.worst = w.take();
  return r;
}

void require_holonomic(const SectionZInd& g, const Samples& qs, double tol) {
  const double d = check_holonomic(g, qs);
  if (d > tol) {
    std::ostringstream os;
    os << "section is not holonomic (defect " << d << " > " << tol << ")";
    throw ContractError(os.str());
  }
}

// h∘γ and its first derivatives in q and z at one sample.
struct ComposedJet {
  double value = 0.0;
  std::vector<double> dq;
  std::vector<double> dz;
};

ComposedJet composed_jet(const ScalarField& h, const SectionZDep& g, const std::vector<double>& q,
                         const std::vector<double>& z) {
  std::vector<D1> qd = promote<D1>(q);
  std::vector<D1> zd = promote<D1>(z);
  ComposedJet j;
  j.value = h.eval(g.at(q, z));
  j.dq.resize(g.n);
  j.dz.resize(g.k);
  for (int i = 0; i < g.n; ++i) {
    qd[i].d = 1.0;
    j.dq[i] = h.eval(g.at(qd, zd)).d;
    qd[i].d = 0.0;
  }
  for (int b = 0; b < g.k; ++b) {
    zd[b].d = 1.0;
    j.dz[b] = h.eval(g.at(qd, zd)).d;
    zd[b].d = 0.0;
  }
  return j;
}

}  // namespace

BaseField project_Q(const ScalarField& h, const SectionZInd& g) {
  if (h.chart.n != g.n || h.chart.k != g.k) throw ShapeError("section and Hamiltonian differ in chart");
  BaseField f;
  f.dim = g.n;
  f.k = g.k;
  f.domain = g.domain;
  auto eval = [h, g](const auto& q) {
    using T = typename std::decay_t<decltype(q)>::value_type;
    const PhaseVec<T> x = g.at(q);
    const PhaseVec<T> gr = grad_t(h, x);
    return gr.p;  // component α, coordinate i at α·n + i
  };
  f.f.f0 = [eval](const std::vector<double>& q) { return eval(q); };
  f.f.f1 = [eval](const std::vector<D1>& q) { return eval(q); };
  return f;
}

HJReport hj_classical_zind(const ScalarField& h, const SectionZInd& g, const Samples& qs,
                           double holonomic_tol) {
  require_holonomic(g, qs, holonomic_tol);
  std::vector<double> vals(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) { vals[i] = std::fabs(h(g(qs[i]))); });
  return summarize("classical-zind", qs, vals);
}

HJReport hj_evolution_zind(const ScalarField& h, const SectionZInd& g, const Samples& qs,
                           double holonomic_tol) {
  require_holonomic(g, qs, holonomic_tol);
  std::vector<double> vals(qs.size());
  parallel_for(qs.size(), [&](std::size_t s) {
    std::vector<D1> qd = promote<D1>(qs[s]);
    double m = 0.0;
    for (int i = 0; i < g.n; ++i) {
      qd[i].d = 1.0;
      m = std::max(m, std::fabs(h.eval(g.at(qd)).d));
      qd[i].d = 0.0;
    }
    vals[s] = m;
  });
  return summarize("evolution-zind", qs, vals);
}

std::vector<double> gamma_beta(const ScalarField& h, const SectionZDep& g, const std::vector<double>& q,
                               const std::vector<double>& z) {
  return composed_jet(h, g, q, z).dz;
}

std::vector<double> naive_defect(const ScalarField& h, const SectionZDep& g, const std::vector<double>& q,
                                 const std::vector<double>& z) {
  const ComposedJet j = composed_jet(h, g, q, z);
  const auto gp = g.gamma_p.f0(q, z);
  std::vector<double> xi = j.dq;
  for (int i = 0; i < g.n; ++i) {
    for (int b = 0; b < g.k; ++b) xi[i] += j.dz[b] * gp[b * g.n + i];
  }
  return xi;
}

HJReport hj_zdep_residual(const ScalarField& h, const SectionZDep& g, const GaugeMatrix& C, Mode mode,
                          const Samples& qz, double coiso_tol) {
  const double coiso = check_max_coisotropic(g, qz);
  if (coiso > coiso_tol) {
    std::ostringstream os;
    os << "section is not maximally coisotropic (defect " << coiso << ")";
    throw ContractError(os.str());
  }
  std::vector<double> vals(qz.size());
  parallel_for(qz.size(), [&](std::size_t s) {
    const auto q = g.q_of(qz[s]);
    const auto z = g.z_of(qz[s]);
    const Eigen::MatrixXd c = C.C(q, z);
    if (c.rows() != g.k || c.cols() != g.k) throw ShapeError("gauge matrix must be k x k");

    const double hg = h(g(q, z));
    const double tr = c.trace();
    if (mode == Mode::standard) {
      if (std::fabs(tr + hg) > 1e-10 * std::max(1.0, std::fabs(hg))) {
        std::ostringstream os;
        os << "gauge matrix trace " << tr << " violates tr C = -(h o gamma) = " << -hg;
        throw ContractError(os.str());
      }
    } else if (std::fabs(tr) > 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff())) {
      std::ostringstream os;
      os << "gauge matrix trace " << tr << " violates tr C = 0";
      throw ContractError(os.str());
    }

    const auto xi = naive_defect(h, g, q, z);
    const ZDepJacobian J = zdep_jacobian(g, q, z);
    double m = 0.0;
    for (int j = 0; j < g.n; ++j) {
      double r = xi[j];
      for (int a = 0; a < g.k; ++a) {
        for (int b = 0; b < g.k; ++b) r += c(a, b) * J.dz(a * g.n + j, b);
      }
      m = std::max(m, std::fabs(r));
    }
    vals[s] = m;
  });
  HJReport rep = summarize(mode == Mode::standard ? "classical-zdep" : "evolution-zdep", qz, vals);
  rep.gauge = C.name;
  return rep;
}

Eigen::MatrixXd solve_diagonal_C(const ScalarField& h, const SectionZDep& g, Mode mode,
                                 const std::vector<double>& q, const std::vector<double>& z) {
  if (g.n != 1) throw ContractError("diagonal gauge solve is defined for dim Q = 1 only");
  const int k = g.k;
  const double hg = h(g(q, z));
  const double trace = mode == Mode::standard ? -hg : 0.0;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
  if (k == 1) {
    C(0, 0) = trace;
    return C;
  }
  const double xi = naive_defect(h, g, q, z)[0];
  const ZDepJacobian J = zdep_jacobian(g, q, z);

  Eigen::MatrixXd A(2, k);
  Eigen::Vector2d rhs(trace, -xi);
  for (int a = 0; a < k; ++a) {
    A(0, a) = 1.0;
    A(1, a) = J.dz(a, a);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd c = cod.solve(rhs);
  const double miss = (A * c - rhs).cwiseAbs().maxCoeff();
  if (miss > 1e-10 * (1.0 + std::fabs(trace) + std::fabs(xi))) {
    std::ostringstream os;
    os << "no diagonal gauge matrix: z-derivative coefficients are degenerate while the naive defect is "
       << xi;
    throw NoSolutionError(os.str());
  }
  for (int a = 0; a < k; ++a) C(a, a) = c(a);
  return C;
}

GaugeMatrix diagonal_gauge(const ScalarField& h, const SectionZDep& g, Mode mode) {
  GaugeMatrix G;
  G.name = std::string("diagonal (") + to_string(mode) + ")";
  G.C = [h, g, mode](const std::vector<double>& q, const std::vector<double>& z) {
    return solve_diagonal_C(h, g, mode, q, z);
  };
  return G;
}

BaseField project_QZ(const ScalarField& h, const SectionZDep& g, const GaugeMatrix& C) {
  if (h.chart.n != g.n || h.chart.k != g.k) throw ShapeError("section and Hamiltonian differ in chart");
  const int n = g.n;
  const int k = g.k;
  BaseField f;
  f.dim = n + k;
  f.k = k;
  if (g.domain) {
    f.domain = [g, n](const std::vector<double>& x) {
      return g.domain({x.begin(), x.begin() + n}, {x.begin() + n, x.end()});
    };
  }
  f.f.f0 = [h, g, C, n, k](const std::vector<double>& x) {
    const std::vector<double> q(x.begin(), x.begin() + n);
    const std::vector<double> z(x.begin() + n, x.end());
    const DarbouxPoint pt = g(q, z);
    const Gradient gr = grad(h, pt);
    const Eigen::MatrixXd c = C.C(q, z);
    if (c.rows() != k || c.cols() != k) throw ShapeError("gauge matrix must be k x k");
    std::vector<double> out(static_cast<size_t>(k * (n + k)), 0.0);
    for (int a = 0; a < k; ++a) {
      double* row = out.data() + a * (n + k);
      for (int i = 0; i < n; ++i) row[i] = gr.P(a, i);
      for (int b = 0; b < k; ++b) {
        double v = c(a, b);
        for (int j = 0; j < n; ++j) v += pt.P(b, j) * gr.P(a, j);
        row[n + b] = v;
      }
    }
    return out;
  };
  return f;
}

CompleteReport verify_complete(const CompleteSolutionFamily& family, const ScalarField& h, Mode mode,
                               const Samples& params, const Samples& base, double tol, double roundtrip_tol) {
  const size_t param_dim = static_cast<size_t>(family.n * family.k);
  CompleteReport rep;
  rep.per_param.resize(params.size());
  rep.inverse_checked = static_cast<bool>(family.inverse);
  std::vector<HJReport> partial(params.size());

  // Parallel over parameter points; the inner checks run serially per point.
  parallel_for(params.size(), [&](std::size_t pi) {
    ParamResult& pr = rep.per_param[pi];
    pr.lambda = params[pi];
    try {
      if (pr.lambda.size() != param_dim) throw ShapeError("parameter point must have k*n entries");
      const SectionZDep g = family.section(pr.lambda);
      const GaugeMatrix C = diagonal_gauge(h, g, mode);
      partial[pi] = hj_zdep_residual(h, g, C, mode, base);
      pr.sup_residual = partial[pi].sup_residual;
      if (family.inverse) {
        for (const auto& s : base) {
          const auto q = g.q_of(s);
          const auto z = g.z_of(s);
          const FamilyCoords back = family.inverse(g(q, z));
          double e = 0.0;
          for (int i = 0; i < family.n; ++i) e = std::max(e, std::fabs(back.q[i] - q[i]));
          for (int a = 0; a < family.k; ++a) e = std::max(e, std::fabs(back.z[a] - z[a]));
          for (size_t l = 0; l < param_dim; ++l) e = std::max(e, std::fabs(back.lambda[l] - pr.lambda[l]));
          pr.roundtrip = std::max(pr.roundtrip, e);
        }
      }
      pr.passed = pr.sup_residual <= tol && (!family.inverse || pr.roundtrip <= roundtrip_tol);
    } catch (const Error& e) {
      pr.error = e.what();
      pr.passed = false;
    }
  });

  rep.hj.mode = mode == Mode::standard ? "classical-zdep" : "evolution-zdep";
  rep.hj.gauge = std::string("diagonal (") + to_string(mode) + ")";
  WorstList w;
  rep.passed = !params.empty();
  for (size_t pi = 0; pi < params.size(); ++pi) {
    const ParamResult& pr = rep.per_param[pi];
    rep.passed = rep.passed && pr.passed;
    rep.roundtrip_max = std::max(rep.roundtrip_max, pr.roundtrip);
    rep.hj.sup_residual = std::max(rep.hj.sup_residual, pr.sup_residual);
    rep.hj.sample_count += partial[pi].sample_count;
    for (const auto& o : partial[pi].worst) w.add(o.point, o.value);
  }
  rep.hj.worst = w.take();
  return rep;
}

}  // namespace kcontact
