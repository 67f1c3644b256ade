#include "kcontact/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kcontact/parallel.hpp"

namespace kcontact {

namespace {

constexpr double kBlowUp = 1e9;

void check_state(const BaseField& f, const std::vector<double>& x) {
  for (double v : x) {
    if (!std::isfinite(v) || std::fabs(v) > kBlowUp) {
      throw DivergenceError("integral section left the bounded region (|state| > 1e9)");
    }
  }
  if (f.domain && !f.domain(x)) throw DomainError("integral section left the field's domain");
}

// One classic RK4 step along component alpha.
void rk4_step(const BaseField& f, std::vector<double>& x, int alpha, double dt) {
  const int m = f.dim;
  std::vector<double> tmp(m);
  auto eval = [&](const std::vector<double>& y) { return f.component(y, alpha); };
  const auto k1 = eval(x);
  for (int i = 0; i < m; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  const auto k2 = eval(tmp);
  for (int i = 0; i < m; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  const auto k3 = eval(tmp);
  for (int i = 0; i < m; ++i) tmp[i] = x[i] + dt * k3[i];
  const auto k4 = eval(tmp);
  for (int i = 0; i < m; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void flow(const BaseField& f, std::vector<double>& x, int alpha, double t, int steps) {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    rk4_step(f, x, alpha, dt);
    check_state(f, x);
  }
}

// Stacked Jacobian of all k components: row α·dim + i, column j.
// Fields supplied at double level only fall back to central differences.
Eigen::MatrixXd stacked_jacobian(const BaseField& f, const std::vector<double>& x) {
  Eigen::MatrixXd J(f.k * f.dim, f.dim);
  if (!f.f.f1) {
    std::vector<double> xp = x;
    for (int j = 0; j < f.dim; ++j) {
      const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
      xp[j] = x[j] + h;
      const auto up = f.f.f0(xp);
      xp[j] = x[j] - h;
      const auto dn = f.f.f0(xp);
      xp[j] = x[j];
      for (int r = 0; r < f.k * f.dim; ++r) J(r, j) = (up[r] - dn[r]) / (2.0 * h);
    }
    return J;
  }
  std::vector<D1> xd = promote<D1>(x);
  for (int j = 0; j < f.dim; ++j) {
    xd[j].d = 1.0;
    const auto y = f.f.get<D1>()(xd);
    xd[j].d = 0.0;
    for (int r = 0; r < f.k * f.dim; ++r) J(r, j) = y[r].d;
  }
  return J;
}

template <class F>
auto run_stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(name);
    throw;
  }
}

}  // namespace

double commutator_defect(const BaseField& f, const Samples& xs) {
  double defect = 0.0;
  for (const auto& x : xs) {
    const auto Z = f.f.f0(x);
    const Eigen::MatrixXd J = stacked_jacobian(f, x);
    for (int a = 0; a < f.k; ++a) {
      for (int b = a + 1; b < f.k; ++b) {
        for (int i = 0; i < f.dim; ++i) {
          double v = 0.0;
          for (int j = 0; j < f.dim; ++j) {
            v += J(b * f.dim + i, j) * Z[a * f.dim + j] - J(a * f.dim + i, j) * Z[b * f.dim + j];
          }
          defect = std::max(defect, std::fabs(v));
        }
      }
    }
  }
  return defect;
}

std::vector<double> compose_flows(const BaseField& f, const std::vector<double>& start,
                                  const std::vector<double>& t, const std::vector<int>& order, int steps) {
  std::vector<double> x = start;
  check_state(f, x);
  for (int a : order) {
    if (t[a] != 0.0) flow(f, x, a, t[a], steps);
  }
  return x;
}

IntegralSection integral_section(const BaseField& f, const std::vector<double>& start, const GridSpec& grid,
                                 int steps_per_cell, double order_tol) {
  grid.validate(2);
  if (grid.dims() != f.k) throw ShapeError("grid dimension must equal the number of field components");
  if (static_cast<int>(start.size()) != f.dim) throw ShapeError("start point has the wrong dimension");
  if (steps_per_cell < 1) throw PreconditionError("steps_per_cell must be at least 1");

  IntegralSection out;
  out.map.grid = grid;
  out.map.values.assign(grid.size(), {});
  out.map.values[0] = start;
  check_state(f, start);

  for (int d = 0; d < grid.dims(); ++d) {
    // Lines along d start at nodes whose indices in directions ≥ d are zero;
    // those are all filled by the previous sweeps and independent of each other.
    std::vector<std::size_t> roots;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      const auto m = grid.unravel(idx);
      bool root = true;
      for (int j = d; j < grid.dims(); ++j) root = root && m[j] == 0;
      if (root) roots.push_back(idx);
    }
    const std::size_t s = grid.stride(d);
    parallel_for(roots.size(), [&](std::size_t r) {
      std::vector<double> x = out.map.values[roots[r]];
      for (int c = 1; c < grid.counts[d]; ++c) {
        flow(f, x, d, grid.spacing[d], steps_per_cell);
        out.map.values[roots[r] + c * s] = x;
      }
    });
  }

  // Corner node again, integrating the directions in reverse order.
  std::vector<double> extent(grid.dims());
  std::vector<int> order(grid.dims());
  for (int d = 0; d < grid.dims(); ++d) {
    extent[d] = grid.spacing[d] * (grid.counts[d] - 1);
    order[d] = grid.dims() - 1 - d;
  }
  const auto& corner = out.map.values.back();
  std::vector<double> x = start;
  for (int a : order) flow(f, x, a, extent[a], steps_per_cell * (grid.counts[a] - 1));
  double scale = 1.0;
  for (int i = 0; i < f.dim; ++i) {
    out.order_defect = std::max(out.order_defect, std::fabs(x[i] - corner[i]));
    scale = std::max(scale, std::fabs(corner[i]));
  }

  out.commutator_max = commutator_defect(f, out.map.values);
  out.commutator_warning = out.commutator_max > 1e-6;

  if (out.order_defect > order_tol * scale) {
    std::ostringstream os;
    os << "flows do not commute: corner node differs by " << out.order_defect
       << " between direction orders (commutator up to " << out.commutator_max << ")";
    throw IntegrabilityError(os.str());
  }
  return out;
}

SolutionMap lift(const SectionZInd& g, const BaseMap& sigma) {
  SolutionMap psi;
  psi.grid = sigma.grid;
  psi.values.resize(sigma.values.size());
  parallel_for(sigma.values.size(), [&](std::size_t i) { psi.values[i] = g(sigma.values[i]); });
  return psi;
}

SolutionMap lift(const SectionZDep& g, const BaseMap& sigma) {
  SolutionMap psi;
  psi.grid = sigma.grid;
  psi.values.resize(sigma.values.size());
  parallel_for(sigma.values.size(), [&](std::size_t i) {
    const auto& s = sigma.values[i];
    psi.values[i] = g(g.q_of(s), g.z_of(s));
  });
  return psi;
}

namespace {

template <class HJ, class Project, class Lift>
EndToEndReport pipeline(const ScalarField& h, Mode mode, const GridSpec& grid, const std::vector<double>& start,
                        const EndToEndOptions& opt, HJ&& hj, Project&& project, Lift&& lift_map) {
  EndToEndReport rep;
  rep.mode = to_string(mode);

  rep.hj = run_stage("hj", hj);
  const bool hj_ok = rep.hj.sup_residual <= opt.hj_tol;
  if (!hj_ok) {
    rep.failed_stage = "hj";
    if (opt.stop_on_hj_failure) return rep;
  }

  const BaseField f = run_stage("project", project);
  rep.sigma = run_stage("integrate", [&] {
    return integral_section(f, start, grid, opt.steps_per_cell, opt.order_tol);
  });
  rep.commutator_max = rep.sigma.commutator_max;
  rep.order_defect = rep.sigma.order_defect;

  rep.psi = run_stage("lift", [&] { return lift_map(rep.sigma.map); });
  rep.map = run_stage("map_residual", [&] { return map_residual(rep.psi, h, mode); });
  if (!hj_ok) return rep;
  if (rep.map.max.max() > opt.map_tol) {
    rep.failed_stage = "map_residual";
    return rep;
  }
  rep.passed = true;
  return rep;
}

}  // namespace

EndToEndReport end_to_end(const ScalarField& h, const SectionZInd& g, Mode mode, const GridSpec& grid,
                          const std::vector<double>& start, const EndToEndOptions& opt) {
  return pipeline(
      h, mode, grid, start, opt,
      [&] {
        return mode == Mode::standard ? hj_classical_zind(h, g, opt.hj_samples)
                                      : hj_evolution_zind(h, g, opt.hj_samples);
      },
      [&] { return project_Q(h, g); }, [&](const BaseMap& m) { return lift(g, m); });
}

EndToEndReport end_to_end(const ScalarField& h, const SectionZDep& g, const GaugeMatrix& C, Mode mode,
                          const GridSpec& grid, const std::vector<double>& start,
                          const EndToEndOptions& opt) {
  return pipeline(
      h, mode, grid, start, opt, [&] { return hj_zdep_residual(h, g, C, mode, opt.hj_samples); },
      [&] { return project_QZ(h, g, C); }, [&](const BaseMap& m) { return lift(g, m); });
}

}  // namespace kcontact
