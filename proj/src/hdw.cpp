#include "kcontact/hdw.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kcontact/parallel.hpp"

namespace kcontact {

double HdwResidual::max() const { return std::max({r_q, r_p, r_z}); }

KTangent canonical_ktangent(const ScalarField& h, Mode mode, const DarbouxPoint& pt) {
  const ChartSpec& c = h.chart;
  check_conforms(c, pt);
  const Gradient g = grad(h, pt);
  const double hv = h(pt);
  const double kinv = 1.0 / c.k;

  double p_dhdp = 0.0;
  for (int j = 0; j < c.n * c.k; ++j) p_dhdp += pt.p[j] * g.p[j];
  const double z_trace = mode == Mode::standard ? p_dhdp - hv : p_dhdp;

  KTangent x = zero_ktangent(c);
  for (int b = 0; b < c.k; ++b) {
    for (int i = 0; i < c.n; ++i) {
      x[b].q[i] = g.P(b, i);
      double balance = g.q[i];
      for (int mu = 0; mu < c.k; ++mu) balance += pt.P(mu, i) * g.z[mu];
      x[b].P(b, i) = -kinv * balance;
    }
    x[b].z[b] = kinv * z_trace;
  }
  return x;
}

KVectorField canonical_kvf(const ScalarField& h, Mode mode) {
  KVectorField f;
  f.chart = h.chart;
  f.kind = mode == Mode::standard ? FieldKind::standard : FieldKind::evolution;
  f.hamiltonian = h;
  f.representative = "equal-split";
  f.at = [h, mode](const DarbouxPoint& pt) { return canonical_ktangent(h, mode, pt); };
  return f;
}

HdwResidual hdw_residual(const ScalarField& h, Mode mode, const DarbouxPoint& pt, const KTangent& x) {
  const ChartSpec& c = h.chart;
  check_conforms(c, pt);
  check_conforms(c, x);
  const Gradient g = grad(h, pt);

  HdwResidual r;
  for (int b = 0; b < c.k; ++b) {
    for (int i = 0; i < c.n; ++i) r.r_q = std::max(r.r_q, std::fabs(x[b].q[i] - g.P(b, i)));
  }
  for (int i = 0; i < c.n; ++i) {
    double s = g.q[i];
    for (int a = 0; a < c.k; ++a) s += x[a].P(a, i) + pt.P(a, i) * g.z[a];
    r.r_p = std::max(r.r_p, std::fabs(s));
  }
  double trace = 0.0;
  double p_dhdp = 0.0;
  for (int a = 0; a < c.k; ++a) trace += x[a].z[a];
  for (int j = 0; j < c.n * c.k; ++j) p_dhdp += pt.p[j] * g.p[j];
  const double target = mode == Mode::standard ? p_dhdp - h(pt) : p_dhdp;
  r.r_z = std::fabs(trace - target);
  return r;
}

HdwResidual kvf_residual(const KVectorField& kvf, const ScalarField& h, Mode mode, const DarbouxPoint& pt) {
  if (!(kvf.chart == h.chart)) throw ShapeError("k-vector field and Hamiltonian live on different charts");
  return hdw_residual(h, mode, pt, kvf.at(pt));
}

std::vector<GaugeElement> gauge_basis(const ChartSpec& chart, const DarbouxPoint& pt) {
  check_conforms(chart, pt);
  const int n = chart.n;
  const int k = chart.k;
  std::vector<GaugeElement> out;
  if (k == 1) return out;

  // Off-diagonal momentum entries (Z_α)ᵢᵝ, β ≠ α.
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      for (int i = 0; i < n; ++i) {
        GaugeElement e = zero_ktangent(chart);
        e[a].P(b, i) = 1.0;
        out.push_back(std::move(e));
      }
    }
  }
  // Diagonal momentum pairs (Z_α)ᵢᵅ − (Z_k)ᵢᵏ.
  for (int a = 0; a + 1 < k; ++a) {
    for (int i = 0; i < n; ++i) {
      GaugeElement e = zero_ktangent(chart);
      e[a].P(a, i) = 1.0;
      e[k - 1].P(k - 1, i) = -1.0;
      out.push_back(std::move(e));
    }
  }
  // Off-diagonal z entries and diagonal z pairs.
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      GaugeElement e = zero_ktangent(chart);
      e[a].z[b] = 1.0;
      out.push_back(std::move(e));
    }
  }
  for (int a = 0; a + 1 < k; ++a) {
    GaugeElement e = zero_ktangent(chart);
    e[a].z[a] = 1.0;
    e[k - 1].z[k - 1] = -1.0;
    out.push_back(std::move(e));
  }
  return out;
}

KVectorField add_gauge(const KVectorField& kvf, std::function<GaugeElement(const DarbouxPoint&)> g) {
  KVectorField out = kvf;
  out.kind = FieldKind::custom;
  out.representative = kvf.representative + "+gauge";
  auto base = kvf.at;
  out.at = [base, g](const DarbouxPoint& pt) {
    KTangent x = base(pt);
    KTangent dg = g(pt);
    for (size_t a = 0; a < x.size(); ++a) {
      for (int j = 0; j < x[a].size(); ++j) x[a][j] += dg[a][j];
    }
    return x;
  };
  return out;
}

MapResidual map_residual(const SolutionMap& psi, const ScalarField& h, Mode mode) {
  const GridSpec& g = psi.grid;
  const bool exact = static_cast<bool>(psi.closed_form);
  g.validate(exact ? 1 : 3);
  if (g.dims() != h.chart.k) throw ShapeError("map grid dimension must equal k");
  if (!exact && psi.values.size() != g.size()) throw ShapeError("map has the wrong number of node values");

  MapResidual out;
  out.grid = g;
  out.nodes.resize(g.size());
  parallel_for(g.size(), [&](std::size_t idx) {
    DarbouxPoint pt;
    KTangent d;
    if (exact) {
      const auto t = g.node(idx);
      pt = psi.closed_form.f.f0(t);
      d = closed_form_derivatives(psi.closed_form, t);
    } else {
      pt = psi.values[idx];
      d = zero_ktangent(h.chart);
      for (int a = 0; a < h.chart.k; ++a) {
        for (int j = 0; j < pt.size(); ++j) {
          d[a][j] = fd_derivative(g, psi.values, idx, a, [j](const DarbouxPoint& v) { return v[j]; });
        }
      }
    }
    out.nodes[idx] = hdw_residual(h, mode, pt, d);
  });
  for (const auto& r : out.nodes) {
    out.max.r_q = std::max(out.max.r_q, r.r_q);
    out.max.r_p = std::max(out.max.r_p, r.r_p);
    out.max.r_z = std::max(out.max.r_z, r.r_z);
  }
  return out;
}

KVectorField ksymplectic_kvf(const ScalarField& H) {
  KVectorField f;
  f.chart = H.chart;
  f.kind = FieldKind::custom;
  f.hamiltonian = H;
  f.representative = "k-symplectic equal-split";
  f.at = [H](const DarbouxPoint& pt) {
    const ChartSpec& c = H.chart;
    const Gradient g = grad(H, pt);
    KTangent x = zero_ktangent(c);
    for (int b = 0; b < c.k; ++b) {
      for (int i = 0; i < c.n; ++i) {
        x[b].q[i] = g.P(b, i);
        x[b].P(b, i) = -g.q[i] / c.k;
      }
    }
    return x;
  };
  return f;
}

double ksymplectic_defect(const ScalarField& H, const KTangent& x, const DarbouxPoint& pt) {
  const ChartSpec& c = H.chart;
  const Gradient g = grad(H, pt);
  double d = 0.0;
  for (int i = 0; i < c.n; ++i) {
    double s = g.q[i];
    for (int a = 0; a < c.k; ++a) {
      s += x[a].P(a, i);
      d = std::max(d, std::fabs(x[a].q[i] - g.P(a, i)));
    }
    d = std::max(d, std::fabs(s));
  }
  return d;
}

KVectorField evolution_lift(const ScalarField& H, const KVectorField& x, double tol) {
  if (!(x.chart == H.chart)) throw ShapeError("k-symplectic field and Hamiltonian differ in chart");
  KVectorField e;
  e.chart = H.chart;
  e.kind = FieldKind::evolution;
  e.hamiltonian = H;
  e.representative = "evolution lift of " + x.representative;
  auto base = x.at;
  e.at = [H, base, tol](const DarbouxPoint& pt) {
    const ChartSpec& c = H.chart;
    const Gradient g = grad(H, pt);
    for (int a = 0; a < c.k; ++a) {
      if (std::fabs(g.z[a]) > tol) throw ContractError("lift needs H independent of z");
    }
    KTangent xs = base(pt);
    const double defect = ksymplectic_defect(H, xs, pt);
    if (defect > tol) {
      throw ContractError("input field violates the k-symplectic Hamilton equations (defect " +
                          std::to_string(defect) + ")");
    }
    KTangent out = zero_ktangent(c);
    for (int a = 0; a < c.k; ++a) {
      out[a].q = xs[a].q;
      out[a].p = xs[a].p;
      double theta = 0.0;
      for (int i = 0; i < c.n; ++i) theta += pt.P(a, i) * xs[a].q[i];
      out[a].z[a] = theta;
    }
    return out;
  };
  return e;
}

double SecondOrderResidual::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<double> affine_z_coefficients(const ScalarField& h, int samples, double tol, unsigned seed) {
  const ChartSpec& c = h.chart;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> A;
  int used = 0;
  for (int s = 0; s < samples * 20 && used < samples; ++s) {
    DarbouxPoint pt(c);
    for (int j = 0; j < pt.size(); ++j) pt[j] = U(rng);
    if (h.domain && !h.domain(pt)) continue;
    const Gradient g = grad(h, pt);
    if (A.empty()) {
      A = g.z;
    } else {
      for (int a = 0; a < c.k; ++a) {
        if (std::fabs(g.z[a] - A[a]) > tol) {
          throw ContractError("Hamiltonian is not affine in z with constant coefficients");
        }
      }
    }
    ++used;
  }
  if (used == 0) throw ContractError("no in-domain sample points for the affinity check");
  return A;
}

SecondOrderResidual second_order_residual(const ScalarField& h, const BaseMap& qmap, Mode mode,
                                          unsigned seed) {
  const ChartSpec& c = h.chart;
  const GridSpec& g = qmap.grid;
  g.validate(3);
  if (g.dims() != c.k) throw ShapeError("second-order residual needs a k-dimensional grid");
  if (qmap.values.size() != g.size()) throw ShapeError("q-map has the wrong number of node values");

  SecondOrderResidual out;
  out.A = affine_z_coefficients(h, 50, 1e-10, seed);
  out.n = c.n;

  // Momenta from the Legendre inversion at every node.
  std::vector<std::vector<double>> P(g.size());
  const std::vector<double> zero_z(c.k, 0.0);
  const std::vector<double> p0(c.n * c.k, 0.0);
  parallel_for(g.size(), [&](std::size_t idx) {
    std::vector<double> v(c.n * c.k);
    for (int b = 0; b < c.k; ++b) {
      for (int i = 0; i < c.n; ++i) {
        v[b * c.n + i] = fd_derivative(g, qmap.values, idx, b,
                                       [i](const std::vector<double>& q) { return q[i]; });
      }
    }
    P[idx] = invert_fibre_derivative(h, qmap.values[idx], zero_z, v, p0).p;
    DarbouxPoint pt(c);
    pt.q = qmap.values[idx];
    pt.p = P[idx];
    if (!check_regularity(h, pt).is_regular) {
      throw RegularityError("Hamiltonian is not regular along the map; momenta are not determined by velocities");
    }
  });

  out.grid = g.interior();
  out.values.assign(out.grid.size() * c.n, 0.0);
  parallel_for(out.grid.size(), [&](std::size_t j) {
    auto m = out.grid.unravel(j);
    for (int& mi : m) mi += 1;
    const std::size_t idx = g.index(m);
    DarbouxPoint pt(c);
    pt.q = qmap.values[idx];
    pt.p = P[idx];
    const KTangent x = canonical_ktangent(h, mode, pt);
    for (int i = 0; i < c.n; ++i) {
      double div = 0.0;
      double trace = 0.0;
      for (int a = 0; a < c.k; ++a) {
        const int col = a * c.n + i;
        div += fd_derivative(g, P, idx, a, [col](const std::vector<double>& p) { return p[col]; });
        trace += x[a].P(a, i);
      }
      out.values[j * c.n + i] = div - trace;
    }
  });
  return out;
}

}  // namespace kcontact
