#include "kcontact/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kcontact/hdw.hpp"

namespace kcontact {

const char* to_string(SectionKind k) {
  switch (k) {
    case SectionKind::zind: return "z-independent";
    case SectionKind::zdep: return "z-dependent";
    case SectionKind::family: return "complete family";
  }
  return "?";
}

const SectionEntry& ExampleSystem::section(const std::string& key) const {
  for (const auto& s : sections) {
    if (s.key == key) return s;
  }
  std::string known;
  for (const auto& s : sections) known += (known.empty() ? "" : ", ") + s.key;
  throw ConfigError("example '" + name + "' has no section '" + key + "' (known: " + known + ")");
}

const SolutionEntry& ExampleSystem::solution(const std::string& key) const {
  for (const auto& s : solutions) {
    if (s.key == key) return s;
  }
  std::string known;
  for (const auto& s : solutions) known += (known.empty() ? "" : ", ") + s.key;
  if (known.empty()) known = "none";
  throw ConfigError("example '" + name + "' has no solution '" + key + "' (known: " + known + ")");
}

Params ExampleSystem::resolve(const Params& user, const Params& overrides) const {
  Params out = defaults;
  for (const auto& [k, v] : overrides) out[k] = v;
  for (const auto& [k, v] : user) {
    if (!defaults.count(k) && std::find(optional.begin(), optional.end(), k) == optional.end()) {
      std::string known;
      for (const auto& d : defaults) known += (known.empty() ? "" : ", ") + d.first;
      for (const auto& o : optional) known += ", " + o;
      throw ConfigError("example '" + name + "' has no parameter '" + k + "' (known: " + known + ")");
    }
    out[k] = v;
  }
  return out;
}

Jet jet_at(const ClosedForm& cf, const std::vector<double>& t) {
  Jet j;
  j.t = t;
  j.psi = cf.f.f0(t);
  j.dpsi = closed_form_derivatives(cf, t);
  const int k = cf.k;
  j.d2u.assign(k * k, 0.0);
  std::vector<D2> td(t.begin(), t.end());
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      td[a].v.d = 1.0;
      td[b].d.v = 1.0;
      const auto y = cf.f.get<D2>()(td);
      td[a].v.d = 0.0;
      td[b].d.v = 0.0;
      j.d2u[a * k + b] = j.d2u[b * k + a] = y.q[0].d.d;
    }
  }
  return j;
}

LineParams telegrapher_params_from_line(double R, double L, double G, double C_cap) {
  if (!(L > 0.0) || !(C_cap > 0.0)) throw ConfigError("inductance and capacitance must be positive");
  if (R < 0.0 || G < 0.0) throw ConfigError("resistance and leakage conductance must be nonnegative");
  return {1.0 / (L * C_cap), R / L + G / C_cap, R * G / (L * C_cap)};
}

std::vector<double> telegrapher_roots(double kappa, double lambda, double epsilon, double c) {
  if (kappa == 0.0) throw ConfigError("kappa must be nonzero");
  const double A = c * c - 1.0 / kappa;
  const double B = lambda * c;
  const double C = epsilon;
  std::vector<double> roots;
  if (std::fabs(A) < 1e-14) {
    if (B != 0.0) roots.push_back(-C / B);
    return roots;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return roots;
  // Cancellation-free form of the quadratic formula.
  const double s = B >= 0.0 ? 1.0 : -1.0;
  const double q = -0.5 * (B + s * std::sqrt(disc));
  if (q == 0.0) {
    roots = {0.0, 0.0};
  } else {
    roots = {q / A, C / q};
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

using Vec = std::vector<double>;

// Largest-magnitude root; the zero root of ε = 0 would give a trivial section.
double pick_root(const std::vector<double>& roots, const char* equation) {
  if (roots.empty()) throw ConfigError(std::string("no real root of ") + equation);
  double best = roots.front();
  for (double r : roots) {
    if (std::fabs(r) > std::fabs(best)) best = r;
  }
  return best;
}

void require_nonzero(const Params& p, const std::string& name) {
  if (param(p, name) == 0.0) throw ConfigError("parameter '" + name + "' must be nonzero");
}

template <class T>
T sq(const T& x) {
  return x * x;
}

// ---------------------------------------------------------------- telegrapher

double tel_a(const Params& p) {
  if (p.count("a")) return p.at("a");
  return pick_root(telegrapher_roots(param(p, "kappa"), param(p, "lambda"), param(p, "epsilon"), param(p, "c")),
                   "(c^2 - 1/kappa) a^2 + lambda c a + epsilon = 0");
}

double tel_C0(const Params& p) { return p.count("C0") ? p.at("C0") : -param(p, "c") * param(p, "C1"); }

ScalarField tel_hamiltonian(const Params& p) {
  const double kappa = param(p, "kappa"), lambda = param(p, "lambda"), eps = param(p, "epsilon");
  if (kappa == 0.0) throw ConfigError("kappa must be nonzero");
  return make_field(
      ChartSpec{1, 2},
      [=](const auto& x) {
        return 0.5 * (sq(x.p[0]) - sq(x.p[1]) / kappa) + 0.5 * eps * sq(x.q[0]) + lambda * x.z[0];
      },
      "h_tel", p);
}

// W = ((ca/2)u² + cC₁ + C₀, (a/2)u² + C₁).
SectionZInd tel_exponential_section(const Params& p, double a, const std::string& name) {
  const double c = param(p, "c"), C1 = param(p, "C1"), C0 = tel_C0(p);
  return from_potentials(
      1, 2,
      [=](const auto& q) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        const T u2 = q[0] * q[0];
        return std::vector<T>{0.5 * c * a * u2 + (c * C1 + C0), 0.5 * a * u2 + C1};
      },
      name);
}

ClosedForm tel_exponential(const Params& p, bool standard) {
  const double kappa = param(p, "kappa"), lambda = param(p, "lambda"), eps = param(p, "epsilon");
  const double c = param(p, "c"), u0 = param(p, "u0"), C1 = param(p, "C1"), C0 = tel_C0(p);
  const double a = tel_a(p);
  const double root = (c * c - 1.0 / kappa) * a * a + lambda * c * a + eps;
  if (std::fabs(root) > 1e-12 * std::max(1.0, a * a)) {
    std::ostringstream os;
    os << "a = " << a << " is not a root of (c^2 - 1/kappa) a^2 + lambda c a + epsilon = 0 (value " << root
       << ")";
    throw ConfigError(os.str());
  }
  if (standard && std::fabs(lambda * (C0 + c * C1)) > 1e-12) {
    throw ConfigError("the standard exponential solution requires lambda (C0 + c C1) = 0");
  }
  ClosedForm cf;
  cf.k = 2;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 2);
    const T u = u0 * exp(a * (c * t[0] - t[1] / kappa));
    const T u2 = u * u;
    x.q[0] = u;
    x.p[0] = c * a * u;
    x.p[1] = a * u;
    x.z[0] = 0.5 * c * a * u2 + (c * C1 + C0);
    x.z[1] = 0.5 * a * u2 + C1;
    return x;
  });
  return cf;
}

// Φ(u, μ, ν, z) = (u, a z^t − λu + μ, −a z^x + ν, z).
SectionZDep tel_family_member(const Params& p, double mu, double nu) {
  const double a = param(p, "af"), lambda = param(p, "lambda");
  return make_section_zdep(
      1, 2,
      [=](const auto& q, const auto& z) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        return std::vector<T>{a * z[0] - lambda * q[0] + mu, -a * z[1] + nu};
      },
      "telegrapher family");
}

// Ξ = εu + a((γ^t)² + κ⁻¹(γ^x)²) for the family member at (q, z).
double tel_family_xi(const Params& p, const SectionZDep& g, const Vec& q, const Vec& z) {
  const auto pt = g(q, z);
  return param(p, "epsilon") * q[0] + param(p, "af") * (sq(pt.p[0]) + sq(pt.p[1]) / param(p, "kappa"));
}

GaugeMatrix tel_gauge(const Params& p, const ScalarField& h, const SectionZDep& g, bool standard,
                      const std::string& name) {
  GaugeMatrix G;
  G.name = name;
  G.C = [p, h, g, standard](const Vec& q, const Vec& z) {
    const double a = param(p, "af");
    const double xi = tel_family_xi(p, g, q, z);
    const double hg = standard ? h(g(q, z)) : 0.0;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
    C(0, 0) = -0.5 * (hg + xi / a);
    C(1, 1) = -0.5 * (hg - xi / a);
    return C;
  };
  return G;
}

CompleteSolutionFamily shifted_family(const Params& p, const std::string& name, double lambda_u,
                                      std::function<SectionZDep(const Vec&)> member) {
  const double a = param(p, "af");
  CompleteSolutionFamily f;
  f.n = 1;
  f.k = 2;
  f.name = name;
  f.section = std::move(member);
  f.inverse = [a, lambda_u](const DarbouxPoint& x) {
    FamilyCoords c;
    c.q = x.q;
    c.z = x.z;
    c.lambda = {x.p[0] - a * x.z[0] + lambda_u * x.q[0], x.p[1] + a * x.z[1]};
    return c;
  };
  f.param_lo = {-1.0, -1.0};
  f.param_hi = {1.0, 1.0};
  f.base_lo = {-1.0, -1.0, -1.0};
  f.base_hi = {1.0, 1.0, 1.0};
  return f;
}

Vec start_u0(const Params& p) { return {param(p, "u0")}; }

ExampleSystem make_telegrapher() {
  ExampleSystem ex;
  ex.name = "telegrapher";
  ex.title = "damped telegrapher / Klein-Gordon equation";
  ex.chart = {1, 2};
  ex.defaults = {{"kappa", 1.0}, {"lambda", 1.0}, {"epsilon", 0.0}, {"c", 2.0}, {"u0", 1.0},
                 {"C1", 0.5},    {"af", 1.0},     {"mu_f", 0.3},    {"nu_f", -0.2}};
  ex.optional = {"a", "C0"};
  ex.hamiltonian = tel_hamiltonian;
  ex.pde = "u_tt - kappa u_xx + lambda u_t + epsilon u = 0";
  ex.pde_residual = [](const Jet& j, const Params& p) {
    return j.d2u[0] - param(p, "kappa") * j.d2u[3] + param(p, "lambda") * j.dpsi[0].q[0] +
           param(p, "epsilon") * j.psi.q[0];
  };

  SectionEntry s;
  s.key = "classical";
  s.description = "exponential ansatz with a the nonzero root of the quadratic and C0 + c C1 = 0";
  s.zind = [](const Params& p) { return tel_exponential_section(p, tel_a(p), "telegrapher exponential"); };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  s.solution = "exponential";
  ex.sections.push_back(s);

  s = {};
  s.key = "evolution";
  s.description = "exponential ansatz with arbitrary constants; h o gamma = lambda (C0 + c C1)";
  s.mode = Mode::evolution;
  s.overrides = {{"C0", 0.3}};
  s.zind = [](const Params& p) { return tel_exponential_section(p, tel_a(p), "telegrapher exponential"); };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  s.solution = "exponential-evolution";
  ex.sections.push_back(s);

  s = {};
  s.key = "wrong-root";
  s.description = "exponential ansatz with the sign of a flipped";
  s.valid = false;
  s.zind = [](const Params& p) { return tel_exponential_section(p, -tel_a(p), "telegrapher wrong root"); };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  ex.sections.push_back(s);

  s = {};
  s.key = "broken-constant";
  s.description = "valid root but C0 + c C1 != 0";
  s.valid = false;
  s.overrides = {{"C0", 1.0}};
  s.zind = [](const Params& p) { return tel_exponential_section(p, tel_a(p), "telegrapher broken constant"); };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  ex.sections.push_back(s);

  s = {};
  s.key = "noncommuting";
  s.description = "W = (u^2/2, u): holonomic, fails HJ, projected flows do not commute";
  s.mode = Mode::evolution;
  s.valid = false;
  s.zind = [](const Params&) {
    return from_potentials(
        1, 2,
        [](const auto& q) {
          using T = typename std::decay_t<decltype(q)>::value_type;
          return std::vector<T>{0.5 * q[0] * q[0], q[0]};
        },
        "telegrapher noncommuting");
  };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  ex.sections.push_back(s);

  s = {};
  s.key = "non-holonomic";
  s.description = "exponential potentials with the momentum block shifted by 1/2";
  s.valid = false;
  s.zind = [](const Params& p) {
    const double a = tel_a(p), c = param(p, "c"), C1 = param(p, "C1"), C0 = tel_C0(p);
    return make_section_zind(
        1, 2,
        [=](const auto& q) {
          using T = typename std::decay_t<decltype(q)>::value_type;
          return std::vector<T>{0.5 * c * a * q[0] * q[0] + (c * C1 + C0), 0.5 * a * q[0] * q[0] + C1};
        },
        [=](const auto& q) {
          using T = typename std::decay_t<decltype(q)>::value_type;
          return std::vector<T>{c * a * q[0] + 0.5, a * q[0]};
        },
        "telegrapher non-holonomic");
  };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  ex.sections.push_back(s);

  s = {};
  s.key = "family";
  s.kind = SectionKind::family;
  s.description = "complete z-dependent family (u, a z^t - lambda u + mu, -a z^x + nu, z)";
  s.family = [](const Params& p) {
    require_nonzero(p, "af");
    return shifted_family(p, "telegrapher complete family", param(p, "lambda"),
                          [p](const Vec& l) { return tel_family_member(p, l[0], l[1]); });
  };
  ex.sections.push_back(s);

  s = {};
  s.key = "member";
  s.kind = SectionKind::zdep;
  s.integrable = false;
  s.description = "one family member with the explicit diagonal standard gauge";
  s.zdep = [](const Params& p) {
    require_nonzero(p, "af");
    return tel_family_member(p, param(p, "mu_f"), param(p, "nu_f"));
  };
  s.gauge = [](const Params& p, const ScalarField& h) {
    return tel_gauge(p, h, tel_family_member(p, param(p, "mu_f"), param(p, "nu_f")), true, "explicit standard");
  };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) { return Vec{param(p, "u0"), 0.0, 0.0}; };
  ex.sections.push_back(s);

  s = {};
  s.key = "member-evolution";
  s.kind = SectionKind::zdep;
  s.integrable = false;
  s.mode = Mode::evolution;
  s.description = "one family member with the explicit diagonal evolution gauge";
  s.zdep = [](const Params& p) {
    require_nonzero(p, "af");
    return tel_family_member(p, param(p, "mu_f"), param(p, "nu_f"));
  };
  s.gauge = [](const Params& p, const ScalarField& h) {
    return tel_gauge(p, h, tel_family_member(p, param(p, "mu_f"), param(p, "nu_f")), false, "explicit evolution");
  };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) { return Vec{param(p, "u0"), 0.0, 0.0}; };
  ex.sections.push_back(s);

  s = {};
  s.key = "family-broken-trace";
  s.kind = SectionKind::zdep;
  s.valid = false;
  s.description = "family member checked in standard mode with the trace-free evolution gauge";
  s.zdep = [](const Params& p) { return tel_family_member(p, param(p, "mu_f"), param(p, "nu_f")); };
  s.gauge = [](const Params& p, const ScalarField& h) {
    return tel_gauge(p, h, tel_family_member(p, param(p, "mu_f"), param(p, "nu_f")), false, "evolution gauge");
  };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) { return Vec{param(p, "u0"), 0.0, 0.0}; };
  ex.sections.push_back(s);

  SolutionEntry sol;
  sol.key = "exponential";
  sol.description = "u = u0 exp(a (c t - x / kappa)) with its lift, standard mode";
  sol.make = [](const Params& p) { return tel_exponential(p, true); };
  sol.grid = {{0.0, 0.0}, {0.002, 0.002}, {21, 21}};
  sol.tolerance = 1e-10;
  ex.solutions.push_back(sol);

  sol = {};
  sol.key = "exponential-evolution";
  sol.description = "same map with arbitrary C0, C1, evolution mode";
  sol.mode = Mode::evolution;
  sol.overrides = {{"C0", 0.3}};
  sol.make = [](const Params& p) { return tel_exponential(p, false); };
  sol.grid = {{0.0, 0.0}, {0.002, 0.002}, {21, 21}};
  sol.tolerance = 1e-10;
  ex.solutions.push_back(sol);

  GridSpec divergent{{0.0, 0.0}, {0.02, 1.0}, {3, 40}};
  ex.negatives = {
      {"wrong root", "check-hj", "wrong-root", {}, {}, {}, "FAIL", 1},
      {"a = +2/3 on the classical section", "check-hj", "classical", {{"a", 2.0 / 3.0}}, {}, {}, "FAIL", 1},
      {"C0 + c C1 != 0", "check-hj", "broken-constant", {}, {}, {}, "FAIL", 1},
      {"non-holonomic section", "check-hj", "non-holonomic", {}, {}, {}, "contract", 3},
      {"trace-free gauge in standard mode", "check-hj", "family-broken-trace", {}, {}, {}, "contract", 3},
      {"wrong root integrated", "simulate", "wrong-root", {}, {}, {}, "FAIL", 1},
      {"noncommuting projected flows", "simulate", "noncommuting", {}, {}, {}, "integrability", 5},
      {"family member with a non-integrable gauge", "simulate", "member", {}, {}, {}, "integrability", 5},
      {"exponential growth past the bound", "simulate", "classical", {}, {}, divergent, "divergence", 4},
  };
  return ex;
}

// ------------------------------------------------------ telegrapher, z² damping

double telq_a(const Params& p) {
  if (p.count("a")) return p.at("a");
  const double ek = param(p, "epsilon") * param(p, "kappa");
  if (ek < 0.0) throw ConfigError("the static solution needs epsilon kappa >= 0 (a^2 = epsilon kappa)");
  return std::sqrt(ek);
}

ScalarField telq_hamiltonian(const Params& p) {
  const double kappa = param(p, "kappa"), lambda = param(p, "lambda"), eps = param(p, "epsilon");
  if (kappa == 0.0) throw ConfigError("kappa must be nonzero");
  return make_field(
      ChartSpec{1, 2},
      [=](const auto& x) {
        return 0.5 * (sq(x.p[0]) - sq(x.p[1]) / kappa) + 0.5 * eps * sq(x.q[0]) + 0.5 * lambda * sq(x.z[0]);
      },
      "h_tel_quadratic", p);
}

// γ = (u, 0, a u, C₀, (a/2)u² + C₁) with a² = εκ.
SectionZInd telq_static_section(const Params& p) {
  const double a = telq_a(p), C0 = param_or(p, "C0", 0.0), C1 = param(p, "C1");
  return from_potentials(
      1, 2,
      [=](const auto& q) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        return std::vector<T>{T(C0), 0.5 * a * q[0] * q[0] + C1};
      },
      "static exponential");
}

ClosedForm telq_static(const Params& p, bool standard) {
  const double kappa = param(p, "kappa"), lambda = param(p, "lambda"), eps = param(p, "epsilon");
  const double a = telq_a(p), C0 = param_or(p, "C0", 0.0), C1 = param(p, "C1"), u0 = param(p, "u0");
  if (std::fabs(a * a - eps * kappa) > 1e-12 * std::max(1.0, a * a)) {
    throw ConfigError("the static solution requires a^2 = epsilon kappa");
  }
  if (standard && std::fabs(lambda * C0 * C0) > 1e-12) {
    throw ConfigError("the standard static solution requires lambda C0^2 = 0");
  }
  ClosedForm cf;
  cf.k = 2;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 2);
    const T u = u0 * exp(-a * t[1] / kappa) + 0.0 * t[0];
    x.q[0] = u;
    x.p[0] = T(0.0);
    x.p[1] = a * u;
    x.z[0] = T(C0);
    x.z[1] = 0.5 * a * u * u + C1;
    return x;
  });
  return cf;
}

ExampleSystem make_telegrapher_quadratic() {
  ExampleSystem ex;
  ex.name = "telegrapher-quadratic-z";
  ex.title = "telegrapher variant with damping quadratic in z^t";
  ex.chart = {1, 2};
  ex.defaults = {{"kappa", 1.0}, {"lambda", 1.0}, {"epsilon", 1.0}, {"u0", 1.0}, {"C1", 0.0}};
  ex.optional = {"a", "C0"};
  ex.hamiltonian = telq_hamiltonian;
  ex.affine_in_z = false;
  ex.pde = "u_tt - kappa u_xx + lambda z^t u_t + epsilon u = 0";
  ex.pde_residual = [](const Jet& j, const Params& p) {
    return j.d2u[0] - param(p, "kappa") * j.d2u[3] + param(p, "lambda") * j.psi.z[0] * j.dpsi[0].q[0] +
           param(p, "epsilon") * j.psi.q[0];
  };

  SectionEntry s;
  s.key = "static";
  s.description = "x-dependent exponential with a^2 = epsilon kappa and z^t = C0 = 0";
  s.zind = telq_static_section;
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  s.solution = "static";
  ex.sections.push_back(s);

  s.key = "static-evolution";
  s.description = "same with z^t = C0 arbitrary; h o gamma = lambda C0^2 / 2";
  s.mode = Mode::evolution;
  s.overrides = {{"C0", 0.5}};
  s.solution = "static-evolution";
  ex.sections.push_back(s);

  s.key = "static-broken";
  s.description = "standard check with C0 != 0";
  s.mode = Mode::standard;
  s.valid = false;
  s.overrides = {{"C0", 1.0}};
  s.solution.clear();
  ex.sections.push_back(s);

  SolutionEntry sol;
  sol.key = "static";
  sol.description = "u = u0 exp(-a x / kappa), z^t = 0";
  sol.make = [](const Params& p) { return telq_static(p, true); };
  sol.grid = {{0.0, 0.0}, {0.002, 0.002}, {21, 21}};
  ex.solutions.push_back(sol);

  sol.key = "static-evolution";
  sol.description = "u = u0 exp(-a x / kappa), z^t = C0";
  sol.mode = Mode::evolution;
  sol.overrides = {{"C0", 0.5}};
  sol.make = [](const Params& p) { return telq_static(p, false); };
  ex.solutions.push_back(sol);

  ex.negatives = {{"C0 != 0 in standard mode", "check-hj", "static-broken", {}, {}, {}, "FAIL", 1}};
  return ex;
}

// -------------------------------------------------------------- Hunter–Saxton

ScalarField hs_hamiltonian(const Params& p) {
  const double mu = param(p, "mu");
  return make_field(
      ChartSpec{1, 2},
      [=](const auto& x) {
        return -2.0 * x.p[0] * x.p[1] + 2.0 * x.q[0] * sq(x.p[0]) + mu * x.p[0] + 2.0 * mu * x.z[0];
      },
      "h_HS", p);
}

// W = (μ(u+c) + shift_t, μu² + ((2c+1+extra)μ/2)u + C₁).
SectionZInd hs_linear_section(const Params& p, double shift_t, double extra, const std::string& name) {
  const double mu = param(p, "mu"), c = param(p, "c"), C1 = param(p, "C1");
  return from_potentials(
      1, 2,
      [=](const auto& q) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        const T& u = q[0];
        return std::vector<T>{mu * (u + c) + shift_t, mu * u * u + 0.5 * (2.0 * c + 1.0 + extra) * mu * u + C1};
      },
      name);
}

double hs_K_shift(const Params& p) {
  require_nonzero(p, "mu");
  return param(p, "K") / param(p, "mu");
}

ClosedForm hs_linear(const Params& p, double shift_t) {
  const double mu = param(p, "mu"), c = param(p, "c"), u0 = param(p, "u0"), C1 = param(p, "C1");
  ClosedForm cf;
  cf.k = 2;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 2);
    const T u = u0 - 2.0 * mu * (t[1] + c * t[0]);
    x.q[0] = u;
    x.p[0] = T(mu);
    x.p[1] = mu * (2.0 * u + c) + 0.5 * mu;
    x.z[0] = mu * (u + c) + shift_t;
    x.z[1] = mu * u * u + 0.5 * (2.0 * c + 1.0) * mu * u + C1;
    return x;
  });
  return cf;
}

ClosedForm hs_quadratic(const Params& p) {
  const double mu = param(p, "mu"), c0 = param(p, "c0"), c1 = param(p, "c1"), c2 = param(p, "c2");
  ClosedForm cf;
  cf.k = 2;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 2);
    const T s = t[0] + c1;
    x.q[0] = s * s + c0;
    x.p[0] = T(0.0);
    x.p[1] = 0.5 * mu - s;
    x.z[0] = s;
    x.z[1] = c2 - t[1];
    return x;
  });
  return cf;
}

// G_δ(r) = −(δ/2μ)r² + (δ/μ²)r − (δ/μ³)ln(1+μr) on r > 0; G' = −δr²/(1+μr).
struct HSLog {
  double delta, mu;

  template <class T>
  T G(const T& r) const {
    return -delta / (2.0 * mu) * r * r + delta / (mu * mu) * r - delta / (mu * mu * mu) * log1p(mu * r);
  }
  template <class T>
  T Gprime(const T& r) const {
    return -delta * r * r / (1.0 + mu * r);
  }

  // Monotone bisection on the branch r > 0.
  double solve(double s) const {
    if (!(delta * s < 0.0)) {
      std::ostringstream os;
      os << "argument " << s << " of the inverse of G_delta is outside its range (need delta * s < 0)";
      throw DomainError(os.str());
    }
    auto above = [&](double r) { return delta * (G(r) - s) > 0.0; };
    double lo = 0.0, hi = 1.0;
    while (above(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e150) throw SolverError("could not bracket the inverse of G_delta");
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (above(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  template <class T>
  T inverse(const T& s) const {
    return implicit_inverse(
        s, [this](double y) { return solve(y); }, [this](const auto& r) { return Gprime(r); });
  }
};

HSLog hs_log_params(const Params& p) {
  const double delta = param(p, "delta"), mu = param(p, "mu");
  if (delta != 1.0 && delta != -1.0) throw ConfigError("delta must be +1 or -1");
  if (!(mu > 0.0)) throw ConfigError("the logarithmic branch needs mu > 0");
  return {delta, mu};
}

ClosedForm hs_logarithmic(const Params& p) {
  const HSLog L = hs_log_params(p);
  const double mu = L.mu, delta = L.delta;
  const double c = param(p, "c"), C = param(p, "C"), C1 = param(p, "C1");
  ClosedForm cf;
  cf.k = 2;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 2);
    const T r = L.inverse(t[1] + c * t[0] + C);
    const T u = delta * r * r - c;
    x.q[0] = u;
    x.p[0] = mu + 1.0 / r;
    x.p[1] = (2.0 * u + c) * (mu + 1.0 / r) + 0.5 * mu;
    x.z[0] = mu * (u + c) + 2.0 * delta * r + delta / mu;
    x.z[1] = mu * u * u + 0.5 * (2.0 * c + 1.0) * mu * u + (4.0 / 3.0) * r * r * r - 2.0 * c * delta * r + C1;
    return x;
  });
  return cf;
}

SectionZInd hs_log_section(const Params& p) {
  const HSLog L = hs_log_params(p);
  const double mu = L.mu, delta = L.delta, c = param(p, "c"), C1 = param(p, "C1");
  return from_potentials(
      1, 2,
      [=](const auto& q) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        const T& u = q[0];
        const T r = sqrt(delta * (u + c));
        return std::vector<T>{mu * (u + c) + 2.0 * delta * r + delta / mu,
                              mu * u * u + 0.5 * (2.0 * c + 1.0) * mu * u + (4.0 / 3.0) * r * r * r -
                                  2.0 * c * delta * r + C1};
      },
      "Hunter-Saxton logarithmic", [delta, c](const Vec& q) { return delta * (q[0] + c) > 0.0; });
}

// Φ(u, ρ, σ, z) = (u, a z^t + ρ, −a z^x + σ, z), shared with the first-order model.
SectionZDep shifted_member(double a, double rho, double sigma, const std::string& name) {
  return make_section_zdep(
      1, 2,
      [=](const auto& q, const auto& z) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        return std::vector<T>{a * z[0] + rho + 0.0 * q[0], -a * z[1] + sigma};
      },
      name);
}

SectionZDep hs_quadratic_section(const Params& p) {
  const double mu = param(p, "mu");
  return make_section_zdep(
      1, 2,
      [=](const auto& q, const auto& z) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        return std::vector<T>{T(0.0) + 0.0 * q[0], 0.5 * mu - z[0]};
      },
      "Hunter-Saxton quadratic");
}

// Non-diagonal gauge reproducing the quadratic lift: z^t grows with t and z^x
// decreases with x, with trace zero.
GaugeMatrix hs_quadratic_gauge(const Params& p) {
  const double mu = param(p, "mu");
  GaugeMatrix G;
  G.name = "quadratic lift";
  G.C = [mu](const Vec&, const Vec& z) {
    Eigen::MatrixXd C(2, 2);
    C << 1.0, -2.0 * z[0] * (0.5 * mu - z[0]), 0.0, -1.0;
    return C;
  };
  return G;
}

SectionZDep hs_remark_section(const Params& p) {
  const double mu = param(p, "mu"), c = param(p, "c");
  return make_section_zdep(
      1, 2,
      [=](const auto& q, const auto& z) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        return std::vector<T>{T(mu) + 0.0 * z[0], mu * (2.0 * q[0] + c) + 0.5 * mu};
      },
      "Hunter-Saxton linear as z-dependent");
}

GaugeMatrix hs_remark_gauge(const Params& p) {
  const double mu = param(p, "mu"), c = param(p, "c");
  GaugeMatrix G;
  G.name = "diag(0, 2mu^2(u+c) - 2mu z^t)";
  G.C = [mu, c](const Vec& q, const Vec& z) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
    C(1, 1) = 2.0 * mu * mu * (q[0] + c) - 2.0 * mu * z[0];
    return C;
  };
  return G;
}

ExampleSystem make_hunter_saxton() {
  ExampleSystem ex;
  ex.name = "hunter-saxton";
  ex.title = "dissipative Hunter-Saxton equation";
  ex.chart = {1, 2};
  ex.defaults = {{"mu", 1.0}, {"c", 1.0},  {"u0", 1.0},  {"C1", 0.0}, {"K", 0.5},  {"af", 0.5},
                 {"rho", 0.2}, {"sigma", -0.3}, {"c0", 0.0}, {"c1", 0.0}, {"c2", 0.0}, {"delta", 1.0},
                 {"C", -3.0}};
  ex.hamiltonian = hs_hamiltonian;
  ex.pde = "u_tx + u u_xx + u_x^2 / 2 + mu u_x = 0";
  ex.pde_residual = [](const Jet& j, const Params& p) {
    const double ux = j.dpsi[1].q[0];
    return j.d2u[1] + j.psi.q[0] * j.d2u[3] + 0.5 * ux * ux + param(p, "mu") * ux;
  };

  SectionEntry s;
  s.key = "linear";
  s.description = "W = (mu(u+c), mu u^2 + (2c+1) mu u / 2 + C1), h o gamma = 0";
  s.zind = [](const Params& p) { return hs_linear_section(p, 0.0, 0.0, "Hunter-Saxton linear"); };
  s.lo = {-1.0};
  s.hi = {1.0};
  s.start = start_u0;
  s.solution = "linear";
  ex.sections.push_back(s);

  s.key = "evolution-K";
  s.description = "W^t shifted by K/mu, h o gamma = 2K (requires mu != 0)";
  s.mode = Mode::evolution;
  s.zind = [](const Params& p) { return hs_linear_section(p, hs_K_shift(p), 0.0, "Hunter-Saxton shifted"); };
  s.solution = "linear-evolution";
  ex.sections.push_back(s);

  s.key = "wrong-offset";
  s.description = "gamma^x = mu(2u+c) + mu instead of + mu/2";
  s.mode = Mode::standard;
  s.valid = false;
  s.zind = [](const Params& p) { return hs_linear_section(p, 0.0, 1.0, "Hunter-Saxton wrong offset"); };
  s.solution.clear();
  ex.sections.push_back(s);

  s = {};
  s.key = "logarithmic";
  s.description = "logarithmic branch, r = sqrt(delta (u + c))";
  s.mode = Mode::evolution;
  s.zind = hs_log_section;
  s.lo = {1.0};
  s.hi = {10.0};
  s.start = [](const Params& p) {
    const HSLog L = hs_log_params(p);
    const double r = L.solve(param(p, "C"));
    return Vec{L.delta * r * r - param(p, "c")};
  };
  s.solution = "logarithmic";
  ex.sections.push_back(s);

  s = {};
  s.key = "family";
  s.kind = SectionKind::family;
  s.description = "complete z-dependent family (u, a z^t + rho, -a z^x + sigma, z)";
  s.family = [](const Params& p) {
    require_nonzero(p, "af");
    const double a = param(p, "af");
    return shifted_family(p, "Hunter-Saxton complete family", 0.0, [a](const Vec& l) {
      return shifted_member(a, l[0], l[1], "Hunter-Saxton family");
    });
  };
  ex.sections.push_back(s);

  s = {};
  s.key = "member";
  s.kind = SectionKind::zdep;
  s.integrable = false;
  s.description = "family member at (rho, sigma) with the diagonal gauge";
  s.zdep = [](const Params& p) {
    require_nonzero(p, "af");
    return shifted_member(param(p, "af"), param(p, "rho"), param(p, "sigma"), "Hunter-Saxton family");
  };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) { return Vec{param(p, "u0"), 0.0, 0.0}; };
  ex.sections.push_back(s);

  s = {};
  s.key = "quadratic";
  s.kind = SectionKind::zdep;
  s.mode = Mode::evolution;
  s.description = "(u, 0, mu/2 - z^t, z) with the gauge that reproduces the quadratic lift";
  s.zdep = hs_quadratic_section;
  s.gauge = [](const Params& p, const ScalarField&) { return hs_quadratic_gauge(p); };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) {
    const double c1 = param(p, "c1");
    return Vec{c1 * c1 + param(p, "c0"), c1, param(p, "c2")};
  };
  s.solution = "quadratic";
  ex.sections.push_back(s);

  s = {};
  s.key = "remark";
  s.kind = SectionKind::zdep;
  s.description = "the linear section read as z-dependent, C = diag(0, 2mu^2(u+c) - 2mu z^t)";
  s.zdep = hs_remark_section;
  s.gauge = [](const Params& p, const ScalarField&) { return hs_remark_gauge(p); };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) {
    const double mu = param(p, "mu"), c = param(p, "c"), u0 = param(p, "u0");
    return Vec{u0, mu * (u0 + c), mu * u0 * u0 + 0.5 * (2.0 * c + 1.0) * mu * u0 + param(p, "C1")};
  };
  ex.sections.push_back(s);

  s.key = "remark-evolution-trace";
  s.description = "same gauge checked in evolution mode, where the trace must vanish";
  s.mode = Mode::evolution;
  s.valid = false;
  ex.sections.push_back(s);

  SolutionEntry sol;
  sol.key = "linear";
  sol.description = "u = u0 - 2 mu (x + c t), standard mode";
  sol.make = [](const Params& p) { return hs_linear(p, 0.0); };
  sol.grid = {{0.0, 0.0}, {0.05, 0.05}, {11, 11}};
  ex.solutions.push_back(sol);

  sol.key = "linear-evolution";
  sol.description = "same u with z^t shifted by K/mu, evolution mode";
  sol.mode = Mode::evolution;
  sol.make = [](const Params& p) { return hs_linear(p, hs_K_shift(p)); };
  ex.solutions.push_back(sol);

  sol.key = "quadratic";
  sol.description = "u = (t + c1)^2 + c0, z = (t + c1, c2 - x), evolution mode";
  sol.make = hs_quadratic;
  ex.solutions.push_back(sol);

  sol.key = "logarithmic";
  sol.description = "u = delta r^2 - c with r = G_delta^{-1}(x + c t + C), evolution mode";
  sol.make = hs_logarithmic;
  sol.grid = {{0.0, 0.0}, {0.002, 0.002}, {21, 21}};
  sol.tolerance = 1e-6;
  ex.solutions.push_back(sol);

  ex.negatives = {
      {"gamma^x offset mu instead of mu/2", "check-hj", "wrong-offset", {}, {}, {}, "FAIL", 1},
      {"standard gauge in evolution mode", "check-hj", "remark-evolution-trace", {}, {}, {}, "contract", 3},
      {"K/mu with mu = 0", "check-hj", "evolution-K", {{"mu", 0.0}}, {}, {}, "config", 2},
  };
  return ex;
}

// ---------------------------------------------------- first-order dissipative

ScalarField fo_hamiltonian(const Params& p) {
  const double lambda = param(p, "lambda");
  return make_field(
      ChartSpec{1, 2}, [=](const auto& x) { return 0.5 * (sq(x.q[0]) + sq(x.p[1])) + lambda * x.z[0]; },
      "h_first_order", p);
}

// C = ±diag(−Ξ/2a, Ξ/2a) with Ξ = u + λT − aX²; the minus sign is the wrong one.
GaugeMatrix fo_evolution_gauge(const Params& p, double sign) {
  const double a = param(p, "af"), lambda = param(p, "lambda"), rho = param(p, "rho"), sigma = param(p, "sigma");
  GaugeMatrix G;
  G.name = sign > 0 ? "diag(-Xi/2a, Xi/2a)" : "diag(Xi/2a, -Xi/2a)";
  G.C = [=](const Vec& q, const Vec& z) {
    const double T = a * z[0] + rho, X = -a * z[1] + sigma;
    const double xi = q[0] + lambda * T - a * X * X;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
    C(0, 0) = -sign * xi / (2.0 * a);
    C(1, 1) = sign * xi / (2.0 * a);
    return C;
  };
  return G;
}

ExampleSystem make_first_order() {
  ExampleSystem ex;
  ex.name = "first-order-dissipative";
  ex.title = "first-order dissipative field model (not regular)";
  ex.chart = {1, 2};
  ex.defaults = {{"lambda", 1.0}, {"af", 1.0}, {"rho", 0.2}, {"sigma", -0.3}, {"u0", 1.0}};
  ex.hamiltonian = fo_hamiltonian;
  ex.regular = false;

  SectionEntry s;
  s.key = "static";
  s.description = "W = (-u^2 / (2 lambda), 0): constant fields";
  s.zind = [](const Params& p) {
    require_nonzero(p, "lambda");
    const double lambda = param(p, "lambda");
    return from_potentials(
        1, 2,
        [=](const auto& q) {
          using T = typename std::decay_t<decltype(q)>::value_type;
          return std::vector<T>{-0.5 * q[0] * q[0] / lambda, T(0.0)};
        },
        "first-order static");
  };
  s.lo = {-1.0};
  s.hi = {1.0};
  s.start = start_u0;
  ex.sections.push_back(s);

  s = {};
  s.key = "family";
  s.kind = SectionKind::family;
  s.description = "complete z-dependent family (u, a z^t + rho, -a z^x + sigma, z)";
  s.family = [](const Params& p) {
    require_nonzero(p, "af");
    const double a = param(p, "af");
    return shifted_family(p, "first-order complete family", 0.0,
                          [a](const Vec& l) { return shifted_member(a, l[0], l[1], "first-order family"); });
  };
  ex.sections.push_back(s);

  s = {};
  s.key = "member-evolution";
  s.kind = SectionKind::zdep;
  s.integrable = false;
  s.mode = Mode::evolution;
  s.description = "family member with C = diag(-Xi/2a, Xi/2a)";
  s.zdep = [](const Params& p) {
    require_nonzero(p, "af");
    return shifted_member(param(p, "af"), param(p, "rho"), param(p, "sigma"), "first-order family");
  };
  s.gauge = [](const Params& p, const ScalarField&) { return fo_evolution_gauge(p, 1.0); };
  s.lo = {-1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0};
  s.start = [](const Params& p) { return Vec{param(p, "u0"), 0.0, 0.0}; };
  ex.sections.push_back(s);

  s.key = "member-wrong-sign";
  s.description = "family member with the sign of the evolution gauge flipped";
  s.valid = false;
  s.gauge = [](const Params& p, const ScalarField&) { return fo_evolution_gauge(p, -1.0); };
  ex.sections.push_back(s);

  ex.negatives = {{"evolution gauge with flipped sign", "check-hj", "member-wrong-sign", {}, {}, {}, "FAIL", 1}};
  return ex;
}

// ------------------------------------------------------------------ membrane

ScalarField membrane_hamiltonian(const Params& p) {
  const double c = param(p, "c"), kappa = param(p, "kappa"), lambda = param(p, "lambda");
  if (c == 0.0) throw ConfigError("wave speed c must be nonzero");
  const double ic2 = 1.0 / (c * c);
  return make_field(
      ChartSpec{1, 3},
      [=](const auto& x) {
        return 0.5 * (sq(x.p[0]) - ic2 * sq(x.p[1]) - ic2 * sq(x.p[2])) + 0.5 * kappa * sq(x.q[0]) +
               lambda * x.z[0];
      },
      "h_membrane", p);
}

double membrane_at(const Params& p) {
  if (p.count("at")) return p.at("at");
  const double c = param(p, "c"), ax = param(p, "ax"), ay = param(p, "ay");
  const double k0 = param(p, "kappa") - (ax * ax + ay * ay) / (c * c);
  const double lambda = param(p, "lambda");
  const double disc = lambda * lambda - 4.0 * k0;
  if (disc < 0.0) throw ConfigError("no real root of at^2 + lambda at + kappa - (ax^2 + ay^2) / c^2 = 0");
  return pick_root({0.5 * (-lambda - std::sqrt(disc)), 0.5 * (-lambda + std::sqrt(disc))},
                   "at^2 + lambda at + kappa - (ax^2 + ay^2) / c^2 = 0");
}

SectionZInd membrane_section(const Params& p, double at, const std::string& name) {
  const double ax = param(p, "ax"), ay = param(p, "ay"), Ct = param(p, "Ct");
  return from_potentials(
      1, 3,
      [=](const auto& q) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        const T u2 = q[0] * q[0];
        return std::vector<T>{0.5 * at * u2 + Ct, 0.5 * ax * u2, 0.5 * ay * u2};
      },
      name);
}

ClosedForm membrane_exponential(const Params& p) {
  const double c = param(p, "c"), kappa = param(p, "kappa"), lambda = param(p, "lambda");
  const double ax = param(p, "ax"), ay = param(p, "ay"), Ct = param(p, "Ct"), u0 = param(p, "u0");
  const double at = membrane_at(p), ic2 = 1.0 / (c * c);
  const double root = at * at + lambda * at + kappa - ic2 * (ax * ax + ay * ay);
  if (std::fabs(root) > 1e-12 * std::max(1.0, at * at)) {
    throw ConfigError("at is not a root of at^2 + lambda at + kappa - (ax^2 + ay^2) / c^2 = 0");
  }
  if (std::fabs(lambda * Ct) > 1e-12) throw ConfigError("the standard exponential solution requires lambda Ct = 0");
  ClosedForm cf;
  cf.k = 3;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 3);
    const T u = u0 * exp(at * t[0] - ic2 * (ax * t[1] + ay * t[2]));
    const T u2 = u * u;
    x.q[0] = u;
    x.p[0] = at * u;
    x.p[1] = ax * u;
    x.p[2] = ay * u;
    x.z[0] = 0.5 * at * u2 + Ct;
    x.z[1] = 0.5 * ax * u2;
    x.z[2] = 0.5 * ay * u2;
    return x;
  });
  return cf;
}

// e^{st} cos(a x) cos(b y) with s² + λs + κ + c²(a² + b²) = 0; base level only.
ClosedForm membrane_separable(const Params& p) {
  const double c = param(p, "c"), kappa = param(p, "kappa"), lambda = param(p, "lambda");
  const double a = param(p, "sa"), b = param(p, "sb");
  const double k0 = kappa + c * c * (a * a + b * b);
  const double disc = lambda * lambda - 4.0 * k0;
  if (disc < 0.0) throw ConfigError("no real root of s^2 + lambda s + kappa + c^2 (a^2 + b^2) = 0");
  const double s = p.count("s") ? p.at("s") : 0.5 * (-lambda + std::sqrt(disc));
  if (std::fabs(s * s + lambda * s + k0) > 1e-12 * std::max(1.0, s * s)) {
    throw ConfigError("s is not a root of s^2 + lambda s + kappa + c^2 (a^2 + b^2) = 0");
  }
  ClosedForm cf;
  cf.k = 3;
  cf.f = Poly<CurveSig>::from([=](const auto& t) {
    using T = typename std::decay_t<decltype(t)>::value_type;
    PhaseVec<T> x(1, 3);
    const T et = exp(s * t[0]), cx = cos(a * t[1]), cy = cos(b * t[2]);
    x.q[0] = et * cx * cy;
    x.p[0] = s * et * cx * cy;
    x.p[1] = c * c * a * et * sin(a * t[1]) * cy;
    x.p[2] = c * c * b * et * cx * sin(b * t[2]);
    return x;
  });
  return cf;
}

ExampleSystem make_membrane() {
  ExampleSystem ex;
  ex.name = "membrane";
  ex.title = "damped vibrating membrane on a linear elastic foundation";
  ex.chart = {1, 3};
  ex.defaults = {{"c", 1.0},  {"kappa", 0.5}, {"lambda", 3.0}, {"u0", 1.0}, {"ax", 0.5},
                 {"ay", 0.5}, {"Ct", 0.0},    {"sa", 0.5},     {"sb", 0.5}};
  ex.optional = {"at", "s"};
  ex.hamiltonian = membrane_hamiltonian;
  ex.pde = "u_tt - c^2 (u_xx + u_yy) + lambda u_t + kappa u = 0";
  ex.pde_residual = [](const Jet& j, const Params& p) {
    const double c = param(p, "c");
    return j.d2u[0] - c * c * (j.d2u[4] + j.d2u[8]) + param(p, "lambda") * j.dpsi[0].q[0] +
           param(p, "kappa") * j.psi.q[0];
  };

  SectionEntry s;
  s.key = "exponential";
  s.description = "W^alpha = a_alpha u^2 / 2 with at the nonzero root of the quadratic";
  s.zind = [](const Params& p) { return membrane_section(p, membrane_at(p), "membrane exponential"); };
  s.lo = {0.5};
  s.hi = {2.0};
  s.start = start_u0;
  s.solution = "exponential";
  ex.sections.push_back(s);

  s.key = "wrong-root";
  s.description = "exponential ansatz with the sign of at flipped";
  s.valid = false;
  s.zind = [](const Params& p) { return membrane_section(p, -membrane_at(p), "membrane wrong root"); };
  s.solution.clear();
  ex.sections.push_back(s);

  SolutionEntry sol;
  sol.key = "exponential";
  sol.description = "u = u0 exp(at t - (ax x + ay y) / c^2) with its lift";
  sol.make = membrane_exponential;
  sol.grid = {{0.0, 0.0, 0.0}, {0.002, 0.002, 0.002}, {9, 9, 9}};
  ex.solutions.push_back(sol);

  sol.key = "separable";
  sol.description = "u = exp(s t) cos(sa x) cos(sb y), base map only";
  sol.full = false;
  sol.make = membrane_separable;
  ex.solutions.push_back(sol);

  ex.negatives = {{"flipped root", "check-hj", "wrong-root", {}, {}, {}, "FAIL", 1}};
  return ex;
}

// ---------------------------------------------------------- thermodynamics

// h = (m/2)(ξ² + Σβ² + V²) + Σ_μ [b_μ N^μ + (τ/2)((N^μ)² + Σ_λ (T^{λμ})² + (P^μ)²)]
// on q = (ξ, β₁, β₂, V), pᵢ^μ = (N^μ, −T^{1μ}, −T^{2μ}, P^μ), z = S̃.
ScalarField thermo_hamiltonian(const Params& p) {
  const double m = param(p, "m"), tau = param(p, "tau"), b1 = param(p, "b1"), b2 = param(p, "b2");
  return make_field(
      ChartSpec{4, 2},
      [=](const auto& x) {
        using T = typename std::decay_t<decltype(x.q)>::value_type;
        T U = T(0.0);
        for (int i = 0; i < 4; ++i) U = U + sq(x.q[i]);
        T Phi = b1 * x.p[0] + b2 * x.p[4];
        for (int i = 0; i < 8; ++i) Phi = Phi + 0.5 * tau * sq(x.p[i]);
        return 0.5 * m * U + Phi;
      },
      "h_thermo", p);
}

SectionZInd thermo_section(const Params& p, double sign) {
  const double b1 = param(p, "b1"), b2 = param(p, "b2");
  return from_potentials(
      4, 2,
      [=](const auto& q) {
        using T = typename std::decay_t<decltype(q)>::value_type;
        return std::vector<T>{b2 * q[0] + q[1] * q[3], sign * b1 * q[0] + q[2]};
      },
      "entropy potentials");
}

ExampleSystem make_thermo() {
  ExampleSystem ex;
  ex.name = "thermo-eit";
  ex.title = "covariant extended irreversible thermodynamics, k = 2";
  ex.chart = {4, 2};
  ex.defaults = {{"m", 1.0}, {"tau", 1.0}, {"b1", 0.5}, {"b2", 0.25}};
  ex.hamiltonian = thermo_hamiltonian;

  SectionEntry s;
  s.key = "potentials";
  s.description = "S^1 = b2 xi + beta1 V, S^2 = -b1 xi + beta2 for the linear flux potential (m = tau = 0)";
  s.overrides = {{"m", 0.0}, {"tau", 0.0}};
  s.zind = [](const Params& p) { return thermo_section(p, -1.0); };
  s.lo = {-1.0, -1.0, -1.0, -1.0};
  s.hi = {1.0, 1.0, 1.0, 1.0};
  s.start = [](const Params&) { return Vec{0.0, 0.1, 0.2, 0.3}; };
  ex.sections.push_back(s);

  s.key = "potentials-broken";
  s.description = "same with the sign of b1 xi flipped";
  s.valid = false;
  s.zind = [](const Params& p) { return thermo_section(p, 1.0); };
  ex.sections.push_back(s);

  ex.negatives = {{"flux potentials with flipped sign", "check-hj", "potentials-broken", {}, {}, {}, "FAIL", 1}};
  return ex;
}

void fill_expected(ExampleSystem& ex) {
  for (const auto& s : ex.sections) ex.expected["check-hj:" + s.key] = s.valid ? "PASS" : "FAIL";
  for (const auto& s : ex.solutions) ex.expected["solution:" + s.key] = "PASS";
  for (const auto& n : ex.negatives) ex.expected["negative:" + n.name] = n.verdict;
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"telegrapher",  "telegrapher-quadratic-z", "hunter-saxton",
                                                 "first-order-dissipative", "membrane", "thermo-eit"};
  return names;
}

ExampleSystem load(const std::string& name) {
  ExampleSystem ex;
  if (name == "telegrapher") {
    ex = make_telegrapher();
  } else if (name == "telegrapher-quadratic-z") {
    ex = make_telegrapher_quadratic();
  } else if (name == "hunter-saxton") {
    ex = make_hunter_saxton();
  } else if (name == "first-order-dissipative") {
    ex = make_first_order();
  } else if (name == "membrane") {
    ex = make_membrane();
  } else if (name == "thermo-eit") {
    ex = make_thermo();
  } else {
    std::string known;
    for (const auto& n : example_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown example '" + name + "' (known: " + known + ")");
  }
  fill_expected(ex);
  return ex;
}

ClosedForm analytic(const std::string& example, const std::string& solution, const Params& user) {
  const ExampleSystem ex = load(example);
  const SolutionEntry& s = ex.solution(solution);
  return s.make(ex.resolve(user, s.overrides));
}

DarbouxPoint thermo_point(const ThermoFields& f, std::size_t node) {
  const int k = f.grid.dims();
  const int n = k + 2;
  DarbouxPoint x(n, k);
  x.q[0] = f.xi.at(node);
  for (int l = 0; l < k; ++l) x.q[1 + l] = f.beta.at(node).at(l);
  x.q[n - 1] = f.V.at(node);
  for (int m = 0; m < k; ++m) {
    x.P(m, 0) = f.N.at(node).at(m);
    for (int l = 0; l < k; ++l) x.P(m, 1 + l) = -f.T.at(node).at(l * k + m);
    x.P(m, n - 1) = f.P.at(node).at(m);
    x.z[m] = f.S.at(node).at(m);
  }
  return x;
}

ThermoResidual thermo_balance_residual(const ThermoFields& f, const ScalarField& h) {
  f.grid.validate(3);
  const int k = f.grid.dims();
  const std::size_t N = f.grid.size();
  if (h.chart.k != k || h.chart.n != k + 2) throw ShapeError("Hamiltonian chart does not match the field grid");
  auto check = [&](std::size_t got, const char* what) {
    if (got != N) throw ShapeError(std::string("field array '") + what + "' does not match the grid size");
  };
  check(f.xi.size(), "xi");
  check(f.V.size(), "V");
  check(f.beta.size(), "beta");
  check(f.N.size(), "N");
  check(f.T.size(), "T");
  check(f.P.size(), "P");
  check(f.S.size(), "S");
  for (std::size_t i = 0; i < N; ++i) {
    if (static_cast<int>(f.beta[i].size()) != k || static_cast<int>(f.N[i].size()) != k ||
        static_cast<int>(f.P[i].size()) != k || static_cast<int>(f.S[i].size()) != k ||
        static_cast<int>(f.T[i].size()) != k * k) {
      throw ShapeError("per-node field arrays must have k (or k*k for T) entries");
    }
  }

  std::vector<DarbouxPoint> pts(N);
  for (std::size_t i = 0; i < N; ++i) pts[i] = thermo_point(f, i);

  SolutionMap psi;
  psi.grid = f.grid;
  psi.values = pts;

  ThermoResidual r;
  r.constitutive.resize(N);
  r.balance.resize(N);
  r.entropy_standard.resize(N);
  r.entropy_evolution.resize(N);
  r.h.resize(N);
  const int n = k + 2;
  for (std::size_t idx = 0; idx < N; ++idx) {
    const DarbouxPoint& x = pts[idx];
    const Gradient g = grad(h, x);
    const double hv = h(x);
    r.h[idx] = hv;
    double rq = 0.0, rp = 0.0;
    for (int m = 0; m < k; ++m) {
      for (int i = 0; i < n; ++i) {
        const double d = fd_derivative(f.grid, pts, idx, m, [i](const DarbouxPoint& y) { return y.q[i]; });
        rq = std::max(rq, std::fabs(d - g.P(m, i)));
      }
    }
    double pdh = 0.0;
    for (int j = 0; j < n * k; ++j) pdh += x.p[j] * g.p[j];
    for (int i = 0; i < n; ++i) {
      double div = 0.0, rhs = g.q[i];
      for (int m = 0; m < k; ++m) {
        div += fd_derivative(f.grid, pts, idx, m, [m, i](const DarbouxPoint& y) { return y.P(m, i); });
        rhs += x.P(m, i) * g.z[m];
      }
      rp = std::max(rp, std::fabs(div + rhs));
    }
    double divS = 0.0;
    for (int m = 0; m < k; ++m) {
      divS += fd_derivative(f.grid, pts, idx, m, [m](const DarbouxPoint& y) { return y.z[m]; });
    }
    r.constitutive[idx] = rq;
    r.balance[idx] = rp;
    r.entropy_evolution[idx] = divS - pdh;
    r.entropy_standard[idx] = divS - (pdh - hv);
    r.constitutive_max = std::max(r.constitutive_max, rq);
    r.balance_max = std::max(r.balance_max, rp);
    r.entropy_standard_max = std::max(r.entropy_standard_max, std::fabs(r.entropy_standard[idx]));
    r.entropy_evolution_max = std::max(r.entropy_evolution_max, std::fabs(r.entropy_evolution[idx]));
  }
  return r;
}

}  // namespace kcontact
