#include "models.hpp"

#include <cmath>

namespace krf {

namespace {

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double factor_kappa(FactorKind kind) {
  switch (kind) {
    case FactorKind::P1: return 2.0;
    case FactorKind::Torus: return 0.0;
    case FactorKind::Genus2: return -2.0;
  }
  throw InvalidArgument("unknown factor kind");
}

const char* factor_kind_name(FactorKind kind) {
  switch (kind) {
    case FactorKind::P1: return "p1";
    case FactorKind::Torus: return "torus";
    case FactorKind::Genus2: return "genus2";
  }
  return "?";
}

void ProductModel::validate() const {
  if (factors.size() < 2)
    throw ConfigError("model.factors", "product model needs at least two factors");
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (!(factors[i].c0 > 0.0))
      throw ConfigError("model.factors[" + std::to_string(i) + "]",
                        "initial coefficient must be > 0");
}

CohomologySetup ProductModel::setup() const {
  validate();
  const int n = dim();
  CohomologySetup s;
  s.n = n;
  for (int i = 0; i < n; ++i) s.basis.push_back("eta" + std::to_string(i + 1));
  s.tensor = IntersectionTensor(n, n);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  s.tensor.set(idx, 1.0);  // distinct factors pair to 1; symmetrized over permutations
  for (int i = 0; i < n; ++i) {
    CohClass l(static_cast<std::size_t>(n), 0.0);
    l[static_cast<std::size_t>(i)] = 1.0;
    s.cone.facets.push_back(l);
    s.cone.facet_names.push_back(s.basis[static_cast<std::size_t>(i)]);
  }
  s.c1.resize(static_cast<std::size_t>(n));
  s.omega0.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s.c1[static_cast<std::size_t>(i)] = factors[static_cast<std::size_t>(i)].kappa();
    s.omega0[static_cast<std::size_t>(i)] = factors[static_cast<std::size_t>(i)].c0;
  }
  s.validate();
  return s;
}

double factor_vanishing_time(const Factor& f) {
  if (f.kappa() <= 0.0) return kInf;
  return std::log((f.c0 + f.kappa()) / f.kappa());
}

double product_vanishing_time(const ProductModel& m) {
  double t = kInf;
  for (const Factor& f : m.factors) t = std::min(t, factor_vanishing_time(f));
  return t;
}

ProductState product_exact_state(const ProductModel& m, double t) {
  if (std::isnan(t) || t < 0.0 || t == kInf)
    throw InvalidArgument("product state: time must be finite and >= 0");
  const double tv = product_vanishing_time(m);
  if (t >= tv)
    throw InvalidArgument("product state: coefficient vanishes at t = " + std::to_string(tv) +
                          ", requested t = " + std::to_string(t));
  ProductState st;
  st.t = t;
  const double x = std::exp(-t);
  for (const Factor& f : m.factors) {
    const double k = f.kappa();
    st.kappa.push_back(k);
    st.c.push_back((f.c0 + k) * x - k);
  }
  return st;
}

RicciEigs product_ricci_eigs(const ProductModel& m, double t) {
  const ProductState st = product_exact_state(m, t);
  RicciEigs out;
  out.min = kInf;
  out.max = -kInf;
  double trace = 0.0;
  for (std::size_t i = 0; i < st.c.size(); ++i) {
    const double lam = st.kappa[i] / st.c[i];
    out.min = std::min(out.min, lam);
    out.max = std::max(out.max, lam);
    trace += lam;
  }
  out.trace_max = trace;
  return out;
}

double product_log_volume_ratio(const ProductModel& m, double t) {
  const ProductState st = product_exact_state(m, t);
  double v = 0.0;
  for (std::size_t i = 0; i < st.c.size(); ++i) v += std::log(st.c[i] / m.factors[i].c0);
  return v;
}

double product_potential(const ProductModel& m, double t) {
  product_exact_state(m, t);  // validates liveness
  const double et = std::exp(t);
  double W = 0.0;
  for (const Factor& f : m.factors) {
    const double k = f.kappa();
    const double A = f.c0 + k;
    // int_0^t e^tau (-tau) dtau
    double w = -((t - 1.0) * et + 1.0);
    // int_1^{e^t} log(A - k w) dw
    if (k == 0.0) {
      w += (et - 1.0) * std::log(A);
    } else {
      auto G = [&](double x) {
        const double r = A - k * x;  // = e^tau c(tau) > 0 while alive
        return -(r / k) * (std::log(r) - 1.0);
      };
      w += G(et) - G(1.0);
    }
    w -= (et - 1.0) * std::log(f.c0);
    W += w;
  }
  return W / et;
}

void CalabiModel::validate() const {
  if (!(a > 0.0)) throw ConfigError("model.a", "must be > 0");
  if (!(b > a)) throw ConfigError("model.b", "must exceed model.a");
  if (!(L > 0.0)) throw ConfigError("model.grid_half_width", "must be > 0");
  if (N < 3) throw ConfigError("model.grid_points", "must be >= 3");
}

CohomologySetup CalabiModel::setup() const {
  validate();
  CohomologySetup s;
  s.n = 2;
  s.basis = {"H", "E"};
  s.tensor = IntersectionTensor(2, 2);
  s.tensor.set(std::vector<int>{0, 0}, 1.0);
  s.tensor.set(std::vector<int>{1, 1}, -1.0);
  s.tensor.set(std::vector<int>{0, 1}, 0.0);
  s.cone.facets = {CohClass{0.0, -1.0}, CohClass{1.0, 1.0}};  // pairing with E and H-E
  s.cone.facet_names = {"E", "H-E"};
  s.c1 = {3.0, -1.0};
  s.omega0 = {b, -a};
  s.validate();
  return s;
}

double CalabiModel::F0(double rho) const { return a * rho + (b - a) * softplus(rho); }

double CalabiModel::F0p(double rho) const { return a + (b - a) * logistic(rho); }

double CalabiModel::F0pp(double rho) const {
  const double s = logistic(rho);
  return (b - a) * s * (1.0 - s);
}

double CalabiModel::F0ppp(double rho) const {
  const double s = logistic(rho);
  return (b - a) * s * (1.0 - s) * (1.0 - 2.0 * s);
}

double CalabiModel::P(double rho) const {
  // log(F0' F0'') - 2 rho with log sigma = -softplus(-rho), log(1-sigma) = -softplus(rho)
  return std::log(F0p(rho)) + std::log(b - a) - softplus(-rho) - softplus(rho) - 2.0 * rho;
}

double CalabiModel::Pp(double rho) const {
  const double s = logistic(rho);
  return F0pp(rho) / F0p(rho) + (1.0 - 2.0 * s) - 2.0;
}

double CalabiModel::Ppp(double rho) const {
  const double s = logistic(rho);
  const double fp = F0p(rho);
  return (F0ppp(rho) * fp - F0pp(rho) * F0pp(rho)) / (fp * fp) - 2.0 * s * (1.0 - s);
}

double CalabiModel::chi(double t, double rho) const {
  const double x = std::exp(-t);
  return P(rho) + x * (F0(rho) - P(rho));
}

double CalabiModel::chip(double t, double rho) const {
  const double x = std::exp(-t);
  return Pp(rho) + x * (F0p(rho) - Pp(rho));
}

double CalabiModel::chipp(double t, double rho) const {
  const double x = std::exp(-t);
  return Ppp(rho) + x * (F0pp(rho) - Ppp(rho));
}

std::pair<double, double> CalabiModel::slope_pair(double t) const {
  const double x = std::exp(-t);
  return {-1.0 + x * (a + 1.0), -3.0 + x * (b + 3.0)};
}

CalabiProfile calabi_initial_profile(const CalabiModel& m) {
  m.validate();
  CalabiProfile p;
  p.t = 0.0;
  p.grid = m.grid();
  p.u.assign(static_cast<std::size_t>(p.grid.N), 0.0);
  return p;
}

std::vector<double> calabi_initial_potential(const CalabiModel& m) {
  m.validate();
  const Grid g = m.grid();
  std::vector<double> f(static_cast<std::size_t>(g.N));
  for (int i = 0; i < g.N; ++i) f[static_cast<std::size_t>(i)] = m.F0(g.rho(i));
  return f;
}

void calabi_metric_fields(const CalabiModel& m, const CalabiProfile& p, std::vector<double>& Fp,
                          std::vector<double>& Fpp) {
  const Grid& g = p.grid;
  const std::size_t N = static_cast<std::size_t>(g.N);
  Fp.resize(N);
  Fpp.resize(N);
  std::vector<double> d1(N), d2(N);
  d1_centered(g, p.u, d1);
  d2_centered(g, p.u, d2);
  for (int i = 0; i < g.N; ++i) {
    const double rho = g.rho(i);
    Fp[static_cast<std::size_t>(i)] = m.chip(p.t, rho) + d1[static_cast<std::size_t>(i)];
    Fpp[static_cast<std::size_t>(i)] = m.chipp(p.t, rho) + d2[static_cast<std::size_t>(i)];
  }
}

std::vector<double> calabi_ma_ratio(const CalabiModel& m, const CalabiProfile& p) {
  std::vector<double> Fp, Fpp;
  calabi_metric_fields(m, p, Fp, Fpp);
  const Grid& g = p.grid;
  std::vector<double> ratio(static_cast<std::size_t>(g.N));
  for (int i = 0; i < g.N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    if (!(Fp[k] > 0.0)) throw KaehlerViolation(p.t, i, g.rho(i), "F'");
    if (!(Fpp[k] > 0.0)) throw KaehlerViolation(p.t, i, g.rho(i), "F''");
    ratio[k] = (Fp[k] * Fpp[k]) / (m.F0p(g.rho(i)) * m.F0pp(g.rho(i)));
  }
  return ratio;
}

}  // namespace krf
