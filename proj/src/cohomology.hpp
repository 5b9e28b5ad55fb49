#pragma once

// Finite-dimensional cohomology engine for the flow on (1,1)-classes:
// the class ODE, singularity time against a polyhedral Kaehler cone,
// collapse exponent from mixed intersection numbers, the exact volume
// polynomial and the time/metric rescaling between the normalized and
// unnormalized clocks.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace krf {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coefficient vector of a (1,1)-class in the declared basis.
using CohClass = std::vector<double>;

CohClass class_add(const CohClass& a, const CohClass& b);
CohClass class_scale(double s, const CohClass& a);
CohClass class_neg(const CohClass& a);
double class_max_abs(const CohClass& a);

// Fully symmetric n-linear form on basis indices (n = complex dimension,
// m = dim H^{1,1}).  Entries are stored dense over all m^n multi-indices;
// assignment symmetrizes.
class IntersectionTensor {
 public:
  IntersectionTensor() = default;
  IntersectionTensor(int complex_dim, int basis_dim);

  // Sets the entry for every permutation of `idx`.
  void set(std::span<const int> idx, double value);
  double entry(std::span<const int> idx) const;

  // Multilinear evaluation on exactly n classes (arity checked).
  double evaluate(std::span<const CohClass> classes) const;

  int complex_dim() const { return n_; }
  int basis_dim() const { return m_; }

 private:
  std::size_t flat(std::span<const int> idx) const;

  int n_ = 0;
  int m_ = 0;
  std::vector<double> e_;
};

// Polyhedral facet description of the Kaehler cone: each functional is
// strictly positive on the open cone and vanishes on one boundary facet.
struct ConeSpec {
  std::vector<CohClass> facets;
  std::vector<std::string> facet_names;  // optional labels, same length or empty

  double facet_value(int facet, const CohClass& cls) const;
  int size() const { return static_cast<int>(facets.size()); }
};

struct CohomologySetup {
  int n = 2;                        // complex dimension
  std::vector<std::string> basis;   // basis labels
  IntersectionTensor tensor;
  ConeSpec cone;
  CohClass c1;      // first Chern class in the basis
  CohClass omega0;  // initial Kaehler class
  double tol = 1e-10;

  int dim() const { return static_cast<int>(basis.size()); }
  // Checks basis/facet dimensions, omega0 strictly inside the cone and
  // [omega0]^n > 0.  Throws ConfigError (degenerate setup) otherwise.
  void validate() const;
};

// [omega_t] = -c1 + e^{-t} (omega0 + c1); accepts t = +inf (limit -c1).
CohClass class_at(const CohomologySetup& s, double t);

struct SingularityTime {
  double T = kInf;                // +inf when the class never leaves the cone
  std::vector<int> active_facets; // facets vanishing at T (empty for T = inf)
  CohClass limit;                 // class_at(T), = -c1 when T = inf
  bool finite() const { return T != kInf; }
};

// Smallest facet hitting time of the class line, or +inf.  A facet l is hit
// when l(c1)/l(omega0+c1) lies in (tol, 1]; otherwise the facet value stays
// positive for all t >= 0.
SingularityTime singularity_time(const CohomologySetup& s);

// Multilinear intersection of exactly n classes.
double top_intersection(const IntersectionTensor& tensor, std::span<const CohClass> classes);

struct CollapseExponent {
  int K = 0;
  std::vector<double> mixed;  // mixed[k] = limit^{n-k} . omega0^k, k = 0..n
};

// Minimal k with limit^{n-k} . omega0^k > tol.  `limit` is the singular-time
// class (class_at(T), i.e. -c1 for T = inf).  Throws if no k qualifies,
// which contradicts [omega0]^n > 0 and indicates broken setup data.
CollapseExponent collapse_exponent(const CohomologySetup& s, const CohClass& limit);

// [omega_t]^n, an exact polynomial in e^{-t}.
double volume_poly(const CohomologySetup& s, double t);

struct NefCheck {
  bool nef = false;
  double margin = 0.0;  // minimum facet value
};

// True iff every facet functional is >= -tol on the class.
NefCheck nef_check(const CohomologySetup& s, const CohClass& cls);

// Clock conversions between the normalized flow time t and the unnormalized
// time s = (e^t - 1)/2, plus the metric coefficient factor e^t relating the
// two flows.
double time_to_unnormalized(double t);   // s(t)
double unnormalized_to_time(double s);   // t(s)
double metric_scale_factor(double t);    // e^t
CohClass rescale_class(const CohClass& cls, double t);

}  // namespace krf
