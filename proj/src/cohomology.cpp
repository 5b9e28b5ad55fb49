#include "cohomology.hpp"

#include <algorithm>
#include <cmath>

namespace krf {

CohClass class_add(const CohClass& a, const CohClass& b) {
  if (a.size() != b.size()) throw InvalidArgument("class dimension mismatch");
  CohClass r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

CohClass class_scale(double s, const CohClass& a) {
  CohClass r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

CohClass class_neg(const CohClass& a) { return class_scale(-1.0, a); }

double class_max_abs(const CohClass& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

IntersectionTensor::IntersectionTensor(int complex_dim, int basis_dim)
    : n_(complex_dim), m_(basis_dim) {
  if (n_ < 2) throw InvalidArgument("complex dimension must be >= 2");
  if (m_ < 1) throw InvalidArgument("basis dimension must be >= 1");
  std::size_t size = 1;
  for (int k = 0; k < n_; ++k) size *= static_cast<std::size_t>(m_);
  e_.assign(size, 0.0);
}

std::size_t IntersectionTensor::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= m_) throw InvalidArgument("tensor index out of range");
    f = f * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i);
  }
  return f;
}

void IntersectionTensor::set(std::span<const int> idx, double value) {
  if (static_cast<int>(idx.size()) != n_) throw InvalidArgument("tensor index arity mismatch");
  std::vector<int> p(idx.begin(), idx.end());
  std::sort(p.begin(), p.end());
  do {
    e_[flat(p)] = value;
  } while (std::next_permutation(p.begin(), p.end()));
}

double IntersectionTensor::entry(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != n_) throw InvalidArgument("tensor index arity mismatch");
  return e_[flat(idx)];
}

double IntersectionTensor::evaluate(std::span<const CohClass> classes) const {
  if (static_cast<int>(classes.size()) != n_)
    throw InvalidArgument("top intersection needs exactly n classes, got " +
                          std::to_string(classes.size()));
  for (const auto& c : classes)
    if (static_cast<int>(c.size()) != m_) throw InvalidArgument("class dimension mismatch");

  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(n_), 0);
  for (;;) {
    double term = e_[flat(idx)];
    if (term != 0.0) {
      for (int k = 0; k < n_; ++k) term *= classes[static_cast<std::size_t>(k)][idx[k]];
      total += term;
    }
    int k = n_ - 1;
    while (k >= 0 && ++idx[k] == m_) idx[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

double ConeSpec::facet_value(int facet, const CohClass& cls) const {
  const CohClass& l = facets.at(static_cast<std::size_t>(facet));
  if (l.size() != cls.size()) throw InvalidArgument("facet/class dimension mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) v += l[i] * cls[i];
  return v;
}

void CohomologySetup::validate() const {
  const int m = dim();
  if (n < 2) throw ConfigError("setup.n", "complex dimension must be >= 2");
  if (m < 1) throw ConfigError("setup.basis", "basis must be nonempty");
  if (tensor.complex_dim() != n || tensor.basis_dim() != m)
    throw ConfigError("setup.tensor", "tensor dimensions disagree with basis");
  if (cone.facets.empty()) throw ConfigError("setup.cone", "facet list must be nonempty");
  for (const auto& f : cone.facets)
    if (static_cast<int>(f.size()) != m)
      throw ConfigError("setup.cone", "facet functional has wrong dimension");
  if (static_cast<int>(c1.size()) != m) throw ConfigError("setup.c1", "wrong dimension");
  if (static_cast<int>(omega0.size()) != m) throw ConfigError("setup.omega0", "wrong dimension");
  for (int f = 0; f < cone.size(); ++f) {
    if (cone.facet_value(f, omega0) <= tol)
      throw ConfigError("setup.omega0", "degenerate setup: initial class does not lie strictly "
                                        "inside the Kaehler cone (facet " + std::to_string(f) + ")");
  }
  std::vector<CohClass> cls(static_cast<std::size_t>(n), omega0);
  if (tensor.evaluate(cls) <= tol)
    throw ConfigError("setup.omega0", "degenerate setup: top self-intersection must be positive");
}

CohClass class_at(const CohomologySetup& s, double t) {
  if (std::isnan(t) || t < 0.0) throw InvalidArgument("class_at: time must be >= 0");
  if (t == kInf) return class_neg(s.c1);
  const double x = std::exp(-t);
  CohClass r(s.omega0.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -s.c1[i] + x * (s.omega0[i] + s.c1[i]);
  return r;
}

SingularityTime singularity_time(const CohomologySetup& s) {
  s.validate();
  SingularityTime out;
  double best = kInf;
  std::vector<double> hit(static_cast<std::size_t>(s.cone.size()), kInf);
  for (int f = 0; f < s.cone.size(); ++f) {
    const double num = s.cone.facet_value(f, s.c1);
    const double den = s.cone.facet_value(f, class_add(s.omega0, s.c1));
    if (num <= s.tol) continue;  // facet value stays positive forever
    const double ratio = num / den;
    if (!(ratio > s.tol && ratio <= 1.0)) continue;
    hit[static_cast<std::size_t>(f)] = std::log(den / num);
    best = std::min(best, hit[static_cast<std::size_t>(f)]);
  }
  out.T = best;
  if (out.finite()) {
    for (int f = 0; f < s.cone.size(); ++f)
      if (hit[static_cast<std::size_t>(f)] - best <= 1e-12) out.active_facets.push_back(f);
  }
  out.limit = class_at(s, out.T);
  return out;
}

double top_intersection(const IntersectionTensor& tensor, std::span<const CohClass> classes) {
  return tensor.evaluate(classes);
}

CollapseExponent collapse_exponent(const CohomologySetup& s, const CohClass& limit) {
  CollapseExponent out;
  out.mixed.resize(static_cast<std::size_t>(s.n) + 1);
  for (int k = 0; k <= s.n; ++k) {
    std::vector<CohClass> cls;
    cls.reserve(static_cast<std::size_t>(s.n));
    for (int j = 0; j < s.n - k; ++j) cls.push_back(limit);
    for (int j = 0; j < k; ++j) cls.push_back(s.omega0);
    out.mixed[static_cast<std::size_t>(k)] = s.tensor.evaluate(cls);
  }
  for (int k = 0; k <= s.n; ++k) {
    if (out.mixed[static_cast<std::size_t>(k)] > s.tol) {
      out.K = k;
      return out;
    }
  }
  throw Error(Status::Internal,
              "collapse exponent undefined: no mixed intersection is positive, "
              "which contradicts [omega0]^n > 0 (bad setup data)");
}

double volume_poly(const CohomologySetup& s, double t) {
  if (t == kInf) throw InvalidArgument("volume_poly: time must be finite");
  const CohClass c = class_at(s, t);
  std::vector<CohClass> cls(static_cast<std::size_t>(s.n), c);
  return s.tensor.evaluate(cls);
}

NefCheck nef_check(const CohomologySetup& s, const CohClass& cls) {
  NefCheck out;
  double margin = kInf;
  for (int f = 0; f < s.cone.size(); ++f) margin = std::min(margin, s.cone.facet_value(f, cls));
  out.margin = margin;
  out.nef = margin >= -s.tol;
  return out;
}

double time_to_unnormalized(double t) {
  if (std::isnan(t) || t < 0.0) throw InvalidArgument("time must be >= 0");
  if (t == kInf) return kInf;
  return 0.5 * std::expm1(t);
}

double unnormalized_to_time(double s) {
  if (std::isnan(s) || s < 0.0) throw InvalidArgument("time must be >= 0");
  if (s == kInf) return kInf;
  return std::log1p(2.0 * s);
}

double metric_scale_factor(double t) {
  if (std::isnan(t) || t < 0.0) throw InvalidArgument("time must be >= 0");
  return std::exp(t);
}

CohClass rescale_class(const CohClass& cls, double t) {
  return class_scale(metric_scale_factor(t), cls);
}

}  // namespace krf
