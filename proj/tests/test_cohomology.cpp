#include <doctest.h>

#include <cmath>
#include <random>

#include "cohomology.hpp"
#include "models.hpp"

using namespace krf;

namespace {

CohomologySetup p1p1(double b1, double b2) {
  ProductModel m;
  m.factors = {{FactorKind::P1, b1}, {FactorKind::P1, b2}};
  return m.setup();
}

CohomologySetup f1(double a, double b) {
  CalabiModel m;
  m.a = a;
  m.b = b;
  return m.setup();
}

CohomologySetup sigma2_torus() {
  ProductModel m;
  m.factors = {{FactorKind::Genus2, 3.0}, {FactorKind::Torus, 1.0}};
  return m.setup();
}

}  // namespace

TEST_CASE("class ODE evaluation") {
  const CohomologySetup s = p1p1(1.0, 2.0);

  SUBCASE("initial condition") {
    const CohClass c = class_at(s, 0.0);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("closed form at t = log(3/2)") {
    const CohClass c = class_at(s, std::log(1.5));
    CHECK(std::abs(c[0]) < 1e-15);
    CHECK(c[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("blow-up surface at t = log 2") {
    const CohClass c = class_at(f1(1.0, 4.0), std::log(2.0));
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(c[1]) < 1e-15);
  }
  SUBCASE("limit at infinite time is -c1") {
    const CohClass c = class_at(s, kInf);
    CHECK(c[0] == -2.0);
    CHECK(c[1] == -2.0);
  }
  SUBCASE("negative time rejected") { CHECK_THROWS_AS(class_at(s, -0.1), InvalidArgument); }
}

TEST_CASE("singularity time against the cone facets") {
  SUBCASE("first orthant facet wins") {
    const SingularityTime st = singularity_time(p1p1(1.0, 2.0));
    CHECK(st.finite());
    CHECK(st.T == doctest::Approx(std::log(1.5)).epsilon(1e-15));
    REQUIRE(st.active_facets.size() == 1);
    CHECK(st.active_facets[0] == 0);
    CHECK(std::abs(st.limit[0]) < 1e-14);
  }
  SUBCASE("exceptional curve contracts first") {
    const SingularityTime st = singularity_time(f1(1.0, 4.0));
    CHECK(st.T == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    REQUIRE(st.active_facets.size() == 1);
    CHECK(st.active_facets[0] == 0);  // pairing with E
    CHECK(st.limit[0] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("fiber facet wins for b < 3a") {
    const SingularityTime st = singularity_time(f1(2.0, 5.0));
    CHECK(st.T == doctest::Approx(std::log(2.5)).epsilon(1e-15));
    REQUIRE(st.active_facets.size() == 1);
    CHECK(st.active_facets[0] == 1);  // pairing with H - E
  }
  SUBCASE("common hit when both factors vanish together") {
    const SingularityTime st = singularity_time(p1p1(1.0, 1.0));
    CHECK(st.T == doctest::Approx(std::log(1.5)).epsilon(1e-15));
    CHECK(st.active_facets.size() == 2);
  }
  SUBCASE("immortal flow") {
    const SingularityTime st = singularity_time(sigma2_torus());
    CHECK(!st.finite());
    CHECK(st.active_facets.empty());
    CHECK(st.limit[0] == doctest::Approx(2.0));
    CHECK(st.limit[1] == doctest::Approx(0.0));
  }
  SUBCASE("degenerate setup rejected") {
    CohomologySetup s = p1p1(1.0, 2.0);
    s.omega0 = {1.0, -0.5};
    CHECK_THROWS_AS(singularity_time(s), ConfigError);
  }
}

TEST_CASE("top intersection numbers") {
  const CohomologySetup s = p1p1(1.0, 2.0);
  SUBCASE("product surface") {
    const CohClass w{1.0, 2.0};
    std::vector<CohClass> cls{w, w};
    CHECK(top_intersection(s.tensor, cls) == doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("blow-up surface with signature (1,1)") {
    const CohomologySetup sf = f1(1.0, 4.0);
    const CohClass w{0.5, 0.0};
    std::vector<CohClass> cls{w, w};
    CHECK(top_intersection(sf.tensor, cls) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("multilinearity at zero") {
    const CohClass z{0.0, 0.0};
    std::vector<CohClass> cls{z, z};
    CHECK(top_intersection(s.tensor, cls) == 0.0);
  }
  SUBCASE("arity mismatch rejected") {
    std::vector<CohClass> one{CohClass{1.0, 2.0}};
    CHECK_THROWS_AS(top_intersection(s.tensor, one), InvalidArgument);
  }
  SUBCASE("symmetric in arguments") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    const CohomologySetup sf = f1(1.0, 4.0);
    for (int k = 0; k < 50; ++k) {
      const CohClass x{dist(rng), dist(rng)};
      const CohClass y{dist(rng), dist(rng)};
      std::vector<CohClass> xy{x, y};
      std::vector<CohClass> yx{y, x};
      CHECK(top_intersection(sf.tensor, xy) ==
            doctest::Approx(top_intersection(sf.tensor, yx)).epsilon(1e-14));
    }
  }
}

TEST_CASE("collapse exponent from mixed intersections") {
  SUBCASE("simple zero: K = 1") {
    const CohomologySetup s = p1p1(1.0, 2.0);
    const SingularityTime st = singularity_time(s);
    const CollapseExponent ce = collapse_exponent(s, st.limit);
    CHECK(ce.K == 1);
    CHECK(std::abs(ce.mixed[0]) < 1e-14);
    CHECK(ce.mixed[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("noncollapsed contraction: K = 0") {
    const CohomologySetup s = f1(1.0, 4.0);
    const SingularityTime st = singularity_time(s);
    const CollapseExponent ce = collapse_exponent(s, st.limit);
    CHECK(ce.K == 0);
    CHECK(ce.mixed[0] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("shrink to a point: K = 2") {
    const CohomologySetup s = p1p1(1.0, 1.0);
    const SingularityTime st = singularity_time(s);
    const CollapseExponent ce = collapse_exponent(s, st.limit);
    CHECK(ce.K == 2);
    CHECK(std::abs(ce.mixed[0]) < 1e-14);
    CHECK(std::abs(ce.mixed[1]) < 1e-14);
    CHECK(ce.mixed[2] == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("infinite time uses -c1 as the limit") {
    const CohomologySetup s = sigma2_torus();
    const SingularityTime st = singularity_time(s);
    const CollapseExponent ce = collapse_exponent(s, st.limit);
    CHECK(ce.K == 1);
  }
  SUBCASE("all-zero data flagged as inconsistent") {
    CohomologySetup s = p1p1(1.0, 2.0);
    s.tensor = IntersectionTensor(2, 2);  // zero form
    CHECK_THROWS_AS(collapse_exponent(s, CohClass{0.0, 0.0}), Error);
  }
}

TEST_CASE("volume polynomial") {
  const CohomologySetup s = p1p1(1.0, 2.0);
  const double T = std::log(1.5);
  CHECK(volume_poly(s, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::abs(volume_poly(s, T)) < 1e-14);
  {
    const double t = T - 0.01;
    const double x = std::exp(-t);
    CHECK(volume_poly(s, t) ==
          doctest::Approx(2.0 * (3.0 * x - 2.0) * (4.0 * x - 2.0)).epsilon(1e-13));
    CHECK(volume_poly(s, t) > 0.0);
  }
  SUBCASE("immortal product keeps e^{-t} decay with bounded ratio") {
    const CohomologySetup si = sigma2_torus();
    for (double t : {0.0, 0.5, 1.0, 3.0, 8.0}) {
      const double x = std::exp(-t);
      const double v = volume_poly(si, t);
      CHECK(v == doctest::Approx(2.0 * (2.0 + x) * x).epsilon(1e-12));
      CHECK(v / x >= 4.0 - 1e-12);
      CHECK(v / x <= 6.0 + 1e-12);
    }
  }
}

TEST_CASE("volume polynomial agrees with an independently expanded polynomial in e^{-t}") {
  // Independent route: binomial expansion of (-c1 + x (omega0+c1))^n with
  // coefficients from mixed intersections of the two endpoint classes.
  auto check_setup = [](const CohomologySetup& s) {
    const int n = s.n;
    const CohClass neg_c1 = class_neg(s.c1);
    const CohClass sum = class_add(s.omega0, s.c1);
    std::vector<double> poly(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      std::vector<CohClass> cls;
      for (int j = 0; j < k; ++j) cls.push_back(sum);
      for (int j = 0; j < n - k; ++j) cls.push_back(neg_c1);
      double binom = 1.0;
      for (int j = 0; j < k; ++j) binom = binom * (n - j) / (j + 1);
      poly[static_cast<std::size_t>(k)] = binom * s.tensor.evaluate(cls);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
      const double t = dist(rng);
      const double x = std::exp(-t);
      double expected = 0.0;
      double xk = 1.0;
      for (int k = 0; k <= n; ++k) {
        expected += poly[static_cast<std::size_t>(k)] * xk;
        xk *= x;
      }
      CHECK(volume_poly(s, t) == doctest::Approx(expected).epsilon(1e-12));
    }
  };
  check_setup(p1p1(1.0, 2.0));
  check_setup(f1(1.0, 4.0));
  check_setup(sigma2_torus());
}

TEST_CASE("facet positivity along the flow line") {
  for (const CohomologySetup& s : {p1p1(1.0, 2.0), f1(2.0, 5.0)}) {
    const SingularityTime st = singularity_time(s);
    REQUIRE(st.finite());
    for (int j = 1; j <= 40; ++j) {
      const double t = st.T * j / 41.0;
      const CohClass c = class_at(s, t);
      for (int f = 0; f < s.cone.size(); ++f) CHECK(s.cone.facet_value(f, c) > 0.0);
    }
    double min_facet = kInf;
    const CohClass cT = class_at(s, st.T);
    for (int f = 0; f < s.cone.size(); ++f)
      min_facet = std::min(min_facet, s.cone.facet_value(f, cT));
    CHECK(std::abs(min_facet) <= s.tol);
  }
}

TEST_CASE("nef membership check") {
  SUBCASE("interior class") {
    const CohomologySetup s = sigma2_torus();
    const NefCheck nc = nef_check(s, class_add(s.omega0, s.c1));
    CHECK(nc.nef);
    CHECK(nc.margin == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("class outside the cone") {
    const CohomologySetup s = f1(1.0, 4.0);
    const NefCheck nc = nef_check(s, CohClass{1.0, 1.0});
    CHECK(!nc.nef);
    CHECK(nc.margin == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("zero class sits on the boundary") {
    const CohomologySetup s = p1p1(1.0, 2.0);
    const NefCheck nc = nef_check(s, CohClass{0.0, 0.0});
    CHECK(nc.nef);
    CHECK(nc.margin == 0.0);
  }
}

TEST_CASE("clock rescaling") {
  CHECK(time_to_unnormalized(0.0) == 0.0);
  CHECK(time_to_unnormalized(std::log(3.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(time_to_unnormalized(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(time_to_unnormalized(-1e-9), InvalidArgument);
  CHECK_THROWS_AS(unnormalized_to_time(-1.0), InvalidArgument);

  SUBCASE("round trip and monotonicity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    double prev_s = -1.0;
    for (int k = 0; k < 200; ++k) {
      const double t = dist(rng);
      const double s = time_to_unnormalized(t);
      CHECK(std::abs(unnormalized_to_time(s) - t) <= 1e-14 * (1.0 + t));
    }
    for (double t = 0.0; t < 3.0; t += 0.1) {
      const double s = time_to_unnormalized(t);
      CHECK(s > prev_s);
      prev_s = s;
    }
  }

  SUBCASE("unnormalized class evolves linearly in s") {
    const CohomologySetup s = p1p1(1.0, 2.0);
    for (double sval : {0.0, 0.1, 0.2, 0.35, 0.49}) {
      const double t = unnormalized_to_time(sval);
      const CohClass scaled = rescale_class(class_at(s, t), t);
      for (std::size_t i = 0; i < scaled.size(); ++i) {
        const double expected = s.omega0[i] - 2.0 * sval * s.c1[i];
        CHECK(scaled[i] == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("volume asymptotics near the singular time (log-log slope)") {
  // Samples at t = T - 10^{-j}; the ratio V/(T-t)^K stays in a fixed band on
  // j = 1..4 while the tail slope over j = 2..4 matches K.
  auto tail_slope_and_band = [](const CohomologySetup& s, int K) {
    const SingularityTime st = singularity_time(s);
    REQUIRE(st.finite());
    double ratio_lo = kInf, ratio_hi = 0.0;
    std::vector<double> xs, ys;
    for (int j = 1; j <= 4; ++j) {
      const double delta = std::pow(10.0, -j);
      const double v = volume_poly(s, st.T - delta);
      const double ratio = v / std::pow(delta, K);
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
      if (j >= 2) {
        xs.push_back(std::log(delta));
        ys.push_back(std::log(v));
      }
    }
    CHECK(ratio_hi / ratio_lo < 10.0);  // fixed two-sided band
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xm += xs[i];
      ym += ys[i];
    }
    xm /= xs.size();
    ym /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - xm) * (xs[i] - xm);
      sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    return sxy / sxx;
  };
  CHECK(std::abs(tail_slope_and_band(p1p1(1.0, 2.0), 1) - 1.0) < 0.05);
  CHECK(std::abs(tail_slope_and_band(p1p1(1.0, 1.0), 2) - 2.0) < 0.05);
  CHECK(std::abs(tail_slope_and_band(f1(1.0, 4.0), 0) - 0.0) < 0.05);

  SUBCASE("infinite time: e-folding slope equals -K") {
    const CohomologySetup s = sigma2_torus();
    std::vector<double> xs, ys;
    for (double t = 5.0; t <= 10.0 + 1e-9; t += 0.5) {
      xs.push_back(t);
      ys.push_back(std::log(volume_poly(s, t)));
    }
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xm += xs[i];
      ym += ys[i];
    }
    xm /= xs.size();
    ym /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - xm) * (xs[i] - xm);
      sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    CHECK(std::abs(sxy / sxx - (-1.0)) < 0.05);
  }
}
