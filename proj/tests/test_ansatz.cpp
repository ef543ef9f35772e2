#include <doctest.h>

#include <random>

#include "hym/ansatz.hpp"

using namespace hym;
using namespace hym::ansatz;

TEST_CASE("closed-form mean curvature at (1,0,0)") {
  const CurvatureReport r = curvature(ansatz_spec(), Point3(1.0, 0.0, 0.0));
  CHECK(r.norm_mean == doctest::Approx(1.42397).epsilon(1e-5));
  CHECK(r.norm_F == doctest::Approx(2.5194).epsilon(1e-4));
}

TEST_CASE("closed-form ingredients agree with the generic engine") {
  const Point3 p(cplx(0.6, -0.2), cplx(0.1, 0.9), cplx(-0.4, 0.3));
  const Ingredients in = closed_form_ingredients(p);
  const double S = p.norm2() + 1.0;
  // alpha^dag alpha = S^{-1/2} (|x|^2 + |y|^2) + 1, beta beta^dag = S^{1/2} (|x|^2 + |y|^2) + |z|^2.
  const double rho2 = std::norm(p.x()) + std::norm(p.y());
  CHECK(in.alpha_dag_alpha == doctest::Approx(rho2 / std::sqrt(S) + 1.0));
  CHECK(in.beta_beta_dag == doctest::Approx(std::sqrt(S) * rho2 + std::norm(p.z())));
  const CMatrix c = in.ambient_curvature.at(0, 1);
  CHECK(std::abs(c(0, 0) - (-0.5 * std::conj(p.x()) * p.y() / (S * S))) < 1e-14);
}

TEST_CASE("cancellation spot values and boundedness") {
  const Cancellation c = cancellation(Point3(1.0, 0.0, 0.0));
  CHECK(c.lhs == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-9));
  CHECK(c.rhs == doctest::Approx(0.5));
  for (double t : {1.0, 10.0, 100.0, 1000.0}) CHECK(cancellation(Point3(t, 0.0, 0.0)).ratio() <= 1.0);
}

TEST_CASE("ell weight") {
  CHECK(ell(Point3(2.0, 0.0, 0.0)) == doctest::Approx(1.0 / (4.0 * 2.0)));
  CHECK(ell(Point3(0.0, 0.0, 4.0)) == doctest::Approx(1.0 / (4.0 * 4.0)));
  CHECK(ell(Point3(0.5, 0.0, 0.0)) == doctest::Approx(4.0));
  CHECK(ell_reduced(4.0, 0.0) == doctest::Approx(ell(Point3(2.0, 0.0, 0.0))));
  CHECK_THROWS_AS(ell(Point3(0.0, 0.0, 0.0)), DomainError);
}

TEST_CASE("asymptotic frame tends to the identity") {
  const AsymptoticFrame f = asymptotic_frame(Point3(0.0, 10.0, 0.0), Chart::y);
  CHECK(f.gram(0, 0).real() == doctest::Approx(0.908679).epsilon(1e-5));
  CHECK(f.gram(1, 1).real() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(asymptotic_frame(Point3(0.0, 1000.0, 0.0), Chart::y).deviation < f.deviation);
  CHECK_THROWS_AS(chart_frame(Point3(0.0, 1.0, 1.0), Chart::x), DomainError);
}

TEST_CASE("decay exponents") {
  CHECK(decay_slope(Point3(1.0, 1.0, 0.0), 10.0, 1e3, 9).fit.slope == doctest::Approx(-3.0).epsilon(0.03));
  CHECK(decay_slope(Point3(1.0, 0.0, 0.0), 1e-3, 0.1, 9).fit.slope == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("twisted monad matches the instanton at the bubbling scale") {
  std::mt19937_64 g(7);
  double prev = 0.0;
  for (double z : {100.0, 400.0}) {
    const ComparisonResult c = instanton_comparison(z, 50, g);
    CHECK(c.scaled_sup > 0.0);
    if (prev > 0.0) CHECK(c.scaled_sup / prev == doctest::Approx(1.0).epsilon(0.5));
    prev = c.scaled_sup;
  }
  const Point3 q(cplx(1.0, 2.0), cplx(-3.0, 1.0), cplx(100.0, 30.0));
  const double a = curvature(twisted_monad(cplx(100.0, 30.0)).spec, q).norm_F;
  const double b = curvature(twisted_monad(cplx(100.0, 30.0), true).spec, q).norm_F;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  CHECK_THROWS_AS(twisted_monad(0.5), DomainError);
}

TEST_CASE("Fueter label") {
  const auto f = fueter_map(4.0);
  REQUIRE(f.label.has_value());
  CHECK(std::abs((*f.label)[0] - cplx(2.0, 0.0)) < 1e-12);
  CHECK(std::abs((*f.label)[1]) < 1e-12);
}

TEST_CASE("tangent cone is conical HYM") {
  std::mt19937_64 g(11);
  for (int i = 0; i < 10; ++i) {
    const Point3 p = random_log_uniform_point(g, 0.1, 10.0);
    CHECK(cone_residual(p, true) < 1e-10);
    // Constant metric: |i Lambda F| is homogeneous of degree -2.
    CHECK(p.norm2() * cone_residual(p, false) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("weighted mean curvature ratio bounded on a sample") {
  std::mt19937_64 g(1);
  double sup = 0.0;
  for (int i = 0; i < 2000; ++i) sup = std::max(sup, mean_curvature_ratio(random_log_uniform_point(g, 1e-2, 1e3), 0));
  CHECK(sup < 2.83);
  CHECK(sup > 2.5);
}
