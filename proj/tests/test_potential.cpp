#include <doctest.h>

#include "hym/numerics.hpp"
#include "hym/potential.hpp"

using namespace hym;
using namespace hym::potential;

TEST_CASE("sphere kernel equals the S^3 average") {
  // cos of the angle on S^3 has density (2/pi) sin^2.
  const double a = 1.3, b = 0.4, rho = 0.9, zr = -0.2, zi = 0.5;
  const double D = a * a + rho * rho + (b - zr) * (b - zr) + zi * zi, B = 2.0 * a * rho;
  const auto [x, w] = gauss_legendre(64);
  double avg = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double th = 0.5 * kPi * (x[i] + 1.0);
    avg += 0.5 * kPi * w[i] * (2.0 / kPi) * std::pow(std::sin(th), 2) / std::pow(D - B * std::cos(th), 2);
  }
  CHECK(sphere_kernel(a, b, rho, zr, zi) == doctest::Approx(avg).epsilon(1e-10));
}

TEST_CASE("G is positive and symmetric") {
  const Point3 p(cplx(3.0, 0.0), cplx(0.0, 4.0), cplx(2.0, 0.0));
  const GValue g = eval_G(p, MCParams::for_point(p, 400, 3));
  CHECK(g.estimate > 0.0);
  CHECK(g.stderr_ < 0.1 * g.estimate);
  const GValue r = eval_G_reduced(5.0, 2.0, MCParams::for_point(p, 400, 3));
  CHECK(r.estimate == doctest::Approx(g.estimate).epsilon(1e-12));
}

TEST_CASE("range checks") {
  CHECK_THROWS_AS(eval_G(Point3(0.0, 0.0, 0.0), MCParams{}), DomainError);
  MCParams narrow;
  narrow.k_min = 0;
  narrow.k_max = 1;
  CHECK_THROWS_AS(eval_G(Point3(100.0, 0.0, 0.0), narrow), DomainError);
  LaplacianOptions o;
  CHECK_THROWS_AS(laplacian_weak_check(Point3(1.0, 0.0, 0.0), 2.0, o), DomainError);
  CHECK_THROWS_AS(envelope(Point3()), DomainError);
}

TEST_CASE("zero bump gives zero on both sides") {
  LaplacianOptions o;
  o.zero_bump = true;
  o.min_replicas = 1;
  o.max_replicas = 1;
  o.samples_per_shell = 50;
  const LaplacianCheck c = laplacian_weak_check(Point3(10.0, 0.0, 0.0), 1.0, o);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
}

TEST_CASE("envelope closed form") {
  CHECK(envelope(Point3(2.0, 0.0, 0.0)) == doctest::Approx(0.5));
  // Near the z-axis the logarithm dominates: |p| = 1e4, t = 1 + 100.
  const Point3 q(1.0, 0.0, 1e4);
  CHECK(envelope(q) == doctest::Approx(std::log(q.norm() / 101.0) / q.norm()));
}
