#include <doctest.h>

#include <random>

#include "hym/adhm.hpp"
#include "hym/numerics.hpp"

using namespace hym;
using namespace hym::adhm;

TEST_CASE("valid data gives ASD curvature") {
  const ADHMData d{1.0, 0.0, 0.0, 1.0};
  CHECK(adhm_residual(d).valid());
  for (const Point3& p : {Point3(cplx(0.3, 0.0), cplx(-0.7, 0.0)), Point3(cplx(2.0, -1.0), cplx(0.1, 0.4))}) {
    CHECK(asd_check(d, p, true).total() < 1e-12);
    CHECK(asd_check(d, p, false).total() < 1e-6);
  }
}

TEST_CASE("generic valid data from the (a1, a2, -mu a2, mu a1) family") {
  const cplx a1(0.8, -0.3), a2(-0.2, 1.1), mu = std::polar(1.0, 0.7);
  const ADHMData d{a1, a2, -mu * a2, mu * a1};
  CHECK(adhm_residual(d).valid());
  CHECK(asd_check(d, Point3(cplx(0.5, 0.5), cplx(-0.3, 0.2)), true).total() < 1e-12);
}

TEST_CASE("invalid data is flagged by the (0,2) part") {
  const ADHMData bad{1.0, 0.0, 1.0, 0.0};
  CHECK_FALSE(adhm_residual(bad).valid());
  CHECK(asd_check(bad, Point3(cplx(0.3, 0.1), cplx(-0.7, 0.2)), true).f02 > 0.1);
  CHECK_THROWS_AS(instanton_monad({0.0, 0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("BPST density and charge") {
  // |F|^2 = 48 c^4 / (|x|^2 + c^2)^4 integrates to 8 pi^2.
  for (double c : {1.0, 2.0}) {
    const ADHMData d{c, 0.0, 0.0, c};
    for (double r : {0.0, 0.5, 1.7}) {
      const double oracle = 48.0 * std::pow(c, 4) / std::pow(r * r + c * c, 4);
      CHECK(curvature_density(d, Point3(cplx(r * 0.6, 0.0), cplx(0.0, r * 0.8))) == doctest::Approx(oracle).epsilon(1e-9));
    }
    const ChargeResult q = charge(d, 20.0 * c, 12);
    CHECK(q.value == doctest::Approx(1.0).epsilon(0.02));
    CHECK_FALSE(q.insufficient_resolution);
  }
}

TEST_CASE("half-max radius grows linearly with the scale") {
  const double r1 = half_max_radius({1.0, 0.0, 0.0, 1.0});
  CHECK(r1 == doctest::Approx(std::sqrt(std::pow(2.0, 0.25) - 1.0)).epsilon(1e-3));
  CHECK(half_max_radius({2.0, 0.0, 0.0, 2.0}) == doctest::Approx(2.0 * r1).epsilon(1e-3));
}

TEST_CASE("moduli labels are U(1) and sign invariant") {
  const ADHMData d{cplx(0.0, 2.0), 0.0, 0.0, cplx(0.0, 2.0)};
  const FramedModuliPoint m = framed_moduli_point(d);
  const FramedModuliPoint r = framed_moduli_point(d.rotated(0.9));
  CHECK(std::abs(m.normal_form.a1 - r.normal_form.a1) < 1e-12);
  CHECK(std::abs(m.normal_form.b2 - r.normal_form.b2) < 1e-12);
  const auto u = z2_canonical(cplx(-1.0, 2.0), cplx(3.0, 0.0));
  const auto v = z2_canonical(cplx(1.0, -2.0), cplx(-3.0, 0.0));
  CHECK(std::abs(u[0] - v[0]) + std::abs(u[1] - v[1]) < 1e-15);
  CHECK(u[0].real() > 0.0);
}
