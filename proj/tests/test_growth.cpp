#include <doctest.h>

#include <random>

#include "hym/ansatz.hpp"
#include "hym/growth.hpp"

using namespace hym;
using namespace hym::growth;

TEST_CASE("Koszul generators lie in ker (x, y, z) and ker beta") {
  std::mt19937_64 g(5);
  const CMatrix beta = ansatz::ansatz_spec().beta(Point3(0.3, 0.2, 0.1));
  (void)beta;
  for (int i = 0; i < 20; ++i) {
    const Point3 p = ansatz::random_log_uniform_point(g, 0.1, 10.0);
    const KoszulSection z = KoszulSection::t1().times(Poly::monomial(1, 0, 0, cplx(0.0, 1.0)), "ix t1");
    for (const KoszulSection& s : {KoszulSection::t1(), KoszulSection::t2(), KoszulSection::t3(), z}) {
      const CVector w = s.w(p);
      const cplx dot = p.x() * w(0) + p.y() * w(1) + p.z() * w(2);
      CHECK(std::abs(dot) < 1e-12 * (1.0 + p.norm2()) * (1.0 + w.norm()));
      const CMatrix b = ansatz::ansatz_spec().beta(p);
      CHECK((b * s.monad_vector(p)).norm() < 1e-12 * (1.0 + p.norm2()) * (1.0 + w.norm()));
    }
    // x t2 - y t1 + z t3 = 0.
    const CVector rel = p.x() * KoszulSection::t2().w(p) - p.y() * KoszulSection::t1().w(p) + p.z() * KoszulSection::t3().w(p);
    CHECK(rel.norm() < 1e-12 * (1.0 + p.norm2()));
  }
}

TEST_CASE("section norm closed form") {
  // t3 at (1,0,0): monad vector (1, 0, 0, 0), alpha = (1, 0, 1, 0), h1 = diag(2^{-1/2}, 2^{-1/2}, 1, 1).
  // Projecting off alpha leaves |s|^2 = a - a^2 / (a + 1) with a = 2^{-1/2}, i.e. a / (a + 1) = sqrt(2) - 1.
  CHECK(section_norm2(KoszulSection::t3(), Point3(1.0, 0.0, 0.0)) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(section_norm2(KoszulSection::t3(), Point3(0.0, 0.0, 5.0)) == 0.0);
  CHECK(cone_norm2(KoszulSection::t3(), Point3(2.0, 0.0, 0.0)) == doctest::Approx(4.0 / 2.0));
}

TEST_CASE("polynomial algebra") {
  const Poly p = Poly::monomial(1, 0, 0) + Poly::monomial(0, 0, 2, 3.0);
  CHECK(p.degree() == 2);
  CHECK(p(Point3(2.0, 0.0, 1.0)) == cplx(5.0, 0.0));
  CHECK((p * Poly::constant(0.0)).is_zero());
  CHECK(Poly{}.degree() == -1);
}

TEST_CASE("growth degrees of t3 at both ends") {
  GrowthOptions o;
  o.directions = 400;
  const GrowthReport r0 = growth_degree(KoszulSection::t3(), End::origin, default_radii(End::origin), o);
  const GrowthReport ri = growth_degree(KoszulSection::t3(), End::infinity, default_radii(End::infinity), o);
  CHECK(r0.degree == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(ri.degree) < 0.05);
}

TEST_CASE("growth input validation") {
  const KoszulSection zero = KoszulSection::t3().times(Poly::constant(0.0), "0");
  CHECK_THROWS_AS(growth_degree(zero, End::origin, default_radii(End::origin)), DomainError);
  CHECK_THROWS_AS(growth_degree(KoszulSection::t3(), End::origin, {0.01, 0.02, 0.04}), DomainError);
  CHECK_THROWS_AS(growth_degree(KoszulSection::t3(), End::origin, default_radii(End::infinity)), DomainError);
  CHECK_THROWS_AS(growth_degree(KoszulSection::t3(), End::infinity, {10, 20, 30, 41, 50}), DomainError);
}

TEST_CASE("log-convexity for homogeneous and mixed sections") {
  GrowthOptions o;
  o.directions = 400;
  const ConvexityResult h = convexity_check(KoszulSection::t3(), o);
  CHECK(std::abs(h.residual) <= 2.0 * h.stderr_ + 1e-12 * h.i_half * h.i_half);
  const KoszulSection mixed = KoszulSection::t3().times(Poly::constant(1.0) + Poly::monomial(0, 0, 1, 4.0), "(1+4z)t3");
  const ConvexityResult m = convexity_check(mixed, o);
  CHECK(m.residual > 2.0 * m.stderr_);
}
