#include <doctest.h>

#include "hym/adhm.hpp"
#include "hym/ansatz.hpp"
#include "hym/monad.hpp"

using namespace hym;

TEST_CASE("ansatz monad is regular away from the origin") {
  const MonadSpec s = ansatz::ansatz_spec();
  const Point3 p(cplx(0.3, 0.2), cplx(0.9, -0.4), cplx(0.5, 0.1));
  const ValidityReport v = validate_monad(s, p);
  CHECK(v.regular());
  CHECK(v.complex_ok);
  CHECK(s.cohomology_rank() == 2);
  const CohomFiber f = cohomology_frame(s, p);
  CHECK(f.rank == 2);
  CHECK((f.basis.adjoint() * s.h1(p) * f.basis - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK_THROWS_AS(cohomology_frame(s, Point3(0.0, 0.0, 0.0)), SingularPointError);
}

TEST_CASE("second fundamental form and projector routes agree") {
  const MonadSpec s = ansatz::ansatz_spec();
  for (const Point3& p : {Point3(cplx(0.3, 0.2), cplx(0.9, -0.4), cplx(0.5, 0.1)), Point3(3.0, cplx(0.0, -2.0), 7.0)}) {
    const CurvatureReport r = curvature(s, p);
    const ProjectedCurvature q = projected_curvature(s, p);
    // Both are expressed in (possibly different) orthonormal fibre bases; compare invariants.
    const CMatrix T = q.fiber.basis.adjoint() * s.h1(p) * r.fiber.basis;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK((T * r.F.at(j, k) * T.adjoint() - q.F11.at(j, k)).norm() < 1e-10);
    CHECK(r.norm_F20 < 1e-12);
    CHECK(r.norm_F02 < 1e-12);
    CHECK(r.F.unitarity_defect() < 1e-12);
  }
}

TEST_CASE("finite-difference derivatives reproduce analytic jets") {
  const MonadSpec s = ansatz::ansatz_spec();
  const MonadSpec sf = with_fd_derivatives(s);
  const Point3 p(cplx(1.1, -0.3), cplx(0.4, 0.6), cplx(-0.8, 0.2));
  CurvatureOptions o;
  o.mixed_type_parts = false;
  const CurvatureReport a = curvature(s, p, o), b = curvature(sf, p, o);
  CHECK(std::abs(a.norm_F - b.norm_F) < 1e-5 * a.norm_F);
  CHECK(std::abs(a.norm_mean - b.norm_mean) < 1e-5 * a.norm_mean);
}

TEST_CASE("ambient mean curvature is frame independent") {
  const MonadSpec s = ansatz::ansatz_spec();
  const Point3 p(cplx(0.7, 0.1), cplx(-0.2, 0.5), cplx(0.3, 0.3));
  const CurvatureReport r = curvature(s, p);
  const CMatrix amb = ambient_mean_curvature(s, p);
  const CMatrix B = r.fiber.basis;
  CHECK((amb - B * r.mean * B.adjoint() * s.h1(p)).norm() < 1e-12);
  // Extended by zero on Im alpha.
  CHECK((amb * s.alpha(p)).norm() < 1e-12);
}

TEST_CASE("induced metric rejects sections outside ker beta") {
  const MonadSpec s = ansatz::ansatz_spec();
  const Point3 p(1.0, 2.0, 3.0);
  CMatrix bad = CMatrix::Zero(4, 1);
  bad(0, 0) = 1.0;
  CHECK_THROWS_AS(induced_metric(s, p, bad), DomainError);
  CMatrix wrong = CMatrix::Zero(3, 1);
  CHECK_THROWS_AS(induced_metric(s, p, wrong), DimensionError);
}

TEST_CASE("second fundamental form curvature matches Chern curvature of the induced metric") {
  const MonadSpec s = ansatz::ansatz_spec();
  const Point3 p(cplx(0.3, 0.2), cplx(0.9, -0.4), cplx(0.5, 0.1));
  const HolomorphicFrame fr = [](const Point3& q) { return ansatz::chart_frame(q, ansatz::Chart::y); };
  const double e1 = curvature_fd_check(s, p, fr, 1e-3).relative_error;
  const double e2 = curvature_fd_check(s, p, fr, 2e-3).relative_error;
  CHECK(e1 < 1e-3);
  CHECK(std::log2(e2 / e1) == doctest::Approx(2.0).epsilon(0.1));
}
