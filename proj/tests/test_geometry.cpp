#include <doctest.h>

#include <random>

#include "hym/geometry.hpp"
#include "hym/numerics.hpp"

using namespace hym;

namespace {

CMatrix random_matrix(std::mt19937_64& g, int n) {
  std::normal_distribution<double> N;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(N(g), N(g));
  return m;
}

}  // namespace

TEST_CASE("lambda contraction and mean curvature normalization") {
  Form11 f(3, 2);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) f.at(j, k) = CMatrix::Zero(2, 2);
  f.at(0, 0) = CMatrix::Identity(2, 2);
  f.at(2, 2) = 2.0 * CMatrix::Identity(2, 2);
  f.at(0, 1) = CMatrix::Constant(2, 2, 5.0);  // off-diagonal terms do not contract
  // Lambda(dw_j ^ dw̄_k) = -2i delta_jk, so Lambda f = -2i (1 + 2) I.
  const CMatrix L = lambda_contract(f);
  CHECK(std::abs(L(0, 0) - cplx(0.0, -6.0)) < 1e-15);
  CHECK(std::abs(L(0, 1)) < 1e-15);
}

TEST_CASE("Form11 norm counts each dw ^ dw̄ with norm 2") {
  Form11 f(2, 1);
  f.at(0, 0) = CMatrix::Constant(1, 1, cplx(0.0, 1.0));
  f.at(0, 1) = CMatrix::Zero(1, 1);
  f.at(1, 0) = CMatrix::Zero(1, 1);
  f.at(1, 1) = CMatrix::Constant(1, 1, 2.0);
  CHECK(f.norm2() == doctest::Approx(4.0 * (1.0 + 4.0)));
}

TEST_CASE("conjugation round trip and unitarity defect") {
  std::mt19937_64 g(3);
  Form11 f(3, 2);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) f.at(j, k) = random_matrix(g, 2);
  const CMatrix T = random_matrix(g, 2) + 3.0 * CMatrix::Identity(2, 2);
  const Form11 back = f.conjugated(T).conjugated(T.inverse());
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK((back.at(j, k) - f.at(j, k)).norm() < 1e-12);

  Form11 u(2, 2);
  u.at(0, 0) = random_matrix(g, 2);
  u.at(0, 0) = u.at(0, 0) + u.at(0, 0).adjoint().eval();
  u.at(0, 1) = random_matrix(g, 2);
  u.at(1, 0) = u.at(0, 1).adjoint();
  u.at(1, 1) = CMatrix::Zero(2, 2);
  CHECK(u.unitarity_defect() < 1e-14);
  u.at(1, 0) = -u.at(1, 0);
  CHECK(u.unitarity_defect() > 1.0);
}

TEST_CASE("adjoint with respect to metrics") {
  std::mt19937_64 g(5);
  const CMatrix A = random_matrix(g, 3), B = random_matrix(g, 2);
  const CMatrix hs = A.adjoint() * A + CMatrix::Identity(3, 3);
  const CMatrix hd = B.adjoint() * B + CMatrix::Identity(2, 2);
  CMatrix M(2, 3);
  std::normal_distribution<double> N;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = cplx(N(g), N(g));
  const CMatrix Ms = adjoint_wrt(M, hs, hd);
  CVector u(3), v(2);
  u << 1.0, cplx(0.0, 2.0), -1.0;
  v << cplx(0.5, 0.5), 2.0;
  CHECK(std::abs(inner(M * u, v, hd) - inner(u, Ms * v, hs)) < 1e-12);
}

TEST_CASE("Wirtinger finite differences on polynomials") {
  const MatrixField f = [](const Point3& p) {
    CMatrix m(1, 1);
    m(0, 0) = p.x() * p.x() + std::norm(p.y());
    return m;
  };
  const Point3 p(cplx(0.3, -0.2), cplx(1.0, 0.5), 0.0);
  CHECK(std::abs(fd_derivative(f, p, 0, Wirtinger::holomorphic, 1e-3)(0, 0) - 2.0 * p.x()) < 1e-9);
  CHECK(std::abs(fd_derivative(f, p, 0, Wirtinger::antiholomorphic, 1e-3)(0, 0)) < 1e-9);
  CHECK(std::abs(fd_derivative(f, p, 1, Wirtinger::antiholomorphic, 1e-3)(0, 0) - p.y()) < 1e-9);
  // d_y dbar_y |y|^2 = 1, mixed x-y term vanishes.
  CHECK(std::abs(fd_mixed(f, p, 1, 1, 1e-3)(0, 0) - 1.0) < 1e-6);
  CHECK(std::abs(fd_mixed(f, p, 0, 1, 1e-3)(0, 0)) < 1e-6);
}

TEST_CASE("analytic scalar jets match finite differences") {
  const Point3 p(cplx(0.4, 0.1), cplx(-0.3, 0.7), cplx(0.2, -0.6));
  const ScalarJet s = radial_power(p, 3, 1.0, -0.5);
  const MatrixField f = [](const Point3& q) {
    CMatrix m(1, 1);
    m(0, 0) = std::pow(q.norm2() + 1.0, -0.5);
    return m;
  };
  CHECK(s.v == doctest::Approx(f(p)(0, 0).real()).epsilon(1e-14));
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(s.d[static_cast<size_t>(j)] - fd_derivative(f, p, j, Wirtinger::holomorphic, 1e-4)(0, 0)) < 1e-8);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(s.dd[static_cast<size_t>(j)][static_cast<size_t>(k)] - fd_mixed(f, p, j, k, 1e-3)(0, 0)) < 1e-6);
  }
}

TEST_CASE("positivity predicate") {
  CMatrix h(2, 2);
  h << 2.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 1.0;
  CHECK(is_positive_hermitian(h));
  h(1, 1) = 0.4;
  CHECK_FALSE(is_positive_hermitian(h));
  h(1, 1) = 2.0;
  h(0, 1) = 0.5;
  CHECK_FALSE(is_positive_hermitian(h));
}

TEST_CASE("numerics helpers") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0}, y{3.0, 5.0, 7.0, 9.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  const auto gs = geometric_sequence(1.0, 8.0, 4);
  CHECK(gs[1] == doctest::Approx(2.0));
  CHECK(gs[3] == 8.0);
  CHECK(integrate_gl([](double t) { return t * t * t * t * t * t * t; }, 0.0, 2.0, 4) == doctest::Approx(32.0));
  auto a = stream_engine(7, 1), b = stream_engine(7, 1), c = stream_engine(7, 2);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
}
