#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hym {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Base error for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent matrix or form dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A precondition on an input value was violated (bad box, bad radii, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at a point where the monad degenerates.
class SingularPointError : public Error {
 public:
  SingularPointError(const std::string& what, double alpha_min_sv, double beta_min_sv)
      : Error(what), alpha_min_sv_(alpha_min_sv), beta_min_sv_(beta_min_sv) {}
  double alpha_min_sv() const { return alpha_min_sv_; }
  double beta_min_sv() const { return beta_min_sv_; }

 private:
  double alpha_min_sv_;
  double beta_min_sv_;
};

// Loss of positivity or a CFL violation inside a time integrator.
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

// A point of C^3 (the third coordinate is ignored for monads over C^2).
// Real coordinates are ordered (Re x, Im x, Re y, Im y, Re z, Im z).
struct Point3 {
  std::array<cplx, 3> w{};

  Point3() = default;
  Point3(cplx x, cplx y, cplx z = 0.0) : w{x, y, z} {}

  cplx& operator[](int j) { return w[static_cast<size_t>(j)]; }
  const cplx& operator[](int j) const { return w[static_cast<size_t>(j)]; }

  cplx x() const { return w[0]; }
  cplx y() const { return w[1]; }
  cplx z() const { return w[2]; }

  double norm2() const { return std::norm(w[0]) + std::norm(w[1]) + std::norm(w[2]); }
  double norm() const { return std::sqrt(norm2()); }

  double real_coord(int a) const {
    const cplx& c = w[static_cast<size_t>(a / 2)];
    return (a % 2 == 0) ? c.real() : c.imag();
  }

  // Shift along real axis a (0..5) by t.
  Point3 shifted(int a, double t) const {
    Point3 q = *this;
    q.w[static_cast<size_t>(a / 2)] += (a % 2 == 0) ? cplx(t, 0.0) : cplx(0.0, t);
    return q;
  }

  Point3 scaled(double s) const { return {w[0] * s, w[1] * s, w[2] * s}; }
};

}  // namespace hym
