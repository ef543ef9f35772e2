#pragma once

#include <optional>

#include "hym/monad.hpp"

namespace hym::adhm {

// One-instanton ADHM parameters over C^2.
struct ADHMData {
  cplx a1{}, a2{}, b1{}, b2{};

  bool degenerate(double tol = 1e-14) const;
  // U(1) action (a e^{it}, b e^{-it}).
  ADHMData rotated(double theta) const;
};

struct Residual {
  cplx complex_part;   // a1 b1 + a2 b2
  double real_part;    // |a|^2 - |b|^2
  bool degenerate;
  bool valid(double tol = 1e-12) const;
};

Residual adhm_residual(const ADHMData& d);

// alpha = (x, y, a1, a2)^t, beta = (-y, x, b1, b2), trivial metrics, k = (1, 4, 1).
// Throws DomainError on degenerate data.
MonadSpec instanton_monad(const ADHMData& d);

// Same monad without the validity preconditions (used for negative controls).
MonadSpec instanton_monad_unchecked(const ADHMData& d);

// Holomorphic frame of ker beta, independent modulo Im alpha.
CMatrix instanton_frame(const ADHMData& d, const Point3& p);

struct ASDResidual {
  double mean = 0.0;  // |i Lambda F|
  double f02 = 0.0;
  double f20 = 0.0;
  double total() const { return mean + f02 + f20; }
};

ASDResidual asd_check(const ADHMData& d, const Point3& p, bool analytic = true);

// Pointwise |F|^2.
double curvature_density(const ADHMData& d, const Point3& p);

struct ChargeResult {
  double value = 0.0;      // includes the analytic tail beyond R
  double tail = 0.0;       // tail estimate c / (16 R^4)
  double tail_fraction = 0.0;
  bool insufficient_resolution = false;  // tail > 5% of value
};

// (1/8 pi^2) int |F|^2 over C^2 with a radial-angular product rule on dyadic
// radial panels out to R, plus the O(R^-4) tail. n controls the angular and
// per-panel resolution.
ChargeResult charge(const ADHMData& d, double R, int n);

double curvature_scale(const ADHMData& d);

// Radius at which the angular-mean curvature density falls to half its value at 0.
double half_max_radius(const ADHMData& d);

// U(1)-normal form with a1 real >= 0 (a2 when a1 = 0), plus the C^2/Z2 label
// for the (c, 0, 0, c) sub-family.
struct FramedModuliPoint {
  ADHMData normal_form;
  bool cone_point = false;
  std::optional<std::array<cplx, 2>> label;  // canonical representative mod ±
};

FramedModuliPoint framed_moduli_point(const ADHMData& d);

// Canonical representative of (u, v) mod ±: first nonzero coordinate in the
// half plane Re > 0 or (Re = 0, Im > 0).
std::array<cplx, 2> z2_canonical(cplx u, cplx v);

}  // namespace hym::adhm
