#pragma once

#include <cstdint>
#include <vector>

#include "hym/types.hpp"

namespace hym::potential {

// Stratified Monte Carlo parameters. The integral is reduced by the SU(2) x U(1)
// symmetry of ell to u = (|(x', y')|, Re z', Im z') with p at q* = (|(x,y)|, |z|, 0);
// shell k covers |u - q*| in [2^k, 2^{k+1}). The core |u - q*| < max(core_radius,
// 2^k_min) is excluded and bounded analytically.
struct MCParams {
  int samples_per_shell = 4000;
  int k_min = -8;
  int k_max = 12;
  double core_radius = 0.0;
  std::uint64_t seed = 1;

  // Shells from about 1e-3 |p| to 2^13 |p|.
  static MCParams for_point(const Point3& p, int samples_per_shell, std::uint64_t seed);
};

struct ShellContribution {
  int k = 0;
  double value = 0.0;
  double stderr_ = 0.0;
};

struct GValue {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::vector<ShellContribution> shells;
  double core_bound = 0.0;   // analytic bound on the excluded core, not added
  double outer_tail = 0.0;   // beyond the last shell, added
};

// Average of |P - X'|^{-4}-type kernel over the 3-sphere of X' directions:
// <(D - B cos)^{-2}> = 2 / (s (D + s)), s = sqrt(D^2 - B^2), B = 2 a rho.
double sphere_kernel(double a, double b, double rho, double zr, double zi);

// G(p) = int ell(x') / |p - x'|^4 dVol(x') over C^3.
GValue eval_G(const Point3& p, const MCParams& mc);
// Same with p given by a = |(x, y)| and b = |z|.
GValue eval_G_reduced(double a, double b, const MCParams& mc);

struct LaplacianCheck {
  double lhs = 0.0;       // int G Lap(phi)
  double rhs = 0.0;       // -4 pi^3 int ell phi
  double ratio = 0.0;     // mean over replicas of lhs / rhs
  double ratio_stderr = 0.0;
  int replicas = 0;
};

struct LaplacianOptions {
  int nodes = 8;        // Gauss nodes per polar axis (exact for the bump weights)
  int min_replicas = 6;
  int max_replicas = 48;
  double target_stderr = 0.03;  // replicas are added until the ratio stderr is below this
  int samples_per_shell = 3000;
  std::uint64_t seed = 1;
  bool zero_bump = false;  // phi = 0 (both sides vanish)
};

// Weak-form check of Lap G = -4 pi^3 ell against the SU(2) x U(1)-invariant bump
// phi = (1 - s)^6, s = ((|(x,y)| - a0)^2 + (|z| - b0)^2) / radius^2.
LaplacianCheck laplacian_weak_check(const Point3& center, double radius, const LaplacianOptions& opts);

struct EnvelopeResult {
  double sup = 0.0;
  std::vector<double> ratios;
  std::vector<double> values;
  bool all_positive = true;
};

// Barrier envelope |p|^{-1} max(log(|p| / (|x| + |y| + |z|^{1/2})), 1).
double envelope(const Point3& p);

EnvelopeResult barrier_envelope_check(const std::vector<Point3>& points, int samples_per_shell, std::uint64_t seed);

// Sample points with log-uniform radius in [r_min, r_max]; near_axis places them at
// distance 0.1 |z|^{1/2} from the z-axis.
std::vector<Point3> envelope_points(int n, double r_min, double r_max, bool near_axis, std::uint64_t seed);

}  // namespace hym::potential
