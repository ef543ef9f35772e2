#pragma once

#include <random>

#include "hym/adhm.hpp"
#include "hym/monad.hpp"
#include "hym/numerics.hpp"

namespace hym::ansatz {

// The main monad over C^3:
//   C --(x, y, 1, 0)^t--> C^4 --(-y, x, 0, z)--> C
// with h1 = diag(S^{-1/2}, S^{-1/2}, 1, 1), S = |x|^2 + |y|^2 + |z|^2 + 1.
MonadSpec ansatz_spec();

// Regularity scale max(|x| + |y| + |z|^{1/2}, ...) used for finite-difference steps.
double regularity_scale(const Point3& p);

// Closed-form curvature ingredients of the ansatz.
struct Ingredients {
  double alpha_dag_alpha = 0.0;
  double beta_beta_dag = 0.0;
  // (nabla alpha^dag) along dw̄_k: 1x4 row per k.
  std::array<CMatrix, 3> nabla_alpha_dag;
  // (nabla beta) along dw_j: 1x4 row per j.
  std::array<CMatrix, 3> nabla_beta;
  // Chern curvature of (C^4, h1): coefficient of dw_j ^ dw̄_k.
  Form11 ambient_curvature;
};

Ingredients closed_form_ingredients(const Point3& p);

// Fixed representative of the weight: 1/((|x|^2+|y|^2+|z|) |p|) for |p| >= 1,
// 1/|p|^2 below. Throws DomainError at the origin.
double ell(const Point3& p);
// Same, from rho2 = |x|^2 + |y|^2 and t = |z|.
double ell_reduced(double rho2, double t);

// |nabla^k (Lambda F)| divided by its weight: ell for k = 0 and
// |p|^{-1} (|x| + |y| + |z|^{1/2})^{-3} for k = 1.
double mean_curvature_ratio(const Point3& p, int k);

struct Cancellation {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return std::abs(lhs) / rhs; }
};
Cancellation cancellation(const Point3& p);

// sup over random unit fibre elements of (|s1| + |s2|) / min(sqrt(|p|+1), (|p|+1)/(|x|+|y|)).
double section_component_bound(const Point3& p, int samples, std::mt19937_64& rng);

// (|s1| + |s2|) / min(...) for one fibre element s (column of C^4).
double section_component_ratio(const Point3& p, const CVector& s);

struct DecayFit {
  LineFit fit;
  std::vector<double> radii, norms;
};
// Least-squares exponent of |F_E| along r -> r * direction, r geometric in [r_min, r_max].
DecayFit decay_slope(const Point3& direction, double r_min, double r_max, int n_samples);

enum class Chart { x, y };

struct AsymptoticFrame {
  CMatrix sections;  // 4 x 2
  CMatrix gram;      // H0
  double deviation = 0.0;  // spectral norm of H0 - I
};

// y-chart: s1 = (0,0,1,0), s2 = (z/y,0,0,1); x-chart: s2 = (0,-z/x,0,1).
CMatrix chart_frame(const Point3& p, Chart chart);
AsymptoticFrame asymptotic_frame(const Point3& p, Chart chart);

// Twisted monad near the z-axis:
//   C --(x, y, r, 0)^t--> C^4 --(-y, x, 0, r)--> C,  r = ±zeta^{1/2},
//   h = diag(1, 1, S^{1/2}/|zeta|, |zeta| S^{1/2}/|z|^2).
struct TwistedSpec {
  cplx zeta;
  cplx root;
  MonadSpec spec;
};
TwistedSpec twisted_monad(cplx zeta, bool negative_root = false);
CMatrix twisted_frame(const TwistedSpec& t, const Point3& p);

struct ComparisonResult {
  double scaled_sup = 0.0;  // |zeta|^2 * sup difference
  double raw_sup = 0.0;
  int samples = 0;
};

// Gauge-invariant comparison between the twisted monad curvature at (x, y, zeta)
// and the ADHM curvature of (zeta^{1/2}, 0, 0, zeta^{1/2}) at (x, y), over
// samples with |x| + |y| <= |zeta|^{1/2}.
ComparisonResult instanton_comparison(cplx zeta, int samples, std::mt19937_64& rng);

// Pointwise norm of F_twisted - U F_instanton U^H on the (x, y) block, where
// U is the unitary part of the h-orthogonal projection of the instanton fibre
// onto the twisted fibre (both monads share alpha and beta).
double curvature_distance(const CurvatureReport& twisted, const CMatrix& h_twisted,
                          const CurvatureReport& instanton);

adhm::FramedModuliPoint fueter_map(cplx zeta);

// Tangent cone at the origin: 0 -> C^3 --(x, y, z)--> C, h = |p|^{-1} I
// (or the constant metric I when conical_metric is false).
MonadSpec tangent_cone_origin(bool conical_metric = true);
CMatrix cone_frame(const Point3& p);
double cone_residual(const Point3& p, bool conical_metric = true);

// Random unit-sphere direction in C^3.
Point3 random_direction(std::mt19937_64& rng);
// Random point with log-uniform radius in [r_min, r_max].
Point3 random_log_uniform_point(std::mt19937_64& rng, double r_min, double r_max);

}  // namespace hym::ansatz
