#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hym/geometry.hpp"

namespace hym {

// A monad E0 --alpha--> E1 --beta--> E2 of trivial bundles over C^n (n = 2, 3)
// with holomorphic alpha, beta and Hermitian fibre metrics h0, h1, h2.
//
// Derivative evaluators are optional. Missing ones are replaced by centered
// finite differences with step fd_step * regularity_scale(p).
struct MonadSpec {
  std::string name;
  int base_dim = 3;
  int k0 = 0, k1 = 0, k2 = 0;

  MatrixField alpha;  // k1 x k0
  MatrixField beta;   // k2 x k1
  std::function<CMatrix(const Point3&, int)> d_alpha;  // d_j alpha
  std::function<CMatrix(const Point3&, int)> d_beta;   // d_j beta

  MatrixField h0, h1, h2;
  std::function<MetricJet(const Point3&)> h0_jet, h1_jet, h2_jet;

  double fd_step = 1e-3;
  std::function<double(const Point3&)> regularity_scale;

  int cohomology_rank() const { return k1 - k0 - k2; }
  double step_at(const Point3& p) const { return fd_step * (regularity_scale ? regularity_scale(p) : 1.0); }
};

// Copy of spec with every analytic derivative removed.
MonadSpec with_fd_derivatives(MonadSpec spec, double fd_step = 1e-3);

// Everything the curvature formulas need at one point.
struct MonadJet {
  Point3 p;
  int n = 3;
  CMatrix a, b;
  std::array<CMatrix, 3> da, db;
  MetricJet h0, h1, h2;
};

MonadJet evaluate_jet(const MonadSpec& spec, const Point3& p);

// Near-singular threshold on the smallest singular value.
inline constexpr double kSingularThreshold = 1e-8;

struct ValidityReport {
  double alpha_min_sv = 0.0;  // +inf when k0 = 0
  double beta_min_sv = 0.0;   // smallest singular value of beta^dagger
  double composition_residual = 0.0;  // ||beta alpha||
  bool alpha_injective = false;
  bool beta_surjective = false;
  bool complex_ok = false;  // residual <= 1e-12 * scale
  bool regular() const { return alpha_injective && beta_surjective; }
};

ValidityReport validate_monad(const MonadSpec& spec, const Point3& p);

// Orthonormal (w.r.t. h1) basis of ker beta ∩ ker alpha^dagger and the
// h1-orthogonal projector onto it.
struct CohomFiber {
  Point3 p;
  CMatrix basis;      // k1 x r
  CMatrix projector;  // k1 x k1
  int rank = 0;
};

CohomFiber cohomology_frame(const MonadSpec& spec, const Point3& p);
CohomFiber cohomology_frame(const MonadJet& jet);

// Gram matrix h1(s_i', s_j') of sections of ker beta after projecting off Im alpha.
// Sections are the columns of `sections`.
CMatrix induced_metric(const MonadSpec& spec, const Point3& p, const CMatrix& sections);

// Projection s -> s - alpha (alpha^dagger alpha)^{-1} alpha^dagger s.
CMatrix project_off_image(const MonadJet& jet, const CMatrix& sections);

struct CurvatureReport {
  CohomFiber fiber;
  Form11 F;                 // (1,1) part in the fibre basis
  std::vector<CMatrix> F20; // coefficient of dw_j ^ dw_l, j < l (lexicographic)
  std::vector<CMatrix> F02; // coefficient of dw̄_j ^ dw̄_l, j < l
  CMatrix mean;             // i Lambda F
  double norm_F = 0.0;      // full pointwise norm, including (2,0)+(0,2)
  double norm_mean = 0.0;   // ||i Lambda F||_HS
  double norm_F20 = 0.0;
  double norm_F02 = 0.0;
};

struct CurvatureOptions {
  // Also compute the (2,0)/(0,2) parts through the projector route.
  bool mixed_type_parts = true;
};

// Curvature of the induced connection on the cohomology bundle via the
// second-fundamental-form formula
//   <F s, s'> = <F1 s, s'> - <(beta beta^dag)^{-1} (nabla beta) s, (nabla beta) s'>
//               - <(alpha^dag alpha)^{-1} (nabla alpha^dag) s, (nabla alpha^dag) s'>.
CurvatureReport curvature(const MonadSpec& spec, const Point3& p, const CurvatureOptions& opts = {});

// Independent route: curvature of P nabla1 on Im P with P the h1-orthogonal
// projector onto (Im alpha + Im beta^dag)^perp, F = P F1 P + P dP ^ dP P.
// Valid for any pair (alpha, beta), whether or not beta alpha = 0.
struct ProjectedCurvature {
  CohomFiber fiber;
  Form11 F11;
  std::vector<CMatrix> F20, F02;
};
ProjectedCurvature projected_curvature(const MonadSpec& spec, const Point3& p);

// i Lambda F_E extended by zero to E1: B M B^H h1 (frame independent).
CMatrix ambient_mean_curvature(const MonadSpec& spec, const Point3& p);

// |nabla_E (Lambda F_E)| using finite differences of the ambient extension.
double mean_curvature_gradient_norm(const MonadSpec& spec, const Point3& p, double step);

// Holomorphic local frame of the cohomology bundle, columns in ker beta.
using HolomorphicFrame = std::function<CMatrix(const Point3&)>;

struct FdCheckResult {
  double relative_error = 0.0;
  double max_entry = 0.0;
  Form11 fd_curvature;  // in the orthonormal fibre basis
};

// Compares curvature() against dbar(H^{-1} dH) of the induced Gram matrix of
// `frame`, differentiated with step h.
FdCheckResult curvature_fd_check(const MonadSpec& spec, const Point3& p, const HolomorphicFrame& frame, double h);

// Index helper for the (2,0)/(0,2) vectors.
int pair_index(int j, int l, int n);

}  // namespace hym
