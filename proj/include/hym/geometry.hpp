#pragma once

#include <functional>
#include <vector>

#include "hym/types.hpp"

namespace hym {

// Conventions used throughout the library:
//   omega = (i/2) sum_j dw_j ^ dw̄_j  (Euclidean Kähler form),
//   Lambda(dw_j ^ dw̄_k) = -2i delta_jk, so Lambda(i ddbar u) = Delta u / 2
//   with Delta the sum of the real second derivatives.
// Curvature in a holomorphic frame with Gram matrix H (antilinear in the
// first slot) is F = dbar(H^{-1} dH), acting on coefficient vectors.

// Endomorphism-valued (1,1)-form sum_{j,k} c_{jk} dw_j ^ dw̄_k.
class Form11 {
 public:
  Form11() = default;
  Form11(int base_dim, int rank);

  int base_dim() const { return n_; }
  int rank() const { return rank_; }

  CMatrix& at(int j, int k) { return c_[static_cast<size_t>(j * n_ + k)]; }
  const CMatrix& at(int j, int k) const { return c_[static_cast<size_t>(j * n_ + k)]; }

  // Conjugate by an invertible change of basis: c -> T c T^{-1}.
  Form11 conjugated(const CMatrix& T) const;

  // Squared pointwise norm 4 * sum ||c_jk||_HS^2 (each dw_j ^ dw̄_k has norm 2).
  // Entries must be expressed in a unitary basis.
  double norm2() const;

  // Largest ||c_jk - c_kj^H||. Zero for the curvature of a unitary connection, since
  // conj(dw_j ^ dw̄_k) = -dw_k ^ dw̄_j.
  double unitarity_defect() const;

 private:
  int n_ = 0;
  int rank_ = 0;
  std::vector<CMatrix> c_;
};

// Lambda-contraction: -2i * sum_j c_jj. Throws DimensionError on a malformed form.
CMatrix lambda_contract(const Form11& phi);

// Adjoint of M: (src, h_src) -> (dst, h_dst), i.e. h_src^{-1} M^H h_dst.
CMatrix adjoint_wrt(const CMatrix& M, const CMatrix& h_src, const CMatrix& h_dst);

// <u, v>_h = u^H h v.
cplx inner(const CVector& u, const CVector& v, const CMatrix& h);

enum class Wirtinger { holomorphic, antiholomorphic };

using MatrixField = std::function<CMatrix(const Point3&)>;

// Centered second-order Wirtinger derivative along complex coordinate dir.
CMatrix fd_derivative(const MatrixField& f, const Point3& p, int dir, Wirtinger kind, double h);

// Centered second-order approximation of d_j dbar_k f.
CMatrix fd_mixed(const MatrixField& f, const Point3& p, int j, int k, double h);

// Derivative along real axis a (0..5).
CMatrix fd_real(const MatrixField& f, const Point3& p, int a, double h);

// Real-valued scalar with its holomorphic gradient d_j f and Levi form d_j dbar_k f.
// dbar_k f = conj(d_k f) because f is real.
struct ScalarJet {
  double v = 0.0;
  std::array<cplx, 3> d{};
  std::array<std::array<cplx, 3>, 3> dd{};

  static ScalarJet constant(double c);
};

ScalarJet operator*(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator*(double s, const ScalarJet& a);

// (|w|^2 + shift)^exponent over the first n coordinates.
ScalarJet radial_power(const Point3& p, int n, double shift, double exponent);

// |w_j|^{2*exponent} for a single coordinate (w_j != 0 when exponent < 0).
ScalarJet coordinate_power(const Point3& p, int j, double exponent);

// Hermitian metric with d_j h and d_j dbar_k h.
struct MetricJet {
  CMatrix h;
  std::array<CMatrix, 3> d;
  std::array<std::array<CMatrix, 3>, 3> dd;

  static MetricJet constant(const CMatrix& h, int n);
  static MetricJet diagonal(const std::vector<ScalarJet>& entries, int n);

  // dbar_k h.
  CMatrix dbar(int k) const { return d[static_cast<size_t>(k)].adjoint(); }
};

// Jet from finite differences of a metric evaluator.
MetricJet fd_metric_jet(const MatrixField& h, const Point3& p, int n, double step);

// True if M is Hermitian to tol (relative to its size) and positive definite.
bool is_positive_hermitian(const CMatrix& M, double tol = 1e-12);

}  // namespace hym
