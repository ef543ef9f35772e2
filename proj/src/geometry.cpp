#include "hym/geometry.hpp"

#include <Eigen/Eigenvalues>

namespace hym {

Form11::Form11(int base_dim, int rank) : n_(base_dim), rank_(rank) {
  if (base_dim < 1 || base_dim > 3 || rank < 0) {
    throw DimensionError("Form11: base dimension must be 1..3 and rank >= 0");
  }
  c_.assign(static_cast<size_t>(n_ * n_), CMatrix::Zero(rank, rank));
}

Form11 Form11::conjugated(const CMatrix& T) const {
  Form11 out(n_, rank_);
  // Fibre ranks are tiny, so an explicit inverse is fine here.
  const CMatrix Tinv = Eigen::PartialPivLU<CMatrix>(T).inverse();
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) out.at(j, k) = T * at(j, k) * Tinv;
  }
  return out;
}

double Form11::norm2() const {
  double s = 0.0;
  for (const auto& m : c_) s += m.squaredNorm();
  return 4.0 * s;
}

double Form11::unitarity_defect() const {
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      worst = std::max(worst, (at(j, k) - at(k, j).adjoint()).norm());
    }
  }
  return worst;
}

CMatrix lambda_contract(const Form11& phi) {
  if (phi.base_dim() < 1) throw DimensionError("lambda_contract: empty form");
  CMatrix out = CMatrix::Zero(phi.rank(), phi.rank());
  for (int j = 0; j < phi.base_dim(); ++j) {
    const CMatrix& c = phi.at(j, j);
    if (c.rows() != phi.rank() || c.cols() != phi.rank()) {
      throw DimensionError("lambda_contract: coefficient has wrong shape");
    }
    out += c;
  }
  return cplx(0.0, -2.0) * out;
}

CMatrix adjoint_wrt(const CMatrix& M, const CMatrix& h_src, const CMatrix& h_dst) {
  if (h_src.rows() != h_src.cols() || h_dst.rows() != h_dst.cols() || M.cols() != h_src.rows() ||
      M.rows() != h_dst.rows()) {
    throw DimensionError("adjoint_wrt: incompatible dimensions");
  }
  Eigen::LLT<CMatrix> llt(h_src);
  if (llt.info() != Eigen::Success) throw DomainError("adjoint_wrt: source metric is not positive definite");
  return llt.solve(M.adjoint() * h_dst);
}

cplx inner(const CVector& u, const CVector& v, const CMatrix& h) { return (u.adjoint() * h * v)(0, 0); }

CMatrix fd_real(const MatrixField& f, const Point3& p, int a, double h) {
  return (f(p.shifted(a, h)) - f(p.shifted(a, -h))) / (2.0 * h);
}

CMatrix fd_derivative(const MatrixField& f, const Point3& p, int dir, Wirtinger kind, double h) {
  if (!(h > 0.0)) throw DomainError("fd_derivative: step must be positive");
  if (dir < 0 || dir > 2) throw DimensionError("fd_derivative: direction out of range");
  CMatrix dre = fd_real(f, p, 2 * dir, h);
  CMatrix dim = fd_real(f, p, 2 * dir + 1, h);
  const cplx s = (kind == Wirtinger::holomorphic) ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
  return 0.5 * (dre + s * dim);
}

namespace {

CMatrix second_real(const MatrixField& f, const Point3& p, const CMatrix& f0, int a, int b, double h) {
  if (a == b) return (f(p.shifted(a, h)) - 2.0 * f0 + f(p.shifted(a, -h))) / (h * h);
  auto at = [&](double sa, double sb) { return f(p.shifted(a, sa * h).shifted(b, sb * h)); };
  return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
}

}  // namespace

CMatrix fd_mixed(const MatrixField& f, const Point3& p, int j, int k, double h) {
  if (!(h > 0.0)) throw DomainError("fd_mixed: step must be positive");
  // d_j dbar_k = 1/4 (d_a - i d_b)(d_c + i d_d)
  const CMatrix f0 = f(p);
  const int a = 2 * j, b = 2 * j + 1, c = 2 * k, d = 2 * k + 1;
  CMatrix ac = second_real(f, p, f0, a, c, h);
  CMatrix ad = second_real(f, p, f0, a, d, h);
  CMatrix bc = second_real(f, p, f0, b, c, h);
  CMatrix bd = second_real(f, p, f0, b, d, h);
  return 0.25 * (ac + I * ad - I * bc + bd);
}

ScalarJet ScalarJet::constant(double c) {
  ScalarJet s;
  s.v = c;
  return s;
}

ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
  ScalarJet out;
  out.v = a.v * b.v;
  for (size_t j = 0; j < 3; ++j) out.d[j] = a.d[j] * b.v + a.v * b.d[j];
  for (size_t j = 0; j < 3; ++j) {
    for (size_t k = 0; k < 3; ++k) {
      out.dd[j][k] = a.dd[j][k] * b.v + a.d[j] * std::conj(b.d[k]) + std::conj(a.d[k]) * b.d[j] +
                     a.v * b.dd[j][k];
    }
  }
  return out;
}

ScalarJet operator*(double s, const ScalarJet& a) {
  ScalarJet out = a;
  out.v *= s;
  for (auto& x : out.d) x *= s;
  for (auto& row : out.dd)
    for (auto& x : row) x *= s;
  return out;
}

ScalarJet radial_power(const Point3& p, int n, double shift, double exponent) {
  // g(S) with S = sum_{j<n} |w_j|^2 + shift:
  //   d_j g = g'(S) w̄_j,  d_j dbar_k g = g''(S) w̄_j w_k + g'(S) delta_jk
  double S = shift;
  for (int j = 0; j < n; ++j) S += std::norm(p[j]);
  const double g = std::pow(S, exponent);
  const double g1 = exponent * std::pow(S, exponent - 1.0);
  const double g2 = exponent * (exponent - 1.0) * std::pow(S, exponent - 2.0);
  ScalarJet out;
  out.v = g;
  for (int j = 0; j < n; ++j) {
    out.d[static_cast<size_t>(j)] = g1 * std::conj(p[j]);
    for (int k = 0; k < n; ++k) {
      out.dd[static_cast<size_t>(j)][static_cast<size_t>(k)] =
          g2 * std::conj(p[j]) * p[k] + (j == k ? g1 : 0.0);
    }
  }
  return out;
}

ScalarJet coordinate_power(const Point3& p, int j, double exponent) {
  const double S = std::norm(p[j]);
  ScalarJet out;
  out.v = std::pow(S, exponent);
  const double g1 = exponent * std::pow(S, exponent - 1.0);
  const double g2 = exponent * (exponent - 1.0) * std::pow(S, exponent - 2.0);
  const auto J = static_cast<size_t>(j);
  out.d[J] = g1 * std::conj(p[j]);
  out.dd[J][J] = g2 * std::norm(p[j]) + g1;
  return out;
}

MetricJet MetricJet::constant(const CMatrix& h, int n) {
  MetricJet m;
  m.h = h;
  for (int j = 0; j < 3; ++j) {
    m.d[static_cast<size_t>(j)] = CMatrix::Zero(h.rows(), h.cols());
    for (int k = 0; k < 3; ++k) m.dd[static_cast<size_t>(j)][static_cast<size_t>(k)] = CMatrix::Zero(h.rows(), h.cols());
  }
  (void)n;
  return m;
}

MetricJet MetricJet::diagonal(const std::vector<ScalarJet>& entries, int n) {
  const auto r = static_cast<Eigen::Index>(entries.size());
  MetricJet m = constant(CMatrix::Zero(r, r), n);
  for (Eigen::Index i = 0; i < r; ++i) {
    const ScalarJet& e = entries[static_cast<size_t>(i)];
    m.h(i, i) = e.v;
    for (size_t j = 0; j < 3; ++j) {
      m.d[j](i, i) = e.d[j];
      for (size_t k = 0; k < 3; ++k) m.dd[j][k](i, i) = e.dd[j][k];
    }
  }
  return m;
}

MetricJet fd_metric_jet(const MatrixField& h, const Point3& p, int n, double step) {
  MetricJet m = MetricJet::constant(h(p), n);
  for (int j = 0; j < n; ++j) {
    m.d[static_cast<size_t>(j)] = fd_derivative(h, p, j, Wirtinger::holomorphic, step);
    for (int k = 0; k < n; ++k) m.dd[static_cast<size_t>(j)][static_cast<size_t>(k)] = fd_mixed(h, p, j, k, step);
  }
  return m;
}

bool is_positive_hermitian(const CMatrix& M, double tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = std::max(1.0, M.norm());
  if ((M - M.adjoint()).norm() > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

}  // namespace hym
