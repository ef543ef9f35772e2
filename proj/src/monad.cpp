#include "hym/monad.hpp"

#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hym {

namespace {

CMatrix eval_or_empty(const MatrixField& f, const Point3& p, Eigen::Index rows, Eigen::Index cols) {
  if (rows == 0 || cols == 0) return CMatrix(rows, cols);
  return f(p);
}

MetricJet metric_jet(const MatrixField& h, const std::function<MetricJet(const Point3&)>& jet, const Point3& p,
                     int n, double step, int dim) {
  if (dim == 0) return MetricJet::constant(CMatrix(0, 0), n);
  if (jet) return jet(p);
  return fd_metric_jet(h, p, n, step);
}

// h = L L^H; returns L^{-H} as used by the whitening A -> L_dst^H A L_src^{-H}.
CMatrix cholesky_factor(const CMatrix& h) {
  Eigen::LLT<CMatrix> llt(h);
  if (llt.info() != Eigen::Success) throw DomainError("metric is not positive definite");
  return llt.matrixL();
}

double min_singular_value(const CMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues().minCoeff();
}

ValidityReport validate_jet(const MonadJet& jet) {
  ValidityReport r;
  const CMatrix L1 = cholesky_factor(jet.h1.h);
  if (jet.a.cols() > 0) {
    const CMatrix L0 = cholesky_factor(jet.h0.h);
    CMatrix Aw = L1.adjoint() * jet.a;
    Aw = L0.adjoint().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(Aw);
    r.alpha_min_sv = min_singular_value(Aw);
  } else {
    r.alpha_min_sv = std::numeric_limits<double>::infinity();
  }
  if (jet.b.rows() > 0) {
    const CMatrix L2 = cholesky_factor(jet.h2.h);
    CMatrix Bw = L2.adjoint() * jet.b;
    Bw = L1.adjoint().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(Bw);
    r.beta_min_sv = min_singular_value(Bw);
  } else {
    r.beta_min_sv = std::numeric_limits<double>::infinity();
  }
  if (jet.a.cols() > 0 && jet.b.rows() > 0) {
    const double scale = std::max(1.0, jet.a.norm() * jet.b.norm());
    r.composition_residual = (jet.b * jet.a).norm();
    r.complex_ok = r.composition_residual <= 1e-12 * scale;
  } else {
    r.complex_ok = true;
  }
  r.alpha_injective = r.alpha_min_sv >= kSingularThreshold;
  r.beta_surjective = r.beta_min_sv >= kSingularThreshold;
  return r;
}

CMatrix beta_dagger(const MonadJet& jet) {
  Eigen::LLT<CMatrix> llt(jet.h1.h);
  return llt.solve(jet.b.adjoint() * jet.h2.h);
}

// [alpha | beta^dagger]
CMatrix complement_span(const MonadJet& jet) {
  CMatrix K(jet.a.rows() == 0 ? jet.b.cols() : jet.a.rows(), jet.a.cols() + jet.b.rows());
  if (jet.a.cols() > 0) K.leftCols(jet.a.cols()) = jet.a;
  if (jet.b.rows() > 0) K.rightCols(jet.b.rows()) = beta_dagger(jet);
  return K;
}

CMatrix connection_form(const MetricJet& m, int j) {
  if (m.h.rows() == 0) return m.h;
  Eigen::LLT<CMatrix> llt(m.h);
  return llt.solve(m.d[static_cast<size_t>(j)]);
}

// Chern curvature coefficient of E1: -dbar_k(h^{-1} d_j h).
CMatrix ambient_curvature(const MetricJet& m, int j, int k) {
  Eigen::LLT<CMatrix> llt(m.h);
  const auto J = static_cast<size_t>(j);
  const auto K = static_cast<size_t>(k);
  CMatrix hinv_dj = llt.solve(m.d[J]);
  CMatrix hinv_dbark = llt.solve(m.dbar(k));
  return -llt.solve(m.dd[J][K]) + hinv_dbark * hinv_dj;
}

}  // namespace

int pair_index(int j, int l, int n) {
  int idx = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (a == j && b == l) return idx;
      ++idx;
    }
  }
  throw DimensionError("pair_index: expected j < l < n");
}

MonadSpec with_fd_derivatives(MonadSpec spec, double fd_step) {
  spec.d_alpha = nullptr;
  spec.d_beta = nullptr;
  spec.h0_jet = nullptr;
  spec.h1_jet = nullptr;
  spec.h2_jet = nullptr;
  spec.fd_step = fd_step;
  spec.name += " (finite differences)";
  return spec;
}

MonadJet evaluate_jet(const MonadSpec& spec, const Point3& p) {
  MonadJet jet;
  jet.p = p;
  jet.n = spec.base_dim;
  const double step = spec.step_at(p);
  jet.a = eval_or_empty(spec.alpha, p, spec.k1, spec.k0);
  jet.b = eval_or_empty(spec.beta, p, spec.k2, spec.k1);
  if (jet.a.rows() != spec.k1 || jet.a.cols() != spec.k0 || jet.b.rows() != spec.k2 || jet.b.cols() != spec.k1) {
    throw DimensionError("monad '" + spec.name + "': alpha/beta shapes disagree with fibre dimensions");
  }
  for (int j = 0; j < 3; ++j) {
    const auto J = static_cast<size_t>(j);
    if (j >= spec.base_dim) {
      jet.da[J] = CMatrix::Zero(spec.k1, spec.k0);
      jet.db[J] = CMatrix::Zero(spec.k2, spec.k1);
      continue;
    }
    if (spec.k0 == 0) {
      jet.da[J] = CMatrix(spec.k1, 0);
    } else {
      jet.da[J] = spec.d_alpha ? spec.d_alpha(p, j) : fd_derivative(spec.alpha, p, j, Wirtinger::holomorphic, step);
    }
    jet.db[J] = spec.d_beta ? spec.d_beta(p, j) : fd_derivative(spec.beta, p, j, Wirtinger::holomorphic, step);
  }
  jet.h0 = metric_jet(spec.h0, spec.h0_jet, p, spec.base_dim, step, spec.k0);
  jet.h1 = metric_jet(spec.h1, spec.h1_jet, p, spec.base_dim, step, spec.k1);
  jet.h2 = metric_jet(spec.h2, spec.h2_jet, p, spec.base_dim, step, spec.k2);
  return jet;
}

ValidityReport validate_monad(const MonadSpec& spec, const Point3& p) {
  MonadJet jet;
  jet.p = p;
  jet.n = spec.base_dim;
  jet.a = eval_or_empty(spec.alpha, p, spec.k1, spec.k0);
  jet.b = eval_or_empty(spec.beta, p, spec.k2, spec.k1);
  jet.h0.h = spec.k0 > 0 ? spec.h0(p) : CMatrix(0, 0);
  jet.h1.h = spec.h1(p);
  jet.h2.h = spec.k2 > 0 ? spec.h2(p) : CMatrix(0, 0);
  return validate_jet(jet);
}

CohomFiber cohomology_frame(const MonadJet& jet) {
  const ValidityReport v = validate_jet(jet);
  if (!v.regular()) {
    throw SingularPointError("cohomology_frame: singular point of the monad", v.alpha_min_sv, v.beta_min_sv);
  }
  const CMatrix& h1 = jet.h1.h;
  const Eigen::Index k1 = h1.rows();
  const CMatrix K = complement_span(jet);
  const CMatrix W = K.adjoint() * h1;
  const CMatrix G = W * K;
  Eigen::LDLT<CMatrix> ldlt(G);
  CMatrix P = CMatrix::Identity(k1, k1) - K * ldlt.solve(W);

  CohomFiber fib;
  fib.p = jet.p;
  fib.projector = P;
  fib.rank = static_cast<int>(k1 - K.cols());

  // Modified Gram-Schmidt (h1 inner product) over P e_1, P e_2, ... in index order.
  double scale = 0.0;
  for (Eigen::Index i = 0; i < k1; ++i) scale = std::max(scale, std::sqrt(std::abs(inner(P.col(i), P.col(i), h1))));
  std::vector<CVector> kept;
  for (Eigen::Index i = 0; i < k1 && static_cast<int>(kept.size()) < fib.rank; ++i) {
    CVector v = P.col(i);
    for (const auto& q : kept) v -= inner(q, v, h1) * q;
    for (const auto& q : kept) v -= inner(q, v, h1) * q;
    const double nv = std::sqrt(std::abs(inner(v, v, h1)));
    if (nv > 1e-6 * scale) kept.push_back(v / nv);
  }
  if (static_cast<int>(kept.size()) != fib.rank) {
    throw SingularPointError("cohomology_frame: fibre rank deficit", v.alpha_min_sv, v.beta_min_sv);
  }
  fib.basis.resize(k1, fib.rank);
  for (int c = 0; c < fib.rank; ++c) fib.basis.col(c) = kept[static_cast<size_t>(c)];
  return fib;
}

CohomFiber cohomology_frame(const MonadSpec& spec, const Point3& p) {
  MonadJet jet;
  jet.p = p;
  jet.n = spec.base_dim;
  jet.a = eval_or_empty(spec.alpha, p, spec.k1, spec.k0);
  jet.b = eval_or_empty(spec.beta, p, spec.k2, spec.k1);
  jet.h0.h = spec.k0 > 0 ? spec.h0(p) : CMatrix(0, 0);
  jet.h1.h = spec.h1(p);
  jet.h2.h = spec.k2 > 0 ? spec.h2(p) : CMatrix(0, 0);
  return cohomology_frame(jet);
}

CMatrix project_off_image(const MonadJet& jet, const CMatrix& sections) {
  if (jet.a.cols() == 0) return sections;
  const CMatrix W = jet.a.adjoint() * jet.h1.h;
  const CMatrix A = W * jet.a;
  return sections - jet.a * A.ldlt().solve(W * sections);
}

CMatrix induced_metric(const MonadSpec& spec, const Point3& p, const CMatrix& sections) {
  MonadJet jet;
  jet.p = p;
  jet.a = eval_or_empty(spec.alpha, p, spec.k1, spec.k0);
  jet.b = eval_or_empty(spec.beta, p, spec.k2, spec.k1);
  jet.h1.h = spec.h1(p);
  if (sections.rows() != spec.k1) throw DimensionError("induced_metric: sections must have k1 rows");
  for (Eigen::Index c = 0; c < sections.cols(); ++c) {
    const double res = (jet.b * sections.col(c)).norm();
    const double scale = std::max(1.0, jet.b.norm() * sections.col(c).norm());
    if (res > 1e-10 * scale) throw DomainError("induced_metric: section is not in ker beta");
  }
  const CMatrix S = project_off_image(jet, sections);
  CMatrix H = S.adjoint() * jet.h1.h * S;
  return 0.5 * (H + H.adjoint());
}

CurvatureReport curvature(const MonadSpec& spec, const Point3& p, const CurvatureOptions& opts) {
  const MonadJet jet = evaluate_jet(spec, p);
  CurvatureReport rep;
  rep.fiber = cohomology_frame(jet);
  const int n = jet.n;
  const int r = rep.fiber.rank;
  const CMatrix& B = rep.fiber.basis;
  const CMatrix& h1 = jet.h1.h;
  Eigen::LLT<CMatrix> h1llt(h1);
  const CMatrix BtH = B.adjoint() * h1;

  std::array<CMatrix, 3> nabla_a, nabla_b;
  for (int j = 0; j < n; ++j) {
    const auto J = static_cast<size_t>(j);
    const CMatrix th1 = connection_form(jet.h1, j);
    if (jet.a.cols() > 0) {
      nabla_a[J] = jet.da[J] + th1 * jet.a - jet.a * connection_form(jet.h0, j);
    }
    if (jet.b.rows() > 0) {
      nabla_b[J] = jet.db[J] + connection_form(jet.h2, j) * jet.b - jet.b * th1;
    }
  }

  // alpha^dag alpha ~ a^H h1 a ; beta beta^dag ~ b h1^{-1} b^H (the h0, h2 factors cancel)
  Eigen::LDLT<CMatrix> A_ldlt;
  Eigen::LDLT<CMatrix> C_ldlt;
  if (jet.a.cols() > 0) A_ldlt.compute(jet.a.adjoint() * h1 * jet.a);
  if (jet.b.rows() > 0) C_ldlt.compute(jet.b * h1llt.solve(jet.b.adjoint()));

  rep.F = Form11(n, r);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto J = static_cast<size_t>(j);
      const auto Kk = static_cast<size_t>(k);
      CMatrix T = ambient_curvature(jet.h1, j, k) * B;
      if (jet.a.cols() > 0) {
        // nabla_j alpha (alpha^dag alpha)^{-1} (nabla_k alpha)^dag
        T += nabla_a[J] * A_ldlt.solve(nabla_a[Kk].adjoint() * h1 * B);
      }
      if (jet.b.rows() > 0) {
        // (nabla_k beta)^dag (beta beta^dag)^{-1} nabla_j beta
        T -= h1llt.solve(nabla_b[Kk].adjoint() * C_ldlt.solve(nabla_b[J] * B));
      }
      rep.F.at(j, k) = BtH * T;
    }
  }
  rep.mean = cplx(0.0, 1.0) * lambda_contract(rep.F);
  rep.norm_mean = rep.mean.norm();

  double n2 = rep.F.norm2();
  if (opts.mixed_type_parts && n > 1) {
    ProjectedCurvature pc = projected_curvature(spec, p);
    rep.F20 = pc.F20;
    rep.F02 = pc.F02;
    // The projector route uses its own fibre basis; the norms below are basis independent.
    double s20 = 0.0, s02 = 0.0;
    for (const auto& m : rep.F20) s20 += m.squaredNorm();
    for (const auto& m : rep.F02) s02 += m.squaredNorm();
    rep.norm_F20 = 2.0 * std::sqrt(s20);
    rep.norm_F02 = 2.0 * std::sqrt(s02);
    n2 += 4.0 * (s20 + s02);
  }
  rep.norm_F = std::sqrt(n2);
  return rep;
}

ProjectedCurvature projected_curvature(const MonadSpec& spec, const Point3& p) {
  const MonadJet jet = evaluate_jet(spec, p);
  ProjectedCurvature out;
  out.fiber = cohomology_frame(jet);
  const int n = jet.n;
  const int r = out.fiber.rank;
  const CMatrix& h1 = jet.h1.h;
  const Eigen::Index k1 = h1.rows();
  Eigen::LLT<CMatrix> h1llt(h1);
  const CMatrix h1inv = h1llt.solve(CMatrix::Identity(k1, k1));

  const CMatrix K = complement_span(jet);
  const Eigen::Index ka = jet.a.cols();
  const Eigen::Index kb = jet.b.rows();
  const CMatrix bH = jet.b.adjoint();

  // d_j K and dbar_k K. alpha is holomorphic; beta^dag = h1^{-1} b^H h2 is not.
  std::array<CMatrix, 3> dK, dbK;
  for (int j = 0; j < n; ++j) {
    const auto J = static_cast<size_t>(j);
    dK[J] = CMatrix::Zero(k1, K.cols());
    dbK[J] = CMatrix::Zero(k1, K.cols());
    if (ka > 0) dK[J].leftCols(ka) = jet.da[J];
    if (kb > 0) {
      const CMatrix& h2 = jet.h2.h;
      dK[J].rightCols(kb) = -h1inv * jet.h1.d[J] * h1inv * bH * h2 + h1inv * bH * jet.h2.d[J];
      dbK[J].rightCols(kb) = -h1inv * jet.h1.dbar(j) * h1inv * bH * h2 + h1inv * jet.db[J].adjoint() * h2 +
                             h1inv * bH * jet.h2.dbar(j);
    }
  }

  const CMatrix W = K.adjoint() * h1;
  const CMatrix G = W * K;
  Eigen::LDLT<CMatrix> Gl(G);
  const CMatrix P = CMatrix::Identity(k1, k1) - K * Gl.solve(W);

  auto dQ = [&](const CMatrix& DK, const CMatrix& DW) {
    const CMatrix DG = DW * K + W * DK;
    return CMatrix(DK * Gl.solve(W) - K * Gl.solve(DG * Gl.solve(W)) + K * Gl.solve(DW));
  };

  std::array<CMatrix, 3> DP, DbP;
  for (int j = 0; j < n; ++j) {
    const auto J = static_cast<size_t>(j);
    const CMatrix dW = dbK[J].adjoint() * h1 + K.adjoint() * jet.h1.d[J];
    const CMatrix dbW = dK[J].adjoint() * h1 + K.adjoint() * jet.h1.dbar(j);
    const CMatrix th = h1llt.solve(jet.h1.d[J]);
    DP[J] = -dQ(dK[J], dW) + th * P - P * th;
    DbP[J] = -dQ(dbK[J], dbW);
  }

  const CMatrix& B = out.fiber.basis;
  const CMatrix BtH = B.adjoint() * h1;
  out.F11 = Form11(n, r);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto J = static_cast<size_t>(j);
      const auto Kk = static_cast<size_t>(k);
      CMatrix X = ambient_curvature(jet.h1, j, k) + DP[J] * DbP[Kk] - DbP[Kk] * DP[J];
      out.F11.at(j, k) = BtH * X * B;
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const auto J = static_cast<size_t>(j);
      const auto L = static_cast<size_t>(l);
      out.F20.push_back(BtH * (DP[J] * DP[L] - DP[L] * DP[J]) * B);
      out.F02.push_back(BtH * (DbP[J] * DbP[L] - DbP[L] * DbP[J]) * B);
    }
  }
  return out;
}

CMatrix ambient_mean_curvature(const MonadSpec& spec, const Point3& p) {
  CurvatureOptions opts;
  opts.mixed_type_parts = false;
  const CurvatureReport rep = curvature(spec, p, opts);
  const CMatrix& B = rep.fiber.basis;
  return B * rep.mean * B.adjoint() * spec.h1(p);
}

double mean_curvature_gradient_norm(const MonadSpec& spec, const Point3& p, double step) {
  if (!(step > 0.0)) throw DomainError("mean_curvature_gradient_norm: step must be positive");
  const MonadJet jet = evaluate_jet(spec, p);
  const CohomFiber fib = cohomology_frame(jet);
  const CMatrix Mt = ambient_mean_curvature(spec, p);
  const CMatrix BtH = fib.basis.adjoint() * jet.h1.h;
  Eigen::LLT<CMatrix> llt(jet.h1.h);
  double s = 0.0;
  for (int a = 0; a < 2 * spec.base_dim; ++a) {
    const CMatrix dM =
        (ambient_mean_curvature(spec, p.shifted(a, step)) - ambient_mean_curvature(spec, p.shifted(a, -step))) /
        (2.0 * step);
    CMatrix Theta = llt.solve(jet.h1.d[static_cast<size_t>(a / 2)]);
    if (a % 2 == 1) Theta *= I;
    const CMatrix cov = dM + Theta * Mt - Mt * Theta;
    s += (BtH * cov * fib.basis).squaredNorm();
  }
  return std::sqrt(s);
}

FdCheckResult curvature_fd_check(const MonadSpec& spec, const Point3& p, const HolomorphicFrame& frame, double h) {
  if (!(h > 0.0)) throw DomainError("curvature_fd_check: step must be positive");
  CurvatureOptions opts;
  opts.mixed_type_parts = false;
  const CurvatureReport rep = curvature(spec, p, opts);
  const int n = spec.base_dim;

  const MatrixField H = [&](const Point3& q) { return induced_metric(spec, q, frame(q)); };
  const CMatrix H0 = H(p);
  if (!is_positive_hermitian(H0, 1e-10)) throw DomainError("curvature_fd_check: frame degenerates at p");
  Eigen::LLT<CMatrix> Hl(H0);

  std::array<CMatrix, 3> dH;
  for (int j = 0; j < n; ++j) dH[static_cast<size_t>(j)] = fd_derivative(H, p, j, Wirtinger::holomorphic, h);

  MonadJet jet;
  jet.p = p;
  jet.a = eval_or_empty(spec.alpha, p, spec.k1, spec.k0);
  jet.b = eval_or_empty(spec.beta, p, spec.k2, spec.k1);
  jet.h1.h = spec.h1(p);
  const CMatrix Sp = project_off_image(jet, frame(p));
  const CMatrix T = rep.fiber.basis.adjoint() * jet.h1.h * Sp;

  FdCheckResult res;
  Form11 Fhol(n, rep.fiber.rank);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const CMatrix ddH = fd_mixed(H, p, j, k, h);
      const CMatrix dbH = dH[static_cast<size_t>(k)].adjoint();
      Fhol.at(j, k) = -Hl.solve(ddH) + Hl.solve(dbH) * Hl.solve(dH[static_cast<size_t>(j)]);
    }
  }
  res.fd_curvature = Fhol.conjugated(T);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      worst = std::max(worst, (res.fd_curvature.at(j, k) - rep.F.at(j, k)).cwiseAbs().maxCoeff());
      res.max_entry = std::max(res.max_entry, rep.F.at(j, k).cwiseAbs().maxCoeff());
    }
  }
  res.relative_error = worst / res.max_entry;
  return res;
}

}  // namespace hym
