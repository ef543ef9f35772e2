#include "hym/ansatz.hpp"

#include <limits>

namespace hym::ansatz {

namespace {

double S_of(const Point3& p) { return p.norm2() + 1.0; }

CMatrix row4(cplx a, cplx b, cplx c, cplx d) {
  CMatrix r(1, 4);
  r << a, b, c, d;
  return r;
}

CMatrix col4(cplx a, cplx b, cplx c, cplx d) {
  CMatrix r(4, 1);
  r << a, b, c, d;
  return r;
}

double transverse(const Point3& p) { return std::abs(p.x()) + std::abs(p.y()) + std::sqrt(std::abs(p.z())); }

}  // namespace

double regularity_scale(const Point3& p) { return std::min(p.norm(), transverse(p)); }

MonadSpec ansatz_spec() {
  MonadSpec s;
  s.name = "ansatz";
  s.base_dim = 3;
  s.k0 = 1;
  s.k1 = 4;
  s.k2 = 1;
  s.alpha = [](const Point3& p) { return col4(p.x(), p.y(), 1.0, 0.0); };
  s.beta = [](const Point3& p) { return row4(-p.y(), p.x(), 0.0, p.z()); };
  s.d_alpha = [](const Point3&, int j) {
    CMatrix a = CMatrix::Zero(4, 1);
    if (j < 2) a(j, 0) = 1.0;
    return a;
  };
  s.d_beta = [](const Point3&, int j) {
    if (j == 0) return row4(0.0, 1.0, 0.0, 0.0);
    if (j == 1) return row4(-1.0, 0.0, 0.0, 0.0);
    return row4(0.0, 0.0, 0.0, 1.0);
  };
  s.h0 = [](const Point3&) { return CMatrix::Identity(1, 1); };
  s.h2 = s.h0;
  s.h1 = [](const Point3& p) {
    CMatrix h = CMatrix::Identity(4, 4);
    const double f = 1.0 / std::sqrt(S_of(p));
    h(0, 0) = f;
    h(1, 1) = f;
    return h;
  };
  s.h0_jet = [](const Point3&) { return MetricJet::constant(CMatrix::Identity(1, 1), 3); };
  s.h2_jet = s.h0_jet;
  s.h1_jet = [](const Point3& p) {
    const ScalarJet f = radial_power(p, 3, 1.0, -0.5);
    const ScalarJet one = ScalarJet::constant(1.0);
    return MetricJet::diagonal({f, f, one, one}, 3);
  };
  s.regularity_scale = regularity_scale;
  return s;
}

Ingredients closed_form_ingredients(const Point3& p) {
  Ingredients g;
  const double S = S_of(p);
  const double rho2 = std::norm(p.x()) + std::norm(p.y());
  g.alpha_dag_alpha = rho2 / std::sqrt(S) + 1.0;
  g.beta_beta_dag = rho2 * std::sqrt(S) + std::norm(p.z());
  const cplx x = p.x(), y = p.y();
  for (int k = 0; k < 3; ++k) {
    const cplx wk = p[k];
    const cplx wkbar = std::conj(p[k]);
    const double dx = k == 0 ? 1.0 : 0.0, dy = k == 1 ? 1.0 : 0.0, dz = k == 2 ? 1.0 : 0.0;
    g.nabla_alpha_dag[static_cast<size_t>(k)] =
        row4(dx / std::sqrt(S) - std::conj(x) * wk / (2.0 * std::pow(S, 1.5)),
             dy / std::sqrt(S) - std::conj(y) * wk / (2.0 * std::pow(S, 1.5)), 0.0, 0.0);
    g.nabla_beta[static_cast<size_t>(k)] = row4(-dy - y * wkbar / (2.0 * S), dx + x * wkbar / (2.0 * S), 0.0, dz);
  }
  // -d_j dbar_k log S^{-1/2} on the first two slots.
  g.ambient_curvature = Form11(3, 4);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const cplx c = 0.5 * ((j == k ? 1.0 : 0.0) / S - std::conj(p[j]) * p[k] / (S * S));
      CMatrix m = CMatrix::Zero(4, 4);
      m(0, 0) = c;
      m(1, 1) = c;
      g.ambient_curvature.at(j, k) = m;
    }
  }
  return g;
}

double ell_reduced(double rho2, double t) {
  const double r2 = rho2 + t * t;
  if (!(r2 > 0.0)) throw DomainError("ell: undefined at the origin");
  if (r2 >= 1.0) return 1.0 / ((rho2 + t) * std::sqrt(r2));
  return 1.0 / r2;
}

double ell(const Point3& p) { return ell_reduced(std::norm(p.x()) + std::norm(p.y()), std::abs(p.z())); }

double mean_curvature_ratio(const Point3& p, int k) {
  static const MonadSpec spec = ansatz_spec();
  if (k == 0) {
    CurvatureOptions opts;
    opts.mixed_type_parts = false;
    return curvature(spec, p, opts).norm_mean / ell(p);
  }
  if (k == 1) {
    const double weight = 1.0 / (p.norm() * std::pow(transverse(p), 3));
    return mean_curvature_gradient_norm(spec, p, spec.step_at(p)) / weight;
  }
  throw DomainError("mean_curvature_ratio: k must be 0 or 1");
}

Cancellation cancellation(const Point3& p) {
  if (!(p.norm2() > 0.0)) throw DomainError("cancellation: undefined at the origin");
  const Ingredients g = closed_form_ingredients(p);
  const double S = S_of(p);
  Cancellation c;
  c.lhs = 1.0 / (S * g.alpha_dag_alpha) - 1.0 / g.beta_beta_dag;
  c.rhs = 1.0 / (g.beta_beta_dag * std::sqrt(S));
  return c;
}

double section_component_ratio(const Point3& p, const CVector& s) {
  const double r = p.norm();
  const double xy = std::abs(p.x()) + std::abs(p.y());
  double w = std::sqrt(r + 1.0);
  if (xy > 0.0) w = std::min(w, (r + 1.0) / xy);
  return (std::abs(s(0)) + std::abs(s(1))) / w;
}

double section_component_bound(const Point3& p, int samples, std::mt19937_64& rng) {
  static const MonadSpec spec = ansatz_spec();
  const CohomFiber fib = cohomology_frame(spec, p);
  std::normal_distribution<double> N;
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    CVector c(fib.rank);
    for (int a = 0; a < fib.rank; ++a) c(a) = cplx(N(rng), N(rng));
    c.normalize();
    sup = std::max(sup, section_component_ratio(p, fib.basis * c));
  }
  return sup;
}

DecayFit decay_slope(const Point3& direction, double r_min, double r_max, int n_samples) {
  static const MonadSpec spec = ansatz_spec();
  const double dn = direction.norm();
  if (!(dn > 0.0)) throw DomainError("decay_slope: zero direction");
  const Point3 u = direction.scaled(1.0 / dn);
  DecayFit out;
  out.radii = geometric_sequence(r_min, r_max, n_samples);
  CurvatureOptions opts;
  opts.mixed_type_parts = false;
  for (double r : out.radii) out.norms.push_back(curvature(spec, u.scaled(r), opts).norm_F);
  out.fit = fit_loglog(out.radii, out.norms);
  return out;
}

CMatrix chart_frame(const Point3& p, Chart chart) {
  CMatrix s = CMatrix::Zero(4, 2);
  s(2, 0) = 1.0;
  s(3, 1) = 1.0;
  if (chart == Chart::y) {
    if (p.y() == cplx(0.0)) throw DomainError("chart_frame: y = 0 outside the y-chart");
    s(0, 1) = p.z() / p.y();
  } else {
    if (p.x() == cplx(0.0)) throw DomainError("chart_frame: x = 0 outside the x-chart");
    s(1, 1) = -p.z() / p.x();
  }
  return s;
}

AsymptoticFrame asymptotic_frame(const Point3& p, Chart chart) {
  static const MonadSpec spec = ansatz_spec();
  AsymptoticFrame f;
  f.sections = chart_frame(p, chart);
  f.gram = induced_metric(spec, p, f.sections);
  const CMatrix d = f.gram - CMatrix::Identity(2, 2);
  Eigen::JacobiSVD<CMatrix> svd(d);
  f.deviation = svd.singularValues()(0);
  return f;
}

TwistedSpec twisted_monad(cplx zeta, bool negative_root) {
  if (!(std::abs(zeta) >= 1.0)) throw DomainError("twisted_monad: need |zeta| >= 1");
  TwistedSpec t;
  t.zeta = zeta;
  t.root = std::sqrt(zeta) * (negative_root ? -1.0 : 1.0);
  const cplx r = t.root;
  const double az = std::abs(zeta);
  MonadSpec& s = t.spec;
  s.name = "twisted";
  s.base_dim = 3;
  s.k0 = 1;
  s.k1 = 4;
  s.k2 = 1;
  s.alpha = [r](const Point3& p) { return col4(p.x(), p.y(), r, 0.0); };
  s.beta = [r](const Point3& p) { return row4(-p.y(), p.x(), 0.0, r); };
  s.d_alpha = [](const Point3&, int j) {
    CMatrix a = CMatrix::Zero(4, 1);
    if (j < 2) a(j, 0) = 1.0;
    return a;
  };
  s.d_beta = [](const Point3&, int j) {
    if (j == 0) return row4(0.0, 1.0, 0.0, 0.0);
    if (j == 1) return row4(-1.0, 0.0, 0.0, 0.0);
    return row4(0.0, 0.0, 0.0, 0.0);
  };
  s.h0 = [](const Point3&) { return CMatrix::Identity(1, 1); };
  s.h2 = s.h0;
  s.h1 = [az](const Point3& p) {
    if (p.z() == cplx(0.0)) throw DomainError("twisted monad: metric undefined at z = 0");
    CMatrix h = CMatrix::Identity(4, 4);
    const double q = std::sqrt(S_of(p));
    h(2, 2) = q / az;
    h(3, 3) = az * q / std::norm(p.z());
    return h;
  };
  s.h0_jet = [](const Point3&) { return MetricJet::constant(CMatrix::Identity(1, 1), 3); };
  s.h2_jet = s.h0_jet;
  s.h1_jet = [az](const Point3& p) {
    if (p.z() == cplx(0.0)) throw DomainError("twisted monad: metric undefined at z = 0");
    const ScalarJet q = radial_power(p, 3, 1.0, 0.5);
    const ScalarJet one = ScalarJet::constant(1.0);
    return MetricJet::diagonal({one, one, (1.0 / az) * q, az * (q * coordinate_power(p, 2, -1.0))}, 3);
  };
  s.regularity_scale = [](const Point3& p) { return std::sqrt(std::abs(p.z())); };
  return t;
}

CMatrix twisted_frame(const TwistedSpec& t, const Point3& p) {
  CMatrix s = CMatrix::Zero(4, 2);
  s(0, 0) = t.root;
  s(3, 0) = p.y();
  s(1, 1) = t.root;
  s(3, 1) = -p.x();
  return s;
}

double curvature_distance(const CurvatureReport& twisted, const CMatrix& h_twisted, const CurvatureReport& instanton) {
  const CMatrix& Bt = twisted.fiber.basis;
  const CMatrix& Bi = instanton.fiber.basis;
  const CMatrix M = Bt.adjoint() * h_twisted * Bi;
  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix U = svd.matrixU() * svd.matrixV().adjoint();
  double s = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const CMatrix d = twisted.F.at(j, k) - U * instanton.F.at(j, k) * U.adjoint();
      s += 4.0 * d.squaredNorm();
    }
  }
  return std::sqrt(s);
}

ComparisonResult instanton_comparison(cplx zeta, int samples, std::mt19937_64& rng) {
  if (!(std::abs(zeta) >= 100.0)) throw DomainError("instanton_comparison: need |zeta| >= 100");
  const TwistedSpec t = twisted_monad(zeta);
  const adhm::ADHMData d{t.root, 0.0, 0.0, t.root};
  const MonadSpec inst = adhm::instanton_monad(d);
  const double R = std::sqrt(std::abs(zeta));
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CurvatureOptions opts;
  opts.mixed_type_parts = false;
  ComparisonResult out;
  while (out.samples < samples) {
    // Uniform in the unit bidisc, rejected to |x| + |y| <= 1; the origin is always included.
    cplx x = 0.0, y = 0.0;
    if (out.samples > 0) {
      x = cplx(U(rng), U(rng));
      y = cplx(U(rng), U(rng));
      if (std::abs(x) + std::abs(y) > 1.0) continue;
    }
    const Point3 pt(R * x, R * y, zeta);
    const CurvatureReport ft = curvature(t.spec, pt, opts);
    const CurvatureReport fi = curvature(inst, Point3(R * x, R * y), opts);
    out.raw_sup = std::max(out.raw_sup, curvature_distance(ft, t.spec.h1(pt), fi));
    ++out.samples;
  }
  out.scaled_sup = std::norm(zeta) * out.raw_sup;
  return out;
}

adhm::FramedModuliPoint fueter_map(cplx zeta) {
  if (zeta == cplx(0.0)) throw DomainError("fueter_map: zeta = 0 is the cone point");
  const cplx r = std::sqrt(zeta);
  return adhm::framed_moduli_point({r, 0.0, 0.0, r});
}

MonadSpec tangent_cone_origin(bool conical_metric) {
  MonadSpec s;
  s.name = conical_metric ? "cone" : "cone-flat-metric";
  s.base_dim = 3;
  s.k0 = 0;
  s.k1 = 3;
  s.k2 = 1;
  s.alpha = [](const Point3&) { return CMatrix(3, 0); };
  s.beta = [](const Point3& p) {
    CMatrix b(1, 3);
    b << p.x(), p.y(), p.z();
    return b;
  };
  s.d_alpha = [](const Point3&, int) { return CMatrix(3, 0); };
  s.d_beta = [](const Point3&, int j) {
    CMatrix b = CMatrix::Zero(1, 3);
    b(0, j) = 1.0;
    return b;
  };
  s.h0 = [](const Point3&) { return CMatrix(0, 0); };
  s.h2 = [](const Point3&) { return CMatrix::Identity(1, 1); };
  s.h0_jet = [](const Point3&) { return MetricJet::constant(CMatrix(0, 0), 3); };
  s.h2_jet = [](const Point3&) { return MetricJet::constant(CMatrix::Identity(1, 1), 3); };
  if (conical_metric) {
    s.h1 = [](const Point3& p) {
      if (!(p.norm2() > 0.0)) throw DomainError("cone metric undefined at the origin");
      return CMatrix(CMatrix::Identity(3, 3) / p.norm());
    };
    s.h1_jet = [](const Point3& p) {
      if (!(p.norm2() > 0.0)) throw DomainError("cone metric undefined at the origin");
      const ScalarJet f = radial_power(p, 3, 0.0, -0.5);
      return MetricJet::diagonal({f, f, f}, 3);
    };
  } else {
    s.h1 = [](const Point3&) { return CMatrix::Identity(3, 3); };
    s.h1_jet = [](const Point3&) { return MetricJet::constant(CMatrix::Identity(3, 3), 3); };
  }
  s.regularity_scale = [](const Point3& p) { return p.norm(); };
  return s;
}

CMatrix cone_frame(const Point3& p) {
  const cplx x = p.x(), y = p.y(), z = p.z();
  const cplx t1[3] = {z, 0.0, -x}, t2[3] = {0.0, z, -y}, t3[3] = {y, -x, 0.0};
  const double ax = std::abs(x), ay = std::abs(y), az = std::abs(z);
  const cplx* a = t1;
  const cplx* b = t2;
  if (ax >= ay && ax >= az) {
    b = t3;
  } else if (ay >= ax && ay >= az) {
    a = t2;
    b = t3;
  }
  CMatrix s(3, 2);
  for (int i = 0; i < 3; ++i) {
    s(i, 0) = a[i];
    s(i, 1) = b[i];
  }
  return s;
}

double cone_residual(const Point3& p, bool conical_metric) {
  if (!(p.norm2() > 0.0)) throw DomainError("cone_residual: origin is singular");
  CurvatureOptions opts;
  opts.mixed_type_parts = false;
  return curvature(tangent_cone_origin(conical_metric), p, opts).norm_mean;
}

Point3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Point3 p(cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng)));
  return p.scaled(1.0 / p.norm());
}

Point3 random_log_uniform_point(std::mt19937_64& rng, double r_min, double r_max) {
  std::uniform_real_distribution<double> U(std::log(r_min), std::log(r_max));
  const Point3 d = random_direction(rng);
  return d.scaled(std::exp(U(rng)));
}

}  // namespace hym::ansatz
