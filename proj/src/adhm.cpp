#include "hym/adhm.hpp"

#include "hym/numerics.hpp"

namespace hym::adhm {

bool ADHMData::degenerate(double tol) const {
  return std::abs(a1) <= tol && std::abs(a2) <= tol && std::abs(b1) <= tol && std::abs(b2) <= tol;
}

ADHMData ADHMData::rotated(double theta) const {
  const cplx e = std::polar(1.0, theta);
  return {a1 * e, a2 * e, b1 / e, b2 / e};
}

bool Residual::valid(double tol) const { return !degenerate && std::abs(complex_part) <= tol && std::abs(real_part) <= tol; }

Residual adhm_residual(const ADHMData& d) {
  Residual r;
  r.complex_part = d.a1 * d.b1 + d.a2 * d.b2;
  r.real_part = std::norm(d.a1) + std::norm(d.a2) - std::norm(d.b1) - std::norm(d.b2);
  r.degenerate = d.degenerate();
  return r;
}

MonadSpec instanton_monad_unchecked(const ADHMData& d) {
  MonadSpec s;
  s.name = "adhm";
  s.base_dim = 2;
  s.k0 = 1;
  s.k1 = 4;
  s.k2 = 1;
  s.alpha = [d](const Point3& p) {
    CMatrix a(4, 1);
    a << p.x(), p.y(), d.a1, d.a2;
    return a;
  };
  s.beta = [d](const Point3& p) {
    CMatrix b(1, 4);
    b << -p.y(), p.x(), d.b1, d.b2;
    return b;
  };
  s.d_alpha = [](const Point3&, int j) {
    CMatrix a = CMatrix::Zero(4, 1);
    if (j < 2) a(j, 0) = 1.0;
    return a;
  };
  s.d_beta = [](const Point3&, int j) {
    CMatrix b = CMatrix::Zero(1, 4);
    if (j == 0) b(0, 1) = 1.0;
    if (j == 1) b(0, 0) = -1.0;
    return b;
  };
  s.h0 = [](const Point3&) { return CMatrix::Identity(1, 1); };
  s.h1 = [](const Point3&) { return CMatrix::Identity(4, 4); };
  s.h2 = s.h0;
  s.h0_jet = [](const Point3&) { return MetricJet::constant(CMatrix::Identity(1, 1), 2); };
  s.h1_jet = [](const Point3&) { return MetricJet::constant(CMatrix::Identity(4, 4), 2); };
  s.h2_jet = s.h0_jet;
  const double scale = std::max(1e-3, std::sqrt(std::norm(d.a1) + std::norm(d.a2)));
  s.regularity_scale = [scale](const Point3&) { return scale; };
  return s;
}

MonadSpec instanton_monad(const ADHMData& d) {
  const Residual r = adhm_residual(d);
  if (r.degenerate) throw DomainError("instanton_monad: degenerate ADHM data (flat connection)");
  const double scale = std::max(1.0, std::norm(d.a1) + std::norm(d.a2));
  if (!r.valid(1e-12 * scale)) throw DomainError("instanton_monad: data violate the ADHM equations");
  return instanton_monad_unchecked(d);
}

CMatrix instanton_frame(const ADHMData& d, const Point3& p) {
  CMatrix S = CMatrix::Zero(4, 2);
  if (std::abs(d.b2) >= std::abs(d.b1)) {
    S(0, 0) = d.b2;
    S(3, 0) = p.y();
    S(1, 1) = d.b2;
    S(3, 1) = -p.x();
  } else {
    S(0, 0) = d.b1;
    S(2, 0) = p.y();
    S(1, 1) = d.b1;
    S(2, 1) = -p.x();
  }
  return S;
}

ASDResidual asd_check(const ADHMData& d, const Point3& p, bool analytic) {
  MonadSpec spec = instanton_monad_unchecked(d);
  if (!analytic) spec = with_fd_derivatives(spec, 1e-3);
  const CurvatureReport rep = curvature(spec, p);
  ASDResidual r;
  r.mean = rep.norm_mean;
  r.f02 = rep.norm_F02;
  r.f20 = rep.norm_F20;
  return r;
}

double curvature_density(const ADHMData& d, const Point3& p) {
  CurvatureOptions opts;
  opts.mixed_type_parts = false;
  const CurvatureReport rep = curvature(instanton_monad_unchecked(d), p, opts);
  return rep.norm_F * rep.norm_F;
}

namespace {

// Angular mean of the density on the sphere of radius r in C^2 using Hopf
// coordinates x = r cos(eta) e^{i xi1}, y = r sin(eta) e^{i xi2}, u = sin^2 eta.
double sphere_mean(const ADHMData& d, double r, int nu, int nxi) {
  const GaussRule& g = gauss_legendre(nu);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) {
    const double u = 0.5 * (1.0 + g.x[i]);
    const double c = std::sqrt(1.0 - u), sn = std::sqrt(u);
    for (int k1 = 0; k1 < nxi; ++k1) {
      for (int k2 = 0; k2 < nxi; ++k2) {
        const double xi1 = 2.0 * kPi * (k1 + 0.5) / nxi;
        const double xi2 = 2.0 * kPi * (k2 + 0.5) / nxi;
        const Point3 p(std::polar(r * c, xi1), std::polar(r * sn, xi2));
        s += 0.5 * g.w[i] * curvature_density(d, p);
      }
    }
  }
  return s / (nxi * nxi);
}

}  // namespace

ChargeResult charge(const ADHMData& d, double R, int n) {
  ChargeResult out;
  if (d.degenerate()) return out;
  if (!(R > 0.0) || n < 2) throw DomainError("charge: need R > 0 and n >= 2");
  const int nu = std::max(2, n / 2);
  const int nxi = std::max(2, n / 2);
  const double s = curvature_scale(d);
  std::vector<double> edges{0.0, s / 16.0};
  while (edges.back() < R) edges.push_back(std::min(R, 2.0 * edges.back()));
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    // |S^3| = 2 pi^2; sphere_mean averages over the unit-measure sphere.
    total += integrate_gl(
        [&](double r) { return 2.0 * kPi * kPi * r * r * r * sphere_mean(d, r, nu, nxi); }, edges[i], edges[i + 1], n);
  }
  const double c = sphere_mean(d, R, nu, nxi) * std::pow(R, 8);
  out.tail = 2.0 * kPi * kPi * c / (4.0 * std::pow(R, 4)) / (8.0 * kPi * kPi);
  const double bulk = total / (8.0 * kPi * kPi);
  out.value = bulk + out.tail;
  out.tail_fraction = out.tail / out.value;
  out.insufficient_resolution = out.tail_fraction > 0.05;
  return out;
}

double curvature_scale(const ADHMData& d) { return std::sqrt(std::norm(d.a1) + std::norm(d.a2)); }

double half_max_radius(const ADHMData& d) {
  if (d.degenerate()) throw DomainError("half_max_radius: flat connection");
  const double f0 = curvature_density(d, Point3(0.0, 0.0));
  auto mean_at = [&](double r) { return sphere_mean(d, r, 2, 3); };
  double lo = 0.0, hi = curvature_scale(d);
  while (mean_at(hi) > 0.5 * f0) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_at(mid) > 0.5 * f0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::array<cplx, 2> z2_canonical(cplx u, cplx v) {
  auto positive = [](cplx c) { return c.real() > 0.0 || (c.real() == 0.0 && c.imag() > 0.0); };
  const cplx lead = (std::abs(u) > 0.0) ? u : v;
  if (lead == cplx(0.0) || positive(lead)) return {u, v};
  return {-u, -v};
}

FramedModuliPoint framed_moduli_point(const ADHMData& d) {
  FramedModuliPoint m;
  if (d.degenerate()) {
    m.cone_point = true;
    m.label = std::array<cplx, 2>{0.0, 0.0};
    return m;
  }
  const double tol = 1e-12 * curvature_scale(d);
  const double theta = std::abs(d.a1) > tol ? -std::arg(d.a1) : -std::arg(d.a2);
  m.normal_form = d.rotated(theta);
  // Remove the rounding left in the pivot's imaginary part.
  if (std::abs(d.a1) > tol) {
    m.normal_form.a1 = std::abs(d.a1);
  } else {
    m.normal_form.a2 = std::abs(d.a2);
  }
  if (std::abs(d.a2) <= tol && std::abs(d.b1) <= tol) {
    // (c, 0, 0, c) up to U(1): c^2 = a1 b2 is invariant.
    const cplx c = std::sqrt(d.a1 * d.b2);
    m.label = z2_canonical(c, 0.0);
  }
  return m;
}

}  // namespace hym::adhm
