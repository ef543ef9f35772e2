#include "hym/growth.hpp"

#include <algorithm>
#include <random>

#include "hym/numerics.hpp"

namespace hym::growth {

Poly Poly::constant(cplx c) { return monomial(0, 0, 0, c); }

Poly Poly::monomial(int ex, int ey, int ez, cplx c) {
  Poly p;
  p.terms.push_back({ex, ey, ez, c});
  return p;
}

cplx Poly::operator()(const Point3& p) const {
  cplx s = 0.0;
  for (const Monomial& m : terms) {
    cplx t = m.c;
    for (int i = 0; i < m.ex; ++i) t *= p.x();
    for (int i = 0; i < m.ey; ++i) t *= p.y();
    for (int i = 0; i < m.ez; ++i) t *= p.z();
    s += t;
  }
  return s;
}

bool Poly::is_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const Monomial& m) { return m.c == cplx(0.0); });
}

int Poly::degree() const {
  int d = -1;
  for (const Monomial& m : terms)
    if (m.c != cplx(0.0)) d = std::max(d, m.ex + m.ey + m.ez);
  return d;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const Monomial& u : a.terms)
    for (const Monomial& v : b.terms) out.terms.push_back({u.ex + v.ex, u.ey + v.ey, u.ez + v.ez, u.c * v.c});
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

KoszulSection KoszulSection::t1() { return {"t1", Poly::constant(1.0), {}, {}}; }
KoszulSection KoszulSection::t2() { return {"t2", {}, Poly::constant(1.0), {}}; }
KoszulSection KoszulSection::t3() { return {"t3", {}, {}, Poly::constant(1.0)}; }

KoszulSection KoszulSection::times(const Poly& P, const std::string& new_name) const {
  return {new_name, P * f, P * g, P * h};
}

bool KoszulSection::is_zero() const { return f.is_zero() && g.is_zero() && h.is_zero(); }

CVector KoszulSection::w(const Point3& p) const {
  const cplx F = f(p), G = g(p), H = h(p);
  CVector out(3);
  out << F * p.z() + H * p.y(), G * p.z() - H * p.x(), -F * p.x() - G * p.y();
  return out;
}

CVector KoszulSection::monad_vector(const Point3& p) const {
  const CVector ww = w(p);
  CVector v(4);
  v << -ww(1), ww(0), 0.0, ww(2);
  return v;
}

double section_norm2(const KoszulSection& s, const Point3& p) {
  if (!(p.norm2() > 0.0)) throw DomainError("section_norm: the origin is singular");
  const CVector ww = s.w(p);
  // h1 = diag(S^{-1/2}, S^{-1/2}, 1, 1); v = (-w2, w1, 0, w3), alpha = (x, y, 1, 0).
  const double isq = 1.0 / std::sqrt(p.norm2() + 1.0);
  const double vv = isq * (std::norm(ww(0)) + std::norm(ww(1))) + std::norm(ww(2));
  const cplx av = isq * (-std::conj(p.x()) * ww(1) + std::conj(p.y()) * ww(0));
  const double aa = isq * (std::norm(p.x()) + std::norm(p.y())) + 1.0;
  return std::max(0.0, vv - std::norm(av) / aa);
}

double cone_norm2(const KoszulSection& s, const Point3& p) {
  if (!(p.norm2() > 0.0)) throw DomainError("cone_norm: the origin is singular");
  return s.w(p).squaredNorm() / p.norm();
}

namespace {

Point3 apply_symmetry(const Point3& p, const GrowthOptions& o) {
  if (!o.use_symmetry) return p;
  return {o.sym_a * p.x() + o.sym_b * p.y(), -std::conj(o.sym_b) * p.x() + std::conj(o.sym_a) * p.y(),
          std::polar(1.0, o.sym_phase) * p.z()};
}

// Radial panels: dyadic from r_0 / 2^12 up to r_0, then between consecutive radii.
std::vector<double> panel_edges(const std::vector<double>& radii) {
  std::vector<double> e{0.0};
  for (int k = 12; k >= 1; --k) e.push_back(std::ldexp(radii.front(), -k));
  for (double r : radii) e.push_back(r);
  return e;
}

}  // namespace

BallIntegrals ball_integrals(const KoszulSection& s, const std::vector<double>& radii, const GrowthOptions& opts) {
  if (radii.empty() || !std::is_sorted(radii.begin(), radii.end()) || !(radii.front() > 0.0))
    throw DomainError("ball_integrals: radii must be positive and ascending");
  if (opts.directions < opts.batches || opts.batches < 2) throw DomainError("ball_integrals: need directions >= batches >= 2");
  const std::vector<double> edges = panel_edges(radii);
  const size_t n_inner = edges.size() - radii.size();  // panels ending before radii[0]
  const GaussRule& g = gauss_legendre(8);
  std::mt19937_64 rng = stream_engine(opts.seed, 0);
  std::normal_distribution<double> N;
  BallIntegrals out;
  out.radii = radii;
  out.batch_values.assign(static_cast<size_t>(opts.batches), std::vector<double>(radii.size(), 0.0));
  std::vector<int> batch_count(static_cast<size_t>(opts.batches), 0);
  const double sphere = kPi * kPi * kPi;  // |S^5|
  for (int d = 0; d < opts.directions; ++d) {
    Point3 u(cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng)));
    u = u.scaled(1.0 / u.norm());
    std::vector<double> cumulative(radii.size(), 0.0);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      const double a = edges[i], b = edges[i + 1];
      const double c = 0.5 * (a + b), h = 0.5 * (b - a);
      double panel = 0.0;
      for (size_t q = 0; q < g.x.size(); ++q) {
        const double r = c + h * g.x[q];
        double f = 0.0;
        for (double sign : {1.0, -1.0}) {
          const Point3 p = apply_symmetry(u.scaled(sign * r), opts);
          f += 0.5 * (opts.metric == Metric::ansatz ? section_norm2(s, p) : cone_norm2(s, p));
        }
        panel += g.w[q] * std::pow(r, 5) * f;
      }
      acc += panel * h;
      if (i + 1 >= n_inner) cumulative[i + 1 - n_inner] = acc;
    }
    const size_t batch = static_cast<size_t>(d % opts.batches);
    for (size_t k = 0; k < radii.size(); ++k) out.batch_values[batch][k] += sphere * cumulative[k];
    ++batch_count[batch];
  }
  for (size_t b = 0; b < out.batch_values.size(); ++b)
    for (double& v : out.batch_values[b]) v /= batch_count[b];
  for (size_t k = 0; k < radii.size(); ++k) {
    std::vector<double> col;
    for (const auto& row : out.batch_values) col.push_back(row[k]);
    const MeanStd ms = mean_stderr(col);
    out.values.push_back(ms.mean);
    out.stderrs.push_back(ms.stderr_);
  }
  return out;
}

std::vector<double> default_radii(End end) {
  return end == End::origin ? geometric_sequence(0.005, 0.08, 5) : geometric_sequence(100.0, 3200.0, 6);
}

GrowthReport growth_degree(const KoszulSection& s, End end, const std::vector<double>& radii, const GrowthOptions& opts) {
  if (s.is_zero()) throw DomainError("growth_degree: zero section");
  if (radii.size() < 5) throw DomainError("growth_degree: need at least five radii");
  const double q = radii[1] / radii[0];
  for (size_t i = 1; i < radii.size(); ++i)
    if (std::abs(radii[i] / radii[i - 1] - q) > 1e-9 * q || !(q > 1.0))
      throw DomainError("growth_degree: radii must form an increasing geometric sequence");
  if (end == End::origin && radii.back() > 0.3) throw DomainError("growth_degree: origin radii must be <= 0.3");
  if (end == End::infinity && radii.front() < 10.0) throw DomainError("growth_degree: infinity radii must be >= 10");
  const BallIntegrals bi = ball_integrals(s, radii, opts);
  GrowthReport rep;
  rep.section = s.name;
  rep.end = end;
  rep.radii = radii;
  std::vector<double> lr;
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(bi.values[i] > 0.0)) throw DomainError("growth_degree: section vanishes on the ball");
    lr.push_back(std::log(radii[i]));
    rep.log_integrals.push_back(std::log(bi.values[i]));
  }
  const LineFit fit = fit_line(lr, rep.log_integrals);
  rep.slope = fit.slope;
  rep.degree = 0.5 * fit.slope - 3.0;
  rep.rms_residual = fit.rms_residual;
  if (fit.rms_residual > opts.max_rms_residual)
    throw NumericalAbort("growth_degree: log-log fit residual " + std::to_string(fit.rms_residual) + " above threshold");
  return rep;
}

FiltrationTable filtration_table(const std::vector<KoszulSection>& family, const std::vector<double>& radii0,
                                 const std::vector<double>& radii_inf, const GrowthOptions& opts) {
  if (family.empty()) throw DomainError("filtration_table: empty family");
  FiltrationTable t;
  std::vector<double> d0, dinf;
  for (const KoszulSection& s : family) {
    FiltrationRow row;
    row.section = s.name;
    row.d0 = growth_degree(s, End::origin, radii0, opts).degree;
    row.dinf = growth_degree(s, End::infinity, radii_inf, opts).degree;
    d0.push_back(row.d0);
    dinf.push_back(row.dinf);
    t.rows.push_back(row);
  }
  std::sort(d0.begin(), d0.end());
  std::sort(dinf.begin(), dinf.end());
  for (size_t i = 0; i < d0.size(); ++i) t.differ = t.differ || std::abs(d0[i] - dinf[i]) > 0.25;
  return t;
}

ConvexityResult convexity_check(const KoszulSection& s, const GrowthOptions& opts) {
  GrowthOptions o = opts;
  o.metric = Metric::cone;
  const BallIntegrals bi = ball_integrals(s, {0.25, 0.5, 1.0}, o);
  auto resid = [](double a, double b, double c) { return a * c - b * b; };
  ConvexityResult r;
  r.i_quarter = bi.values[0];
  r.i_half = bi.values[1];
  r.i_one = bi.values[2];
  r.residual = resid(r.i_quarter, r.i_half, r.i_one);
  r.relative = r.residual / (r.i_half * r.i_half);
  // Jackknife over batches.
  const size_t nb = bi.batch_values.size();
  std::vector<double> jk;
  for (size_t leave = 0; leave < nb; ++leave) {
    double v[3] = {0.0, 0.0, 0.0};
    for (size_t b = 0; b < nb; ++b)
      if (b != leave)
        for (int k = 0; k < 3; ++k) v[k] += bi.batch_values[b][static_cast<size_t>(k)] / static_cast<double>(nb - 1);
    jk.push_back(resid(v[0], v[1], v[2]));
  }
  double mean = 0.0;
  for (double v : jk) mean += v / static_cast<double>(nb);
  double ss = 0.0;
  for (double v : jk) ss += (v - mean) * (v - mean);
  r.stderr_ = std::sqrt(ss * static_cast<double>(nb - 1) / static_cast<double>(nb));
  return r;
}

}  // namespace hym::growth
