#include "hym/potential.hpp"

#include <random>

#include "hym/ansatz.hpp"
#include "hym/numerics.hpp"

namespace hym::potential {

namespace {

// |S^3| * rho^3 * ell * <kernel> : the reduced integrand in (rho, Re z', Im z').
double integrand(double a, double b, double rho, double zr, double zi) {
  const double t = std::hypot(zr, zi);
  if (rho * rho + t * t == 0.0) return 0.0;
  return 2.0 * kPi * kPi * rho * rho * rho * ansatz::ell_reduced(rho * rho, t) * sphere_kernel(a, b, rho, zr, zi);
}

struct Welford {
  long n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  double stderr_() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0; }
};

void check_range(double r, const MCParams& mc) {
  if (!(r > 0.0)) throw DomainError("eval_G: p = 0 is singular");
  if (std::ldexp(1.0, mc.k_min) > r / 8.0 || std::ldexp(1.0, mc.k_max + 1) < 8.0 * r)
    throw DomainError("eval_G: shell range must cover [|p|/8, 8|p|]");
  if (mc.samples_per_shell < 2) throw DomainError("eval_G: need at least two samples per shell");
}

}  // namespace

MCParams MCParams::for_point(const Point3& p, int samples_per_shell, std::uint64_t seed) {
  MCParams mc;
  const int k = static_cast<int>(std::floor(std::log2(p.norm())));
  mc.k_min = k - 10;
  mc.k_max = k + 12;
  mc.samples_per_shell = samples_per_shell;
  mc.seed = seed;
  return mc;
}

double sphere_kernel(double a, double b, double rho, double zr, double zi) {
  const double c2 = (b - zr) * (b - zr) + zi * zi;
  const double dm = (a - rho) * (a - rho) + c2;  // D - B, kept exact near the diagonal
  const double dp = (a + rho) * (a + rho) + c2;  // D + B
  const double D = 0.5 * (dm + dp);
  const double s = std::sqrt(dm * dp);
  return 2.0 / (s * (D + s));
}

GValue eval_G_reduced(double a, double b, const MCParams& mc) {
  const double r = std::hypot(a, b);
  check_range(r, mc);
  // Shells are dyadic in the reduced distance d = |u - q*| to q* = (a, b, 0);
  // d < delta is the excluded core.
  const double delta = mc.core_radius > 0.0 ? std::max(mc.core_radius, std::ldexp(1.0, mc.k_min)) : std::ldexp(1.0, mc.k_min);
  GValue g;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double var = 0.0;
  for (int k = mc.k_min; k <= mc.k_max; ++k) {
    std::mt19937_64 rng = stream_engine(mc.seed, static_cast<std::uint64_t>(k - mc.k_min));
    const double R0 = std::ldexp(1.0, k), R1 = 2.0 * R0;
    const double V = 4.0 * kPi / 3.0 * (R1 * R1 * R1 - R0 * R0 * R0);
    // Jittered stratification of (d^3, cos theta, phi), polar axis along rho,
    // with two antithetic pairs (o, -o) per cell. The spread between the two
    // pair means gives an unbiased variance estimate.
    const int m = std::max(1, static_cast<int>(std::cbrt(mc.samples_per_shell / 4.0)));
    auto eval = [&](double d, double ct, double st, double ph) {
      const double rho = a + d * ct;
      // Points with rho < 0 lie outside the reduced half space.
      if (rho < 0.0 || d < delta) return 0.0;
      return integrand(a, b, rho, b + d * st * std::cos(ph), d * st * std::sin(ph)) * V;
    };
    double sum = 0.0, sq = 0.0;
    for (int c = 0; c < m * m * m; ++c) {
      const int c1 = c / (m * m), c2 = (c / m) % m, c3 = c % m;
      double f[2];
      for (double& fv : f) {
        const double t1 = (c1 + U(rng)) / m, t2 = (c2 + U(rng)) / m, t3 = (c3 + U(rng)) / m;
        const double d = std::cbrt(R0 * R0 * R0 + t1 * (R1 * R1 * R1 - R0 * R0 * R0));
        const double ct = 2.0 * t2 - 1.0, st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double ph = 2.0 * kPi * t3;
        fv = 0.5 * (eval(d, ct, st, ph) + eval(d, -ct, st, ph + kPi));
      }
      sum += f[0] + f[1];
      sq += 0.25 * (f[0] - f[1]) * (f[0] - f[1]);
    }
    const double cells = static_cast<double>(m * m * m);
    const double value = sum / (2.0 * cells);
    const double se = std::sqrt(sq) / cells;
    g.shells.push_back({k, value, se});
    g.estimate += value;
    var += se * se;
  }
  // For d beyond the last shell, ell averages to ~2 / |x'|^3 on large spheres.
  g.outer_tail = 2.0 * kPi * kPi * kPi / std::ldexp(1.0, mc.k_max + 1);
  g.estimate += g.outer_tail;
  g.stderr_ = std::sqrt(var);
  // Near q* the averaged kernel is ~ 1/(2 a^3 d), giving 2 pi^3 ell delta^2; doubled for safety.
  const double lmax = ansatz::ell_reduced(std::pow(std::max(a - delta, 0.0), 2), std::max(b - delta, 1e-300));
  g.core_bound = 4.0 * kPi * kPi * kPi * lmax * delta * delta;
  return g;
}

GValue eval_G(const Point3& p, const MCParams& mc) {
  return eval_G_reduced(std::hypot(std::abs(p.x()), std::abs(p.y())), std::abs(p.z()), mc);
}

namespace {

// phi = (1 - s)^6 with s = ((a - a0)^2 + (b - b0)^2) / rho^2: C^5, and
// polynomial in polar coordinates around the centre, so the orbit-weighted
// Gauss rule below integrates it exactly against polynomials.
struct Bump {
  double a0, b0, rho;
  bool zero;
  static constexpr int m = 6;

  double s(double a, double b) const { return ((a - a0) * (a - a0) + (b - b0) * (b - b0)) / (rho * rho); }

  double value(double a, double b) const {
    const double t = s(a, b);
    if (zero || t >= 1.0) return 0.0;
    return std::pow(1.0 - t, m);
  }

  // Euclidean Laplacian on C^3 of phi(|(x,y)|, |z|).
  double laplacian(double a, double b) const {
    const double t = s(a, b);
    if (zero || t >= 1.0) return 0.0;
    const double om = 1.0 - t;
    const double d1 = -m * std::pow(om, m - 1);
    const double d2 = m * (m - 1) * std::pow(om, m - 2);
    const double r2 = rho * rho;
    const double pa = d1 * 2.0 * (a - a0) / r2;
    const double paa = d2 * 4.0 * (a - a0) * (a - a0) / (r2 * r2) + d1 * 2.0 / r2;
    const double pb = d1 * 2.0 * (b - b0) / r2;
    const double pbb = d2 * 4.0 * (b - b0) * (b - b0) / (r2 * r2) + d1 * 2.0 / r2;
    return paa + 3.0 * pa / a + pbb + pb / b;
  }
};

}  // namespace

LaplacianCheck laplacian_weak_check(const Point3& center, double radius, const LaplacianOptions& opts) {
  const double a0 = std::hypot(std::abs(center.x()), std::abs(center.y()));
  const double b0 = std::abs(center.z());
  if (!(radius > 0.0)) throw DomainError("laplacian_weak_check: radius must be positive");
  if (std::hypot(a0, b0) <= radius * 1.000001) throw DomainError("laplacian_weak_check: bump support touches the origin");
  const Bump bump{a0, b0, radius, opts.zero_bump};
  // Polar nodes around the centre. A support meeting a = 0 or b = 0 must be
  // centred on that axis, where the reduced domain is a half disc.
  double t0 = 0.0, t1 = 2.0 * kPi;
  if (a0 == 0.0) {
    t0 = -0.5 * kPi;
    t1 = 0.5 * kPi;
  } else if (b0 == 0.0) {
    t1 = kPi;
  } else if (a0 < radius || b0 < radius) {
    throw DomainError("laplacian_weak_check: support must avoid the symmetry axes or be centred on one");
  }
  const GaussRule& g = gauss_legendre(opts.nodes);
  struct Node {
    double a, b, w;
  };
  std::vector<Node> nodes;
  double rmin = 1e300, rmax = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) {
    const double r = 0.5 * radius * (1.0 + g.x[i]);
    for (size_t j = 0; j < g.x.size(); ++j) {
      const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * g.x[j];
      const double a = a0 + r * std::cos(t), b = b0 + r * std::sin(t);
      // Orbit volume 2 pi^2 a^3 * 2 pi b times the polar Jacobian r.
      const double w = 0.25 * radius * (t1 - t0) * g.w[i] * g.w[j] * r * 4.0 * kPi * kPi * kPi * a * a * a * b;
      nodes.push_back({a, b, w});
      rmin = std::min(rmin, std::hypot(a, b));
      rmax = std::max(rmax, std::hypot(a, b));
    }
  }
  LaplacianCheck out;
  for (const Node& n : nodes) out.rhs += -4.0 * kPi * kPi * kPi * n.w * ansatz::ell_reduced(n.a * n.a, n.b) * bump.value(n.a, n.b);
  if (opts.zero_bump || nodes.empty()) return out;
  MCParams mc;
  mc.k_min = static_cast<int>(std::floor(std::log2(rmin))) - 10;
  mc.k_max = static_cast<int>(std::floor(std::log2(rmax))) + 12;
  mc.samples_per_shell = opts.samples_per_shell;
  std::vector<double> ratios;
  for (int m = 0; m < opts.max_replicas; ++m) {
    if (m >= opts.min_replicas && mean_stderr(ratios).stderr_ <= opts.target_stderr) break;
    // Common random numbers across nodes keep the replica noise smooth in (a, b).
    mc.seed = opts.seed * 1000003ULL + static_cast<std::uint64_t>(m);
    // int Lap(phi) = 0, so subtracting G at the centre only removes quadrature error.
    const double gc = eval_G_reduced(a0, b0, mc).estimate;
    double lhs = 0.0;
    for (const Node& n : nodes) lhs += n.w * (eval_G_reduced(n.a, n.b, mc).estimate - gc) * bump.laplacian(n.a, n.b);
    out.lhs += lhs;
    ratios.push_back(lhs / out.rhs);
  }
  out.lhs /= static_cast<double>(ratios.size());
  const MeanStd ms = mean_stderr(ratios);
  out.ratio = ms.mean;
  out.ratio_stderr = ms.stderr_;
  out.replicas = static_cast<int>(ratios.size());
  return out;
}

double envelope(const Point3& p) {
  const double r = p.norm();
  if (!(r > 0.0)) throw DomainError("envelope: undefined at the origin");
  const double t = std::abs(p.x()) + std::abs(p.y()) + std::sqrt(std::abs(p.z()));
  return std::max(std::log(r / t), 1.0) / r;
}

EnvelopeResult barrier_envelope_check(const std::vector<Point3>& points, int samples_per_shell, std::uint64_t seed) {
  EnvelopeResult out;
  for (size_t i = 0; i < points.size(); ++i) {
    const Point3& p = points[i];
    if (p.norm() < 1.0) throw DomainError("barrier_envelope_check: points must satisfy |p| >= 1");
    const GValue g = eval_G(p, MCParams::for_point(p, samples_per_shell, seed + i));
    out.values.push_back(g.estimate);
    out.all_positive = out.all_positive && g.estimate > 0.0;
    out.ratios.push_back(g.estimate / envelope(p));
    out.sup = std::max(out.sup, out.ratios.back());
  }
  return out;
}

std::vector<Point3> envelope_points(int n, double r_min, double r_max, bool near_axis, std::uint64_t seed) {
  std::mt19937_64 rng = stream_engine(seed, 0);
  std::vector<Point3> pts;
  std::uniform_real_distribution<double> U(std::log(r_min), std::log(r_max));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int i = 0; i < n; ++i) {
    if (!near_axis) {
      pts.push_back(ansatz::random_log_uniform_point(rng, r_min, r_max));
      continue;
    }
    const double r = std::exp(U(rng));
    const Point3 d = ansatz::random_direction(rng);
    const double xy = std::hypot(std::abs(d.x()), std::abs(d.y()));
    const double off = 0.1 * std::sqrt(r);
    pts.emplace_back(d.x() * off / xy, d.y() * off / xy, std::polar(r, phase(rng)));
  }
  return pts;
}

}  // namespace hym::potential
