#include "hym/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "hym/types.hpp"

namespace hym {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule g;
  g.x.resize(static_cast<size_t>(n));
  g.w.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x[static_cast<size_t>(i)] = x;
    g.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(g)).first->second;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need at least two paired samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  f.rms_residual = std::sqrt(ss / n);
  f.r2 = syy > 0.0 ? 1.0 - ss / syy : 1.0;
  return f;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_loglog: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

MeanStd mean_stderr(std::span<const double> v) {
  MeanStd m;
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return m;
}

std::vector<double> geometric_sequence(double a, double b, int n) {
  if (n < 2 || !(a > 0.0) || !(b > a)) throw DomainError("geometric_sequence: need 0 < a < b and n >= 2");
  std::vector<double> out(static_cast<size_t>(n));
  const double q = std::pow(b / a, 1.0 / (n - 1));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = a * std::pow(q, i);
  out.back() = b;
  return out;
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace hym
