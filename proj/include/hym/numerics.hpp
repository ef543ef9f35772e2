#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace hym {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
  return s * h;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rms_residual = 0.0;
  double max_residual = 0.0;
};

// Ordinary least squares y = intercept + slope * x. Throws DomainError on a degenerate fit.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// log-log fit of y against x (both positive).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct MeanStd {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanStd mean_stderr(std::span<const double> v);

// Geometric sequence of n values from a to b inclusive.
std::vector<double> geometric_sequence(double a, double b, int n);

// Deterministic per-stream engine: stream `index` of master seed `seed`.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index);

}  // namespace hym
