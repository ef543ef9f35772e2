#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hym/types.hpp"

namespace hym::growth {

struct Monomial {
  int ex = 0, ey = 0, ez = 0;
  cplx c = 1.0;
};

// Polynomial in (x, y, z).
struct Poly {
  std::vector<Monomial> terms;

  static Poly constant(cplx c);
  static Poly monomial(int ex, int ey, int ez, cplx c = 1.0);
  cplx operator()(const Point3& p) const;
  bool is_zero() const;
  int degree() const;  // -1 for the zero polynomial
};

Poly operator*(const Poly& a, const Poly& b);
Poly operator+(const Poly& a, const Poly& b);

// f t1 + g t2 + h t3 with the Koszul generators
//   t1 = (z, 0, -x), t2 = (0, z, -y), t3 = (y, -x, 0)
// of ker (x, y, z): C^3 -> C.
struct KoszulSection {
  std::string name;
  Poly f, g, h;

  static KoszulSection t1();
  static KoszulSection t2();
  static KoszulSection t3();
  KoszulSection times(const Poly& P, const std::string& new_name) const;
  bool is_zero() const;

  // w in ker (x, y, z).
  CVector w(const Point3& p) const;
  // Representative (-w2, w1, 0, w3) in ker beta of the ansatz monad.
  CVector monad_vector(const Point3& p) const;
};

// |s|^2 in the ansatz metric H0: h1-norm of the monad vector projected off Im alpha.
double section_norm2(const KoszulSection& s, const Point3& p);
// |s|^2 in the conical metric |p|^{-1} I on ker (x, y, z).
double cone_norm2(const KoszulSection& s, const Point3& p);

enum class End { origin, infinity };
enum class Metric { ansatz, cone };

struct GrowthOptions {
  int directions = 2000;   // antithetic pairs on S^5
  int batches = 20;
  std::uint64_t seed = 1;
  double max_rms_residual = 0.05;
  Metric metric = Metric::ansatz;
  // Optional SU(2) x U(1) symmetry (x, y) -> (a x + b y, -conj(b) x + conj(a) y), z -> e^{i phase} z
  // applied to the integration points.
  bool use_symmetry = false;
  cplx sym_a = 1.0, sym_b = 0.0;
  double sym_phase = 0.0;
};

struct BallIntegrals {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> stderrs;
  // values per direction batch, batches x radii
  std::vector<std::vector<double>> batch_values;
};

// int_{B(r)} |s|^2 for each r (sorted ascending), sharing directions across radii.
BallIntegrals ball_integrals(const KoszulSection& s, const std::vector<double>& radii, const GrowthOptions& opts);

struct GrowthReport {
  std::string section;
  End end = End::origin;
  std::vector<double> radii;
  std::vector<double> log_integrals;
  double slope = 0.0;
  double degree = 0.0;  // slope / 2 - 3
  double rms_residual = 0.0;
};

GrowthReport growth_degree(const KoszulSection& s, End end, const std::vector<double>& radii, const GrowthOptions& opts = {});

std::vector<double> default_radii(End end);

struct FiltrationRow {
  std::string section;
  double d0 = 0.0;
  double dinf = 0.0;
};

struct FiltrationTable {
  std::vector<FiltrationRow> rows;
  bool differ = false;  // multisets {d0} and {dinf} differ (degrees matched to 0.25)
};

FiltrationTable filtration_table(const std::vector<KoszulSection>& family, const std::vector<double>& radii0,
                                 const std::vector<double>& radii_inf, const GrowthOptions& opts = {});

struct ConvexityResult {
  double i_quarter = 0.0, i_half = 0.0, i_one = 0.0;
  double residual = 0.0;   // I(1/4) I(1) - I(1/2)^2
  double relative = 0.0;   // residual / I(1/2)^2
  double stderr_ = 0.0;    // of residual, jackknife over batches
};

// Convexity of log int_{B(r)} |s|^2 at r = 1/4, 1/2, 1 in the conical metric.
ConvexityResult convexity_check(const KoszulSection& s, const GrowthOptions& opts = {});

}  // namespace hym::growth
