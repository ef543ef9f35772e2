#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hym/types.hpp"

namespace hym::flow {

using Mat2 = Eigen::Matrix2cd;

// Axis-aligned box in the real coordinates (Re x, Im x, Re y, Im y, Re z, Im z).
struct Box {
  std::array<double, 6> lo{1.0, -0.5, -0.5, -0.5, -0.5, -0.5};
  std::array<double, 6> hi{2.0, 0.5, 0.5, 0.5, 0.5, 0.5};
};

struct FlowDomain {
  Box box;
  std::array<int, 6> res{};
  std::array<double, 6> spacing{};
  std::array<std::size_t, 6> stride{};
  std::size_t nodes = 0;
  std::vector<unsigned char> boundary;  // 1 on the box faces
  std::vector<Mat2> H0;

  Point3 point(std::size_t idx) const;
  std::array<int, 6> index(std::size_t idx) const;
  bool is_boundary(std::size_t idx) const { return boundary[idx] != 0; }
  double min_spacing() const;
  double cell_volume() const;
};

// Box with Re x >= 1 and H0 the ansatz metric in the x-chart frame.
FlowDomain build_domain(const Box& box, int resolution, std::size_t max_nodes = 2'000'000);
FlowDomain build_domain(const Box& box, const std::array<int, 6>& resolution, std::size_t max_nodes = 2'000'000);
// Same grid with an arbitrary boundary metric (no chart constraint).
FlowDomain make_domain(const Box& box, const std::array<int, 6>& resolution, const std::function<Mat2(const Point3&)>& h0,
                       std::size_t max_nodes = 2'000'000);

struct FlowState {
  std::vector<Mat2> H;
  double t = 0.0;
  int steps = 0;
  std::vector<double> history;  // sup |i Lambda F_H| before each step
};

FlowState initial_state(const FlowDomain& d);

// Largest stable explicit step c0 * h_min^2. The 6D explicit heat limit is h^2 / 12.
double cfl_bound(const FlowDomain& d, double c0 = 0.06);

struct MeanCurvatureField {
  std::vector<Mat2> M;  // zero on the boundary
  double sup = 0.0;     // sup of the H-Hilbert-Schmidt norm over interior nodes
  std::size_t argmax = 0;
};

// i Lambda F_H = -2 H^{-1} sum_j (d_j d_jbar H - d_jbar H H^{-1} d_j H) by centred differences.
MeanCurvatureField mean_curvature_field(const FlowDomain& d, const std::vector<Mat2>& H);

// Norm of an H-self-adjoint endomorphism in an H-unitary frame.
double hs_norm(const Mat2& M, const Mat2& H);

struct StepOptions {
  double c0 = 0.06;
};

// One explicit Euler step H <- H - 2 dt H (i Lambda F_H), re-Hermitized; boundary untouched.
// Returns sup |i Lambda F_H| of the field before the update.
double step(const FlowDomain& d, FlowState& s, double dt, const StepOptions& opts = {});

struct RunOptions {
  int steps = 2000;
  double dt = 0.0;           // 0 selects the CFL bound
  double c0 = 0.06;
  int energy_every = 0;      // 0 disables energy monitoring
  int transient = 10;
  double floor_rel = 1e-10;  // relative round-off floor of sup |i Lambda F|
  std::function<void(int, double, double)> on_record;  // (step, time, sup)
};

struct HistoryRow {
  int step = 0;
  double time = 0.0;
  double sup = 0.0;
  double energy = -1.0;  // negative when not computed
};

struct FlowReport {
  std::vector<HistoryRow> history;
  double initial_sup = 0.0;
  double final_sup = 0.0;
  double ratio = 0.0;
  double dt = 0.0;
  double decay_rate = 0.0;  // -slope of log sup against time, before the floor
  double fit_r2 = 0.0;
  bool monotone = true;     // non-increasing after the transient, up to the floor
  int first_increase = -1;
};

FlowReport run(const FlowDomain& d, FlowState& s, const RunOptions& opts);

struct BarrierResult {
  bool pass = true;
  double worst_margin = 0.0;  // min over nodes of C G - |log eigenvalue|; fails below -1e-12
  std::size_t worst_node = 0;
  std::vector<std::size_t> failing;
};

struct BarrierNodes {
  std::vector<std::size_t> nodes;
  std::vector<double> G;
};

// Interior nodes on a sublattice of the given stride, with G evaluated there.
BarrierNodes barrier_nodes(const FlowDomain& d, int stride, int samples_per_shell, std::uint64_t seed);

// Eigenvalues of H0^{-1/2} H H0^{-1/2} in [e^{-C G}, e^{C G}] at every check node.
BarrierResult barrier_check(const FlowDomain& d, const std::vector<Mat2>& H, const BarrierNodes& nodes, double C);

// Midpoint-rule integral of |F_H|^2 over the interior nodes.
double energy(const FlowDomain& d, const std::vector<Mat2>& H);

// Configuration file.
struct FlowConfig {
  Box box;
  std::array<int, 6> res{7, 7, 7, 7, 7, 7};
  double dt = 0.0;
  double c0 = 0.06;
  int steps = 2000;
  int monitor_every = 10;
  int energy_every = 500;
  double barrier_C = 0.0;
  int barrier_stride = 2;
  int barrier_samples = 800;
  double target_ratio = 0.5;
  std::size_t max_nodes = 2'000'000;
  std::uint64_t seed = 1;
};

FlowConfig load_config(const std::string& path);
FlowConfig parse_config(const std::string& json_text);

// Little-endian float64, 8 per node: Re H00, Re H11, Re H01, Im H01, then padding.
void write_checkpoint(const std::string& path, const FlowDomain& d, const FlowState& s);
FlowState read_checkpoint(const std::string& path, const FlowDomain& d);
void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows);

}  // namespace hym::flow
