#include "hym/flow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hym/ansatz.hpp"
#include "hym/numerics.hpp"
#include "hym/potential.hpp"

namespace hym::flow {

namespace {

bool positive(const Mat2& H) {
  return H(0, 0).real() > 0.0 && H(1, 1).real() > 0.0 && (H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0)).real() > 0.0;
}

Mat2 hermitize(const Mat2& H) { return 0.5 * (H + H.adjoint()); }

std::string node_diag(const FlowDomain& d, std::size_t idx) {
  const auto ix = d.index(idx);
  std::ostringstream os;
  os << "node " << idx << " index (";
  for (int a = 0; a < 6; ++a) os << ix[static_cast<size_t>(a)] << (a < 5 ? "," : ")");
  return os.str();
}

// Centred first and unmixed second derivatives along the six real axes.
struct Jet {
  std::array<Mat2, 6> d1;
  std::array<Mat2, 6> d2;
};

Jet jet_at(const FlowDomain& d, const std::vector<Mat2>& H, std::size_t i) {
  Jet j;
  for (size_t a = 0; a < 6; ++a) {
    const Mat2& p = H[i + d.stride[a]];
    const Mat2& m = H[i - d.stride[a]];
    const double h = d.spacing[a];
    j.d1[a] = (p - m) / (2.0 * h);
    j.d2[a] = (p - 2.0 * H[i] + m) / (h * h);
  }
  return j;
}

// sum_j (d_j d_jbar H - d_jbar H H^{-1} d_j H)
Mat2 flow_operator(const Jet& j, const Mat2& Hinv) {
  Mat2 L = Mat2::Zero();
  for (size_t c = 0; c < 3; ++c) {
    const Mat2& Da = j.d1[2 * c];
    const Mat2& Db = j.d1[2 * c + 1];
    const Mat2 dj = 0.5 * (Da - I * Db);
    const Mat2 djbar = 0.5 * (Da + I * Db);
    L += 0.25 * (j.d2[2 * c] + j.d2[2 * c + 1]) - djbar * Hinv * dj;
  }
  return L;
}

FlowDomain grid(const Box& box, const std::array<int, 6>& res, std::size_t max_nodes) {
  FlowDomain d;
  d.box = box;
  d.res = res;
  std::size_t n = 1;
  for (size_t a = 0; a < 6; ++a) {
    if (res[a] < 5) throw DomainError("flow domain: resolution must be >= 5 per axis");
    if (!(box.hi[a] > box.lo[a])) throw DomainError("flow domain: empty box interval");
    d.spacing[a] = (box.hi[a] - box.lo[a]) / (res[a] - 1);
    n *= static_cast<std::size_t>(res[a]);
    if (n > max_nodes) throw DomainError("flow domain: node count exceeds the memory budget");
  }
  d.nodes = n;
  d.stride[5] = 1;
  for (int a = 4; a >= 0; --a)
    d.stride[static_cast<size_t>(a)] = d.stride[static_cast<size_t>(a + 1)] * static_cast<std::size_t>(res[static_cast<size_t>(a + 1)]);
  d.boundary.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ix = d.index(i);
    for (size_t a = 0; a < 6; ++a)
      if (ix[a] == 0 || ix[a] == res[a] - 1) d.boundary[i] = 1;
  }
  return d;
}

}  // namespace

Point3 FlowDomain::point(std::size_t idx) const {
  const auto ix = index(idx);
  double r[6];
  for (size_t a = 0; a < 6; ++a) r[a] = box.lo[a] + ix[a] * spacing[a];
  return {cplx(r[0], r[1]), cplx(r[2], r[3]), cplx(r[4], r[5])};
}

std::array<int, 6> FlowDomain::index(std::size_t idx) const {
  std::array<int, 6> ix{};
  for (size_t a = 0; a < 6; ++a) {
    ix[a] = static_cast<int>(idx / stride[a]);
    idx %= stride[a];
  }
  return ix;
}

double FlowDomain::min_spacing() const { return *std::min_element(spacing.begin(), spacing.end()); }

double FlowDomain::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

FlowDomain make_domain(const Box& box, const std::array<int, 6>& res, const std::function<Mat2(const Point3&)>& h0,
                       std::size_t max_nodes) {
  FlowDomain d = grid(box, res, max_nodes);
  d.H0.resize(d.nodes);
  for (std::size_t i = 0; i < d.nodes; ++i) {
    d.H0[i] = hermitize(h0(d.point(i)));
    if (!positive(d.H0[i])) throw DomainError("flow domain: H0 not positive at " + node_diag(d, i));
  }
  return d;
}

FlowDomain build_domain(const Box& box, const std::array<int, 6>& res, std::size_t max_nodes) {
  if (box.lo[0] < 1.0) throw DomainError("flow domain: the box must satisfy Re x >= 1 (x-chart frame)");
  return make_domain(box, res, [](const Point3& p) { return Mat2(ansatz::asymptotic_frame(p, ansatz::Chart::x).gram); },
                     max_nodes);
}

FlowDomain build_domain(const Box& box, int resolution, std::size_t max_nodes) {
  std::array<int, 6> r;
  r.fill(resolution);
  return build_domain(box, r, max_nodes);
}

FlowState initial_state(const FlowDomain& d) {
  FlowState s;
  s.H = d.H0;
  return s;
}

double cfl_bound(const FlowDomain& d, double c0) {
  const double h = d.min_spacing();
  return c0 * h * h;
}

double hs_norm(const Mat2& M, const Mat2& H) {
  return std::sqrt(std::max(0.0, (M * H.inverse() * M.adjoint() * H).trace().real()));
}

MeanCurvatureField mean_curvature_field(const FlowDomain& d, const std::vector<Mat2>& H) {
  MeanCurvatureField f;
  f.M.assign(d.nodes, Mat2::Zero());
  for (std::size_t i = 0; i < d.nodes; ++i) {
    if (d.is_boundary(i)) continue;
    if (!positive(H[i])) throw NumericalAbort("mean_curvature_field: H not positive at " + node_diag(d, i));
    const Mat2 Hinv = H[i].inverse();
    f.M[i] = -2.0 * Hinv * flow_operator(jet_at(d, H, i), Hinv);
    const double n = hs_norm(f.M[i], H[i]);
    if (n > f.sup) {
      f.sup = n;
      f.argmax = i;
    }
  }
  return f;
}

double step(const FlowDomain& d, FlowState& s, double dt, const StepOptions& opts) {
  const double bound = cfl_bound(d, opts.c0);
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12))
    throw NumericalAbort("step: dt = " + std::to_string(dt) + " violates the CFL bound " + std::to_string(bound));
  std::vector<Mat2> next = s.H;
  double sup = 0.0;
#pragma omp parallel for reduction(max : sup) schedule(static)
  for (std::size_t i = 0; i < d.nodes; ++i) {
    if (d.is_boundary(i)) continue;
    const Mat2 Hinv = s.H[i].inverse();
    const Mat2 L = flow_operator(jet_at(d, s.H, i), Hinv);
    sup = std::max(sup, hs_norm(-2.0 * Hinv * L, s.H[i]));
    next[i] = hermitize(s.H[i] + 4.0 * dt * L);
  }
  for (std::size_t i = 0; i < d.nodes; ++i)
    if (!d.is_boundary(i) && !positive(next[i]))
      throw NumericalAbort("step: positivity lost at " + node_diag(d, i) + " after step " + std::to_string(s.steps + 1));
  s.H.swap(next);
  s.t += dt;
  ++s.steps;
  s.history.push_back(sup);
  return sup;
}

FlowReport run(const FlowDomain& d, FlowState& s, const RunOptions& opts) {
  FlowReport rep;
  rep.dt = opts.dt > 0.0 ? opts.dt : cfl_bound(d, opts.c0);
  StepOptions so;
  so.c0 = opts.c0;
  for (int k = 0; k < opts.steps; ++k) {
    HistoryRow row;
    row.step = s.steps;
    row.time = s.t;
    if (opts.energy_every > 0 && k % opts.energy_every == 0) row.energy = energy(d, s.H);
    row.sup = step(d, s, rep.dt, so);
    rep.history.push_back(row);
    if (opts.on_record) opts.on_record(row.step, row.time, row.sup);
  }
  HistoryRow last;
  last.step = s.steps;
  last.time = s.t;
  last.sup = mean_curvature_field(d, s.H).sup;
  if (opts.energy_every > 0) last.energy = energy(d, s.H);
  rep.history.push_back(last);

  rep.initial_sup = rep.history.front().sup;
  rep.final_sup = last.sup;
  rep.ratio = rep.initial_sup > 0.0 ? rep.final_sup / rep.initial_sup : 0.0;
  const double floor = opts.floor_rel * rep.initial_sup;
  std::vector<double> ts, ls;
  for (size_t k = 0; k < rep.history.size(); ++k) {
    const HistoryRow& r = rep.history[k];
    if (r.step < opts.transient) continue;
    if (k + 1 < rep.history.size()) {
      const double next = rep.history[k + 1].sup;
      if (next > r.sup + floor && rep.monotone) {
        rep.monotone = false;
        rep.first_increase = rep.history[k + 1].step;
      }
    }
    if (r.sup > 1e3 * floor) {
      ts.push_back(r.time);
      ls.push_back(std::log(r.sup));
    }
  }
  if (ts.size() >= 3) {
    const LineFit fit = fit_line(ts, ls);
    rep.decay_rate = -fit.slope;
    rep.fit_r2 = fit.r2;
  }
  return rep;
}

BarrierNodes barrier_nodes(const FlowDomain& d, int stride, int samples_per_shell, std::uint64_t seed) {
  if (stride < 1) throw DomainError("barrier_nodes: stride must be >= 1");
  BarrierNodes b;
  for (std::size_t i = 0; i < d.nodes; ++i) {
    if (d.is_boundary(i)) continue;
    const auto ix = d.index(i);
    bool on = true;
    for (int v : ix) on = on && ((v - 1) % stride == 0);
    if (!on) continue;
    const Point3 p = d.point(i);
    b.nodes.push_back(i);
    b.G.push_back(potential::eval_G(p, potential::MCParams::for_point(p, samples_per_shell, seed + b.nodes.size())).estimate);
  }
  return b;
}

BarrierResult barrier_check(const FlowDomain& d, const std::vector<Mat2>& H, const BarrierNodes& nodes, double C) {
  BarrierResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < nodes.nodes.size(); ++k) {
    const std::size_t i = nodes.nodes[k];
    Eigen::SelfAdjointEigenSolver<Mat2> es(d.H0[i]);
    const Mat2 R = es.operatorInverseSqrt();
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2>(hermitize(R * H[i] * R)).eigenvalues();
    const double dev = std::max(std::abs(std::log(ev(0))), std::abs(std::log(ev(1))));
    const double margin = C * nodes.G[k] - dev;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_node = i;
    }
    if (margin < -1e-12) {
      r.pass = false;
      r.failing.push_back(i);
    }
  }
  if (nodes.nodes.empty()) r.worst_margin = 0.0;
  return r;
}

double energy(const FlowDomain& d, const std::vector<Mat2>& H) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.nodes; ++i) {
    if (d.is_boundary(i)) continue;
    const Mat2 Hinv = H[i].inverse();
    std::array<Mat2, 6> d1;
    std::array<std::array<Mat2, 6>, 6> d2;
    for (size_t a = 0; a < 6; ++a) {
      const std::size_t sa = d.stride[a];
      const double ha = d.spacing[a];
      d1[a] = (H[i + sa] - H[i - sa]) / (2.0 * ha);
      d2[a][a] = (H[i + sa] - 2.0 * H[i] + H[i - sa]) / (ha * ha);
      for (size_t b = 0; b < a; ++b) {
        const std::size_t sb = d.stride[b];
        d2[a][b] = (H[i + sa + sb] - H[i + sa - sb] - H[i - sa + sb] + H[i - sa - sb]) / (4.0 * ha * d.spacing[b]);
        d2[b][a] = d2[a][b];
      }
    }
    double f2 = 0.0;
    for (size_t j = 0; j < 3; ++j) {
      const Mat2 dj = 0.5 * (d1[2 * j] - I * d1[2 * j + 1]);
      for (size_t k = 0; k < 3; ++k) {
        const Mat2 dkbar = 0.5 * (d1[2 * k] + I * d1[2 * k + 1]);
        const Mat2 djdkbar = 0.25 * (d2[2 * j][2 * k] + I * d2[2 * j][2 * k + 1] - I * d2[2 * j + 1][2 * k] +
                                     d2[2 * j + 1][2 * k + 1]);
        const Mat2 F = -Hinv * (djdkbar - dkbar * Hinv * dj);
        f2 += 4.0 * (F * Hinv * F.adjoint() * H[i]).trace().real();
      }
    }
    total += f2;
  }
  return total * d.cell_volume();
}

FlowConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("flow config: ") + e.what());
  }
  FlowConfig c;
  try {
    if (j.contains("box")) {
      const json& b = j.at("box");
      if (!b.is_array() || b.size() != 6) throw DomainError("flow config: box must list 6 intervals");
      for (size_t a = 0; a < 6; ++a) {
        c.box.lo[a] = b[a].at(0).get<double>();
        c.box.hi[a] = b[a].at(1).get<double>();
      }
    }
    if (j.contains("resolution")) {
      const json& r = j.at("resolution");
      if (r.is_number_integer()) {
        c.res.fill(r.get<int>());
      } else {
        if (!r.is_array() || r.size() != 6) throw DomainError("flow config: resolution must be an integer or 6 integers");
        for (size_t a = 0; a < 6; ++a) c.res[a] = r[a].get<int>();
      }
    }
    c.dt = j.value("dt", c.dt);
    c.c0 = j.value("cfl_factor", c.c0);
    c.steps = j.value("steps", c.steps);
    c.monitor_every = j.value("monitor_every", c.monitor_every);
    c.energy_every = j.value("energy_every", c.energy_every);
    c.barrier_C = j.value("barrier_C", c.barrier_C);
    c.barrier_stride = j.value("barrier_stride", c.barrier_stride);
    c.barrier_samples = j.value("barrier_samples", c.barrier_samples);
    c.target_ratio = j.value("target_ratio", c.target_ratio);
    c.max_nodes = j.value("max_nodes", c.max_nodes);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw DomainError(std::string("flow config: ") + e.what());
  }
  if (c.steps < 1 || c.monitor_every < 1 || c.energy_every < 0) throw DomainError("flow config: bad step counts");
  if (c.dt < 0.0 || !(c.c0 > 0.0)) throw DomainError("flow config: bad time step");
  return c;
}

FlowConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("flow config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw DomainError("checkpoint: truncated file");
  std::uint64_t u = 0;
  for (int k = 0; k < 8; ++k) u |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return std::bit_cast<double>(u);
}

}  // namespace

void write_checkpoint(const std::string& path, const FlowDomain& d, const FlowState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("checkpoint: cannot write " + path);
  for (const Mat2& H : s.H) {
    put_le(out, H(0, 0).real());
    put_le(out, H(1, 1).real());
    put_le(out, H(0, 1).real());
    put_le(out, H(0, 1).imag());
    for (int k = 0; k < 4; ++k) put_le(out, 0.0);
  }
  nlohmann::ordered_json side;
  side["format"] = "float64-le, 8 per node: H00, H11, Re H01, Im H01, 4 x padding";
  side["nodes"] = d.nodes;
  side["order"] = "node-major, last axis fastest; axes Re x, Im x, Re y, Im y, Re z, Im z";
  side["resolution"] = d.res;
  side["lo"] = d.box.lo;
  side["hi"] = d.box.hi;
  side["time"] = s.t;
  side["steps"] = s.steps;
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

FlowState read_checkpoint(const std::string& path, const FlowDomain& d) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("checkpoint: cannot open " + path);
  FlowState s;
  s.H.resize(d.nodes);
  for (Mat2& H : s.H) {
    const double a = get_le(in), b = get_le(in), cr = get_le(in), ci = get_le(in);
    for (int k = 0; k < 4; ++k) get_le(in);
    H << a, cplx(cr, ci), cplx(cr, -ci), b;
  }
  std::ifstream js(path + ".json");
  if (js) {
    try {
      const auto side = nlohmann::json::parse(js);
      s.t = side.value("time", 0.0);
      s.steps = side.value("steps", 0);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("checkpoint sidecar: ") + e.what());
    }
  }
  return s;
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DomainError("history: cannot write " + path);
  out << "step,time,sup_mean_curvature,energy\n";
  out.precision(17);
  for (const HistoryRow& r : rows) {
    out << r.step << ',' << r.time << ',' << r.sup << ',';
    if (r.energy >= 0.0) out << r.energy;
    out << '\n';
  }
}

}  // namespace hym::flow
