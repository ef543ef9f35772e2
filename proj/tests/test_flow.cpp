#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "hym/ansatz.hpp"
#include "hym/flow.hpp"

using namespace hym;
using namespace hym::flow;

namespace {

std::size_t centre(const FlowDomain& d) {
  std::size_t idx = 0;
  for (int a = 0; a < 6; ++a) idx += static_cast<std::size_t>(d.res[a] / 2) * d.stride[a];
  return idx;
}

std::array<int, 6> uniform(int n) { return {n, n, n, n, n, n}; }

}  // namespace

TEST_CASE("grid sizes and domain errors") {
  CHECK(build_domain(Box{}, 7).nodes == 117649);
  CHECK(build_domain(Box{}, 9, 600000).nodes == 531441);
  CHECK_THROWS_AS(build_domain(Box{}, 9, 500000), DomainError);
  CHECK_THROWS_AS(build_domain(Box{}, 4), DomainError);
  Box bad;
  bad.lo[0] = 0.5;
  CHECK_THROWS_AS(build_domain(bad, 5), DomainError);
}

TEST_CASE("constant metric is a fixed point") {
  Mat2 c;
  c << 2.0, cplx(0.3, 0.1), cplx(0.3, -0.1), 1.0;
  const FlowDomain d = make_domain(Box{}, uniform(5), [&](const Point3&) { return c; });
  FlowState s = initial_state(d);
  CHECK(mean_curvature_field(d, s.H).sup == 0.0);
  CHECK(energy(d, s.H) == 0.0);
  step(d, s, cfl_bound(d));
  for (std::size_t i = 0; i < d.nodes; ++i) CHECK((s.H[i] - c).norm() < 1e-15);
}

TEST_CASE("abelian metric follows the scalar heat equation") {
  // H = e^u I gives i Lambda F = -(1/2) Lap u, and the flow is u_t = Lap u.
  const double a = 0.2;
  auto u = [&](const Point3& p) { return a * std::norm(p.x() - 1.5) + 0.1 * p.y().real(); };
  const FlowDomain d = make_domain(Box{}, uniform(7), [&](const Point3& p) { return Mat2(std::exp(u(p)) * Mat2::Identity()); });
  const std::size_t c = centre(d);
  const MeanCurvatureField m = mean_curvature_field(d, d.H0);
  // Lap |x - 1.5|^2 = 4 in real coordinates.
  CHECK(m.M[c](0, 0).real() == doctest::Approx(-2.0 * a).epsilon(1e-3));
  CHECK(std::abs(m.M[c](0, 1)) < 1e-14);
  FlowState s = initial_state(d);
  const double dt = cfl_bound(d);
  step(d, s, dt);
  const double u_new = std::log(s.H[c](0, 0).real());
  CHECK(u_new - u(d.point(c)) == doctest::Approx(4.0 * a * dt).epsilon(1e-3));
  CHECK(std::abs(s.H[c](0, 1)) < 1e-14);
}

TEST_CASE("centred differences match the monad engine at second order") {
  double prev = 0.0;
  for (int n : {5, 7, 9}) {
    const FlowDomain d = build_domain(Box{}, n, 600000);
    const std::size_t c = centre(d);
    const MeanCurvatureField m = mean_curvature_field(d, d.H0);
    const double exact = curvature(ansatz::ansatz_spec(), d.point(c)).norm_mean;
    const double err = std::abs(hs_norm(m.M[c], d.H0[c]) - exact);
    if (prev > 0.0) CHECK(err < 0.7 * prev);
    prev = err;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("stepping rules") {
  const FlowDomain d = build_domain(Box{}, 5);
  FlowState s = initial_state(d);
  CHECK_THROWS_AS(step(d, s, 2.0 * cfl_bound(d)), NumericalAbort);
  const double before = step(d, s, cfl_bound(d));
  CHECK(before > 0.0);
  for (int i = 0; i < 20; ++i) step(d, s, cfl_bound(d));
  for (std::size_t i = 0; i < d.nodes; ++i)
    if (d.is_boundary(i)) CHECK(s.H[i] == d.H0[i]);
  CHECK(mean_curvature_field(d, s.H).sup < before);
}

TEST_CASE("short run decays monotonically") {
  const FlowDomain d = build_domain(Box{}, 5);
  FlowState s = initial_state(d);
  RunOptions o;
  o.steps = 300;
  const FlowReport r = run(d, s, o);
  CHECK(r.monotone);
  CHECK(r.ratio < 0.5);
  CHECK(r.fit_r2 > 0.9);
}

TEST_CASE("barrier check") {
  const FlowDomain d = build_domain(Box{}, 5);
  const BarrierNodes bn = barrier_nodes(d, 2, 50, 1);
  CHECK(!bn.nodes.empty());
  for (double g : bn.G) CHECK(g > 0.0);
  CHECK(barrier_check(d, d.H0, bn, 0.0).pass);
  std::vector<Mat2> doubled = d.H0;
  for (auto& h : doubled) h *= 2.0;
  // log 2 exceeds C G everywhere for C = 0.01.
  const BarrierResult b = barrier_check(d, doubled, bn, 0.01);
  CHECK_FALSE(b.pass);
  CHECK(b.failing.size() == bn.nodes.size());
}

TEST_CASE("config parsing") {
  const FlowConfig c = parse_config(R"({"resolution": 5, "steps": 10, "cfl_factor": 0.05})");
  CHECK(c.res[3] == 5);
  CHECK(c.steps == 10);
  CHECK(c.c0 == 0.05);
  CHECK_THROWS_AS(parse_config("{"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"steps": "many"})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"resolution": [5, 5]})"), DomainError);
  CHECK_THROWS_AS(load_config("/nonexistent/flow.json"), DomainError);
}

TEST_CASE("checkpoint round trip") {
  const FlowDomain d = build_domain(Box{}, 5);
  FlowState s = initial_state(d);
  step(d, s, cfl_bound(d));
  const auto path = (std::filesystem::temp_directory_path() / "hym_ckpt_test.bin").string();
  write_checkpoint(path, d, s);
  const FlowState r = read_checkpoint(path, d);
  REQUIRE(r.H.size() == s.H.size());
  for (std::size_t i = 0; i < d.nodes; ++i) CHECK(r.H[i] == s.H[i]);
  CHECK(std::filesystem::file_size(path) == d.nodes * 8 * sizeof(double));
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".json");
}
