#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hym/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "hymtk");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return hym::cli::run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hym_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = scratch("usage");
  CHECK(run({}) == hym::cli::kUsage);
  CHECK(run({"verify", "bogus", "--out", dir.string()}) == hym::cli::kUsage);
  CHECK(run({"verify", "cone", "--tol", "oops"}) == hym::cli::kUsage);
  CHECK(run({"flow", (dir / "missing.json").string(), "--out", dir.string()}) == hym::cli::kUsage);
  write(dir / "bad_box.json", R"({"box": [[0.5, 2], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]]})");
  CHECK(run({"flow", (dir / "bad_box.json").string(), "--out", dir.string()}) == hym::cli::kUsage);
  write(dir / "short_box.json", R"({"box": [[1, 2]]})");
  CHECK(run({"flow", (dir / "short_box.json").string(), "--out", dir.string()}) == hym::cli::kUsage);
}

TEST_CASE("unstable time step aborts with 3") {
  const fs::path dir = scratch("dt");
  write(dir / "cfg.json", R"({"resolution": 5, "dt": 0.5, "steps": 3})");
  CHECK(run({"flow", (dir / "cfg.json").string(), "--out", dir.string()}) == hym::cli::kNumericalAbort);
}

TEST_CASE("small flow run writes its outputs") {
  const fs::path dir = scratch("flow");
  write(dir / "cfg.json", R"({"resolution": 5, "steps": 300, "monitor_every": 50})");
  CHECK(run({"flow", (dir / "cfg.json").string(), "--out", dir.string()}) == hym::cli::kPass);
  CHECK(fs::exists(dir / "flow_history.csv"));
  CHECK(fs::exists(dir / "flow_checkpoint.bin"));
  CHECK(fs::exists(dir / "flow_report.json"));
  std::ifstream in(dir / "flow_history.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,time,sup_mean_curvature,energy");
}

TEST_CASE("verify and report round trip") {
  const fs::path dir = scratch("report");
  CHECK(run({"verify", "cone", "--out", dir.string()}) == hym::cli::kPass);
  CHECK(run({"report", (dir / "verify_cone.json").string(), "--out", dir.string()}) == hym::cli::kPass);
  std::ifstream in(dir / "report_checks.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows > 1);
}

TEST_CASE("report edge cases") {
  const fs::path dir = scratch("edge");
  CHECK(run({"report", "--out", dir.string()}) == hym::cli::kPass);
  CHECK(fs::exists(dir / "report_growth.csv"));
  write(dir / "corrupt.json", "{ not json");
  CHECK(run({"report", (dir / "corrupt.json").string(), "--out", dir.string()}) == hym::cli::kUsage);
  CHECK(run({"report", (dir / "absent.json").string(), "--out", dir.string()}) == hym::cli::kUsage);
}
