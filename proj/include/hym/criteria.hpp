#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace hym::criteria {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::uint64_t seed = 1;
  int samples = 0;  // 0 keeps each criterion's default sample count
  std::string out_dir;
  std::map<std::string, double> tol;

  double tol_or(const std::string& name, double fallback) const;
  int samples_or(int fallback) const { return samples > 0 ? samples : fallback; }
};

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "|v-t|<=", "true"
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  json tables = json::object();  // auxiliary tables: growth, decay, constants
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 means no limit
  bool aborted = false;
  std::string error;

  bool checks_pass() const;
  bool within_time() const { return time_limit <= 0.0 || seconds <= time_limit; }
  bool pass() const { return !aborted && checks_pass() && within_time(); }
};

// Locked constants.
inline constexpr double kWeightBoundConstant = 2.8284;  // sup |Lambda F| / ell
// Barrier constant C = 2 C_w / (4 pi^3) with C_w the weight bound above: log tr h is subharmonic up to 2 |Lambda F_H0|,
// and Lap G = -4 pi^3 ell.
double barrier_constant();

int criterion_count();
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const RunConfig& cfg);

// Criteria grouped by verification suite (adhm, ansatz, potential, cone, growth, flow).
const std::map<std::string, std::vector<int>>& suites();

json to_json(const CriterionResult& r);

}  // namespace hym::criteria
