#include "hym/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hym/criteria.hpp"
#include "hym/flow.hpp"

namespace hym::cli {

namespace {

using criteria::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, double> parse_tols(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects name=value, got '" + s + "'");
    try {
      size_t used = 0;
      const double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      out[s.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw UsageError("--tol value is not a number in '" + s + "'");
    }
  }
  return out;
}

fs::path out_path(const criteria::RunConfig& cfg, const std::string& name) {
  const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

int cmd_verify(const std::string& suite, const criteria::RunConfig& cfg) {
  const auto& s = criteria::suites();
  const auto it = s.find(suite);
  if (it == s.end()) {
    std::cerr << "unknown suite '" << suite << "' (adhm, ansatz, potential, cone, growth, flow)\n";
    return kUsage;
  }
  json report;
  report["suite"] = suite;
  report["seed"] = cfg.seed;
  json crits = json::array();
  bool all = true, aborted = false;
  for (int id : it->second) {
    const criteria::CriterionResult r = criteria::run_criterion(id, cfg);
    std::cerr << "criterion " << id << " (" << r.title << "): " << (r.pass() ? "PASS" : "FAIL") << " in " << fmt(r.seconds)
              << " s\n";
    for (const auto& c : r.checks)
      std::cerr << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << " = " << fmt(c.value) << " (" << c.relation << " "
                << fmt(c.target) << (c.relation == "|v-t|<=" ? " tol " + fmt(c.tolerance) : "") << ")\n";
    if (r.aborted) std::cerr << "  aborted: " << r.error << "\n";
    all = all && !r.aborted && r.checks_pass();
    aborted = aborted || r.aborted;
    crits.push_back(criteria::to_json(r));
  }
  report["pass"] = all;
  report["criteria"] = crits;
  if (cfg.out_dir.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_text(out_path(cfg, "verify_" + suite + ".json"), report.dump(2) + "\n");
  }
  if (aborted) return kNumericalAbort;
  return all ? kPass : kCheckFailure;
}

int cmd_flow(const std::string& path, const criteria::RunConfig& cfg) {
  flow::FlowConfig fc;
  flow::FlowDomain d;
  try {
    fc = flow::load_config(path);
    d = flow::build_domain(fc.box, fc.res, fc.max_nodes);
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  }
  flow::FlowState s = flow::initial_state(d);
  flow::RunOptions o;
  o.steps = fc.steps;
  o.dt = fc.dt;
  o.c0 = fc.c0;
  o.energy_every = fc.energy_every;
  flow::FlowReport rep;
  try {
    rep = flow::run(d, s, o);
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kNumericalAbort;
  }
  std::vector<flow::HistoryRow> rows;
  for (const auto& r : rep.history)
    if (r.step % fc.monitor_every == 0 || &r == &rep.history.back()) rows.push_back(r);
  flow::write_history_csv(out_path(cfg, "flow_history.csv").string(), rows);
  flow::write_checkpoint(out_path(cfg, "flow_checkpoint.bin").string(), d, s);

  json out;
  out["kind"] = "flow";
  out["config"] = fs::path(path).filename().string();
  out["nodes"] = d.nodes;
  out["dt"] = rep.dt;
  out["steps"] = s.steps;
  out["initial_sup"] = rep.initial_sup;
  out["final_sup"] = rep.final_sup;
  out["ratio"] = rep.ratio;
  out["target_ratio"] = fc.target_ratio;
  out["monotone_after_transient"] = rep.monotone;
  out["decay_rate"] = rep.decay_rate;
  bool pass = rep.ratio <= fc.target_ratio;
  if (fc.barrier_C > 0.0) {
    const flow::BarrierNodes bn = flow::barrier_nodes(d, fc.barrier_stride, fc.barrier_samples, fc.seed);
    const flow::BarrierResult b = flow::barrier_check(d, s.H, bn, fc.barrier_C);
    out["barrier_C"] = fc.barrier_C;
    out["barrier_pass"] = b.pass;
    out["barrier_worst_margin"] = b.worst_margin;
    pass = pass && b.pass;
  }
  out["pass"] = pass;
  out["tables"]["constants"] = json::array({{{"name", "flow_ratio"}, {"value", rep.ratio}},
                                            {{"name", "flow_decay_rate"}, {"value", rep.decay_rate}}});
  write_text(out_path(cfg, "flow_report.json"), out.dump(2) + "\n");
  std::cerr << "flow: " << s.steps << " steps, dt " << fmt(rep.dt) << ", sup ratio " << fmt(rep.ratio) << " -> "
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kCheckFailure;
}

struct Tables {
  std::vector<std::string> checks{"source,criterion,check,value,relation,target,pass"};
  std::vector<std::string> growth{"source,section,d0,dinf"};
  std::vector<std::string> decay{"source,ray,r_min,r_max,slope"};
  std::vector<std::string> constants{"source,name,value"};
};

std::string num(const json& v) { return v.is_number() ? fmt(v.get<double>()) : v.dump(); }

void collect_tables(const std::string& src, const json& t, Tables& out) {
  if (!t.is_object()) return;
  if (t.contains("growth"))
    for (const json& r : t.at("growth"))
      out.growth.push_back(src + "," + r.at("section").get<std::string>() + "," + num(r.at("d0")) + "," + num(r.at("dinf")));
  if (t.contains("decay"))
    for (const json& r : t.at("decay"))
      out.decay.push_back(src + "," + r.at("ray").get<std::string>() + "," + num(r.at("r_min")) + "," + num(r.at("r_max")) +
                          "," + num(r.at("slope")));
  if (t.contains("constants"))
    for (const json& r : t.at("constants"))
      out.constants.push_back(src + "," + r.at("name").get<std::string>() + "," + num(r.at("value")));
}

int cmd_report(const std::vector<std::string>& files, const criteria::RunConfig& cfg) {
  Tables t;
  for (const std::string& f : files) {
    std::ifstream in(f);
    if (!in) {
      std::cerr << "cannot open " << f << "\n";
      return kUsage;
    }
    const std::string src = fs::path(f).filename().string();
    try {
      const json j = json::parse(in);
      if (!j.is_object()) throw std::runtime_error("top level is not an object");
      if (j.contains("tables")) collect_tables(src, j.at("tables"), t);
      if (j.contains("criteria")) {
        for (const json& c : j.at("criteria")) {
          const std::string id = std::to_string(c.at("id").get<int>());
          for (const json& k : c.at("checks"))
            t.checks.push_back(src + "," + id + "," + k.at("name").get<std::string>() + "," + num(k.at("value")) + "," +
                               k.at("relation").get<std::string>() + "," + num(k.at("target")) + "," +
                               (k.at("pass").get<bool>() ? "1" : "0"));
          if (c.contains("tables")) collect_tables(src, c.at("tables"), t);
        }
      }
    } catch (const std::exception& e) {
      std::cerr << "malformed report " << f << ": " << e.what() << "\n";
      return kUsage;
    }
  }
  auto join = [](const std::vector<std::string>& rows) {
    std::string s;
    for (const auto& r : rows) s += r + "\n";
    return s;
  };
  write_text(out_path(cfg, "report_checks.csv"), join(t.checks));
  write_text(out_path(cfg, "report_growth.csv"), join(t.growth));
  write_text(out_path(cfg, "report_decay.csv"), join(t.decay));
  write_text(out_path(cfg, "report_constants.csv"), join(t.constants));
  return kPass;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"hymtk: numerical checks for a non-conical HYM connection on C^3"};
  app.require_subcommand(1);
  app.fallthrough();
  criteria::RunConfig cfg;
  std::vector<std::string> tols;
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--samples", cfg.samples, "override the main sample count")->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out_dir, "output directory");
  app.add_option("--tol", tols, "tolerance override name=value (repeatable)");

  std::string suite, config;
  std::vector<std::string> files;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "adhm | ansatz | potential | cone | growth | flow")->required();
  CLI::App* flowc = app.add_subcommand("flow", "run the heat flow from a JSON config");
  flowc->add_option("config", config, "flow configuration")->required();
  CLI::App* report = app.add_subcommand("report", "merge JSON reports into CSV tables");
  report->add_option("files", files, "report files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  try {
    cfg.tol = parse_tols(tols);
    if (verify->parsed()) return cmd_verify(suite, cfg);
    if (flowc->parsed()) return cmd_flow(config, cfg);
    return cmd_report(files, cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kNumericalAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace hym::cli
