#include "rdalab/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "rdalab/analysis.hpp"
#include "rdalab/audit.hpp"
#include "rdalab/harness.hpp"
#include "rdalab/metrics.hpp"

namespace rda {
namespace cli {

namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = strip(tok);
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  os << content;
  return true;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: bad section at line " + std::to_string(lineno));
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
    cfg.sections[section][strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::invalid_argument("config: cannot read " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse(buf.str());
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  auto sit = sections.find(section);
  return sit != sections.end() && sit->second.count(key) > 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  auto sit = sections.find(section);
  if (sit == sections.end()) return fallback;
  auto kit = sit->second.find(key);
  return kit == sit->second.end() ? fallback : kit->second;
}

long long RunConfig::get_int(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? std::stoll(get(section, key)) : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? std::stod(get(section, key)) : fallback;
}

namespace {

int cmd_simulate(const std::string& config_path, std::uint64_t seed, bool seed_given,
                 const std::string& out_path, const std::string& log_path, bool strict,
                 std::ostream& out, std::ostream& err) {
  RunConfig cfg = RunConfig::load(config_path);
  const std::string mode = cfg.get("run", "mode", "protocol");
  std::uint64_t master = seed_given ? seed : std::uint64_t(cfg.get_int("seeds", "master", 1));

  Params params;
  params.k1 = int(cfg.get_int("params", "k1", 1));
  params.k2 = int(cfg.get_int("params", "k2", 1));
  params.m = SymbolIndex(cfg.get_int("params", "m", params.k2));
  params.subnet_delay = cfg.get_int("params", "subnet_delay", 7);
  params.sync_delay = cfg.get_int("params", "sync_delay", 2);
  params.lifetime = cfg.get_int("params", "lifetime", 100);
  params.validate();

  if (mode == "occupancy") {
    Schedule schedule;
    if (cfg.has("schedule", "file")) {
      std::ifstream is(cfg.get("schedule", "file"), std::ios::binary);
      if (!is) {
        err << "error: cannot read schedule file " << cfg.get("schedule", "file") << "\n";
        return 2;
      }
      std::ostringstream buf;
      buf << is.rdbuf();
      schedule = Schedule::parse(buf.str());
      schedule.validate();
    } else {
      ChurnSpec churn;
      churn.initial = int(cfg.get_int("schedule", "initial", churn.initial));
      churn.warmup_target = int(cfg.get_int("schedule", "target", churn.warmup_target));
      churn.batch = int(cfg.get_int("schedule", "batch", churn.batch));
      churn.stay = int(cfg.get_int("schedule", "stay", churn.stay));
      churn.rounds = cfg.get_int("schedule", "rounds", churn.rounds);
      churn.anchors = int(cfg.get_int("schedule", "anchors", churn.anchors));
      schedule = churn_schedule(churn);
    }
    std::vector<int> k1_list = parse_int_list(cfg.get("schedule", "k1_list", "1"));
    if (k1_list.empty()) {
      err << "error: empty k1_list\n";
      return 2;
    }
    std::vector<std::vector<metrics::RoundMetrics>> series(k1_list.size());
    for (size_t k = 0; k < k1_list.size(); ++k) {
      Params p = params;
      p.k1 = k1_list[k];
      p.m = params.m % p.k2 == 0 ? params.m : SymbolIndex(p.k2);
      series[k] =
          metrics::simulate_occupancy(schedule, p, mix64(master ^ std::uint64_t(k1_list[k]) * 7919));
    }
    std::string csv = metrics::simulation_csv(k1_list, series);
    if (out_path.empty())
      out << csv;
    else if (!write_file(out_path, csv, err))
      return 2;
    return 0;
  }

  harness::GridRunOptions opt;
  opt.k1 = params.k1;
  opt.k2 = params.k2;
  opt.chunk = params.m / params.k2;
  opt.subnet_delay = params.subnet_delay;
  opt.sync_delay = params.sync_delay;
  opt.lifetime = params.lifetime;
  opt.core_per_column = int(cfg.get_int("schedule", "core_per_column", opt.core_per_column));
  opt.anchors = int(cfg.get_int("schedule", "anchors", opt.anchors));
  opt.churners = int(cfg.get_int("schedule", "churners", opt.churners));
  opt.churn_stay = cfg.get_int("schedule", "stay", opt.churn_stay);
  opt.stores = int(cfg.get_int("workload", "stores", opt.stores));
  opt.gets = int(cfg.get_int("workload", "gets", opt.gets));
  opt.invalid_stores = int(cfg.get_int("workload", "invalid_stores", opt.invalid_stores));
  opt.missing_gets = int(cfg.get_int("workload", "missing_gets", opt.missing_gets));
  opt.adversary = cfg.get("adversary", "name", "passive");
  opt.optimized = cfg.get_int("run", "optimized", 0) != 0;
  opt.malicious_pool = int(cfg.get_int("run", "malicious_pool", opt.malicious_pool));

  ExperimentConfig exp = harness::make_grid_experiment(master, opt);
  AdmissibilityReport rep =
      check_admissible(exp.schedule, int(cfg.get_int("schedule", "admissibility_n", 1)),
                       overlap_min(params.subnet_delay, params.sync_delay), params);
  if (!rep.admissible()) {
    (strict ? err : out) << (strict ? "error" : "warning")
                         << ": schedule not admissible: " << rep.witness << "\n";
    if (strict) return 3;
  }

  EventLog log = run_experiment(exp);
  std::string csv = metrics::run_csv(metrics::measure(log));
  if (out_path.empty())
    out << csv;
  else if (!write_file(out_path, csv, err))
    return 2;
  if (!log_path.empty() && !write_file(log_path, log.serialize(), err)) return 2;
  return 0;
}

int cmd_estimate(double n_honest, double beta, double eps_target, const std::string& k2_range,
                 const std::string& assumptions, int k1_cap, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  if (assumptions != "benchmark") {
    err << "error: unknown assumptions preset '" << assumptions << "'\n";
    return 2;
  }
  analysis::TradeoffAssumptions assume = analysis::TradeoffAssumptions::benchmark();
  if (k1_cap > 0) assume.k1_cap = k1_cap;

  std::vector<int> k2_values;
  {
    int lo = 0, hi = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream is(k2_range);
    if (!(is >> lo)) {
      err << "error: bad --k2-range\n";
      return 2;
    }
    if (is >> c1 >> hi) {
      if (is >> c2 >> step) {
      }
    } else {
      hi = lo;
    }
    if (lo < 1 || hi < lo || step < 1) {
      err << "error: bad --k2-range\n";
      return 2;
    }
    for (int k2 = lo; k2 <= hi; k2 += step) k2_values.push_back(k2);
  }

  auto rows = analysis::tradeoff_curve(n_honest, beta, (long double)eps_target, k2_values, assume);
  if (rows.empty()) err << "warning: no feasible k1 for any k2 in range\n";
  for (const auto& row : rows)
    if (row.k1_capped) {
      err << "warning: k2=" << row.k2 << " hit the k1 cap (" << assume.k1_cap
          << "); target is vacuous there\n";
      break;
    }

  std::ostringstream csv;
  csv << "k2,k1,join_complexity,get_complexity,store_complexity\n";
  char buf[64];
  for (const auto& row : rows) {
    csv << row.k2 << ',' << row.max_k1 << ',';
    std::snprintf(buf, sizeof buf, "%.9Lg", row.join_complexity);
    csv << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9Lg", row.get_complexity);
    csv << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9Lg", row.store_complexity);
    csv << buf << '\n';
  }
  if (out_path.empty())
    out << csv.str();
  else if (!write_file(out_path, csv.str(), err))
    return 2;
  return 0;
}

int cmd_verify(const std::string& log_path, const std::string& beta_arg, std::ostream& out,
               std::ostream& err) {
  std::ifstream is(log_path, std::ios::binary);
  if (!is) {
    err << "error: cannot read " << log_path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << is.rdbuf();
  EventLog log;
  try {
    log = EventLog::parse(buf.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  double beta;
  if (beta_arg.empty() || beta_arg == "auto") {
    beta = audit::audited_beta(log);
    out << "beta (audited): " << beta << "\n";
  } else {
    beta = std::stod(beta_arg);
  }
  audit::Verdict rda_v = audit::verify_rda_robustness(log, beta);
  audit::Verdict sub_v = audit::verify_subnet_robustness(log);
  out << "rda robustness:    " << (rda_v.pass ? "PASS" : "FAIL") << " (" << rda_v.checked
      << " obligations)";
  if (!rda_v.pass) out << "\n  counterexample: " << rda_v.detail;
  out << "\n";
  out << "subnet robustness: " << (sub_v.pass ? "PASS" : "FAIL") << " (" << sub_v.checked
      << " obligations)";
  if (!sub_v.pass) out << "\n  counterexample: " << sub_v.detail;
  out << "\n";
  return rda_v.pass && sub_v.pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"round-synchronous distributed-array protocol lab"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run a simulation and write metrics CSV");
  std::string config_path, out_path, log_path;
  std::uint64_t seed = 0;
  bool strict = false;
  sim->add_option("--config", config_path, "run configuration file")->required();
  auto* seed_opt = sim->add_option("--seed", seed, "master seed override");
  sim->add_option("--out", out_path, "metrics CSV path (stdout if absent)");
  sim->add_option("--log", log_path, "event log output path (protocol mode)");
  sim->add_flag("--strict", strict, "treat admissibility failures as errors");

  auto* est = app.add_subcommand("estimate", "evaluate the analytical trade-off curve");
  double n_honest = 5000, beta = 0.1, eps_target = 1e-9;
  std::string k2_range = "10:1000:10", assumptions = "benchmark", est_out;
  int k1_cap = 0;
  est->add_option("--N", n_honest, "honest-party floor");
  est->add_option("--beta", beta, "corrupted-symbol fraction target");
  est->add_option("--eps-target", eps_target, "robustness error target");
  est->add_option("--k2-range", k2_range, "lo:hi:step sweep over k2");
  est->add_option("--assumptions", assumptions, "assumption preset (benchmark)");
  est->add_option("--k1-cap", k1_cap, "cap on max k1 when the target is vacuous");
  est->add_option("--out", est_out, "estimates CSV path (stdout if absent)");

  auto* ver = app.add_subcommand("verify", "audit a logged run against both robustness notions");
  std::string ver_log, ver_beta;
  ver->add_option("--log", ver_log, "event log produced by simulate")->required();
  ver->add_option("--beta", ver_beta, "corruption bound (number or 'auto')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, seed, seed_opt->count() > 0, out_path, log_path, strict,
                          out, err);
    if (est->parsed())
      return cmd_estimate(n_honest, beta, eps_target, k2_range, assumptions, k1_cap, est_out, out,
                          err);
    if (ver->parsed()) return cmd_verify(ver_log, ver_beta, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace cli
}  // namespace rda
