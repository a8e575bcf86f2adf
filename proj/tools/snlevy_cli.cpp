// Command-line front end: model tables, barrier solving, policy values,
// Monte Carlo simulation and the verification suite.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snlevy/barrier_optimizer.hpp"
#include "snlevy/errors.hpp"
#include "snlevy/json_io.hpp"
#include "snlevy/policy_values.hpp"
#include "snlevy/scale_functions.hpp"
#include "snlevy/simulator.hpp"
#include "snlevy/verification.hpp"

namespace {

using namespace snlevy;

// shortest round-trip decimal form, for bit-faithful CSV diffs
std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

struct ModelOpts {
  std::string family;
  double mu = 0.0, sigma = 1.0;
  double p = 1.0, lambda = 1.0, mu_rate = 1.0;
  double alpha = 1.5;
  std::vector<double> weights, rates;
  bool sigma_set = false, mu_set = false;
};

struct SimOpts {
  long paths = 10000;
  double dt = 1e-3;
  double horizon = 100.0;
  std::uint64_t seed = 1;
  std::string scheme = "event";
};

struct CommonOpts {
  double q = 0.0;
  double phi = 0.0;
  double barrier = 0.0;
  bool barrier_set = false;
  bool optimal = false;
  bool bailout = false;
  double x = 0.0;
  bool x_set = false;
  std::string x_grid;
  std::string output = "json";
  std::string out_path;
  bool dump_paths = false;
};

void add_model_opts(CLI::App* sub, ModelOpts& m) {
  sub->add_option("--model", m.family, "model family")
      ->check(CLI::IsMember({"brownian", "cl-exp", "stable", "hyperexp"}));
  sub->add_option("--mu", m.mu, "drift");
  sub->add_option("--sigma", m.sigma, "volatility");
  sub->add_option("--p", m.p, "premium rate");
  sub->add_option("--lambda", m.lambda, "claim intensity");
  sub->add_option("--mu-rate", m.mu_rate, "exponential claim-size rate");
  sub->add_option("--alpha", m.alpha, "stability index");
  sub->add_option("--weights", m.weights, "mixture weights")->delimiter(',');
  sub->add_option("--rates", m.rates, "mixture rates")->delimiter(',');
}

LevyModel build_model(const ModelOpts& m) {
  if (m.family.empty()) throw ConfigError("--model is required");
  LevyModel model;
  if (m.family == "brownian")
    model = BrownianDrift{m.mu, m.sigma};
  else if (m.family == "cl-exp")
    model = CramerLundbergExp{m.p, m.lambda, m.mu_rate};
  else if (m.family == "stable")
    model = StableSpectralNeg{m.alpha, m.sigma};
  else
    model = HyperExpJumpDiffusion{m.mu, m.sigma, m.lambda, m.weights, m.rates};
  validate(model);
  return model;
}

SimConfig build_sim(const SimOpts& s) {
  SimConfig c;
  c.n_paths = s.paths;
  c.dt = s.dt;
  c.horizon = s.horizon;
  c.seed = s.seed;
  if (s.scheme == "event")
    c.scheme = SimConfig::EventDriven;
  else if (s.scheme == "euler")
    c.scheme = SimConfig::EulerSkorokhod;
  else
    throw ConfigError("--scheme must be event or euler");
  return c;
}

std::vector<double> parse_x_grid(const CommonOpts& c) {
  if (!c.x_grid.empty()) {
    double lo, hi;
    int n;
    char colon1, colon2;
    std::istringstream is(c.x_grid);
    if (!(is >> lo >> colon1 >> hi >> colon2 >> n) || colon1 != ':' ||
        colon2 != ':' || n < 1)
      throw ConfigError("--x-grid expects lo:hi:n");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
      xs[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return xs;
  }
  if (c.x_set) return {c.x};
  throw ConfigError("one of --x or --x-grid is required");
}

void emit(const CommonOpts& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) throw ConfigError("cannot open output file " + c.out_path);
  f << text << "\n";
}

// Expands `--config FILE` into command-line tokens: the file holds flat
// `key = value` lines (# comments), and any key already present as an
// explicit flag is skipped so that flags override file values.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config expects a path");
      path = args[++i];
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      continue;
    }
    out.push_back(args[i]);
  }
  if (path.empty()) return out;
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  auto have_flag = [&](const std::string& flag) {
    for (const auto& a : out)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config file: empty key");
    std::string flag = "--" + key;
    if (have_flag(flag)) continue;
    injected.push_back(flag);
    if (value == "true") continue;  // bare flags like optimal=true
    injected.push_back(value);
  }
  // file tokens go right after the subcommand name
  std::size_t at = out.empty() ? 0 : 1;
  out.insert(out.begin() + at, injected.begin(), injected.end());
  return out;
}

double resolve_barrier(const CommonOpts& c, const LevyModel& model) {
  if (c.optimal) {
    if (c.bailout) return optimal_bailout_barrier(model, c.q, c.phi).level;
    return optimal_classical_barrier(model, c.q).level;
  }
  if (!c.barrier_set)
    throw ConfigError("--barrier is required unless --optimal is passed");
  return c.barrier;
}

void require_phi(const CommonOpts& c) {
  if (c.bailout && !(c.phi > 1.0))
    throw ConfigError("--phi > 1 is required with --bailout");
}

int cmd_solve(const ModelOpts& mo, const CommonOpts& co) {
  auto model = build_model(mo);
  require_phi(co);
  BarrierSolution sol = co.bailout
                            ? optimal_bailout_barrier(model, co.q, co.phi)
                            : optimal_classical_barrier(model, co.q);
  if (co.output == "json") {
    json j = to_json(sol);
    j["model"] = to_json(model);
    j["q"] = co.q;
    emit(co, j.dump(2));
  } else {
    std::ostringstream os;
    os << "level,criterion_residual,method,reason\n"
       << num(sol.level) << "," << num(sol.criterion_residual) << ","
       << method_name(sol.method) << "," << sol.reason.value_or("");
    emit(co, os.str());
  }
  return 0;
}

int cmd_value(const ModelOpts& mo, const CommonOpts& co) {
  auto model = build_model(mo);
  require_phi(co);
  double a = resolve_barrier(co, model);
  auto xs = parse_x_grid(co);
  ScaleFunction sf(model, co.q);
  std::vector<PolicyValueReport> reports;
  for (double x : xs) {
    if (co.bailout) {
      reports.push_back(bailout_barrier_value(sf, co.phi, a, x));
    } else {
      PolicyValueReport r;
      r.x = x;
      r.a = a;
      r.value = classical_barrier_value(sf, a, x);
      reports.push_back(std::move(r));
    }
  }
  if (co.output == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    emit(co, arr.dump(2));
  } else {
    std::ostringstream os;
    os << "x,a,value,dividends,injections_cost\n";
    for (const auto& r : reports)
      os << num(r.x) << "," << num(r.a) << "," << num(r.value) << ","
         << (r.dividends ? num(*r.dividends) : "") << ","
         << (r.injections_cost ? num(*r.injections_cost) : "") << "\n";
    std::string s = os.str();
    s.pop_back();
    emit(co, s);
  }
  return 0;
}

int cmd_table(const ModelOpts& mo, const CommonOpts& co) {
  auto model = build_model(mo);
  auto xs = parse_x_grid(co);
  std::vector<ScaleEval> rows;
  ScaleFunction sf(model, co.q);
  for (double x : xs) rows.push_back(sf.eval(x));
  if (co.output == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    emit(co, arr.dump(2));
  } else {
    std::ostringstream os;
    os << "x,q,w,w_prime,z,wbar,zbar,source\n";
    for (const auto& r : rows)
      os << num(r.x) << "," << num(r.q) << "," << num(r.w) << ","
         << num(r.w_prime) << "," << num(r.z) << "," << num(r.wbar) << ","
         << num(r.zbar) << ","
         << (r.source == ScaleSource::ClosedForm ? "ClosedForm"
                                                 : "NumericInversion")
         << "\n";
    std::string s = os.str();
    s.pop_back();
    emit(co, s);
  }
  return 0;
}

int cmd_simulate(const ModelOpts& mo, const CommonOpts& co,
                 const SimOpts& so) {
  auto model = build_model(mo);
  require_phi(co);
  double a = resolve_barrier(co, model);
  double x = co.x_set ? co.x : 0.0;
  SimConfig cfg = build_sim(so);
  json j;
  if (co.bailout || co.phi > 1.0) {
    std::vector<SimPath> dump;
    auto est = simulate_doubly_reflected(model, a, x, co.q, cfg,
                                         co.dump_paths ? &dump : nullptr,
                                         1000);
    if (co.dump_paths)
      for (const auto& p : dump) std::cout << to_json(p).dump() << "\n";
    j = json{{"disc_L", to_json(est.disc_L)}, {"disc_R", to_json(est.disc_R)}};
    if (co.phi > 1.0)
      j["value"] = est.disc_L.mean - co.phi * est.disc_R.mean;
  } else {
    auto est = simulate_reflected_barrier(model, a, x, co.q, cfg);
    j = json{{"dividends", to_json(est.dividends)},
             {"ruin_transform", to_json(est.ruin_transform)}};
  }
  j["model"] = to_json(model);
  j["a"] = a;
  j["x"] = x;
  j["q"] = co.q;
  j["seed"] = cfg.seed;
  if (co.output == "json") {
    emit(co, j.dump(2));
  } else {
    std::ostringstream os;
    os << "estimand,mean,stderr,n,truncation_bound";
    for (auto& [k, v] : j.items())
      if (v.is_object() && v.contains("mean"))
        os << "\n"
           << k << "," << num(v["mean"].get<double>()) << ","
           << num(v["stderr"].get<double>()) << "," << v["n"].get<long>()
           << "," << num(v["truncation_bound"].get<double>());
    emit(co, os.str());
  }
  return 0;
}

int cmd_verify(const ModelOpts& mo, const CommonOpts& co, const SimOpts& so,
               const std::string& suite) {
  std::vector<LevyModel> models;
  if (!mo.family.empty()) models.push_back(build_model(mo));
  std::vector<double> q_list;
  if (co.q > 0.0) q_list.push_back(co.q);
  auto results = run_suite(suite, models, q_list, build_sim(so));
  if (co.output == "json") {
    emit(co, to_json(results).dump(2));
  } else {
    std::ostringstream os;
    os << "check_id,target,estimate,tolerance_kind,tolerance_param,passed\n";
    for (const auto& c : results)
      os << c.check_id << "," << num(c.target) << "," << num(c.estimate)
         << "," << tolerance_name(c.tolerance_kind) << ","
         << num(c.tolerance_param) << "," << (c.passed ? "1" : "0") << "\n";
    std::string s = os.str();
    s.pop_back();
    emit(co, s);
  }
  for (const auto& c : results)
    if (!c.passed)
      std::cerr << "FAILED " << c.check_id << ": " << c.detail << "\n";
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrally negative Levy risk toolkit"};
  app.require_subcommand(1);

  struct SubState {
    ModelOpts mo;
    CommonOpts co;
    SimOpts so;
  };
  std::vector<std::unique_ptr<SubState>> states;
  std::string config_path_doc;  // handled by expand_config; listed for --help
  auto add_common = [&](CLI::App* sub, SubState& st, bool sim_flags) {
    add_model_opts(sub, st.mo);
    sub->add_option("--config", config_path_doc,
                    "flat key=value file; explicit flags override");
    sub->add_option("--q", st.co.q, "discount rate");
    sub->add_option("--phi", st.co.phi, "injection cost factor");
    auto* b = sub->add_option("--barrier", st.co.barrier, "barrier level");
    b->each([&st](const std::string&) { st.co.barrier_set = true; });
    sub->add_flag("--optimal", st.co.optimal, "solve for the barrier");
    sub->add_flag("--bailout", st.co.bailout, "bail-out (double barrier)");
    auto* x = sub->add_option("--x", st.co.x, "initial capital");
    x->each([&st](const std::string&) { st.co.x_set = true; });
    sub->add_option("--x-grid", st.co.x_grid, "grid lo:hi:n");
    sub->add_option("--output", st.co.output, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", st.co.out_path, "output file");
    if (sim_flags) {
      sub->add_option("--paths", st.so.paths, "number of paths");
      sub->add_option("--dt", st.so.dt, "Euler step");
      sub->add_option("--horizon", st.so.horizon, "truncation time");
      sub->add_option("--seed", st.so.seed, "RNG seed");
      sub->add_option("--scheme", st.so.scheme, "event or euler")
          ->check(CLI::IsMember({"event", "euler"}));
      sub->add_flag("--dump-paths", st.co.dump_paths,
                    "emit per-path event logs as ndjson (max 1000)");
    }
  };

  states.push_back(std::make_unique<SubState>());
  auto* solve = app.add_subcommand("solve", "optimal barrier level");
  add_common(solve, *states.back(), false);
  SubState& st_solve = *states.back();

  states.push_back(std::make_unique<SubState>());
  auto* value = app.add_subcommand("value", "policy value function");
  add_common(value, *states.back(), false);
  SubState& st_value = *states.back();

  states.push_back(std::make_unique<SubState>());
  auto* table = app.add_subcommand("table", "scale-function table");
  add_common(table, *states.back(), false);
  SubState& st_table = *states.back();

  states.push_back(std::make_unique<SubState>());
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run");
  add_common(simulate, *states.back(), true);
  SubState& st_sim = *states.back();

  states.push_back(std::make_unique<SubState>());
  auto* verify = app.add_subcommand("verify", "verification suite");
  add_common(verify, *states.back(), true);
  SubState& st_verify = *states.back();
  std::string suite = "all";
  verify->add_option("--suite", suite, "suite id")
      ->check(CLI::IsMember(
          {"scale", "exit", "policy", "barrier", "simulator", "all"}));

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(st_solve.mo, st_solve.co);
    if (value->parsed()) return cmd_value(st_value.mo, st_value.co);
    if (table->parsed()) return cmd_table(st_table.mo, st_table.co);
    if (simulate->parsed())
      return cmd_simulate(st_sim.mo, st_sim.co, st_sim.so);
    if (verify->parsed())
      return cmd_verify(st_verify.mo, st_verify.co, st_verify.so, suite);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
