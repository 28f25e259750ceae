// ctrw: simulate, solve, verify and compare continuous-time random walks.
//
// Settings come from a key=value file (--config) overlaid with command-line
// flags of the same name (dashes for underscores). Every run writes its files
// and one manifest.json into --out. Exit codes: 0 success, 2 usage error,
// 3 numerical failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctrw/ctrw.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// ---------------------------------------------------------------- settings

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> flags;  // config key -> flag value
};

std::string flag_name(std::string_view key) {
  std::string name(key);
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

void add_keys(CLI::App* sub, Invocation& inv, std::span<const std::string_view> keys) {
  sub->add_option("--config", inv.config_path, "key=value settings file");
  for (auto key : keys) {
    sub->add_option_function<std::string>(
        flag_name(key), [&inv, k = std::string(key)](const std::string& v) { inv.flags[k] = v; },
        "overrides '" + std::string(key) + "' from the config file");
  }
}

ctrw::Config resolve(const Invocation& inv, std::span<const std::string_view> keys) {
  ctrw::Config cfg = inv.config_path.empty() ? ctrw::Config{} : ctrw::Config::load(inv.config_path);
  for (const auto& [k, v] : inv.flags) cfg.set(k, v);
  cfg.require_known(keys);
  return cfg;
}

unsigned thread_count(const ctrw::Config& cfg) {
  return static_cast<unsigned>(cfg.get_u64("threads", 0));
}

ctrw::JumpLaw default_jump(double alpha) {
  return alpha == 2.0 ? ctrw::JumpLaw::gaussian() : ctrw::JumpLaw::continuous_power(alpha);
}

ctrw::WaitingLaw default_wait(double beta) {
  return beta == 1.0 ? ctrw::WaitingLaw::exponential() : ctrw::WaitingLaw::continuous_power(beta);
}

// ---------------------------------------------------------------- outputs

class Run {
 public:
  Run(std::string command, const ctrw::Config& cfg)
      : command_(std::move(command)), cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    out_ = cfg.get("out", ".");
  }

  // called once all inputs have been validated, so a rejected run leaves nothing behind
  void open() { fs::create_directories(out_); }

  std::string file(const std::string& name) {
    outputs_.push_back(name);
    return (out_ / name).string();
  }

  void write_json(const std::string& name, const json& doc) {
    std::ofstream out(file(name), std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + name);
  }

  json& summary() { return summary_; }

  void finish(bool uses_seed) {
    json manifest;
    manifest["command"] = command_;
    manifest["config"] = cfg_.values();
    if (uses_seed) manifest["seed"] = cfg_.get_u64("seed", 1);
    manifest["outputs"] = outputs_;
    manifest["summary"] = summary_;
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start_;
    manifest["wall_time"] = wall.count();
    std::ofstream out(out_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write manifest.json");
    std::cout << (out_ / "manifest.json").string() << '\n';
  }

 private:
  std::string command_;
  ctrw::Config cfg_;
  fs::path out_;
  std::vector<std::string> outputs_;
  json summary_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- simulate

// (alpha, beta) = (2,1), (2,0.5), (1.5,1), (1.5,0.5); exact values are artifact choices
const std::map<std::string, std::map<std::string, std::string>> kPresets = {
    {"figure1", {{"jump", "gauss"}, {"wait", "exp"}}},
    {"figure2", {{"jump", "gauss"}, {"wait", "cpow:0.5"}}},
    {"figure3", {{"jump", "cpow:1.5"}, {"wait", "exp"}}},
    {"figure4", {{"jump", "cpow:1.5"}, {"wait", "cpow:0.5"}}},
};
const std::map<std::string, std::string> kPresetCommon = {
    {"h", "0.1"}, {"n_walkers", "1000"}, {"times", "0.25,0.5,1"}, {"trajectories", "3"}};

constexpr std::array kSimulateKeys = std::to_array<std::string_view>({
    "preset", "jump", "wait", "h", "tau", "t_max", "times", "n_walkers",
    "seed", "threads", "trajectories", "lattice_k", "out"});

int cmd_simulate(const Invocation& inv) {
  ctrw::Config cfg = resolve(inv, kSimulateKeys);
  if (cfg.has("preset")) {
    const auto it = kPresets.find(cfg.get("preset", ""));
    if (it == kPresets.end()) throw ctrw::usage_error("unknown preset '" + cfg.get("preset", "") + "'");
    for (const auto* table : {&it->second, &kPresetCommon}) {
      for (const auto& [k, v] : *table) {
        if (!cfg.has(k)) cfg.set(k, v);
      }
    }
  }
  ctrw::WalkConfig wc;
  wc.jump = ctrw::parse_jump_law(cfg.get("jump", "gauss"));
  wc.wait = ctrw::parse_waiting_law(cfg.get("wait", "exp"));
  const ctrw::StabilityAlpha alpha(wc.jump.alpha());
  const ctrw::OrderBeta beta(wc.wait.beta());
  const auto lc = ctrw::lemma_constants(wc.jump, wc.wait);
  wc.scale = ctrw::scaling_tau(cfg.get_double("h", 0.1), lc, alpha, beta);
  if (cfg.has("tau")) wc.scale.tau = cfg.get_double("tau", 1.0);
  auto times = cfg.get_list("times", "1");
  for (double t : times) {
    if (!(t >= 0.0)) throw ctrw::usage_error("times must be non-negative");
  }
  wc.t_max = cfg.get_double("t_max", *std::max_element(times.begin(), times.end()));
  wc.n_walkers = cfg.get_u64("n_walkers", 1000);
  wc.seed = cfg.get_u64("seed", 1);
  wc.validate();
  for (double t : times) {
    if (t > wc.t_max) throw ctrw::usage_error("observation time beyond t_max");
  }
  const auto n_traj = cfg.get_u64("trajectories", 0);
  if (n_traj > wc.n_walkers) throw ctrw::usage_error("more trajectories than walkers");
  const auto lattice_k = cfg.get_u64("lattice_k", 0);
  if (lattice_k > 0 && (!wc.jump.is_lattice() || wc.wait.kind() != ctrw::WaitKind::discrete_power)) {
    throw ctrw::usage_error("lattice_k requires jump=lpow:* and wait=dpow:*");
  }

  Run run("simulate", cfg);
  run.open();
  const auto positions = ctrw::ensemble_positions(wc, times, thread_count(cfg));
  ctrw::CsvWriter ensemble(run.file("ensemble.csv"), "walker,t,x");
  for (std::uint64_t w = 0; w < wc.n_walkers; ++w) {
    for (std::size_t i = 0; i < times.size(); ++i) ensemble.row(w, times[i], positions[i][w]);
  }
  ensemble.close();

  for (std::uint64_t w = 0; w < n_traj; ++w) {
    ctrw::CsvWriter traj(run.file("trajectory_" + std::to_string(w) + ".csv"), "t,x");
    for (auto [t, x] : ctrw::trajectory_csv(ctrw::simulate_walk(wc, w))) traj.row(t, x);
    traj.close();
  }

  auto& s = run.summary();
  s["h"] = wc.scale.h;
  s["tau"] = wc.scale.tau;
  s["mu"] = lc.mu;
  s["lambda"] = lc.lambda;
  if (cfg.has("preset")) s["preset_note"] = "preset orders are artifact choices within the stated regime";
  json obs = json::array();
  for (std::size_t i = 0; i < times.size(); ++i) {
    double mean = 0.0;
    for (double x : positions[i]) mean += x;
    mean /= static_cast<double>(wc.n_walkers);
    double var = 0.0;
    for (double x : positions[i]) var += (x - mean) * (x - mean);
    var /= static_cast<double>(std::max<std::uint64_t>(wc.n_walkers - 1, 1));
    obs.push_back({{"t", times[i]}, {"mean", mean}, {"variance", var}});
  }
  s["observations"] = obs;

  if (lattice_k > 0) {
    const int K = static_cast<int>(lattice_k);
    const int T = static_cast<int>(std::floor(wc.t_max));
    const auto ev = ctrw::evolve_lattice(alpha.value(), beta.value(), K, T);
    ctrw::CsvWriter lattice(run.file("lattice.csv"), "t,x,p");
    for (int t = 0; t <= T; ++t) {
      for (int x = -K; x <= K; ++x) lattice.row(t, x, ev.at(x, t));
    }
    lattice.close();
    s["lattice_leakage"] = ev.leakage.back();
    s["lattice_warnings"] = ev.warnings;
  }
  run.finish(true);
  return 0;
}

// ---------------------------------------------------------------- solve

constexpr std::array kSolveKeys = std::to_array<std::string_view>({"alpha", "beta", "t", "x_max",
                                                                 "n_points", "threads", "out"});

int cmd_solve(const Invocation& inv) {
  const ctrw::Config cfg = resolve(inv, kSolveKeys);
  const ctrw::StabilityAlpha alpha(cfg.get_double("alpha", 2.0));
  const ctrw::OrderBeta beta(cfg.get_double("beta", 1.0));
  const double t = cfg.get_double("t", 1.0);
  const double x_max = cfg.get_double("x_max", 10.0);
  const auto n_points = cfg.get_u64("n_points", 401);
  if (!(t > 0.0)) throw ctrw::usage_error("t must be positive");
  if (!(x_max > 0.0)) throw ctrw::usage_error("x_max must be positive");
  if (n_points < 3 || n_points % 2 == 0) throw ctrw::usage_error("n_points must be odd and at least 3");

  Run run("solve", cfg);
  run.open();
  const auto grid = ctrw::build_grid(alpha, beta, t, x_max, n_points, thread_count(cfg));
  ctrw::CsvWriter csv(run.file("grid.csv"), "x,pdf,cdf");
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    if (std::isnan(grid.pdf[i])) continue;  // infinite density at the origin
    csv.row(grid.x[i], grid.pdf[i], grid.cdf[i]);
  }
  csv.close();
  auto& s = run.summary();
  s["alpha"] = alpha.value();
  s["beta"] = beta.value();
  s["t"] = t;
  s["tail_mass"] = grid.tail_mass;
  s["total_mass"] = grid.total_mass();
  s["quadrature_rel_tol"] = ctrw::detail::kGreenRelTol;
  s["quadrature_abs_tol"] = ctrw::detail::kGreenAbsTol;
  s["origin_omitted"] = std::isnan(grid.pdf[grid.x.size() / 2]);
  run.finish(false);
  return 0;
}

// ---------------------------------------------------------------- verify

constexpr std::array kVerifyKeys = std::to_array<std::string_view>({"jump", "wait", "kappa", "s",
                                                                  "h", "probes", "out"});

int cmd_verify(const Invocation& inv, const std::string& check) {
  const ctrw::Config cfg = resolve(inv, kVerifyKeys);
  const auto jump = ctrw::parse_jump_law(cfg.get("jump", "gauss"));
  const auto wait = ctrw::parse_waiting_law(cfg.get("wait", "exp"));
  const auto lc = ctrw::lemma_constants(jump, wait);
  const auto last = static_cast<int>(cfg.get_u64("probes", ctrw::kLastProbe));
  if (last <= ctrw::kFirstProbe + 3 || last > 60) throw ctrw::usage_error("probes must lie in 6..60");

  Run run("verify " + check, cfg);
  if (check == "lemma1" || check == "lemma2") {
    const bool first = check == "lemma1";
    run.open();
    const auto report = first ? ctrw::verify_lemma1(jump, lc, last) : ctrw::verify_lemma2(wait, lc, last);
    ctrw::CsvWriter csv(run.file(check + ".csv"), "probe,ratio");
    for (std::size_t i = 0; i < report.ratios.size(); ++i) csv.row(report.probe_points[i], report.ratios[i]);
    csv.close();
    const json verdict = {{"law", first ? jump.token() : wait.token()},
                          {"constant", first ? lc.mu : lc.lambda},
                          {"final_ratio", report.ratios.back()},
                          {"converged", report.converged},
                          {"deviation_decreasing", report.deviation_decreasing()}};
    run.write_json(check + ".json", verdict);
    run.summary() = verdict;
  } else if (check == "mw") {
    const double kappa = cfg.get_double("kappa", 1.0);
    const double s = cfg.get_double("s", 1.0);
    const auto hs = cfg.get_list("h", "0.1,0.01,0.001");
    const ctrw::StabilityAlpha alpha(jump.alpha());
    const ctrw::OrderBeta beta(wait.beta());
    if (!(s > 0.0)) throw ctrw::usage_error("s must be positive");
    run.open();
    const double limit = ctrw::mw_limit(alpha, beta, kappa, s);
    ctrw::CsvWriter csv(run.file("mw.csv"), "h,tau,value,limit,error");
    std::vector<double> errors;
    for (double h : hs) {
      const auto pair = ctrw::scaling_tau(h, lc, alpha, beta);
      const double value = ctrw::mw_rescaled(jump, wait, pair, kappa, s);
      errors.push_back(std::abs(value - limit));
      csv.row(h, pair.tau, value, limit, errors.back());
    }
    csv.close();
    bool decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
    const json verdict = {{"kappa", kappa}, {"s", s},           {"limit", limit},
                          {"errors", errors}, {"decreasing", decreasing}, {"final_error", errors.back()}};
    run.write_json("mw.json", verdict);
    run.summary() = verdict;
  } else {
    throw ctrw::usage_error("verify: expected lemma1, lemma2 or mw, got '" + check + "'");
  }
  run.finish(false);
  return 0;
}

// ---------------------------------------------------------------- converge

constexpr std::array kConvergeKeys = std::to_array<std::string_view>({
    "alpha", "beta", "jump", "wait", "h", "t", "n_walkers", "seed", "threads", "x_max", "n_points", "out"});

ctrw::GreenCdfInterpolant cdf_table(const ctrw::Config& cfg, ctrw::StabilityAlpha alpha,
                                    ctrw::OrderBeta beta, double t) {
  const double width = std::pow(t, beta.value() / alpha.value());
  const double x_max = cfg.get_double("x_max", 30.0 * width);
  const auto n_points = cfg.get_u64("n_points", 1201);
  if (n_points < 3 || n_points % 2 == 0) throw ctrw::usage_error("n_points must be odd and at least 3");
  return ctrw::GreenCdfInterpolant(ctrw::build_grid(alpha, beta, t, x_max, n_points, thread_count(cfg)));
}

int cmd_converge(const Invocation& inv) {
  const ctrw::Config cfg = resolve(inv, kConvergeKeys);
  const double a = cfg.get_double("alpha", 2.0);
  const double b = cfg.get_double("beta", 1.0);
  ctrw::WalkConfig wc;
  wc.jump = cfg.has("jump") ? ctrw::parse_jump_law(cfg.get("jump", "")) : default_jump(a);
  wc.wait = cfg.has("wait") ? ctrw::parse_waiting_law(cfg.get("wait", "")) : default_wait(b);
  const ctrw::StabilityAlpha alpha(wc.jump.alpha());
  const ctrw::OrderBeta beta(wc.wait.beta());
  const auto lc = ctrw::lemma_constants(wc.jump, wc.wait);
  const auto hs = cfg.get_list("h", "0.5,0.2,0.1");
  wc.t_max = cfg.get_double("t", 1.0);
  wc.n_walkers = cfg.get_u64("n_walkers", 100000);
  wc.seed = cfg.get_u64("seed", 1);
  for (double h : hs) {
    if (!(h > 0.0)) throw ctrw::usage_error("h values must be positive");
  }
  wc.validate();

  Run run("converge", cfg);
  run.open();
  const auto F = cdf_table(cfg, alpha, beta, wc.t_max);
  json results = json::array();
  std::vector<double> stats;
  bool last_pass = false;
  for (double h : hs) {
    wc.scale = ctrw::scaling_tau(h, lc, alpha, beta);
    const auto x = ctrw::ensemble_positions(wc, wc.t_max, thread_count(cfg));
    const auto ks = ctrw::ks_statistic(ctrw::SampleSet(x), F);
    stats.push_back(ks.statistic);
    last_pass = ks.pass();
    results.push_back({{"h", h},
                       {"tau", wc.scale.tau},
                       {"statistic", ks.statistic},
                       {"n", ks.n},
                       {"threshold_1pct", ks.threshold_1pct},
                       {"pass", ks.pass()}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < stats.size(); ++i) decreasing = decreasing && stats[i] < stats[i - 1];
  const json report = {{"alpha", alpha.value()}, {"beta", beta.value()}, {"t", wc.t_max},
                       {"jump", wc.jump.token()}, {"wait", wc.wait.token()}, {"results", results},
                       {"decreasing", decreasing},  {"final_pass", last_pass}};
  run.write_json("converge.json", report);
  run.summary() = {{"decreasing", decreasing}, {"final_pass", last_pass}};
  run.finish(true);
  return 0;
}

// ---------------------------------------------------------------- sample

constexpr std::array kSampleKeys = std::to_array<std::string_view>({"input", "t", "alpha", "beta", "x_max",
                                                                 "n_points", "threads", "out"});

std::vector<double> read_positions(const std::string& path, double t) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ctrw::usage_error("cannot read sample file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || ctrw::detail::trim(line) != "walker,t,x") {
    throw ctrw::usage_error(path + ": expected header 'walker,t,x'");
  }
  std::vector<double> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (ctrw::detail::trim(line).empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw ctrw::usage_error(path + ":" + std::to_string(line_no) + ": expected three fields");
    }
    const std::string_view view(line);
    if (ctrw::parse_double(view.substr(c1 + 1, c2 - c1 - 1), "t") == t) {
      out.push_back(ctrw::parse_double(view.substr(c2 + 1), "x"));
    }
  }
  if (out.empty()) throw ctrw::usage_error(path + ": no rows at t=" + ctrw::format_double(t));
  return out;
}

int cmd_sample(const Invocation& inv) {
  const ctrw::Config cfg = resolve(inv, kSampleKeys);
  if (!cfg.has("input")) throw ctrw::usage_error("sample: --input is required");
  const double t = cfg.get_double("t", 1.0);
  if (!(t > 0.0)) throw ctrw::usage_error("t must be positive");
  const ctrw::StabilityAlpha alpha(cfg.get_double("alpha", 2.0));
  const ctrw::OrderBeta beta(cfg.get_double("beta", 1.0));
  const ctrw::SampleSet samples(read_positions(cfg.get("input", ""), t));

  Run run("sample", cfg);
  run.open();
  const auto ks = ctrw::ks_statistic(samples, cdf_table(cfg, alpha, beta, t));
  const json report = {{"statistic", ks.statistic},
                       {"n", ks.n},
                       {"threshold_1pct", ks.threshold_1pct},
                       {"pass", ks.pass()}};
  run.write_json("ks.json", report);
  run.summary() = report;
  run.finish(false);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time random walks and their space-time fractional diffusion limit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");  // -h is the spatial step

  Invocation sim_inv;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble of rescaled walks");
  add_keys(simulate, sim_inv, kSimulateKeys);

  Invocation solve_inv;
  auto* solve = app.add_subcommand("solve", "Tabulate the fundamental solution u(x, t)");
  add_keys(solve, solve_inv, kSolveKeys);

  Invocation verify_inv;
  std::string check;
  auto* verify = app.add_subcommand("verify", "Lemma ratio tables or the Montroll-Weiss limit");
  verify->add_option("check", check, "lemma1, lemma2 or mw")->required();
  add_keys(verify, verify_inv, kVerifyKeys);

  Invocation conv_inv;
  auto* converge = app.add_subcommand("converge", "KS distance to the limit law as h shrinks");
  add_keys(converge, conv_inv, kConvergeKeys);

  Invocation sample_inv;
  auto* sample = app.add_subcommand("sample", "KS test of an ensemble CSV against the limit law");
  add_keys(sample, sample_inv, kSampleKeys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim_inv);
    if (*solve) return cmd_solve(solve_inv);
    if (*verify) return cmd_verify(verify_inv, check);
    if (*converge) return cmd_converge(conv_inv);
    if (*sample) return cmd_sample(sample_inv);
  } catch (const ctrw::usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ctrw::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ctrw::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
