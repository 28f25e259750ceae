// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--cli PATH] [--known-failures LIST]
//
// --cli points at the ctrw executable used for the determinism criterion.
// --known-failures lists criteria (comma separated) that are expected to
// fail; the exit status is then 0 exactly when the failing set matches it.
// Without the flag any failure gives exit status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unistd.h>
#include <vector>

#include "ctrw/ctrw.hpp"

namespace fs = std::filesystem;
using namespace ctrw;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
  int failed = 0;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (++failed > 6) return;  // the count is appended by summary()
    if (!detail.empty()) detail += "; ";
    detail += what;
  }

  std::string summary() const {
    return failed > 6 ? detail + "; and " + std::to_string(failed - 6) + " more" : detail;
  }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- 1

Outcome special_functions() {
  Outcome o;
  double worst_exp = 0.0;
  for (double x = 0.0; x <= 30.0; x += 0.05) {
    worst_exp = std::max(worst_exp, std::abs(mittag_leffler(OrderBeta(1.0), -x) - std::exp(-x)));
  }
  double worst_erfc = 0.0;
  for (double x = 0.0; x <= 5.0; x += 0.01) {
    const double exact = std::exp(x * x) * std::erfc(x);
    worst_erfc = std::max(worst_erfc, std::abs(mittag_leffler(OrderBeta(0.5), -x) - exact));
  }
  const double zeta_err = std::abs(riemann_zeta(2.0) - pi * pi / 6.0);
  o.require(worst_exp <= 1e-10, "E_1 error " + fmt(worst_exp));
  o.require(worst_erfc <= 1e-8, "E_1/2 error " + fmt(worst_erfc));
  o.require(zeta_err <= 1e-10, "zeta(2) error " + fmt(zeta_err));
  if (o.pass) {
    o.detail = "max |E_1 - exp| " + fmt(worst_exp) + ", max |E_1/2 - erfcx| " + fmt(worst_erfc) +
               ", |zeta(2) - pi^2/6| " + fmt(zeta_err);
  }
  return o;
}

// ---------------------------------------------------------------- 2

Outcome lemma_ratios() {
  Outcome o;
  std::string summary;
  auto judge = [&](const std::string& token, const LemmaReport& r) {
    const double last = r.ratios.back();
    summary += token + "=" + fmt(last, 5) + " ";
    o.require(r.converged && r.deviation_decreasing(), token + " ratio " + fmt(last, 5) +
                                                           (r.deviation_decreasing() ? "" : " (not decreasing)"));
  };
  const auto exp_wait = WaitingLaw::exponential();
  for (const char* token : {"gauss", "cpow:0.5", "cpow:1", "cpow:1.5", "lpow:0.5", "lpow:1", "lpow:1.5"}) {
    const auto law = parse_jump_law(token);
    judge(token, verify_lemma1(law, lemma_constants(law, exp_wait)));
  }
  const auto gauss = JumpLaw::gaussian();
  for (const char* token : {"exp", "cpow:0.3", "cpow:0.5", "cpow:0.75", "dpow:0.3", "dpow:0.5", "dpow:0.75"}) {
    const auto law = parse_waiting_law(token);
    judge(token, verify_lemma2(law, lemma_constants(gauss, law)));
  }
  if (o.pass) o.detail = "ratios at 2^-14: " + summary;
  return o;
}

// ---------------------------------------------------------------- 3

Outcome montroll_weiss_limit() {
  Outcome o;
  std::string summary;
  for (auto [jump, wait] : {std::pair{"gauss", "exp"}, std::pair{"cpow:1.5", "cpow:0.5"}}) {
    const auto j = parse_jump_law(jump);
    const auto w = parse_waiting_law(wait);
    const StabilityAlpha alpha(j.alpha());
    const OrderBeta beta(w.beta());
    const auto lc = lemma_constants(j, w);
    const double limit = mw_limit(alpha, beta, 1.0, 1.0);
    double previous = INFINITY;
    double error = 0.0;
    for (double h : {1e-1, 1e-2, 1e-3}) {
      error = std::abs(mw_rescaled(j, w, scaling_tau(h, lc, alpha, beta), 1.0, 1.0) - limit);
      o.require(error < previous, std::string(jump) + "/" + wait + " not decreasing at h=" + fmt(h));
      previous = error;
    }
    o.require(error < 1e-2, std::string(jump) + "/" + wait + " final error " + fmt(error));
    summary += std::string(jump) + "/" + wait + " final " + fmt(error) + " ";
  }
  if (o.pass) o.detail = summary;
  return o;
}

// ---------------------------------------------------------------- 4

Outcome lattice_vs_monte_carlo() {
  Outcome o;
  WalkConfig c;
  c.jump = JumpLaw::lattice_power(1.5);
  c.wait = WaitingLaw::discrete_power(0.5);
  c.scale = {1.0, 1.0};
  c.t_max = 5.0;
  c.n_walkers = 100000;
  c.seed = 2024;
  const auto x = ensemble_positions(c, 5.0);
  const auto ev = evolve_lattice(1.5, 0.5, 2000, 5);
  const double n = static_cast<double>(x.size());
  std::map<long long, double> counts;
  for (double v : x) counts[std::llround(v)] += 1.0;
  int sites = 0;
  double worst = 0.0;
  for (int k = -ev.K; k <= ev.K; ++k) {
    const double p = ev.at(k, 5);
    if (p < 1e-3) continue;
    ++sites;
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const double z = std::abs(counts[k] / n - p) / sigma;
    worst = std::max(worst, z);
    o.require(z <= 3.0, "site " + std::to_string(k) + " off by " + fmt(z, 3) + " sigma");
  }
  o.detail = (o.pass ? "" : o.detail + "; ") + std::to_string(sites) + " sites, worst " + fmt(worst, 3) +
             " sigma, leakage " + fmt(ev.leakage.back(), 3);
  return o;
}

// ---------------------------------------------------------------- 5

Outcome variance_law() {
  Outcome o;
  std::string summary;
  for (auto [wait, target, tol] : {std::tuple{"exp", 2.0, 0.1},
                                  std::tuple{"cpow:0.5", 4.0 / std::sqrt(pi), 0.1 * 4.0 / std::sqrt(pi)}}) {
    WalkConfig c;
    c.jump = JumpLaw::gaussian();
    c.wait = parse_waiting_law(wait);
    c.scale = scaling_tau(0.05, lemma_constants(c.jump, c.wait), StabilityAlpha(2.0), OrderBeta(c.wait.beta()));
    c.n_walkers = 100000;
    c.seed = 7;
    const auto m = sample_moments(SampleSet(ensemble_positions(c, 1.0)));
    o.require(std::abs(m.variance - target) <= tol,
              std::string(wait) + " variance " + fmt(m.variance) + " vs " + fmt(target));
    summary += std::string(wait) + ": " + fmt(m.variance) + " (target " + fmt(target) + ") ";
  }
  if (o.pass) o.detail = summary;
  return o;
}

// ---------------------------------------------------------------- 6

Outcome convergence_in_law() {
  Outcome o;
  std::string summary;
  struct Case {
    const char* jump;
    const char* wait;
    bool closed_form;
  };
  for (const Case& cs : {Case{"gauss", "exp", true}, Case{"cpow:1", "exp", true}, Case{"cpow:1.5", "cpow:0.5", false}}) {
    WalkConfig c;
    c.jump = parse_jump_law(cs.jump);
    c.wait = parse_waiting_law(cs.wait);
    const StabilityAlpha alpha(c.jump.alpha());
    const OrderBeta beta(c.wait.beta());
    const auto lc = lemma_constants(c.jump, c.wait);
    c.n_walkers = 100000;
    c.seed = 31;
    const GreenCdfInterpolant F(build_grid(alpha, beta, 1.0, 30.0, 1201));
    const std::string label = std::string(cs.jump) + "/" + cs.wait;
    double previous = INFINITY;
    summary += label + " KS";
    KsResult ks;
    for (double h : {0.5, 0.2, 0.1}) {
      c.scale = scaling_tau(h, lc, alpha, beta);
      ks = ks_statistic(SampleSet(ensemble_positions(c, 1.0)), F);
      summary += " " + fmt(ks.statistic, 3);
      o.require(ks.statistic < previous, label + " KS not decreasing at h=" + fmt(h));
      previous = ks.statistic;
    }
    if (cs.closed_form) {
      o.require(ks.pass(), label + " final KS " + fmt(ks.statistic, 3) + " >= " + fmt(ks.threshold_1pct, 3));
    }
    summary += "; ";
  }
  o.detail = (o.pass ? "" : o.detail + " | ") + summary + "threshold " + fmt(1.628 / std::sqrt(1e5), 3);
  return o;
}

// ---------------------------------------------------------------- 7

Outcome tail_exponents() {
  Outcome o;
  std::string summary;
  const WalkerStream stream(99, 0);
  for (double a : {1.0, 1.5}) {
    const auto law = JumpLaw::continuous_power(a);
    std::vector<double> v(100000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = sample_jump(law, stream(i).jump);
    const double est = hill_estimator(SampleSet(v));
    o.require(std::abs(est - a) <= 0.1, "jump alpha " + fmt(a) + " estimated " + fmt(est));
    summary += "alpha " + fmt(a) + " -> " + fmt(est) + ", ";
  }
  for (double b : {0.5, 0.75}) {
    const auto law = WaitingLaw::continuous_power(b);
    std::vector<double> v(100000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = sample_wait(law, stream(i).wait);
    const double est = hill_estimator(SampleSet(v));
    o.require(std::abs(est - b) <= 0.1, "wait beta " + fmt(b) + " estimated " + fmt(est));
    summary += "beta " + fmt(b) + " -> " + fmt(est) + ", ";
  }
  if (o.pass) o.detail = summary;
  return o;
}

// ---------------------------------------------------------------- 8

Outcome green_properties() {
  Outcome o;
  double worst_mass = 0.0;
  double worst_trip = 0.0;
  double worst_asym = 0.0;
  double lowest = INFINITY;
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    for (double b : {0.5, 0.75, 1.0}) {
      const StabilityAlpha alpha(a);
      const OrderBeta beta(b);
      const std::string label = "(" + fmt(a) + "," + fmt(b) + ")";
      const bool round_trip = a >= 1.0;
      const auto g = round_trip ? build_grid(alpha, beta, 1.0, 50.0, 1001) : build_grid(alpha, beta, 1.0, 20.0, 201);
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        if (std::isnan(g.pdf[i])) continue;
        lowest = std::min(lowest, g.pdf[i]);
        o.require(g.pdf[i] >= -1e-8, label + " negative pdf at x=" + fmt(g.x[i]));
        if (i > 0) o.require(g.cdf[i] >= g.cdf[i - 1] - 1e-12, label + " cdf decreasing at x=" + fmt(g.x[i]));
      }
      // symmetry evaluated independently on both sides
      for (double x : {0.37, 1.9, 7.3}) {
        const double d = std::abs(green_pdf(alpha, beta, x, 1.0) - green_pdf(alpha, beta, -x, 1.0));
        worst_asym = std::max(worst_asym, d);
        o.require(d <= 1e-8, label + " asymmetric at x=" + fmt(x));
      }
      o.require(g.cdf[g.x.size() / 2] == 0.5, label + " cdf(0) != 1/2");
      const double mass_err = std::abs(g.total_mass() - 1.0);
      worst_mass = std::max(worst_mass, mass_err);
      o.require(mass_err <= 1e-4, label + " mass error " + fmt(mass_err));
      if (round_trip) {
        for (double kappa : {0.5, 1.0, 2.0}) {
          const double d = std::abs(grid_cosine_transform(g, kappa) - green_fourier(alpha, beta, kappa, 1.0));
          worst_trip = std::max(worst_trip, d);
          o.require(d <= 1e-4, label + " round trip off by " + fmt(d) + " at kappa=" + fmt(kappa));
        }
      }
    }
  }
  double worst_decade = 0.0;
  for (double a : {0.5, 1.0, 1.5}) {
    const StabilityAlpha alpha(a);
    const OrderBeta beta(1.0);
    auto scaled = [&](double x) { return std::pow(x, a + 1.0) * green_pdf(alpha, beta, x, 1.0); };
    const double r = scaled(1000.0) / scaled(100.0);
    worst_decade = std::max(worst_decade, std::abs(r - 1.0));
    o.require(scaled(100.0) > 0.0 && std::abs(r - 1.0) <= 0.1,
              "alpha " + fmt(a) + " decade ratio " + fmt(r));
  }
  if (o.pass) {
    o.detail = "min pdf " + fmt(lowest) + ", max asymmetry " + fmt(worst_asym) + ", max mass error " +
               fmt(worst_mass) + ", max round-trip error " + fmt(worst_trip) + ", max decade deviation " +
               fmt(worst_decade);
  }
  return o;
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "no --cli given");
    return o;
  }
  const fs::path dir = fs::temp_directory_path() / ("ctrw_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string common = " simulate --jump cpow:1.5 --wait cpow:0.5 --h 0.1 --times 0.5,1 --n-walkers 20000"
                             " --seed 123 --trajectories 2";
  auto run = [&](const std::string& name, int threads) {
    const std::string cmd = "\"" + cli + "\"" + common + " --threads " + std::to_string(threads) + " --out \"" +
                            (dir / name).string() + "\" > /dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  o.require(run("first", 1) && run("again", 1) && run("many", 8), "a simulate run failed");
  if (o.pass) {
    for (const char* file : {"ensemble.csv", "trajectory_1.csv"}) {
      const auto ref = slurp(dir / "first" / file);
      o.require(!ref.empty(), std::string(file) + " empty");
      o.require(ref == slurp(dir / "again" / file), std::string(file) + " differs between runs");
      o.require(ref == slurp(dir / "many" / file), std::string(file) + " differs between thread counts");
    }
    if (o.pass) o.detail = "ensemble and trajectory CSVs byte-identical over reruns and 1 vs 8 threads";
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> known;
  bool check_known = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else if (arg == "--known-failures" && i + 1 < argc) {
      check_known = true;
      for (double v : parse_double_list(argv[++i], "known failures")) known.insert(static_cast<int>(v));
    } else {
      std::cerr << "usage: acceptance [--cli PATH] [--known-failures LIST]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"special-function oracles", special_functions},
      {"lemma ratio convergence", lemma_ratios},
      {"Montroll-Weiss limit", montroll_weiss_limit},
      {"lattice vs Monte Carlo", lattice_vs_monte_carlo},
      {"variance law", variance_law},
      {"convergence in law", convergence_in_law},
      {"tail-exponent recovery", tail_exponents},
      {"Green-function properties", green_properties},
      {"determinism", [&] { return determinism(cli); }},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    if (!out.pass) failed.insert(id);
    std::printf("criterion %d %s: %s [%.1fs] %s\n", id, criteria[i].first.c_str(), out.pass ? "PASS" : "FAIL",
                took.count(), out.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed.size(), criteria.size());
  if (!check_known) return failed.empty() ? 0 : 1;
  if (failed == known) {
    std::printf("failing set matches the documented known failures\n");
    return 0;
  }
  std::printf("failing set differs from the documented known failures\n");
  return 1;
}
