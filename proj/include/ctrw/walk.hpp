#pragma once

// Monte Carlo engine for the rescaled walk: jumps h X_k at the instants
// t_n = tau (T_1 + ... + T_n). Between t_n (inclusive) and t_{n+1} (exclusive)
// the walker sits at S_n; events exactly at the horizon are kept.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ctrw/asymptotics.hpp"
#include "ctrw/error.hpp"
#include "ctrw/laws.hpp"
#include "ctrw/random.hpp"

namespace ctrw {

struct WalkConfig {
  JumpLaw jump = JumpLaw::gaussian();
  WaitingLaw wait = WaitingLaw::exponential();
  ScalingPair scale;
  double t_max = 1.0;
  std::uint64_t n_walkers = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(scale.h > 0.0) || !std::isfinite(scale.h)) throw domain_error("walk: h must be positive");
    if (!(scale.tau > 0.0) || !std::isfinite(scale.tau)) {
      throw domain_error("walk: tau must be positive");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw domain_error("walk: t_max must be positive");
    if (n_walkers < 1) throw domain_error("walk: n_walkers must be at least 1");
  }
};

struct Trajectory {
  std::vector<double> jump_times;  // t_1 < t_2 < ... <= t_max
  std::vector<double> positions;   // S_1, S_2, ...
  double t_max = 0.0;
};

/// Walk driven by an arbitrary source of per-step uniforms (step = 1, 2, ...).
template <class Source>
Trajectory simulate_walk_from(const WalkConfig& config, Source&& source) {
  config.validate();
  Trajectory traj;
  traj.t_max = config.t_max;
  double t = 0.0;
  double x = 0.0;
  for (std::uint64_t step = 1;; ++step) {
    const StepUniforms u = source(step);
    t += config.scale.tau * sample_wait(config.wait, u.wait);
    if (!(t <= config.t_max)) break;
    x += config.scale.h * sample_jump(config.jump, u.jump);
    traj.jump_times.push_back(t);
    traj.positions.push_back(x);
  }
  return traj;
}

/// Trajectory of one walker from the counter-based stream keyed by (seed, walker_id).
inline Trajectory simulate_walk(const WalkConfig& config, std::uint64_t walker_id) {
  if (walker_id >= config.n_walkers) throw domain_error("simulate_walk: walker id out of range");
  return simulate_walk_from(config, WalkerStream(config.seed, walker_id));
}

/// S_n for t_n <= t < t_{n+1}.
inline double position_at(const Trajectory& traj, double t) {
  if (!(t >= 0.0 && t <= traj.t_max)) throw domain_error("position_at: t outside [0, t_max]");
  const auto n = std::upper_bound(traj.jump_times.begin(), traj.jump_times.end(), t) -
                 traj.jump_times.begin();
  return n == 0 ? 0.0 : traj.positions[static_cast<std::size_t>(n - 1)];
}

/// Positions of one walker at each of the sorted observation times, without
/// storing the trajectory. Also returns the number of jumps up to t_max.
inline std::pair<std::vector<double>, std::uint64_t> walker_positions(
    const WalkConfig& config, std::uint64_t walker_id, std::span<const double> times) {
  const WalkerStream stream(config.seed, walker_id);
  std::vector<double> out(times.size(), 0.0);
  std::size_t next = 0;
  double t = 0.0;
  double x = 0.0;
  std::uint64_t jumps = 0;
  for (std::uint64_t step = 1;; ++step) {
    const StepUniforms u = stream(step);
    t += config.scale.tau * sample_wait(config.wait, u.wait);
    while (next < times.size() && times[next] < t) out[next++] = x;
    if (!(t <= config.t_max)) break;
    x += config.scale.h * sample_jump(config.jump, u.jump);
    ++jumps;
  }
  while (next < times.size()) out[next++] = x;
  return {std::move(out), jumps};
}

/// Runs body(first, last) over contiguous walker blocks on `threads` threads
/// (0 = hardware concurrency). Blocks write disjoint output ranges, so the
/// result does not depend on the thread count.
template <class Body>
void parallel_walkers(std::uint64_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));
  if (threads <= 1) {
    body(std::uint64_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) {
    const std::uint64_t first = n * i / threads;
    const std::uint64_t last = n * (i + 1) / threads;
    pool.emplace_back([&body, first, last] { body(first, last); });
  }
}

/// Ensemble positions: result[i][w] is walker w at times[i].
inline std::vector<std::vector<double>> ensemble_positions(const WalkConfig& config,
                                                           std::span<const double> times,
                                                           unsigned threads = 0) {
  config.validate();
  std::vector<double> sorted(times.begin(), times.end());
  for (double t : sorted) {
    if (!(t >= 0.0 && t <= config.t_max)) {
      throw domain_error("ensemble_positions: observation time outside [0, t_max]");
    }
  }
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = times[order[i]];

  std::vector<std::vector<double>> result(times.size(),
                                          std::vector<double>(config.n_walkers));
  parallel_walkers(config.n_walkers, threads, [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t w = first; w < last; ++w) {
      const auto positions = walker_positions(config, w, sorted).first;
      for (std::size_t i = 0; i < order.size(); ++i) result[order[i]][w] = positions[i];
    }
  });
  return result;
}

inline std::vector<double> ensemble_positions(const WalkConfig& config, double t,
                                              unsigned threads = 0) {
  const double times[] = {t};
  return std::move(ensemble_positions(config, times, threads).front());
}

/// Number of jumps in [0, t_max] for every walker.
inline std::vector<std::uint64_t> ensemble_jump_counts(const WalkConfig& config,
                                                       unsigned threads = 0) {
  config.validate();
  std::vector<std::uint64_t> counts(config.n_walkers);
  parallel_walkers(config.n_walkers, threads, [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t w = first; w < last; ++w) counts[w] = walker_positions(config, w, {}).second;
  });
  return counts;
}

/// Staircase rows (t, x) with both corners of every jump.
inline std::vector<std::pair<double, double>> trajectory_csv(const Trajectory& traj) {
  std::vector<std::pair<double, double>> rows{{0.0, 0.0}};
  double x = 0.0;
  for (std::size_t n = 0; n < traj.jump_times.size(); ++n) {
    rows.emplace_back(traj.jump_times[n], x);
    x = traj.positions[n];
    rows.emplace_back(traj.jump_times[n], x);
  }
  rows.emplace_back(traj.t_max, x);
  return rows;
}

}  // namespace ctrw
