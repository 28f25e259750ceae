#pragma once

// Exact evolution of the fully discrete walk (integer jumps p_k, integer
// waiting times c_n) through the renewal equation
//   p(x, t) = delta_{x,0} (1 - Phi(t)) + sum_{m=1..t} c_m sum_k p_k p(x - k, t - m)
// on the truncated support |x| <= K. Mass carried off the grid is tracked
// explicitly as leakage rather than renormalized away.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ctrw/error.hpp"
#include "ctrw/laws.hpp"

namespace ctrw {

struct LatticeEvolution {
  int K = 0;
  int T = 0;
  /// probabilities[t][x + K]
  std::vector<std::vector<double>> probabilities;
  /// leakage[t]: mass that has left |x| <= K by time t
  std::vector<double> leakage;
  std::vector<std::string> warnings;

  double at(int x, int t) const {
    if (x < -K || x > K) return 0.0;
    return probabilities.at(static_cast<std::size_t>(t))[static_cast<std::size_t>(x + K)];
  }
};

inline constexpr double kLeakageWarning = 1e-6;

inline LatticeEvolution evolve_lattice(double alpha, double beta, int K, int T) {
  if (K < 1 || T < 1) throw domain_error("evolve_lattice: need K >= 1 and T >= 1");
  const auto jump = JumpLaw::lattice_power(alpha);
  const auto wait = WaitingLaw::discrete_power(beta);
  const std::size_t width = 2 * static_cast<std::size_t>(K) + 1;

  std::vector<double> kernel(2 * width - 1);  // p_k for k in [-2K, 2K]
  for (long long k = -2LL * K; k <= 2LL * K; ++k) {
    kernel[static_cast<std::size_t>(k + 2LL * K)] = lattice_jump_pmf(alpha, k);
  }
  // probability that a jump from site x lands outside the grid
  std::vector<double> escape(width);
  for (int x = -K; x <= K; ++x) {
    escape[static_cast<std::size_t>(x + K)] = jump.survival(K - x) + jump.survival(K + x);
  }

  LatticeEvolution ev;
  ev.K = K;
  ev.T = T;
  ev.probabilities.assign(static_cast<std::size_t>(T) + 1, std::vector<double>(width, 0.0));
  ev.leakage.assign(static_cast<std::size_t>(T) + 1, 0.0);
  ev.probabilities[0][static_cast<std::size_t>(K)] = 1.0;

  // after_jump[s] = one jump applied to p(., s); lost[s] = leakage(s) + mass jumping off grid
  std::vector<std::vector<double>> after_jump(static_cast<std::size_t>(T));
  std::vector<double> lost(static_cast<std::size_t>(T), 0.0);
  auto convolve = [&](int s) {
    const auto& p = ev.probabilities[static_cast<std::size_t>(s)];
    std::vector<double> q(width, 0.0);
    double off = ev.leakage[static_cast<std::size_t>(s)];
    for (std::size_t j = 0; j < width; ++j) {
      const double mass = p[j];
      if (mass == 0.0) continue;
      off += mass * escape[j];
      // target i receives p_{i - j}
      const double* row = kernel.data() + (width - 1) - j;
      for (std::size_t i = 0; i < width; ++i) q[i] += mass * row[i];
    }
    after_jump[static_cast<std::size_t>(s)] = std::move(q);
    lost[static_cast<std::size_t>(s)] = off;
  };

  for (int t = 1; t <= T; ++t) {
    convolve(t - 1);
    auto& p = ev.probabilities[static_cast<std::size_t>(t)];
    p[static_cast<std::size_t>(K)] = wait.survival(t);
    double leak = 0.0;
    for (int m = 1; m <= t; ++m) {
      const double c = discrete_wait_pmf(beta, m);
      const auto& q = after_jump[static_cast<std::size_t>(t - m)];
      for (std::size_t i = 0; i < width; ++i) p[i] += c * q[i];
      leak += c * lost[static_cast<std::size_t>(t - m)];
    }
    ev.leakage[static_cast<std::size_t>(t)] = leak;
    if (leak > kLeakageWarning) {
      ev.warnings.push_back("leakage " + std::to_string(leak) + " exceeds 1e-6 at t=" +
                            std::to_string(t) + "; increase K");
    }
  }
  return ev;
}

}  // namespace ctrw
