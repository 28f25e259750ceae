#pragma once

// Quadrature helpers shared by the special-function, transform and
// Green-function code.
//
// `integrate` is a globally adaptive Gauss-Kronrod (10/21) scheme in the style
// of QUADPACK's QAG: the interval with the largest error estimate is bisected
// until the summed estimate meets max(abs_tol, rel_tol * |result|).
// `oscillatory_integral` evaluates int_0^inf g(y) trig(y) dy for trig in
// {sin, cos} by summing the integrals between successive zeros of trig and
// accelerating the resulting alternating series with the Euler transformation
// (repeated averaging of partial sums), which copes with amplitudes decaying
// only like y^-p.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "ctrw/error.hpp"

namespace ctrw {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

struct QuadOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-13;
  std::size_t max_intervals = 2000;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980428580, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// 10-point Gauss weights for the odd-indexed Kronrod nodes
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fx{};
  fx[10] = f(center);
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = half * kKronrodNodes[i];
    fx[i] = f(center - dx);
    fx[20 - i] = f(center + dx);
  }
  double kronrod = kKronrodWeights[10] * fx[10];
  double gauss = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double pair = fx[i] + fx[20 - i];
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fx[10] - mean);
  for (std::size_t i = 0; i < 10; ++i) {
    asc += kKronrodWeights[i] * (std::abs(fx[i] - mean) + std::abs(fx[20 - i] - mean));
  }
  kronrod *= half;
  gauss *= half;
  asc *= std::abs(half);
  double error = std::abs(kronrod - gauss);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  // floor at roundoff in the integrand values
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, error};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 21 over the finite interval [a, b].
/// Returns the best estimate even when the interval budget is exhausted; the
/// error field then exceeds the requested tolerance.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  if (a == b) return {};
  std::priority_queue<detail::Panel> panels;
  auto first = detail::gauss_kronrod21(f, a, b);
  double value = first.value;
  double error = first.error;
  panels.push(first);
  // panel errors are floored at roundoff, so never ask for less than that
  double magnitude = std::abs(first.value);
  auto target = [&] {
    return std::max({opt.abs_tol, opt.rel_tol * std::abs(value),
                     100.0 * std::numeric_limits<double>::epsilon() * magnitude});
  };
  while (error > target() && panels.size() < opt.max_intervals) {
    const auto worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    panels.pop();
    auto left = detail::gauss_kronrod21(f, worst.a, mid);
    auto right = detail::gauss_kronrod21(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
    panels.push(left);
    panels.push(right);
  }
  // re-sum to shed the drift of the incremental updates
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  return {value, error};
}

/// Integrates over [a, b] split at every breakpoint that falls strictly inside.
template <class F>
QuadResult integrate_split(F&& f, double a, double b, std::span<const double> breaks,
                           const QuadOptions& opt = {}) {
  std::vector<double> nodes{a};
  for (double p : breaks) {
    if (p > a && p < b) nodes.push_back(p);
  }
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  QuadResult total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto piece = integrate(f, nodes[i], nodes[i + 1], opt);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

/// Limit of an alternating-ish sequence of partial sums via repeated pairwise
/// averaging (Euler transformation). Returns the top value and the difference
/// between the two entries of the last-but-one level as an error estimate.
inline QuadResult euler_limit(std::span<const double> partial_sums) {
  std::vector<double> level(partial_sums.begin(), partial_sums.end());
  if (level.empty()) return {};
  double error = std::numeric_limits<double>::infinity();
  while (level.size() > 1) {
    if (level.size() == 2) error = std::abs(level[1] - level[0]);
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
      level[i] = 0.5 * (level[i] + level[i + 1]);
    }
    level.pop_back();
  }
  return {level.front(), error};
}

enum class Trig { sine, cosine };

struct OscillatoryOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  /// Points (in y) where the amplitude changes character; segments are split
  /// there and direct summation continues at least past the largest one.
  std::vector<double> breakpoints;
  /// Number of partial sums fed to the Euler transformation.
  std::size_t euler_terms = 24;
  std::size_t max_segments = 200000;
};

/// int_0^inf g(y) sin(y) dy or int_0^inf g(y) cos(y) dy.
///
/// g must be integrable against the kernel on every finite segment and be
/// eventually monotone and decaying (at least algebraically).
template <class G>
QuadResult oscillatory_integral(G&& g, Trig kind, const OscillatoryOptions& opt = {}) {
  constexpr double pi = std::numbers::pi;
  const double phase = kind == Trig::sine ? 0.0 : 0.5 * pi;
  auto integrand = [&](double y) {
    return g(y) * (kind == Trig::sine ? std::sin(y) : std::cos(y));
  };

  double last_break = 0.0;
  for (double b : opt.breakpoints) last_break = std::max(last_break, b);

  // segment n covers [z(n-1), z(n)] with z(n) = phase + n*pi, z(-1) = 0
  auto zero = [&](std::size_t n) { return phase + static_cast<double>(n) * pi; };

  double sum = 0.0;
  double quad_error = 0.0;
  std::vector<double> partial;
  partial.reserve(opt.euler_terms + 1);
  double lo = 0.0;
  for (std::size_t n = 0; n < opt.max_segments; ++n) {
    const double hi = zero(n);
    const auto piece = integrate_split(integrand, lo, hi, opt.breakpoints);
    sum += piece.value;
    quad_error += piece.error;
    lo = hi;

    const bool past_features = hi > last_break;
    if (!past_features) continue;

    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    // exponentially decaying amplitude: plain summation has converged
    if (std::abs(piece.value) < 1e-3 * tol && std::abs(g(hi)) < tol) {
      return {sum, quad_error + std::abs(piece.value)};
    }

    partial.push_back(sum);
    if (partial.size() > opt.euler_terms) partial.erase(partial.begin());
    if (partial.size() == opt.euler_terms) {
      const auto lim = euler_limit(partial);
      if (lim.error < tol) return {lim.value, lim.error + quad_error};
    }
  }
  const auto lim = euler_limit(partial);
  throw numerical_error("oscillatory integral did not converge", lim.value, lim.error);
}

}  // namespace ctrw
