#pragma once

// Special functions: gamma, the one-parameter Mittag-Leffler function on the
// non-positive real axis, and the Riemann zeta function for real s > 1.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "ctrw/error.hpp"
#include "ctrw/quadrature.hpp"

namespace ctrw {

/// Time-fractional order, 0 < beta <= 1.
class OrderBeta {
 public:
  explicit OrderBeta(double beta) : value_(beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
      throw domain_error("order beta must satisfy 0 < beta <= 1, got " + std::to_string(beta));
    }
  }
  double value() const noexcept { return value_; }
  bool is_exponential() const noexcept { return value_ == 1.0; }

 private:
  double value_;
};

/// Stability index, 0 < alpha <= 2.
class StabilityAlpha {
 public:
  explicit StabilityAlpha(double alpha) : value_(alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
      throw domain_error("stability index alpha must satisfy 0 < alpha <= 2, got " +
                         std::to_string(alpha));
    }
  }
  double value() const noexcept { return value_; }
  bool is_gaussian() const noexcept { return value_ == 2.0; }

 private:
  double value_;
};

/// Gamma function; throws at the poles 0, -1, -2, ...
inline double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw domain_error("gamma: pole at " + std::to_string(x));
  }
  return std::tgamma(x);
}

/// 1/Gamma(x), zero at the poles.
inline double reciprocal_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (x > 0.0) return 1.0 / std::tgamma(x);
  // reflection keeps large negative arguments finite
  return std::tgamma(1.0 - x) * std::sin(std::numbers::pi * x) / std::numbers::pi;
}

namespace detail {

// B_{2j} / (2j)! for j = 1..10
inline constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
};

}  // namespace detail

/// sum_{n >= start} n^-s for s > 1 by Euler-Maclaurin, start >= 1.
/// Accurate to double precision once start >= 10.
inline double zeta_tail(double s, double start) {
  double sum = std::pow(start, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(start, -s);
  // k-th term: B_{2k}/(2k)! * s (s+1) ... (s+2k-2) * start^{-s-2k+1}
  double rising = s;
  double power = std::pow(start, -s - 1.0);
  const double inv_sq = 1.0 / (start * start);
  for (std::size_t k = 0; k < detail::kBernoulliOverFactorial.size(); ++k) {
    const double term = detail::kBernoulliOverFactorial[k] * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * sum) break;
    rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
    power *= inv_sq;
  }
  return sum;
}

/// Riemann zeta function for real s > 1.
inline double riemann_zeta(double s) {
  if (!(s > 1.0)) throw domain_error("riemann_zeta: requires s > 1, got " + std::to_string(s));
  if (s >= 64.0) return 1.0;
  constexpr int kDirect = 12;
  double head = 0.0;
  for (int n = kDirect - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -s);
  return head + zeta_tail(s, kDirect);
}

namespace detail {

// Analytic continuation of zeta to real x != 1: Euler-Maclaurin for x > 0,
// the functional equation for x <= 0. Intended for moderate |x| (x > -30).
inline double zeta_continued(double x) {
  constexpr double pi = std::numbers::pi;
  if (x > 1.0) return riemann_zeta(x);
  if (x == 1.0) throw domain_error("zeta: pole at 1");
  if (x == 0.0) return -0.5;
  if (x > 0.0) {
    constexpr int kDirect = 12;
    double head = 0.0;
    for (int n = kDirect - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -x);
    return head + zeta_tail(x, kDirect);
  }
  if (x == 2.0 * std::floor(0.5 * x)) return 0.0;  // trivial zeros
  return std::pow(2.0, x) * std::pow(pi, x - 1.0) * std::sin(0.5 * pi * x) * std::tgamma(1.0 - x) *
         riemann_zeta(1.0 - x);
}

// E_beta(-x) from the defining power series; used for x <= 1 where no term
// exceeds 1/Gamma(1 + n beta) <= ~1.13 in magnitude.
inline double ml_series(double beta, double x) {
  double sum = 1.0;
  const double log_x = std::log(x);
  for (int n = 1; n < 2000; ++n) {
    const double magnitude = std::exp(n * log_x - std::lgamma(1.0 + n * beta));
    const double term = (n % 2 == 0) ? magnitude : -magnitude;
    sum += term;
    if (magnitude < 1e-17 * std::abs(sum)) return sum;
  }
  return sum;
}

// Large-argument expansion E_beta(-x) ~ sum_k (-1)^{k-1} x^-k / Gamma(1 - k beta),
// valid for 0 < beta < 1. Returns nullopt when the terms stop shrinking before
// reaching double precision.
inline std::optional<double> ml_asymptotic(double beta, double x) {
  constexpr double pi = std::numbers::pi;
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  const double log_x = std::log(x);
  for (int k = 1; k < 200; ++k) {
    // 1/Gamma(1 - k beta) = Gamma(k beta) sin(pi k beta) / pi
    const double kb = k * beta;
    const double magnitude = std::exp(std::lgamma(kb) - k * log_x) / pi;
    const double term = magnitude * std::sin(pi * kb) * ((k % 2 == 1) ? 1.0 : -1.0);
    sum += term;
    if (magnitude < 1e-17 * std::abs(sum)) return sum;
    if (magnitude > previous) return std::nullopt;
    previous = magnitude;
  }
  return std::nullopt;
}

// Cumulative spectral measure of e_beta(t) = E_beta(-t^beta):
// e_beta(t) = int_0^inf e^{-r t} K(r) dr = int_0^inf e^-y F(y/t) dy with
// F(r) = atan2(r^beta sin(beta pi), 1 + r^beta cos(beta pi)) / (beta pi).
inline double ml_spectral_cdf(double beta, double log_r) {
  constexpr double pi = std::numbers::pi;
  const double q = std::exp(beta * log_r);
  return std::atan2(q * std::sin(beta * pi), 1.0 + q * std::cos(beta * pi)) / (beta * pi);
}

// E_beta(-x) from the spectral representation with t = x^(1/beta), integrated
// in v = log y so the integrand is smooth: int exp(-e^v) e^v F(e^v / t) dv.
inline double ml_spectral(double beta, double x) {
  const double log_t = std::log(x) / beta;
  auto integrand = [&](double v) {
    const double y = std::exp(v);
    return std::exp(-y) * y * ml_spectral_cdf(beta, v - log_t);
  };
  // left tail decays like e^{(1+beta) v}; right tail is double exponential
  const double v_lo = std::min(-45.0, log_t - 40.0);
  const double v_hi = std::log(45.0);
  std::array<double, 3> breaks{log_t, log_t - 3.0, 0.0};
  return integrate_split(integrand, v_lo, v_hi, breaks, {.abs_tol = 0.0, .rel_tol = 1e-12}).value;
}

}  // namespace detail

/// Mittag-Leffler function E_beta(z) for z <= 0 (the completely monotone branch).
inline double mittag_leffler(OrderBeta order, double z) {
  if (z > 0.0) throw domain_error("mittag_leffler: only z <= 0 is supported");
  if (std::isinf(z)) return 0.0;
  const double beta = order.value();
  if (z == 0.0) return 1.0;
  if (order.is_exponential()) return std::exp(z);
  const double x = -z;
  if (x <= 1.0) return detail::ml_series(beta, x);
  if (x >= 50.0) {
    if (auto value = detail::ml_asymptotic(beta, x)) return *value;
  }
  return detail::ml_spectral(beta, x);
}

inline double mittag_leffler(double beta, double z) { return mittag_leffler(OrderBeta(beta), z); }

}  // namespace ctrw
