#pragma once

// Transform-domain side of the walk: the constants mu and lambda governing
//   1 - w^(kappa) ~ mu |kappa|^alpha      (kappa -> 0)
//   1 - phi~(s)   ~ lambda s^beta         (s -> 0),
// the well-scaled relation mu h^alpha = lambda tau^beta, numerical transforms
// of every catalogued law, ratio checks of the two asymptotics and the
// Montroll-Weiss transform of the rescaled walk.
//
// Transforms are returned through their complements (1 - w^, 1 - phi~) since
// all interesting behaviour lives in the regime where both are tiny.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ctrw/error.hpp"
#include "ctrw/laws.hpp"
#include "ctrw/quadrature.hpp"
#include "ctrw/specfun.hpp"

namespace ctrw {

struct LemmaConstants {
  double mu = 0.0;      // spatial: 1 - w^(k) ~ mu |k|^alpha
  double lambda = 0.0;  // temporal: 1 - phi~(s) ~ lambda s^beta
};

/// mu = sigma^2/2 (alpha = 2) or b pi / (Gamma(alpha+1) sin(alpha pi/2));
/// lambda = rho (beta = 1) or c Gamma(1-beta)/beta.
inline LemmaConstants lemma_constants(const TailConstants& tc, StabilityAlpha alpha,
                                      OrderBeta beta) {
  constexpr double pi = std::numbers::pi;
  LemmaConstants lc;
  if (alpha.is_gaussian()) {
    if (!tc.jump_sigma2) throw domain_error("lemma_constants: alpha = 2 needs sigma^2");
    lc.mu = *tc.jump_sigma2 / 2.0;
  } else {
    if (!tc.jump_b) throw domain_error("lemma_constants: alpha < 2 needs a tail amplitude b");
    const double a = alpha.value();
    lc.mu = *tc.jump_b * pi / (gamma(a + 1.0) * std::sin(a * pi / 2.0));
  }
  if (beta.is_exponential()) {
    if (!tc.wait_rho) throw domain_error("lemma_constants: beta = 1 needs a mean waiting time");
    lc.lambda = *tc.wait_rho;
  } else {
    if (!tc.wait_c) throw domain_error("lemma_constants: beta < 1 needs a tail amplitude c");
    const double b = beta.value();
    lc.lambda = *tc.wait_c * gamma(1.0 - b) / b;
  }
  return lc;
}

inline LemmaConstants lemma_constants(const JumpLaw& jump, const WaitingLaw& wait) {
  return lemma_constants(tail_constants(jump, wait), StabilityAlpha(jump.alpha()),
                         OrderBeta(wait.beta()));
}

/// Jump scale h and waiting-time scale tau of the rescaled walk.
struct ScalingPair {
  double h = 1.0;
  double tau = 1.0;
};

/// r(h, tau) = mu h^alpha / (lambda tau^beta).
inline double scaling_ratio(const ScalingPair& pair, const LemmaConstants& lc,
                            StabilityAlpha alpha, OrderBeta beta) {
  return lc.mu * std::pow(pair.h, alpha.value()) / (lc.lambda * std::pow(pair.tau, beta.value()));
}

/// tau = (mu h^alpha / lambda)^(1/beta), so that r(h, tau) = 1.
inline ScalingPair scaling_tau(double h, const LemmaConstants& lc, StabilityAlpha alpha,
                               OrderBeta beta) {
  if (!(h > 0.0)) throw domain_error("scaling_tau: h must be positive");
  // logs keep tiny h from underflowing before the final power
  const double log_tau =
      (std::log(lc.mu) + alpha.value() * std::log(h) - std::log(lc.lambda)) / beta.value();
  return {h, std::exp(log_tau)};
}

namespace detail {

// sum_{k >= n} k^-p (1 - cos(kappa k)) for 0 < kappa <= pi and kappa n >= 100,
// by Euler-Maclaurin with the cosine integral from its large-argument expansion.
inline double cosine_power_tail(double p, double kappa, double n) {
  using namespace std::complex_literals;
  // int_a^inf y^-p e^{iy} dy = i e^{ia} a^-p sum_j (-i)^j (p)_j a^-j
  const double a = kappa * n;
  std::complex<double> series = 0.0;
  std::complex<double> term = 1.0;
  for (int j = 0; j < 60; ++j) {
    series += term;
    term *= -1.0i * (p + j) / a;
    if (std::abs(term) < 1e-18) break;
  }
  const double cos_integral = (1.0i * std::exp(1.0i * a) * std::pow(a, -p) * series).real();
  const double integral = std::pow(n, 1.0 - p) / (p - 1.0) - std::pow(kappa, p - 1.0) * cos_integral;

  // derivatives of g(x) = x^-p (1 - cos(kappa x)) at x = n
  auto power_derivative = [&](int m) {
    double v = std::pow(n, -p - m);
    for (int i = 0; i < m; ++i) v *= -(p + i);
    return v;
  };
  auto cos_derivative = [&](int m) {
    return std::pow(kappa, m) * std::cos(kappa * n + m * std::numbers::pi / 2.0);
  };
  auto g_derivative = [&](int m) {
    double product = 0.0;  // (x^-p cos(kappa x))^(m)
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
      product += binom * power_derivative(i) * cos_derivative(m - i);
      binom = binom * (m - i) / (i + 1);
    }
    return power_derivative(m) - product;
  };

  double sum = integral + 0.5 * g_derivative(0);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    sum -= kBernoulliOverFactorial[j] * g_derivative(static_cast<int>(2 * j + 1));
  }
  return sum;
}

// Below this argument the lattice and discrete transforms switch from direct
// summation to their small-argument expansions.
inline constexpr double kSmallArgument = 0.1;

// sum_{n>=1} n^-(a+1) (1 - cos(kappa n)) for 0 < a < 2, |kappa| < 2 pi, from
// the expansion of the polylogarithm Li_{a+1}(e^{i kappa}) about kappa = 0.
inline double cosine_power_series(double a, double kappa) {
  constexpr double pi = std::numbers::pi;
  // -Gamma(-a) cos(pi a / 2), continuous at a = 1 where it equals pi/2
  const double leading = a == 1.0 ? 0.5 * pi : -std::tgamma(-a) * std::cos(0.5 * pi * a);
  double sum = leading * std::pow(kappa, a);
  double power = 1.0;  // (-1)^j kappa^2j / (2j)!
  for (int j = 1; j < 40; ++j) {
    power *= -kappa * kappa / ((2.0 * j - 1.0) * (2.0 * j));
    const double term = zeta_continued(a + 1.0 - 2.0 * j) * power;
    sum -= term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// sum_{n>=1} n^-(b+1) (1 - e^{-s n}) for 0 < b < 1, 0 < s < 2 pi, from the
// expansion of Li_{b+1}(e^{-s}) about s = 0.
inline double exponential_power_series(double b, double s) {
  double sum = -std::tgamma(-b) * std::pow(s, b);
  double power = 1.0;  // (-s)^k / k!
  for (int k = 1; k < 80; ++k) {
    power *= -s / k;
    const double term = zeta_continued(b + 1.0 - k) * power;
    sum -= term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// 1 - w^(kappa) for the jump law.
inline double char_fn_complement(const JumpLaw& law, double kappa) {
  constexpr double pi = std::numbers::pi;
  kappa = std::abs(kappa);
  if (kappa == 0.0) return 0.0;
  if (law.is_lattice()) {
    // 2 sum_k p_k (1 - cos k kappa), 2 pi periodic
    kappa = std::remainder(kappa, 2.0 * pi);
    kappa = std::abs(kappa);
    if (kappa == 0.0) return 0.0;
    const double p = law.alpha() + 1.0;
    if (kappa < detail::kSmallArgument) {
      return 2.0 * law.lattice_amplitude() * detail::cosine_power_series(law.alpha(), kappa);
    }
    const double n = std::max(2000.0, std::ceil(100.0 / kappa));
    double head = 0.0;
    for (double k = n - 1.0; k >= 1.0; k -= 1.0) {
      const double s = std::sin(0.5 * kappa * k);
      head += 2.0 * s * s * std::pow(k, -p);
    }
    return 2.0 * law.lattice_amplitude() * (head + detail::cosine_power_tail(p, kappa, n));
  }
  // 1 - w^(kappa) = 2 kappa int_0^inf sin(kappa x) (1 - W(x)) dx, y = kappa x
  OscillatoryOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-12;
  opt.breakpoints = {0.25 * kappa, kappa, 4.0 * kappa};
  if (law.kind() == JumpKind::gaussian) opt.breakpoints.push_back(10.0 * kappa);
  const auto r = oscillatory_integral(
      [&](double y) { return 2.0 * law.survival(y / kappa); }, Trig::sine, opt);
  return r.value;
}

/// w^(kappa) = int e^{i kappa x} dW(x) (real by symmetry).
inline double char_fn(const JumpLaw& law, double kappa) {
  return 1.0 - char_fn_complement(law, kappa);
}

/// 1 - phi~(s) for the waiting-time law, s >= 0.
inline double laplace_wait_complement(const WaitingLaw& law, double s) {
  if (s < 0.0) throw domain_error("laplace_wait: s must be non-negative");
  if (s == 0.0) return 0.0;
  switch (law.kind()) {
    case WaitKind::exponential: return s / (1.0 + s);
    case WaitKind::discrete_power: {
      const double p = law.beta() + 1.0;
      if (s < detail::kSmallArgument) {
        return law.discrete_amplitude() * detail::exponential_power_series(law.beta(), s);
      }
      const double n = std::max(2000.0, std::ceil(50.0 / s));
      double head = 0.0;
      for (double k = n - 1.0; k >= 1.0; k -= 1.0) head += -std::expm1(-k * s) * std::pow(k, -p);
      // e^{-k s} < e^-50 beyond n
      return law.discrete_amplitude() * (head + zeta_tail(p, n));
    }
    case WaitKind::continuous_power: {
      // s int_0^inf e^{-st} (1 - Phi(t)) dt = int e^{-y} S(y/s) dy, y = e^v
      const double log_s = std::log(s);
      auto integrand = [&](double v) {
        const double y = std::exp(v);
        return std::exp(-y) * y * law.survival(std::exp(v - log_s));
      };
      const double knee = log_s - std::log(law.gamma_one_minus_beta()) / law.beta();
      const std::array<double, 3> breaks{knee - 2.0, knee, knee + 2.0};
      return integrate_split(integrand, std::min(-50.0, knee - 40.0), std::log(45.0), breaks,
                             {.abs_tol = 0.0, .rel_tol = 1e-13})
          .value;
    }
  }
  return 0.0;
}

/// phi~(s) = int_0^inf e^{-st} dPhi(t).
inline double laplace_wait(const WaitingLaw& law, double s) {
  const double complement = laplace_wait_complement(law, s);
  if (complement <= 0.5) return 1.0 - complement;
  // phi~ itself is small here; evaluate it directly to keep relative accuracy
  switch (law.kind()) {
    case WaitKind::exponential: return 1.0 / (1.0 + s);
    case WaitKind::discrete_power: {
      double sum = 0.0;
      const double p = law.beta() + 1.0;
      for (double n = 1.0; n * s < 800.0; n += 1.0) {
        const double term = std::exp(-n * s) * std::pow(n, -p);
        sum += term;
        if (term < 1e-18 * sum) break;
      }
      return law.discrete_amplitude() * sum;
    }
    case WaitKind::continuous_power: {
      const double log_s = std::log(s);
      auto integrand = [&](double v) {
        const double y = std::exp(v);
        return std::exp(-y) * y * waiting_cdf(law, std::exp(v - log_s));
      };
      const double knee = log_s - std::log(law.gamma_one_minus_beta()) / law.beta();
      const std::array<double, 3> breaks{knee - 2.0, knee, knee + 2.0};
      return integrate_split(integrand, std::min(-50.0, knee - 40.0), std::log(45.0), breaks,
                             {.abs_tol = 0.0, .rel_tol = 1e-13})
          .value;
    }
  }
  return 1.0 - complement;
}

/// Ratio sequence certifying a power-law asymptotic of a transform.
struct LemmaReport {
  std::vector<double> probe_points;  // strictly decreasing toward 0
  std::vector<double> ratios;
  bool converged = false;

  /// |ratio - 1| decreases strictly along the last `count` probes.
  bool deviation_decreasing(std::size_t count = 4) const {
    if (ratios.size() < count) return false;
    for (std::size_t i = ratios.size() - count + 1; i < ratios.size(); ++i) {
      if (!(std::abs(ratios[i] - 1.0) < std::abs(ratios[i - 1] - 1.0))) return false;
    }
    return true;
  }
};

inline constexpr int kFirstProbe = 2;
inline constexpr int kLastProbe = 14;
inline constexpr double kLemmaTolerance = 0.02;

namespace detail {

template <class Complement>
LemmaReport ratio_report(Complement&& complement, double constant, double exponent, int last) {
  LemmaReport report;
  for (int j = kFirstProbe; j <= last; ++j) {
    const double point = std::ldexp(1.0, -j);
    report.probe_points.push_back(point);
    report.ratios.push_back(complement(point) / (constant * std::pow(point, exponent)));
  }
  report.converged = std::abs(report.ratios.back() - 1.0) < kLemmaTolerance;
  return report;
}

}  // namespace detail

/// (1 - w^(kappa)) / (mu kappa^alpha) over kappa = 2^-2 .. 2^-last.
inline LemmaReport verify_lemma1(const JumpLaw& law, const LemmaConstants& lc,
                                 int last = kLastProbe) {
  return detail::ratio_report([&](double k) { return char_fn_complement(law, k); }, lc.mu,
                              law.alpha(), last);
}

/// (1 - phi~(s)) / (lambda s^beta) over s = 2^-2 .. 2^-last.
inline LemmaReport verify_lemma2(const WaitingLaw& law, const LemmaConstants& lc,
                                 int last = kLastProbe) {
  return detail::ratio_report([&](double s) { return laplace_wait_complement(law, s); },
                              lc.lambda, law.beta(), last);
}

/// Montroll-Weiss transform from transform complements:
/// (1 - phi~)/s / (1 - w^ phi~) with 1 - w^ phi~ = cw + (1 - cw) cp.
inline double montroll_weiss_from_complements(double cw, double cp, double s) {
  if (!(s > 0.0)) throw domain_error("montroll_weiss: s must be positive");
  const double denominator = cw + (1.0 - cw) * cp;
  if (std::abs(denominator) < 1e-300) {
    throw numerical_error("montroll_weiss: vanishing denominator", 0.0, denominator);
  }
  return cp / s / denominator;
}

/// (1 - phi~)/s * 1/(1 - w^ phi~).
inline double montroll_weiss(double w_hat, double phi_tilde, double s) {
  if (std::abs(w_hat) > 1.0) throw domain_error("montroll_weiss: |w^| must not exceed 1");
  if (!(phi_tilde > 0.0 && phi_tilde <= 1.0)) {
    throw domain_error("montroll_weiss: phi~ must lie in (0, 1]");
  }
  return montroll_weiss_from_complements(1.0 - w_hat, 1.0 - phi_tilde, s);
}

/// Montroll-Weiss transform of the walk with jumps h X and waits tau T.
inline double mw_rescaled(const JumpLaw& jump, const WaitingLaw& wait, const ScalingPair& pair,
                          double kappa, double s) {
  const double cw = char_fn_complement(jump, pair.h * kappa);
  const double cp = laplace_wait_complement(wait, pair.tau * s);
  return montroll_weiss_from_complements(cw, cp, s);
}

/// Fourier-Laplace image of the fundamental solution: s^(beta-1) / (s^beta + |kappa|^alpha).
inline double mw_limit(StabilityAlpha alpha, OrderBeta beta, double kappa, double s) {
  const double sb = std::pow(s, beta.value());
  return sb / s / (sb + std::pow(std::abs(kappa), alpha.value()));
}

}  // namespace ctrw
