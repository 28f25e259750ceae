#pragma once

// Jump and waiting-time laws of the walk.
//
// Every law is a deterministic map from a caller-supplied uniform variate to a
// sample (inverse CDF), plus its CDF or PMF and the tail constants used by the
// transform asymptotics. All jump laws are symmetric about zero.
//
//   jump  cpow:a  W(x) = 1/2 + sign(x)/2 * |x|^a / (1 + |x|^a),  0 < a < 2
//         gauss   standard normal (the a = 2 border case)
//         lpow:a  p_0 = 0, p_k = b |k|^-(a+1),  b = 1 / (2 zeta(a+1))
//   wait  cpow:b  Phi(t) = 1 - 1 / (1 + Gamma(1-b) t^b),  0 < b < 1
//         exp     Phi(t) = 1 - e^-t (the b = 1 border case)
//         dpow:b  c_n = c n^-(b+1), n >= 1,  c = 1 / zeta(b+1)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctrw/error.hpp"
#include "ctrw/specfun.hpp"

namespace ctrw {

namespace detail {

inline void require_unit_open(double u, const char* who) {
  if (!(u > 0.0 && u < 1.0)) {
    throw domain_error(std::string(who) + ": uniform variate must lie in (0, 1), got " +
                       std::to_string(u));
  }
}

// Standard normal quantile for 0 < p <= 1/2: Acklam's rational approximation
// refined by one Halley step against the erfc-based CDF.
inline double normal_quantile_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - step / (1.0 + 0.5 * x * step);
}

// Survival table of a power law on the positive integers,
// surv[k] = P(N > k) for k = 0..K, with the analytic tail beyond K.
class PowerTailTable {
 public:
  // mass(k) = amplitude * k^-exponent for k >= 1
  PowerTailTable(double amplitude, double exponent, std::size_t size)
      : amplitude_(amplitude), exponent_(exponent), survival_(size + 1) {
    survival_[size] = tail_beyond(static_cast<double>(size));
    for (std::size_t k = size; k-- > 0;) {
      survival_[k] = survival_[k + 1] + amplitude_ * std::pow(static_cast<double>(k + 1), -exponent_);
    }
  }

  double survival(double k) const {
    if (k < 0.0) return 1.0;
    if (k < static_cast<double>(survival_.size())) return survival_[static_cast<std::size_t>(k)];
    return tail_beyond(k);
  }

  // smallest k >= 1 with P(N > k) <= w
  double quantile_from_survival(double w) const {
    const std::size_t last = survival_.size() - 1;
    if (w >= survival_[last]) {
      auto it = std::partition_point(survival_.begin() + 1, survival_.end(),
                                     [w](double s) { return s > w; });
      return static_cast<double>(it - survival_.begin());
    }
    // Pareto tail: amplitude * (k + 1/2)^-(exponent-1) / (exponent-1) ~ w
    const double p = exponent_ - 1.0;
    double k = std::floor(std::pow(amplitude_ / (p * w), 1.0 / p) - 0.5);
    k = std::max(k, static_cast<double>(last));
    // beyond 2^52 unit steps are no longer representable
    if (k > 4.5e15) return k;
    while (k > static_cast<double>(last) && tail_beyond(k - 1.0) <= w) k -= 1.0;
    while (tail_beyond(k) > w) k += 1.0;
    return k;
  }

  double table_total() const { return survival_.front(); }

 private:
  double tail_beyond(double k) const { return amplitude_ * zeta_tail(exponent_, k + 1.0); }

  double amplitude_;
  double exponent_;
  std::vector<double> survival_;
};

inline constexpr std::size_t kLatticeTableSize = 1000000;

inline double parse_number(std::string_view text, std::string_view token) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw usage_error("invalid law token '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

enum class JumpKind { continuous_power, gaussian, lattice_power };
enum class WaitKind { continuous_power, exponential, discrete_power };

/// Symmetric jump law.
class JumpLaw {
 public:
  static JumpLaw continuous_power(double alpha) {
    check_power_alpha(alpha);
    return JumpLaw(JumpKind::continuous_power, alpha);
  }
  static JumpLaw gaussian() { return JumpLaw(JumpKind::gaussian, 2.0); }
  static JumpLaw lattice_power(double alpha) {
    check_power_alpha(alpha);
    JumpLaw law(JumpKind::lattice_power, alpha);
    law.amplitude_ = 1.0 / (2.0 * riemann_zeta(alpha + 1.0));
    // magnitude |X| = k has mass 2 p_k
    law.table_ = std::make_shared<const detail::PowerTailTable>(
        2.0 * law.amplitude_, alpha + 1.0, detail::kLatticeTableSize);
    return law;
  }

  JumpKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  bool is_lattice() const noexcept { return kind_ == JumpKind::lattice_power; }
  /// b in p_k = b |k|^-(alpha+1); zero for non-lattice laws.
  double lattice_amplitude() const noexcept { return amplitude_; }

  /// Token in the `cpow:a | gauss | lpow:a` grammar.
  std::string token() const {
    switch (kind_) {
      case JumpKind::continuous_power: return "cpow:" + format_order(alpha_);
      case JumpKind::gaussian: return "gauss";
      case JumpKind::lattice_power: return "lpow:" + format_order(alpha_);
    }
    return {};
  }

  /// P(X > x) for x >= 0 (continuous laws).
  double survival(double x) const {
    switch (kind_) {
      case JumpKind::continuous_power: return 0.5 / (1.0 + std::pow(x, alpha_));
      case JumpKind::gaussian: return 0.5 * std::erfc(x / std::numbers::sqrt2);
      case JumpKind::lattice_power: return 0.5 * table_->survival(std::floor(x));
    }
    return 0.0;
  }

  const detail::PowerTailTable& lattice_table() const { return *table_; }

  friend bool operator==(const JumpLaw& a, const JumpLaw& b) {
    return a.kind_ == b.kind_ && a.alpha_ == b.alpha_;
  }

 private:
  JumpLaw(JumpKind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  static void check_power_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
      throw domain_error("power-law jumps require 0 < alpha < 2, got " + std::to_string(alpha));
    }
  }
  static std::string format_order(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  }

  JumpKind kind_;
  double alpha_;
  double amplitude_ = 0.0;
  std::shared_ptr<const detail::PowerTailTable> table_;
};

/// Waiting-time law on t > 0.
class WaitingLaw {
 public:
  static WaitingLaw continuous_power(double beta) {
    check_power_beta(beta);
    WaitingLaw law(WaitKind::continuous_power, beta);
    law.gamma_one_minus_beta_ = gamma(1.0 - beta);
    return law;
  }
  static WaitingLaw exponential() { return WaitingLaw(WaitKind::exponential, 1.0); }
  static WaitingLaw discrete_power(double beta) {
    check_power_beta(beta);
    WaitingLaw law(WaitKind::discrete_power, beta);
    law.amplitude_ = 1.0 / riemann_zeta(beta + 1.0);
    law.table_ = std::make_shared<const detail::PowerTailTable>(law.amplitude_, beta + 1.0,
                                                                detail::kLatticeTableSize);
    return law;
  }

  WaitKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  bool is_discrete() const noexcept { return kind_ == WaitKind::discrete_power; }
  /// c in c_n = c n^-(beta+1); zero for continuous laws.
  double discrete_amplitude() const noexcept { return amplitude_; }

  std::string token() const {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, beta_);
    const std::string order(buf, ptr);
    switch (kind_) {
      case WaitKind::continuous_power: return "cpow:" + order;
      case WaitKind::exponential: return "exp";
      case WaitKind::discrete_power: return "dpow:" + order;
    }
    return {};
  }

  /// P(T > t).
  double survival(double t) const {
    if (t < 0.0) return 1.0;
    switch (kind_) {
      case WaitKind::continuous_power:
        return 1.0 / (1.0 + gamma_one_minus_beta_ * std::pow(t, beta_));
      case WaitKind::exponential: return std::exp(-t);
      case WaitKind::discrete_power: return table_->survival(std::floor(t));
    }
    return 0.0;
  }

  double gamma_one_minus_beta() const noexcept { return gamma_one_minus_beta_; }
  const detail::PowerTailTable& discrete_table() const { return *table_; }

  friend bool operator==(const WaitingLaw& a, const WaitingLaw& b) {
    return a.kind_ == b.kind_ && a.beta_ == b.beta_;
  }

 private:
  WaitingLaw(WaitKind kind, double beta) : kind_(kind), beta_(beta) {}

  static void check_power_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
      throw domain_error("power-law waits require 0 < beta < 1, got " + std::to_string(beta));
    }
  }

  WaitKind kind_;
  double beta_;
  double gamma_one_minus_beta_ = 1.0;
  double amplitude_ = 0.0;
  std::shared_ptr<const detail::PowerTailTable> table_;
};

/// W(x) for continuous jump laws.
inline double jump_cdf(const JumpLaw& law, double x) {
  if (law.is_lattice()) throw domain_error("jump_cdf: lattice law, use lattice_jump_pmf");
  if (x == 0.0) return 0.5;
  const double tail = law.survival(std::abs(x));
  return x > 0.0 ? 1.0 - tail : tail;
}

/// Phi(t) for continuous waiting-time laws.
inline double waiting_cdf(const WaitingLaw& law, double t) {
  if (t < 0.0) throw domain_error("waiting_cdf: t must be non-negative");
  switch (law.kind()) {
    case WaitKind::continuous_power: {
      const double g = law.gamma_one_minus_beta() * std::pow(t, law.beta());
      return g / (1.0 + g);
    }
    case WaitKind::exponential: return -std::expm1(-t);
    case WaitKind::discrete_power:
      throw domain_error("waiting_cdf: discrete law, use discrete_wait_pmf");
  }
  return 0.0;
}

/// p_k = b |k|^-(alpha+1), p_0 = 0, b = 1/(2 zeta(alpha+1)).
inline double lattice_jump_pmf(double alpha, long long k) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw domain_error("lattice_jump_pmf: need 0 < alpha < 2");
  if (k == 0) return 0.0;
  const double b = 1.0 / (2.0 * riemann_zeta(alpha + 1.0));
  return b * std::pow(static_cast<double>(k < 0 ? -k : k), -(alpha + 1.0));
}

/// c_n = c n^-(beta+1) for n >= 1, c = 1/zeta(beta+1).
inline double discrete_wait_pmf(double beta, long long n) {
  if (!(beta > 0.0 && beta < 1.0)) throw domain_error("discrete_wait_pmf: need 0 < beta < 1");
  if (n < 1) throw domain_error("discrete_wait_pmf: n must be >= 1");
  return std::pow(static_cast<double>(n), -(beta + 1.0)) / riemann_zeta(beta + 1.0);
}

/// u-quantile of the jump law.
inline double sample_jump(const JumpLaw& law, double u) {
  detail::require_unit_open(u, "sample_jump");
  // tail probability of the magnitude, exact for both halves
  const double w = 2.0 * std::min(u, 1.0 - u);
  const double sign = u < 0.5 ? -1.0 : 1.0;
  switch (law.kind()) {
    case JumpKind::continuous_power: {
      if (u == 0.5) return 0.0;
      const double v = std::abs(2.0 * u - 1.0);
      return sign * std::pow(v / w, 1.0 / law.alpha());
    }
    case JumpKind::gaussian: {
      if (u == 0.5) return 0.0;
      return -sign * detail::normal_quantile_lower(0.5 * w);
    }
    case JumpKind::lattice_power:
      return sign * law.lattice_table().quantile_from_survival(w);
  }
  return 0.0;
}

/// u-quantile of the waiting-time law.
inline double sample_wait(const WaitingLaw& law, double u) {
  detail::require_unit_open(u, "sample_wait");
  switch (law.kind()) {
    case WaitKind::continuous_power:
      return std::pow(u / ((1.0 - u) * law.gamma_one_minus_beta()), 1.0 / law.beta());
    case WaitKind::exponential: return -std::log1p(-u);
    case WaitKind::discrete_power: return law.discrete_table().quantile_from_survival(1.0 - u);
  }
  return 0.0;
}

/// Amplitudes and moments entering the transform asymptotics. Exactly one
/// member of each pair is set.
struct TailConstants {
  std::optional<double> jump_b;       // power tail, alpha < 2
  std::optional<double> jump_sigma2;  // second moment, alpha = 2
  std::optional<double> wait_c;       // power tail, beta < 1
  std::optional<double> wait_rho;     // mean, beta = 1
};

inline TailConstants tail_constants(const JumpLaw& jump, const WaitingLaw& wait) {
  TailConstants tc;
  switch (jump.kind()) {
    case JumpKind::continuous_power: tc.jump_b = jump.alpha() / 2.0; break;
    case JumpKind::gaussian: tc.jump_sigma2 = 1.0; break;
    case JumpKind::lattice_power: tc.jump_b = jump.lattice_amplitude(); break;
  }
  switch (wait.kind()) {
    case WaitKind::continuous_power: tc.wait_c = 1.0 / std::abs(gamma(-wait.beta())); break;
    case WaitKind::exponential: tc.wait_rho = 1.0; break;
    case WaitKind::discrete_power: tc.wait_c = wait.discrete_amplitude(); break;
  }
  return tc;
}

/// Parses `cpow:a`, `gauss` or `lpow:a`.
inline JumpLaw parse_jump_law(std::string_view token) {
  if (token == "gauss") return JumpLaw::gaussian();
  const auto colon = token.find(':');
  if (colon != std::string_view::npos) {
    const auto head = token.substr(0, colon);
    const double alpha = detail::parse_number(token.substr(colon + 1), token);
    try {
      if (head == "cpow") return JumpLaw::continuous_power(alpha);
      if (head == "lpow") return JumpLaw::lattice_power(alpha);
    } catch (const domain_error& e) {
      throw usage_error("invalid law token '" + std::string(token) + "': " + e.what());
    }
  }
  throw usage_error("invalid law token '" + std::string(token) + "'");
}

/// Parses `cpow:b`, `exp` or `dpow:b`.
inline WaitingLaw parse_waiting_law(std::string_view token) {
  if (token == "exp") return WaitingLaw::exponential();
  const auto colon = token.find(':');
  if (colon != std::string_view::npos) {
    const auto head = token.substr(0, colon);
    const double beta = detail::parse_number(token.substr(colon + 1), token);
    try {
      if (head == "cpow") return WaitingLaw::continuous_power(beta);
      if (head == "dpow") return WaitingLaw::discrete_power(beta);
    } catch (const domain_error& e) {
      throw usage_error("invalid law token '" + std::string(token) + "': " + e.what());
    }
  }
  throw usage_error("invalid law token '" + std::string(token) + "'");
}

}  // namespace ctrw
