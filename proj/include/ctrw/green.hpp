#pragma once

// Fundamental solution u(x, t) of the space-time fractional diffusion
// equation, from its Fourier image E_beta(-|kappa|^alpha t^beta):
//   u(x, t) = (1/pi) int_0^inf cos(kappa x) E_beta(-kappa^alpha t^beta) dkappa
//   F(x, t) = 1/2 + (1/pi) int_0^inf sin(kappa x) / kappa E_beta(-kappa^alpha t^beta) dkappa
// Both are evaluated in y = kappa |x| by half-period summation with Euler
// acceleration, which tolerates the algebraic decay of E_beta when beta < 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <thread>
#include <utility>
#include <vector>

#include "ctrw/error.hpp"
#include "ctrw/quadrature.hpp"
#include "ctrw/specfun.hpp"

namespace ctrw {

/// E_beta(-|kappa|^alpha t^beta).
inline double green_fourier(StabilityAlpha alpha, OrderBeta beta, double kappa, double t) {
  if (!(t > 0.0)) throw domain_error("green_fourier: t must be positive");
  if (kappa == 0.0) return 1.0;
  // log form keeps huge kappa from overflowing to inf * 0
  const double z = std::exp(alpha.value() * std::log(std::abs(kappa)) + beta.value() * std::log(t));
  return mittag_leffler(beta, -z);
}

namespace detail {

inline constexpr double kGreenRelTol = 1e-10;
inline constexpr double kGreenAbsTol = 1e-13;

// kappa at which kappa^alpha t^beta = 1
inline double green_knee(StabilityAlpha alpha, OrderBeta beta, double t) {
  return std::pow(t, -beta.value() / alpha.value());
}

// u(0, t): direct quadrature up to z = kappa^alpha t^beta = 1e3, then the
// large-argument expansion of E_beta integrated term by term.
inline double green_pdf_origin(StabilityAlpha alpha, OrderBeta beta, double t) {
  constexpr double pi = std::numbers::pi;
  const double a = alpha.value();
  const double b = beta.value();
  if (!beta.is_exponential() && a <= 1.0) {
    throw domain_error("green_pdf: u(0, t) is infinite for alpha <= 1 and beta < 1");
  }
  const double knee = green_knee(alpha, beta, t);
  const double z_cut = beta.is_exponential() ? 60.0 : 1e3;
  const double k_cut = knee * std::pow(z_cut, 1.0 / a);
  const double breaks[] = {0.25 * knee, knee, 4.0 * knee, std::pow(10.0, 1.0 / a) * knee};
  auto f = [&](double k) { return green_fourier(alpha, beta, k, t); };
  double sum = integrate_split(f, 0.0, k_cut, breaks, {.abs_tol = 0.0, .rel_tol = 1e-12}).value;
  if (!beta.is_exponential()) {
    // int_K^inf (kappa^a t^b)^-j dkappa = K z_cut^-j / (j a - 1)
    double previous = std::numeric_limits<double>::infinity();
    for (int j = 1; j < 60; ++j) {
      const double jb = j * b;
      if (jb == std::floor(jb)) continue;  // 1/Gamma(1 - j b) = 0
      const double term = std::tgamma(jb) * std::sin(pi * jb) / pi * std::pow(z_cut, -j) * k_cut /
                          (j * a - 1.0) * ((j % 2 == 1) ? 1.0 : -1.0);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum) || std::abs(term) > previous) break;
      previous = std::abs(term);
    }
  }
  return sum / pi;
}

template <class Amplitude>
double green_oscillatory(Amplitude&& g, Trig kind, double y_knee) {
  OscillatoryOptions opt;
  opt.abs_tol = kGreenAbsTol;
  opt.rel_tol = kGreenRelTol;
  opt.breakpoints = {0.25 * y_knee, y_knee, 4.0 * y_knee};
  return oscillatory_integral(g, kind, opt).value;
}

}  // namespace detail

/// u(x, t). At x = 0 the density is finite only for alpha > 1 or beta = 1.
inline double green_pdf(StabilityAlpha alpha, OrderBeta beta, double x, double t) {
  constexpr double pi = std::numbers::pi;
  if (!(t > 0.0)) throw domain_error("green_pdf: t must be positive");
  x = std::abs(x);
  if (x == 0.0) return detail::green_pdf_origin(alpha, beta, t);
  const double y_knee = x * detail::green_knee(alpha, beta, t);
  auto amplitude = [&](double y) { return green_fourier(alpha, beta, y / x, t); };
  return detail::green_oscillatory(amplitude, Trig::cosine, y_knee) / (pi * x);
}

/// F(x, t) = int_{-inf}^x u(x', t) dx'.
inline double green_cdf(StabilityAlpha alpha, OrderBeta beta, double x, double t) {
  constexpr double pi = std::numbers::pi;
  if (!(t > 0.0)) throw domain_error("green_cdf: t must be positive");
  if (x == 0.0) return 0.5;
  const double ax = std::abs(x);
  const double y_knee = ax * detail::green_knee(alpha, beta, t);
  auto amplitude = [&](double y) { return green_fourier(alpha, beta, y / ax, t) / y; };
  const double half = detail::green_oscillatory(amplitude, Trig::sine, y_knee) / pi;
  return x > 0.0 ? 0.5 + half : 0.5 - half;
}

/// 2 t^beta / Gamma(1 + beta), the variance for alpha = 2.
inline double variance_alpha2(OrderBeta beta, double t) {
  if (!(t > 0.0)) throw domain_error("variance_alpha2: t must be positive");
  return 2.0 * std::pow(t, beta.value()) / gamma(1.0 + beta.value());
}

/// P(X > x) for large x from the algebraic expansion
///   (1/pi) sum_k (-1)^(k+1) t^(k beta) / Gamma(1 + k beta) Gamma(k alpha) sin(pi k alpha / 2) x^(-k alpha),
/// zero for alpha = 2 where the tail is faster than any power.
inline double green_tail(StabilityAlpha alpha, OrderBeta beta, double x, double t) {
  constexpr double pi = std::numbers::pi;
  if (alpha.is_gaussian()) return 0.0;
  const double a = alpha.value();
  const double b = beta.value();
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double log_mag = k * b * std::log(t) - std::lgamma(1.0 + k * b) + std::lgamma(k * a) -
                           k * a * std::log(x);
    const double magnitude = std::exp(log_mag) / pi;
    const double term = magnitude * std::sin(0.5 * pi * k * a) * ((k % 2 == 1) ? 1.0 : -1.0);
    if (magnitude > previous) break;
    sum += term;
    if (magnitude < 1e-17 * std::abs(sum)) break;
    previous = magnitude;
  }
  return sum;
}

struct GreenGrid {
  double alpha = 2.0;
  double beta = 1.0;
  double time = 1.0;
  std::vector<double> x;
  std::vector<double> pdf;  // NaN where the density is infinite (x = 0, alpha <= 1, beta < 1)
  std::vector<double> cdf;
  /// P(|X| > x_max) from the tail expansion
  double tail_mass = 0.0;

  /// 2 (F(x_max) - 1/2) + tail mass
  double total_mass() const { return 2.0 * (cdf.back() - 0.5) + tail_mass; }
};

/// Tabulates u and F on the uniform symmetric grid of n_points (odd) points in
/// [-x_max, x_max]. Points are evaluated on `threads` threads (0 = hardware
/// concurrency); every point is independent, so the table does not depend on it.
inline GreenGrid build_grid(StabilityAlpha alpha, OrderBeta beta, double t, double x_max,
                            std::size_t n_points, unsigned threads = 0) {
  if (n_points < 3 || n_points % 2 == 0) {
    throw domain_error("build_grid: n_points must be odd and at least 3");
  }
  if (!(x_max > 0.0)) throw domain_error("build_grid: x_max must be positive");
  if (!(t > 0.0)) throw domain_error("build_grid: t must be positive");
  GreenGrid grid;
  grid.alpha = alpha.value();
  grid.beta = beta.value();
  grid.time = t;
  grid.x.resize(n_points);
  grid.pdf.resize(n_points);
  grid.cdf.resize(n_points);
  const std::size_t half = n_points / 2;
  const double dx = x_max / static_cast<double>(half);
  const bool finite_at_origin = beta.is_exponential() || alpha.value() > 1.0;

  // evaluate x >= 0 and mirror
  auto evaluate = [&](std::size_t i) {
    const double x = i == half ? x_max : dx * static_cast<double>(i);
    const std::size_t right = half + i;
    const std::size_t left = half - i;
    grid.x[right] = x;
    grid.x[left] = i == 0 ? 0.0 : -x;
    const double p = (i == 0 && !finite_at_origin) ? std::numeric_limits<double>::quiet_NaN()
                                                   : green_pdf(alpha, beta, x, t);
    const double c = green_cdf(alpha, beta, x, t);
    grid.pdf[right] = grid.pdf[left] = p;
    grid.cdf[right] = c;
    grid.cdf[left] = 1.0 - c;
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1) {
    for (std::size_t i = 0; i <= half; ++i) evaluate(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) {
      pool.emplace_back([&, k] {
        for (std::size_t i = k; i <= half; i += threads) evaluate(i);
      });
    }
  }
  grid.tail_mass = 2.0 * green_tail(alpha, beta, x_max, t);
  return grid;
}

namespace detail {

// composite Simpson over the x >= 0 half of a uniform grid
template <class F>
double grid_simpson(const GreenGrid& grid, F&& f) {
  const std::size_t half = grid.x.size() / 2;
  if (half % 2 != 0) throw domain_error("grid quadrature: n_points must be 1 mod 4");
  const double dx = grid.x[half + 1] - grid.x[half];
  double sum = f(half) + f(2 * half);
  for (std::size_t i = 1; i < half; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(half + i);
  return sum * dx / 3.0;
}

}  // namespace detail

/// Cosine transform 2 int_0^inf cos(kappa x) u(x) dx of a tabulated solution,
/// taken by parts against the cdf (finite even where u is not) with a
/// first-order tail correction beyond x_max. Requires n_points = 1 mod 4.
inline double grid_cosine_transform(const GreenGrid& grid, double kappa) {
  if (kappa == 0.0) return grid.total_mass();
  const double x_max = grid.x.back();
  const double centred = grid.cdf.back() - 0.5;
  const double by_parts = detail::grid_simpson(grid, [&](std::size_t i) {
    return std::sin(kappa * grid.x[i]) * (grid.cdf[i] - 0.5);
  });
  // int_X^inf cos(kappa x) u dx = -sin(kappa X) u(X) / kappa + O(u' / kappa^2)
  const double tail = -std::sin(kappa * x_max) * grid.pdf.back() / kappa;
  return 2.0 * (std::cos(kappa * x_max) * centred + kappa * by_parts + tail);
}

/// int x^2 u(x) dx over the grid (the tails beyond x_max are dropped).
/// Requires n_points = 1 mod 4 and a finite density.
inline double grid_second_moment(const GreenGrid& grid) {
  return 2.0 * detail::grid_simpson(grid, [&](std::size_t i) {
    return grid.x[i] * grid.x[i] * grid.pdf[i];
  });
}

/// F(x, t) from a GreenGrid: cubic Hermite interpolation with the tabulated
/// density as slope, tail expansion outside the grid. The two cells on each
/// side of the origin, where u may have a cusp or a singularity, use a finer
/// table interpolated linearly in r = |x|^min(alpha, 1).
class GreenCdfInterpolant {
 public:
  static constexpr std::size_t kInnerPoints = 64;

  explicit GreenCdfInterpolant(GreenGrid grid) : grid_(std::move(grid)) {
    const std::size_t half = grid_.x.size() / 2;
    inner_edge_ = half >= 2 ? grid_.x[half + 2] : grid_.x.back();
    power_ = std::min(grid_.alpha, 1.0);
    const StabilityAlpha alpha(grid_.alpha);
    const OrderBeta beta(grid_.beta);
    const double r_edge = std::pow(inner_edge_, power_);
    inner_.resize(kInnerPoints + 1);
    inner_[0] = 0.0;
    for (std::size_t j = 1; j <= kInnerPoints; ++j) {
      const double r = r_edge * static_cast<double>(j) / kInnerPoints;
      inner_[j] = green_cdf(alpha, beta, std::pow(r, 1.0 / power_), grid_.time) - 0.5;
    }
    inner_.back() = grid_.cdf[half + std::min<std::size_t>(half, 2)] - 0.5;
  }

  double operator()(double x) const {
    const auto& xs = grid_.x;
    if (x >= xs.back() || x <= xs.front()) {
      const double tail =
          green_tail(StabilityAlpha(grid_.alpha), OrderBeta(grid_.beta), std::abs(x), grid_.time);
      const double upper = std::clamp(tail, 0.0, 1.0 - grid_.cdf.back());
      return x > 0.0 ? 1.0 - upper : upper;
    }
    if (std::abs(x) < inner_edge_) {
      const double u = std::pow(std::abs(x) / inner_edge_, power_) * kInnerPoints;
      const auto j = std::min(static_cast<std::size_t>(u), kInnerPoints - 1);
      const double s = u - static_cast<double>(j);
      const double g = inner_[j] + s * (inner_[j + 1] - inner_[j]);
      return x > 0.0 ? 0.5 + g : 0.5 - g;
    }
    const auto i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    const double x0 = xs[i];
    const double h = xs[i + 1] - x0;
    const double s = (x - x0) / h;
    const double f0 = grid_.cdf[i];
    const double f1 = grid_.cdf[i + 1];
    const double d0 = grid_.pdf[i];
    const double d1 = grid_.pdf[i + 1];
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double value = (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 +
                         (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * h * d1;
    return std::clamp(value, f0, f1);
  }

  const GreenGrid& grid() const noexcept { return grid_; }

 private:
  GreenGrid grid_;
  double inner_edge_ = 0.0;
  double power_ = 1.0;
  std::vector<double> inner_;  // F - 1/2 on a uniform grid in r
};

}  // namespace ctrw
