#pragma once

// Statistics linking Monte Carlo ensembles to their analytic targets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ctrw/error.hpp"

namespace ctrw {

/// Non-empty sample, sorted once at construction.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw domain_error("SampleSet: no samples");
    for (double v : values_) {
      if (std::isnan(v)) throw domain_error("SampleSet: NaN sample");
    }
    std::sort(values_.begin(), values_.end());
  }
  explicit SampleSet(std::span<const double> values)
      : SampleSet(std::vector<double>(values.begin(), values.end())) {}

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Fraction of samples <= x.
inline double empirical_cdf(const SampleSet& s, double x) {
  const auto& v = s.values();
  const auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

struct KsResult {
  double statistic = 0.0;
  std::size_t n = 0;
  double threshold_1pct = 0.0;  // asymptotic 1% critical value 1.628 / sqrt(n)

  bool pass() const { return statistic < threshold_1pct; }
};

/// sup |F_n - F| evaluated through both one-sided gaps at the order statistics.
template <class Cdf>
KsResult ks_statistic(const SampleSet& s, Cdf&& cdf) {
  const auto& v = s.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    const double rank = static_cast<double>(i + 1);
    d = std::max({d, rank / n - f, f - (rank - 1.0) / n});
  }
  return {std::clamp(d, 0.0, 1.0), v.size(), 1.628 / std::sqrt(n)};
}

/// Tail index from the k largest magnitudes:
/// k / sum_{i=1..k} log(|x|_(n-i+1) / |x|_(n-k)). k = 0 selects floor(sqrt(n)).
inline double hill_estimator(const SampleSet& s, std::size_t k = 0) {
  std::vector<double> mags;
  mags.reserve(s.size());
  for (double v : s.values()) {
    if (v != 0.0) mags.push_back(std::abs(v));
  }
  if (k == 0) k = static_cast<std::size_t>(std::sqrt(static_cast<double>(s.size())));
  if (k < 2 || k >= s.size()) throw domain_error("hill_estimator: need 2 <= k < n");
  if (mags.size() < k + 1) throw domain_error("hill_estimator: fewer than k + 1 non-zero magnitudes");
  // the k + 1 largest magnitudes, threshold first
  const auto cut = mags.end() - static_cast<std::ptrdiff_t>(k + 1);
  std::nth_element(mags.begin(), cut, mags.end());
  const double threshold = *cut;
  double sum = 0.0;
  for (auto it = cut + 1; it != mags.end(); ++it) sum += std::log(*it / threshold);
  if (!(sum > 0.0)) throw domain_error("hill_estimator: degenerate sample (zero log spacings)");
  return static_cast<double>(k) / sum;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // divisor n - 1
};

inline Moments sample_moments(const SampleSet& s) {
  const auto& v = s.values();
  if (v.size() < 2) throw domain_error("sample_moments: need at least two samples");
  // two-pass for accuracy
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, sq / static_cast<double>(v.size() - 1)};
}

}  // namespace ctrw
