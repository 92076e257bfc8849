#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heis {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Point estimate of an expectation with its standard error.
///
/// `std_error` is the sample standard deviation of the (possibly linearised)
/// summand divided by sqrt(n_samples). Named to avoid the C `stderr` macro.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::optional<Interval> interval;  // 99% bootstrap, when computed
};

/// Mean of the samples (pairwise summation) and sd / sqrt(n).
MCEstimate mean_estimate(std::span<const double> samples);

/// Unbiased sample variance; std_error from the squared deviations.
MCEstimate variance_estimate(std::span<const double> samples);

/// Statistical pass rules. `k_sigma` multiplies standard errors; `exact`
/// absorbs rounding when an estimate is deterministic (std_error == 0).
struct Tolerance {
  double k_sigma = 3.0;
  double exact = 1e-12;

  Tolerance scaled(double factor) const { return {k_sigma * factor, exact * factor}; }
};

/// One assertion inside a report: |value - target| <= k * std_error + exact,
/// or the one-sided form value >= target - (k * std_error + exact).
struct Check {
  std::string label;
  double value = 0.0;
  double target = 0.0;
  double std_error = 0.0;
  bool pass = false;
};

Check two_sided(std::string label, double value, double target, double std_error, const Tolerance& tol);
Check at_least(std::string label, double value, double target, double std_error, const Tolerance& tol);

bool all_pass(const std::vector<Check>& checks);

/// The combined standard error of two estimates: se_a + se_b (the conservative
/// sum, as used by the inequality verdict).
inline double combined_std_error(const MCEstimate& a, const MCEstimate& b) {
  return a.std_error + b.std_error;
}

double root_mean_square(std::span<const double> values);

}  // namespace heis
