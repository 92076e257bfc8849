#include "heis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "heis/error.hpp"
#include "heis/parallel.hpp"

namespace heis {

MCEstimate mean_estimate(std::span<const double> samples) {
  if (samples.empty()) throw UsageError("estimate needs at least one sample");
  const double n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  MCEstimate e;
  e.value = mean;
  e.n_samples = samples.size();
  if (samples.size() > 1) {
    std::vector<double> dev(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const double d = samples[j] - mean;
      dev[j] = d * d;
    }
    const double var = pairwise_sum(dev) / (n - 1.0);
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

MCEstimate variance_estimate(std::span<const double> samples) {
  if (samples.size() < 2) throw UsageError("variance needs at least two samples");
  const double n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  std::vector<double> sq(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double d = samples[j] - mean;
    sq[j] = d * d;
  }
  MCEstimate e = mean_estimate(sq);
  e.value *= n / (n - 1.0);
  e.std_error *= n / (n - 1.0);
  return e;
}

Check two_sided(std::string label, double value, double target, double std_error, const Tolerance& tol) {
  const bool pass = std::abs(value - target) <= tol.k_sigma * std_error + tol.exact;
  return {std::move(label), value, target, std_error, pass};
}

Check at_least(std::string label, double value, double target, double std_error, const Tolerance& tol) {
  const bool pass = value >= target - (tol.k_sigma * std_error + tol.exact);
  return {std::move(label), value, target, std_error, pass};
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double root_mean_square(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sq(values.begin(), values.end());
  for (double& v : sq) v *= v;
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size()));
}

}  // namespace heis
