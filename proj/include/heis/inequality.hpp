#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heis/paths.hpp"
#include "heis/polynomial.hpp"
#include "heis/smooth_function.hpp"
#include "heis/stats.hpp"

namespace heis {

enum class CheckMode { Inequality, Equality };

/// Both sides of a functional inequality at the bundle horizon.
///
/// Inequality mode passes iff lhs <= rhs + k * (se_lhs + se_rhs); equality
/// mode iff |lhs - rhs| <= k * (se_lhs + se_rhs) (plus tol.exact in both).
struct InequalityReport {
  std::string kind;      // "poincare" or "logsobolev"
  std::string function;
  std::size_t n = 1;
  std::size_t n_paths = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  CheckMode mode = CheckMode::Inequality;
  double constant = 1.0;  // multiplies the Dirichlet form
  MCEstimate lhs;
  MCEstimate rhs;
  double slack = 0.0;            // rhs - lhs
  double slack_std_error = 0.0;  // se_lhs + se_rhs
  bool pass = false;
  bool outside_hypotheses = false;  // f violates the bounded-derivative assumptions
};

/// Sample mean of |horizontal_gradient(f, x_T)|^2.
MCEstimate dirichlet_rhs(const SmoothFunction& f, const PathBundle& paths);

/// lhs = Var f(x_T), rhs = dirichlet_rhs.
InequalityReport poincare_check(const SmoothFunction& f, const PathBundle& paths,
                                CheckMode mode = CheckMode::Inequality, const Tolerance& tol = {});

inline constexpr std::size_t kBootstrapReplicates = 1000;

/// Plug-in E[g log g] - E[g] log E[g]. std_error from the influence function
/// g log g - (log E[g] + 1) g; interval is the 99% percentile bootstrap
/// (widened if needed so that it contains the point estimate).
MCEstimate entropy_estimate(std::span<const double> g, const SeedPolicy& bootstrap_seed,
                            std::size_t replicates = kBootstrapReplicates);

/// lhs = entropy of f^2(x_T), rhs = constant * dirichlet_rhs(f).
InequalityReport logsobolev_check(const SmoothFunction& f, const PathBundle& paths,
                                  CheckMode mode = CheckMode::Inequality, double constant = 2.0,
                                  const Tolerance& tol = {});

/// Poincare on x_1, y_1 and log-Sobolev on exp(lambda x_1 / 2), lambda in {0.5, 1},
/// all in equality mode.
std::vector<InequalityReport> equality_suite(const PathBundle& paths, const Tolerance& tol = {});

/// Exact Var f(x_T) and Dirichlet form of a polynomial from the heat semigroup.
struct ExactPoincare {
  double variance = 0.0;
  double dirichlet = 0.0;
};
ExactPoincare exact_poincare(const HPolynomial& f, double horizon);

/// Which fields build the Girsanov integrand u. RightFields is the form used
/// by the change-of-measure argument (hat fields applied to f o A); LeftFields
/// is the Ito integrand of the martingale l_t. They agree when f does not
/// depend on z.
enum class GirsanovIntegrand { RightFields, LeftFields };

struct GirsanovConfig {
  PathConfig paths;                 // fine grid; the coarse run halves the steps
  std::size_t windows = 4;          // aggregation windows for the Brownian checks
  double refinement_threshold = 1.4;
  GirsanovIntegrand integrand = GirsanovIntegrand::RightFields;
  Tolerance tol{};
};

/// One streamed pass over the paths.
struct GirsanovRun {
  std::size_t steps = 0;
  double residual_rms = 0.0;         // RMS of log l_T + sum u.dW + 1/2 sum |u|^2 dt
  double max_terminal_error = 0.0;   // max |l_T - f(x_T)|
  double min_l = 0.0;
  MCEstimate weight_mean;            // E[l_T]
  MCEstimate entropy;                // E[l_T log l_T]
  MCEstimate half_energy;            // 1/2 E_nu int |u|^2 ds = 1/2 E[l_T sum |u|^2 dt]
  MCEstimate lsi_bound;              // 1/2 E[|grad_H f|^2 / f](x_T)
  std::vector<Check> brownian;       // nu-mean and nu-second moment of windowed increments
};

struct GirsanovReport {
  std::string function;
  double normalization = 1.0;        // Q_T f(0) before normalising
  GirsanovRun fine;
  GirsanovRun coarse;
  double refinement_ratio = 0.0;
  std::vector<Check> checks;         // refinement, weights, terminal, Brownian, entropy
  Check lsi_bound;                   // reported, not part of the verdict
  bool pass = false;
};

/// Girsanov mechanics for a positive polynomial f, normalised exactly so that
/// E f(x_T) = 1. DomainError (with the path index) if some l_t <= 0.
GirsanovReport girsanov_diagnostics(const HPolynomial& f, const GirsanovConfig& cfg);

/// A single pass, exposed for tests.
GirsanovRun girsanov_run(const HPolynomial& normalized_f, const PathConfig& cfg, std::size_t windows,
                         GirsanovIntegrand integrand, const Tolerance& tol = {});

}  // namespace heis
