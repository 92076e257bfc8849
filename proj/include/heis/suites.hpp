#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heis/paths.hpp"
#include "heis/report.hpp"

namespace heis {

/// Suite names in execution order; "all" expands to this list.
const std::vector<std::string>& suite_names();

/// Run configuration plus lazily simulated shared path bundles, so suites
/// selected together reuse one simulation.
class SuiteContext {
 public:
  explicit SuiteContext(RunConfig cfg);

  const RunConfig& config() const noexcept { return cfg_; }
  Tolerance tol() const { return cfg_.tolerance(); }
  SeedPolicy seed() const { return SeedPolicy{cfg_.seed}; }

  /// Main bundle: cfg.paths paths of cfg.steps steps, recorded at the
  /// quarter times of the horizon when steps is divisible by 4.
  PathConfig path_config() const;
  const PathBundle& paths();
  /// mirror_paths(paths()).
  const PathBundle& mirrored();
  /// UsageError unless the main bundle records t = 0, T/4, T/2, 3T/4, T.
  void require_quarter_times() const;

 private:
  RunConfig cfg_;
  std::unique_ptr<PathBundle> paths_;
  std::unique_ptr<PathBundle> mirrored_;
};

namespace suites {

/// Pieces of the suites, exposed so each can be timed on its own. Records
/// carry empty suite names and seed 0; run_suite fills both.

/// Automorphism, involution, associativity, inverses and brackets at 100
/// random points, all to 1e-12 relative.
std::vector<Record> group_identities(std::size_t n, const SeedPolicy& seed);
/// Zero-polynomial identities over all monomials of weight <= 8: brackets,
/// [L, Xhat_i] = [L, Yhat_i] = 0, nilpotency, semigroup law, mirror and
/// left-translation commutation.
std::vector<Record> operator_identities(std::size_t n, const SeedPolicy& seed);
/// The mirror intertwining with right fields as stated (checks) and with
/// left fields (diagnostics), as polynomials and pointwise.
std::vector<Record> exact_intertwining(std::size_t n, const SeedPolicy& seed);

/// MC means of all weight <= 4 monomials at T against the exact engine.
std::vector<Record> calibration(const PathBundle& paths, const Tolerance& tol);
/// z^2 bias at 8 and 16 steps on common random numbers; ratio >= 1.5.
std::vector<Record> bias_halving(const RunConfig& cfg);
/// Pathwise Levy-area invariance and the four-moment match against an
/// independently seeded simulation driven by (-b, -w).
std::vector<Record> mirror_law(const PathBundle& paths, const PathBundle& mirrored, const Tolerance& tol);

/// Coupled per-sample mirror check at 20 random points for the registry polynomials.
std::vector<Record> coupled_mirror(const PathBundle& paths, const PathBundle& mirrored, const SeedPolicy& seed);
/// Tower property on the mirrored process for f in {x1, z, z^2, x1y1}.
std::vector<Record> tower(const PathBundle& mirrored, const Tolerance& tol);

/// Martingale checks for f in {z^2, x1y1, x1z} and fields X_1, Y_1 (checks)
/// plus Xhat_1, Yhat_1 (diagnostics).
std::vector<Record> martingales(const PathBundle& paths, const Tolerance& tol);
/// Representation residual for z^2 at representation_steps/2 and representation_steps.
std::vector<Record> representation(const RunConfig& cfg);

std::vector<Record> poincare(const PathBundle& paths, const Tolerance& tol);
std::vector<Record> logsobolev(const PathBundle& paths, const Tolerance& tol);
/// Girsanov mechanics for f = (1 + x1^2)/2.
std::vector<Record> girsanov(const RunConfig& cfg);

}  // namespace suites

/// Records of one named suite, with suite and seed filled in.
std::vector<Record> run_suite(const std::string& name, SuiteContext& ctx);

/// Validates the config and runs every selected suite ("all" expands).
/// The timestamp is left empty.
Report run_report(const RunConfig& cfg);

}  // namespace heis
