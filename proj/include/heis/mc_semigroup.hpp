#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/paths.hpp"
#include "heis/polynomial.hpp"
#include "heis/smooth_function.hpp"
#include "heis/stats.hpp"

namespace heis {

/// Sample mean of f(p * x_t) over the paths. t must be a recorded grid time.
MCEstimate q_estimate(const HPolynomial& f, const GroupPoint& p, double t, const PathBundle& paths);
MCEstimate q_estimate(const SmoothFunction& f, const GroupPoint& p, double t, const PathBundle& paths);

struct CoupledMirrorReport {
  MCEstimate original;   // Q_t f(Ap) on the original paths
  MCEstimate mirrored;   // Q_t(f o A)(p) on the mirrored paths
  double max_difference = 0.0;  // largest pathwise summand difference
  bool pass = false;
};

/// Per-sample comparison of f(Ap * x_t) with (f o A)(p * y_t), y = mirrored paths.
CoupledMirrorReport coupled_mirror_check(const SmoothFunction& f, const GroupPoint& p, double t,
                                         const PathBundle& paths, const PathBundle& mirrored,
                                         double tolerance = 1e-10);
CoupledMirrorReport coupled_mirror_check(const SmoothFunction& f, const GroupPoint& p, double t,
                                         const PathBundle& paths);

/// Functionals of the early path, all built from the first coordinate pair.
enum class Probe { One, B, W, BW };
inline constexpr std::array<Probe, 4> kAllProbes{Probe::One, Probe::B, Probe::W, Probe::BW};
std::string probe_name(Probe probe);
double probe_value(Probe probe, const PathBundle& paths, std::size_t path, std::size_t step);

struct TowerReport {
  double t = 0.0;
  double horizon = 0.0;
  std::vector<Check> checks;  // one per probe: E[(f(y_T) - Q_{T-t} f(y_t)) theta_t] = 0
  bool pass = false;
};

TowerReport tower_test(const HPolynomial& f, double t, double horizon, std::span<const Probe> probes,
                       const PathBundle& paths, const Tolerance& tol = {});

struct MartingaleReport {
  FieldId field{FieldKind::X, 1};
  std::vector<double> times;
  std::vector<MCEstimate> means;           // E[M_t]
  std::vector<MCEstimate> second_moments;  // E[M_t^2]
  std::vector<Check> mean_checks;          // E[M_t - M_{t_0}] = 0
  std::vector<Check> orthogonality;        // E[(M_t - M_s) theta_s] = 0, consecutive s < t
  std::vector<Check> monotonicity;         // E[M_t^2 - M_s^2] >= 0, consecutive s < t
  bool pass = false;
};

/// M_t = (field applied to Q_{T-t} f)(x_t), T the bundle horizon, checked at
/// the given (recorded) times.
MartingaleReport martingale_test(const HPolynomial& f, const FieldId& field, std::span<const double> times,
                                 const PathBundle& paths, const Tolerance& tol = {});
/// Non-polynomial f needs nested Monte Carlo for Q_{T-t}; not available.
MartingaleReport martingale_test(const SmoothFunction& f, const FieldId& field, std::span<const double> times,
                                 const PathBundle& paths, const Tolerance& tol = {});

struct RepresentationReport {
  std::size_t steps = 0;
  double rms = 0.0;
  MCEstimate mean_residual;
  double max_abs = 0.0;
};

/// Per path R = f(x_T) - Q_T f(0) - sum_i sum_k [X_i Q_{T-t_k} f(x_{t_k}) db^i_k
///                                             + Y_i Q_{T-t_k} f(x_{t_k}) dw^i_k],
/// streamed over the full grid of cfg.
RepresentationReport representation_check(const HPolynomial& f, const PathConfig& cfg);
RepresentationReport representation_check(const HPolynomial& f, const PathBundle& paths);

struct RefinementReport {
  RepresentationReport coarse;
  RepresentationReport fine;
  double ratio = 0.0;  // coarse.rms / fine.rms
  double threshold = 1.5;
  bool pass = false;
};

/// Runs `fine` and the same Brownian paths with half the steps.
RefinementReport representation_refinement(const HPolynomial& f, const PathConfig& fine, double threshold = 1.5);

/// Ratio a/b with 0/0 read as a perfect (infinite) refinement.
double refinement_ratio(double coarse, double fine);

}  // namespace heis
