#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/kernels.hpp"
#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Discretisation and randomness of a batch of Heisenberg Brownian paths.
///
/// The drivers (b, w) are sampled on an equally spaced grid of `steps`
/// intervals. Each grid increment is the sum of `refine` independent
/// sub-increments; draw number k*refine + r of path j depends only on
/// (seed, j, k*refine + r). Two configurations with equal steps*refine
/// therefore see the same Brownian path, which is how step-refinement
/// studies use common random numbers.
struct PathConfig {
  std::size_t n = 1;
  std::size_t n_paths = 1;
  std::size_t steps = 4096;
  double horizon = 1.0;
  SeedPolicy seed{};
  std::size_t refine = 1;
  bool negate = false;  // drive with (-b, -w): the mirrored process y_t = A x_t

  void validate() const;
  double dt() const { return horizon / static_cast<double>(steps); }

  /// Same Brownian path, `factor` times fewer grid steps.
  PathConfig coarsened(std::size_t factor) const;

  bool operator==(const PathConfig&) const = default;
};

/// State of up to kernels::kLanes paths at one grid time, component-major
/// (b[i*lanes + l]). `levy` is the Levy area z_t; the group point is
/// x_t = (b_t, w_t, levy/2). db/dw are the increments over the next interval
/// and are null at the final time.
struct BatchView {
  std::size_t n = 1;
  std::size_t lanes = 0;
  std::size_t first_path = 0;
  std::size_t step = 0;
  double time = 0.0;
  double dt = 0.0;
  const double* b = nullptr;
  const double* w = nullptr;
  const double* levy = nullptr;
  const double* db = nullptr;
  const double* dw = nullptr;

  /// Writes x_t (or y_t = A x_t when mirrored) variable-major into out,
  /// which must hold (2n+1)*lanes doubles; stride is `lanes`.
  void point_coords(bool mirrored, double* out) const;
};

namespace detail {
void generate_increments(const PathConfig& cfg, std::size_t first_path, std::size_t lanes,
                         std::size_t step, double* db, double* dw);
inline constexpr std::size_t kBatchesPerChunk = 4;
}  // namespace detail

/// Streams every path of `cfg` through a per-batch observer.
///
/// `make(first_path, lanes)` builds an observer exposing
///   void step(const BatchView&)    -- before each update (left point)
///   void finish(const BatchView&)  -- at the final grid time
/// Batches run in parallel; observers must only write per-path outputs.
template <class MakeObserver>
void walk_paths(const PathConfig& cfg, MakeObserver&& make) {
  cfg.validate();
  constexpr std::size_t L = kernels::kLanes;
  const std::size_t n = cfg.n;
  const std::size_t batches = (cfg.n_paths + L - 1) / L;
  const auto& kern = kernels::active();
  parallel_for(batches, detail::kBatchesPerChunk, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> b(n * L), w(n * L), z(L), db(n * L), dw(n * L);
    for (std::size_t batch = b0; batch < b1; ++batch) {
      const std::size_t first = batch * L;
      const std::size_t lanes = std::min(L, cfg.n_paths - first);
      std::fill(b.begin(), b.end(), 0.0);
      std::fill(w.begin(), w.end(), 0.0);
      std::fill(z.begin(), z.end(), 0.0);
      auto observer = make(first, lanes);
      BatchView view{n, lanes, first, 0, 0.0, cfg.dt(), b.data(), w.data(), z.data(), db.data(), dw.data()};
      for (std::size_t k = 0; k < cfg.steps; ++k) {
        detail::generate_increments(cfg, first, lanes, k, db.data(), dw.data());
        view.step = k;
        view.time = static_cast<double>(k) * cfg.dt();
        observer.step(view);
        kern.levy_step(n, lanes, b.data(), w.data(), z.data(), db.data(), dw.data());
      }
      view.step = cfg.steps;
      view.time = cfg.horizon;
      view.db = nullptr;
      view.dw = nullptr;
      observer.finish(view);
    }
  });
}

/// Materialised paths at every `record_stride`-th grid time.
///
/// Stored per path and record as (b_1..b_n, w_1..w_n, levy_z). With stride 1
/// every grid point is kept; larger strides keep memory bounded for long
/// runs while the simulation itself still uses the full grid.
class PathBundle {
 public:
  PathBundle(PathConfig cfg, std::size_t record_stride);

  const PathConfig& config() const noexcept { return cfg_; }
  std::size_t n() const noexcept { return cfg_.n; }
  std::size_t n_paths() const noexcept { return cfg_.n_paths; }
  std::size_t steps() const noexcept { return cfg_.steps; }
  double horizon() const noexcept { return cfg_.horizon; }
  double dt() const noexcept { return cfg_.dt(); }
  std::size_t record_stride() const noexcept { return stride_; }
  std::size_t records() const noexcept { return records_; }
  std::size_t width() const noexcept { return 2 * cfg_.n + 1; }

  bool is_recorded(std::size_t step) const noexcept { return step <= cfg_.steps && step % stride_ == 0; }
  /// Grid index of time t; UsageError unless t is a recorded grid time.
  std::size_t grid_index(double t) const;
  double time_of(std::size_t step) const { return static_cast<double>(step) * cfg_.dt(); }

  /// (b.., w.., levy_z) of a path at a recorded step.
  std::span<const double> record(std::size_t path, std::size_t step) const;
  double b(std::size_t path, std::size_t step, std::size_t i) const { return record(path, step)[i]; }
  double w(std::size_t path, std::size_t step, std::size_t i) const { return record(path, step)[cfg_.n + i]; }
  double levy_z(std::size_t path, std::size_t step) const { return record(path, step)[2 * cfg_.n]; }

  /// x_t (or y_t) of every path, variable-major with stride n_paths.
  std::vector<double> points_soa(std::size_t step, bool mirrored) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> mutable_data() noexcept { return data_; }

  bool operator==(const PathBundle&) const = default;

 private:
  PathConfig cfg_;
  std::size_t stride_;
  std::size_t records_;
  std::vector<double> data_;
};

PathBundle simulate(const PathConfig& cfg, std::size_t record_stride = 1);
PathBundle simulate(std::size_t n, std::size_t n_paths, std::size_t steps, double horizon, SeedPolicy seed);

/// The bundle driven by (-b, -w), with the Levy area recomputed from the
/// negated increments.
PathBundle mirror_paths(const PathBundle& paths);

/// x_t = (b, w, z/2), or y_t = (-b, -w, z/2) when mirrored.
GroupPoint point_at(const PathBundle& paths, std::size_t path, std::size_t step, bool mirrored = false);

/// Header (magic, n, T, steps, n_paths, seed, stride, refine, negate) then
/// row-major float64 records.
void write_binary(const PathBundle& paths, const std::string& file);
PathBundle read_binary(const std::string& file);

/// One row per path: path, b_1..b_n, w_1..w_n, z (the group coordinate levy/2) at the horizon.
void write_terminal_csv(const PathBundle& paths, const std::string& file);

}  // namespace heis
