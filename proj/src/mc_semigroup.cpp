#include "heis/mc_semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "heis/error.hpp"
#include "heis/parallel.hpp"

namespace heis {
namespace {

constexpr std::size_t kPathGrain = 1024;

template <class Fn>
std::vector<double> per_path(std::size_t n_paths, Fn&& fn) {
  std::vector<double> out(n_paths);
  parallel_for(n_paths, kPathGrain, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) out[j] = fn(j);
  });
  return out;
}

void require_dim(std::size_t got, const PathBundle& paths) {
  if (got != paths.n()) throw UsageError("dimension mismatch between function and paths");
}

std::vector<double> eval_at_step(const HPolynomial& poly, const PathBundle& paths, std::size_t step) {
  const auto coords = paths.points_soa(step, false);
  std::vector<double> out(paths.n_paths());
  poly_eval_batch(poly, coords.data(), paths.n_paths(), paths.n_paths(), out.data());
  return out;
}

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

}  // namespace

MCEstimate q_estimate(const HPolynomial& f, const GroupPoint& p, double t, const PathBundle& paths) {
  require_dim(f.dim(), paths);
  require_dim(p.dim(), paths);
  const std::size_t step = paths.grid_index(t);
  const auto values = eval_at_step(poly_left_translate(f, p), paths, step);
  return mean_estimate(values);
}

MCEstimate q_estimate(const SmoothFunction& f, const GroupPoint& p, double t, const PathBundle& paths) {
  require_dim(f.dim(), paths);
  require_dim(p.dim(), paths);
  const std::size_t step = paths.grid_index(t);
  const auto values = per_path(paths.n_paths(), [&](std::size_t j) {
    return f(star(p, point_at(paths, j, step)));
  });
  return mean_estimate(values);
}

CoupledMirrorReport coupled_mirror_check(const SmoothFunction& f, const GroupPoint& p, double t,
                                         const PathBundle& paths, const PathBundle& mirrored,
                                         double tolerance) {
  require_dim(f.dim(), paths);
  require_dim(p.dim(), paths);
  PathConfig expect = paths.config();
  expect.negate = !expect.negate;
  if (!(mirrored.config() == expect) || mirrored.record_stride() != paths.record_stride()) {
    throw UsageError("mirrored bundle does not share the randomness of the original paths");
  }
  const std::size_t step = paths.grid_index(t);
  const GroupPoint ap = mirror(p);
  const auto a = per_path(paths.n_paths(), [&](std::size_t j) { return f(star(ap, point_at(paths, j, step))); });
  const auto b = per_path(paths.n_paths(), [&](std::size_t j) {
    return f(mirror(star(p, point_at(mirrored, j, step))));
  });
  CoupledMirrorReport r;
  r.original = mean_estimate(a);
  r.mirrored = mean_estimate(b);
  for (std::size_t j = 0; j < a.size(); ++j) r.max_difference = std::max(r.max_difference, std::abs(a[j] - b[j]));
  r.pass = r.max_difference <= tolerance;
  return r;
}

CoupledMirrorReport coupled_mirror_check(const SmoothFunction& f, const GroupPoint& p, double t,
                                         const PathBundle& paths) {
  return coupled_mirror_check(f, p, t, paths, mirror_paths(paths));
}

std::string probe_name(Probe probe) {
  switch (probe) {
    case Probe::One: return "1";
    case Probe::B: return "b";
    case Probe::W: return "w";
    case Probe::BW: return "b*w";
  }
  return "?";
}

double probe_value(Probe probe, const PathBundle& paths, std::size_t path, std::size_t step) {
  switch (probe) {
    case Probe::One: return 1.0;
    case Probe::B: return paths.b(path, step, 0);
    case Probe::W: return paths.w(path, step, 0);
    case Probe::BW: return paths.b(path, step, 0) * paths.w(path, step, 0);
  }
  return 0.0;
}

TowerReport tower_test(const HPolynomial& f, double t, double horizon, std::span<const Probe> probes,
                       const PathBundle& paths, const Tolerance& tol) {
  require_dim(f.dim(), paths);
  if (t > horizon) throw UsageError("tower test needs t <= T");
  const std::size_t st = paths.grid_index(t);
  const std::size_t sT = paths.grid_index(horizon);
  const auto terminal = eval_at_step(f, paths, sT);
  const auto early = eval_at_step(heat_semigroup(f, horizon - t), paths, st);

  TowerReport r{t, horizon, {}, false};
  for (Probe probe : probes) {
    const auto prod = per_path(paths.n_paths(), [&](std::size_t j) {
      return (terminal[j] - early[j]) * probe_value(probe, paths, j, st);
    });
    const auto e = mean_estimate(prod);
    r.checks.push_back(two_sided("tower probe " + probe_name(probe) + " t=" + time_label(t) + " T=" +
                                     time_label(horizon),
                                 e.value, 0.0, e.std_error, tol));
  }
  r.pass = all_pass(r.checks);
  return r;
}

MartingaleReport martingale_test(const HPolynomial& f, const FieldId& field, std::span<const double> times,
                                 const PathBundle& paths, const Tolerance& tol) {
  require_dim(f.dim(), paths);
  validate_field(field, f.dim());
  if (times.empty()) throw UsageError("martingale test needs at least one time");
  const double T = paths.horizon();
  std::vector<std::size_t> steps;
  for (double t : times) {
    if (t > T) throw UsageError("martingale time beyond the path horizon");
    steps.push_back(paths.grid_index(t));
  }
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (steps[k] <= steps[k - 1]) throw UsageError("martingale times must be increasing");
  }

  MartingaleReport r;
  r.field = field;
  r.times.assign(times.begin(), times.end());
  std::vector<std::vector<double>> m;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto g = poly_apply_field(field, heat_semigroup(f, T - times[k]));
    m.push_back(eval_at_step(g, paths, steps[k]));
    r.means.push_back(mean_estimate(m.back()));
    const auto sq = per_path(paths.n_paths(), [&](std::size_t j) { return m.back()[j] * m.back()[j]; });
    r.second_moments.push_back(mean_estimate(sq));
  }

  const std::string name = field.name();
  for (std::size_t k = 1; k < steps.size(); ++k) {
    const std::string span = time_label(times[k - 1]) + "->" + time_label(times[k]);
    const auto drift = per_path(paths.n_paths(), [&](std::size_t j) { return m[k][j] - m[0][j]; });
    const auto d = mean_estimate(drift);
    r.mean_checks.push_back(two_sided("mean " + name + " " + time_label(times[0]) + "->" + time_label(times[k]),
                                      d.value, 0.0, d.std_error, tol));
    for (Probe probe : kAllProbes) {
      const auto prod = per_path(paths.n_paths(), [&](std::size_t j) {
        return (m[k][j] - m[k - 1][j]) * probe_value(probe, paths, j, steps[k - 1]);
      });
      const auto e = mean_estimate(prod);
      r.orthogonality.push_back(
          two_sided("orthogonality " + name + " probe " + probe_name(probe) + " " + span, e.value, 0.0, e.std_error, tol));
    }
    const auto inc = per_path(paths.n_paths(), [&](std::size_t j) {
      return m[k][j] * m[k][j] - m[k - 1][j] * m[k - 1][j];
    });
    const auto e = mean_estimate(inc);
    r.monotonicity.push_back(at_least("second moment " + name + " " + span, e.value, 0.0, e.std_error, tol));
  }
  r.pass = all_pass(r.mean_checks) && all_pass(r.orthogonality) && all_pass(r.monotonicity);
  return r;
}

MartingaleReport martingale_test(const SmoothFunction& f, const FieldId&, std::span<const double>,
                                 const PathBundle&, const Tolerance&) {
  throw CapabilityError("martingale test of '" + f.name() +
                        "' needs nested Monte Carlo for Q_{T-t}, which is not available; use a polynomial");
}

namespace {

/// Shared, read-only compiled integrands of the representation sum.
struct RepresentationPlan {
  std::size_t n = 1;
  double horizon = 1.0;
  std::vector<SeriesPlan> dx;  // X_i Q_s f
  std::vector<SeriesPlan> dy;  // Y_i Q_s f
  kernels::PolyPlan terminal;
  double start = 0.0;          // Q_T f(0)
};

struct RepresentationObserver {
  const RepresentationPlan& plan;
  std::vector<double>& residual;
  std::size_t first;
  std::size_t lanes;
  std::vector<double> sum, coords, val, scratch;

  RepresentationObserver(const RepresentationPlan& p, std::vector<double>& r, std::size_t f, std::size_t l)
      : plan(p), residual(r), first(f), lanes(l), sum(l, 0.0), coords((2 * p.n + 1) * l), val(l), scratch(l) {}

  void step(const BatchView& v) {
    const auto& kern = kernels::active();
    v.point_coords(false, coords.data());
    const double s = plan.horizon - v.time;
    for (std::size_t i = 0; i < plan.n; ++i) {
      plan.dx[i].eval(s, coords.data(), lanes, lanes, val.data(), scratch.data());
      kern.accumulate_products(lanes, sum.data(), val.data(), v.db + i * lanes);
      plan.dy[i].eval(s, coords.data(), lanes, lanes, val.data(), scratch.data());
      kern.accumulate_products(lanes, sum.data(), val.data(), v.dw + i * lanes);
    }
  }

  void finish(const BatchView& v) {
    v.point_coords(false, coords.data());
    kernels::active().poly_eval(plan.terminal, coords.data(), lanes, lanes, val.data());
    for (std::size_t l = 0; l < lanes; ++l) residual[first + l] = val[l] - plan.start - sum[l];
  }
};

std::vector<HPolynomial> field_terms(const FieldId& field, const SemigroupSeries& series) {
  std::vector<HPolynomial> out;
  for (const auto& t : series.terms()) out.push_back(poly_apply_field(field, t));
  return out;
}

}  // namespace

RepresentationReport representation_check(const HPolynomial& f, const PathConfig& cfg) {
  cfg.validate();
  if (f.dim() != cfg.n) throw UsageError("dimension mismatch between function and paths");
  const SemigroupSeries series(f);
  RepresentationPlan plan;
  plan.n = cfg.n;
  plan.horizon = cfg.horizon;
  for (std::size_t i = 1; i <= cfg.n; ++i) {
    plan.dx.emplace_back(field_terms(FieldId::X(i), series));
    plan.dy.emplace_back(field_terms(FieldId::Y(i), series));
  }
  plan.terminal = f.make_plan();
  plan.start = poly_eval(series.at(cfg.horizon), GroupPoint(cfg.n));

  std::vector<double> residual(cfg.n_paths);
  walk_paths(cfg, [&](std::size_t first, std::size_t lanes) {
    return RepresentationObserver(plan, residual, first, lanes);
  });

  RepresentationReport r;
  r.steps = cfg.steps;
  r.rms = root_mean_square(residual);
  r.mean_residual = mean_estimate(residual);
  for (double x : residual) r.max_abs = std::max(r.max_abs, std::abs(x));
  return r;
}

RepresentationReport representation_check(const HPolynomial& f, const PathBundle& paths) {
  return representation_check(f, paths.config());
}

double refinement_ratio(double coarse, double fine) {
  if (fine == 0.0) return std::numeric_limits<double>::infinity();
  return coarse / fine;
}

RefinementReport representation_refinement(const HPolynomial& f, const PathConfig& fine, double threshold) {
  RefinementReport r;
  r.fine = representation_check(f, fine);
  r.coarse = representation_check(f, fine.coarsened(2));
  r.ratio = refinement_ratio(r.coarse.rms, r.fine.rms);
  r.threshold = threshold;
  r.pass = r.ratio >= threshold;
  return r;
}

}  // namespace heis
