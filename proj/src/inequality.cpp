#include "heis/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heis/error.hpp"
#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {
namespace {

constexpr std::size_t kPathGrain = 1024;
constexpr std::uint64_t kBootstrapStream = 0xB0075;

template <class Fn>
std::vector<double> terminal_samples(const PathBundle& paths, Fn&& fn) {
  std::vector<double> out(paths.n_paths());
  const std::size_t last = paths.steps();
  parallel_for(paths.n_paths(), kPathGrain, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) out[j] = fn(point_at(paths, j, last));
  });
  return out;
}

void require_dim(const SmoothFunction& f, const PathBundle& paths) {
  if (f.dim() != paths.n()) throw UsageError("dimension mismatch between function and paths");
}

InequalityReport make_report(std::string kind, const SmoothFunction& f, const PathBundle& paths, CheckMode mode,
                             double constant, MCEstimate lhs, MCEstimate rhs, const Tolerance& tol) {
  InequalityReport r;
  r.kind = std::move(kind);
  r.function = f.name();
  r.n = paths.n();
  r.n_paths = paths.n_paths();
  r.steps = paths.steps();
  r.seed = paths.config().seed.master;
  r.mode = mode;
  r.constant = constant;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs.value - lhs.value;
  r.slack_std_error = combined_std_error(lhs, rhs);
  const double allowance = tol.k_sigma * r.slack_std_error + tol.exact;
  r.pass = mode == CheckMode::Inequality ? lhs.value <= rhs.value + allowance : std::abs(r.slack) <= allowance;
  r.outside_hypotheses = f.unbounded();
  return r;
}

double xlogx(double g) { return g > 0.0 ? g * std::log(g) : 0.0; }

}  // namespace

MCEstimate dirichlet_rhs(const SmoothFunction& f, const PathBundle& paths) {
  require_dim(f, paths);
  if (!f.has_gradient()) throw CapabilityError("Dirichlet form of '" + f.name() + "' needs a gradient");
  return mean_estimate(terminal_samples(paths, [&](const GroupPoint& p) { return squared_norm(horizontal_gradient(f, p)); }));
}

InequalityReport poincare_check(const SmoothFunction& f, const PathBundle& paths, CheckMode mode,
                                const Tolerance& tol) {
  const MCEstimate rhs = dirichlet_rhs(f, paths);
  const MCEstimate lhs = variance_estimate(terminal_samples(paths, [&](const GroupPoint& p) { return f(p); }));
  return make_report("poincare", f, paths, mode, 1.0, lhs, rhs, tol);
}

MCEstimate entropy_estimate(std::span<const double> g, const SeedPolicy& bootstrap_seed, std::size_t replicates) {
  if (g.empty()) throw UsageError("entropy needs at least one sample");
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!(g[j] >= 0.0) || !std::isfinite(g[j])) {
      throw DomainError("entropy sample " + std::to_string(j) + " is negative or not finite");
    }
  }
  const std::size_t n = g.size();
  const double dn = static_cast<double>(n);
  std::vector<double> glogg(n);
  for (std::size_t j = 0; j < n; ++j) glogg[j] = xlogx(g[j]);
  const double m = pairwise_sum(g) / dn;
  if (!(m > 0.0)) throw DomainError("entropy of a function with zero mean");
  const double a = pairwise_sum(glogg) / dn;

  std::vector<double> influence(n);
  const double slope = std::log(m) + 1.0;
  for (std::size_t j = 0; j < n; ++j) influence[j] = glogg[j] - slope * g[j];
  MCEstimate e = mean_estimate(influence);
  e.value = a - m * std::log(m);

  if (replicates > 0) {
    // Replicate r draws index k from Philox block (r, k / 4, stream, 0).
    const SeedPolicy seed = bootstrap_seed.derive(kBootstrapStream);
    const auto key = seed.key();
    std::vector<double> stats(replicates);
    parallel_for(replicates, 1, [&](std::size_t r0, std::size_t r1) {
      std::vector<double> rg(n), rgl(n);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t k = 0; k < n; k += 4) {
          const auto block = Philox4x32::block(
              {static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k / 4), 0xB0075u, 0u}, key);
          for (std::size_t q = 0; q < 4 && k + q < n; ++q) {
            const auto idx = static_cast<std::size_t>((static_cast<std::uint64_t>(block[q]) * n) >> 32);
            rg[k + q] = g[idx];
            rgl[k + q] = glogg[idx];
          }
        }
        const double rm = pairwise_sum(rg) / dn;
        stats[r] = pairwise_sum(rgl) / dn - (rm > 0.0 ? rm * std::log(rm) : 0.0);
      }
    });
    std::sort(stats.begin(), stats.end());
    auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(replicates - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const std::size_t hi = std::min(lo + 1, replicates - 1);
      return stats[lo] + (pos - static_cast<double>(lo)) * (stats[hi] - stats[lo]);
    };
    e.interval = Interval{std::min(quantile(0.005), e.value), std::max(quantile(0.995), e.value)};
  }
  return e;
}

InequalityReport logsobolev_check(const SmoothFunction& f, const PathBundle& paths, CheckMode mode, double constant,
                                  const Tolerance& tol) {
  MCEstimate rhs = dirichlet_rhs(f, paths);
  rhs.value *= constant;
  rhs.std_error *= constant;
  const auto g = terminal_samples(paths, [&](const GroupPoint& p) {
    const double v = f(p);
    return v * v;
  });
  const MCEstimate lhs = entropy_estimate(g, paths.config().seed);
  return make_report("logsobolev", f, paths, mode, constant, lhs, rhs, tol);
}

std::vector<InequalityReport> equality_suite(const PathBundle& paths, const Tolerance& tol) {
  const std::size_t n = paths.n();
  std::vector<InequalityReport> out;
  out.push_back(poincare_check(functions::coordinate_x(n, 1), paths, CheckMode::Equality, tol));
  out.push_back(poincare_check(functions::coordinate_y(n, 1), paths, CheckMode::Equality, tol));
  for (double lambda : {0.5, 1.0}) {
    out.push_back(logsobolev_check(functions::exp_linear(n, lambda), paths, CheckMode::Equality, 2.0, tol));
  }
  return out;
}

ExactPoincare exact_poincare(const HPolynomial& f, double horizon) {
  const std::size_t n = f.dim();
  const GroupPoint o(n);
  const double mean = poly_eval(heat_semigroup(f, horizon), o);
  HPolynomial energy(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const HPolynomial xf = poly_apply_field(FieldId::X(i), f);
    const HPolynomial yf = poly_apply_field(FieldId::Y(i), f);
    energy += xf * xf;
    energy += yf * yf;
  }
  return {poly_eval(heat_semigroup(f * f, horizon), o) - mean * mean, poly_eval(heat_semigroup(energy, horizon), o)};
}

namespace {

/// Read-only compiled objects shared by all batches of a Girsanov pass.
struct GirsanovPlan {
  std::size_t n = 1;
  double horizon = 1.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t windows = 1;
  SeriesPlan l;                   // Q_s (f o A)
  std::vector<SeriesPlan> u;      // numerators of u, components (b_1..b_n, w_1..w_n)
  kernels::PolyPlan f;            // f itself, at x_T
  std::vector<kernels::PolyPlan> grad;  // X_i f, Y_i f at x_T
};

struct GirsanovOutputs {
  std::vector<double> residual, l_final, f_final, energy, bound;
  std::vector<std::vector<double>> window;  // [w * 2n + c][path]
};

struct GirsanovObserver {
  const GirsanovPlan& plan;
  GirsanovOutputs& out;
  std::size_t first, lanes;
  std::vector<double> y, x, l, num, scratch, sum, quad, win;

  GirsanovObserver(const GirsanovPlan& p, GirsanovOutputs& o, std::size_t f, std::size_t ln)
      : plan(p), out(o), first(f), lanes(ln), y((2 * p.n + 1) * ln), x((2 * p.n + 1) * ln), l(ln), num(ln),
        scratch(ln), sum(ln, 0.0), quad(ln, 0.0), win(p.windows * 2 * p.n * ln, 0.0) {}

  void check_positive(const BatchView& v) const {
    for (std::size_t k = 0; k < lanes; ++k) {
      if (!(l[k] > 0.0)) {
        throw DomainError("density l_t is not positive on path " + std::to_string(first + k) + " at t = " +
                          std::to_string(v.time));
      }
    }
  }

  void step(const BatchView& v) {
    v.point_coords(true, y.data());
    const double s = plan.horizon - v.time;
    plan.l.eval(s, y.data(), lanes, lanes, l.data(), scratch.data());
    check_positive(v);
    const std::size_t w = std::min(plan.windows - 1, v.step * plan.windows / plan.steps);
    for (std::size_t c = 0; c < 2 * plan.n; ++c) {
      plan.u[c].eval(s, y.data(), lanes, lanes, num.data(), scratch.data());
      const double* dW = c < plan.n ? v.db + c * lanes : v.dw + (c - plan.n) * lanes;
      double* wsum = win.data() + (w * 2 * plan.n + c) * lanes;
      for (std::size_t k = 0; k < lanes; ++k) {
        const double u = num[k] / l[k];
        const double uu = u * u * plan.dt;
        sum[k] += u * dW[k] + 0.5 * uu;
        quad[k] += uu;
        wsum[k] += dW[k] + u * plan.dt;
      }
    }
  }

  void finish(const BatchView& v) {
    v.point_coords(true, y.data());
    v.point_coords(false, x.data());
    plan.l.eval(0.0, y.data(), lanes, lanes, l.data(), scratch.data());
    check_positive(v);
    const auto& kern = kernels::active();
    kern.poly_eval(plan.f, x.data(), lanes, lanes, num.data());
    std::vector<double> g(lanes, 0.0);
    for (const auto& gp : plan.grad) {
      kern.poly_eval(gp, x.data(), lanes, lanes, scratch.data());
      for (std::size_t k = 0; k < lanes; ++k) g[k] += scratch[k] * scratch[k];
    }
    for (std::size_t k = 0; k < lanes; ++k) {
      const std::size_t j = first + k;
      out.residual[j] = std::log(l[k]) + sum[k];
      out.l_final[j] = l[k];
      out.f_final[j] = num[k];
      out.energy[j] = quad[k];
      out.bound[j] = num[k] > 0.0 ? 0.5 * g[k] / num[k] : std::numeric_limits<double>::infinity();
    }
    for (std::size_t wc = 0; wc < out.window.size(); ++wc) {
      for (std::size_t k = 0; k < lanes; ++k) out.window[wc][first + k] = win[wc * lanes + k];
    }
  }
};

std::vector<HPolynomial> field_terms(const FieldId& field, const SemigroupSeries& series) {
  std::vector<HPolynomial> out;
  for (const auto& t : series.terms()) out.push_back(poly_apply_field(field, t));
  return out;
}

std::string window_label(std::size_t w, std::size_t c, std::size_t n) {
  const std::string comp = (c < n ? "b_" + std::to_string(c + 1) : "w_" + std::to_string(c - n + 1));
  return "window " + std::to_string(w + 1) + " " + comp;
}

}  // namespace

GirsanovRun girsanov_run(const HPolynomial& normalized_f, const PathConfig& cfg, std::size_t windows,
                         GirsanovIntegrand integrand, const Tolerance& tol) {
  cfg.validate();
  const std::size_t n = cfg.n;
  if (normalized_f.dim() != n) throw UsageError("dimension mismatch between function and paths");
  if (windows < 1 || windows > cfg.steps) throw UsageError("window count must be in [1, steps]");

  const HPolynomial fa = poly_mirror(normalized_f);
  const SemigroupSeries series(fa);
  GirsanovPlan plan;
  plan.n = n;
  plan.horizon = cfg.horizon;
  plan.dt = cfg.dt();
  plan.steps = cfg.steps;
  plan.windows = windows;
  plan.l = SeriesPlan(series);
  for (int block = 0; block < 2; ++block) {
    for (std::size_t i = 1; i <= n; ++i) {
      if (integrand == GirsanovIntegrand::RightFields) {
        const FieldId field = block == 0 ? FieldId::Xhat(i) : FieldId::Yhat(i);
        plan.u.emplace_back(SemigroupSeries(poly_apply_field(field, fa)));
      } else {
        const FieldId field = block == 0 ? FieldId::X(i) : FieldId::Y(i);
        plan.u.emplace_back(field_terms(field, series));
      }
    }
  }
  plan.f = normalized_f.make_plan();
  for (std::size_t i = 1; i <= n; ++i) {
    plan.grad.push_back(poly_apply_field(FieldId::X(i), normalized_f).make_plan());
    plan.grad.push_back(poly_apply_field(FieldId::Y(i), normalized_f).make_plan());
  }

  GirsanovOutputs out;
  for (auto* v : {&out.residual, &out.l_final, &out.f_final, &out.energy, &out.bound}) v->assign(cfg.n_paths, 0.0);
  out.window.assign(windows * 2 * n, std::vector<double>(cfg.n_paths, 0.0));
  walk_paths(cfg, [&](std::size_t first, std::size_t lanes) { return GirsanovObserver(plan, out, first, lanes); });

  GirsanovRun r;
  r.steps = cfg.steps;
  r.residual_rms = root_mean_square(out.residual);
  r.min_l = *std::min_element(out.l_final.begin(), out.l_final.end());
  for (std::size_t j = 0; j < cfg.n_paths; ++j) {
    r.max_terminal_error = std::max(r.max_terminal_error, std::abs(out.l_final[j] - out.f_final[j]));
  }
  r.weight_mean = mean_estimate(out.l_final);

  std::vector<double> tmp(cfg.n_paths);
  for (std::size_t j = 0; j < cfg.n_paths; ++j) tmp[j] = xlogx(out.l_final[j]);
  r.entropy = mean_estimate(tmp);
  for (std::size_t j = 0; j < cfg.n_paths; ++j) tmp[j] = 0.5 * out.l_final[j] * out.energy[j];
  r.half_energy = mean_estimate(tmp);
  r.lsi_bound = mean_estimate(out.bound);

  for (std::size_t w = 0; w < windows; ++w) {
    // Steps in window w: those k with k * windows / steps == w.
    const std::size_t k0 = (w * cfg.steps + windows - 1) / windows;
    const std::size_t k1 = ((w + 1) * cfg.steps + windows - 1) / windows;
    const double len = static_cast<double>(k1 - k0) * cfg.dt();
    for (std::size_t c = 0; c < 2 * n; ++c) {
      const auto& s = out.window[w * 2 * n + c];
      for (std::size_t j = 0; j < cfg.n_paths; ++j) tmp[j] = out.l_final[j] * s[j];
      const auto m1 = mean_estimate(tmp);
      r.brownian.push_back(two_sided("nu-mean " + window_label(w, c, n), m1.value, 0.0, m1.std_error, tol));
    }
    for (std::size_t j = 0; j < cfg.n_paths; ++j) {
      double sq = 0.0;
      for (std::size_t c = 0; c < 2 * n; ++c) sq += out.window[w * 2 * n + c][j] * out.window[w * 2 * n + c][j];
      tmp[j] = out.l_final[j] * sq;
    }
    const auto m2 = mean_estimate(tmp);
    r.brownian.push_back(two_sided("nu-second moment window " + std::to_string(w + 1), m2.value,
                                   2.0 * static_cast<double>(n) * len, m2.std_error, tol));
  }
  return r;
}

GirsanovReport girsanov_diagnostics(const HPolynomial& f, const GirsanovConfig& cfg) {
  const double mass = poly_eval(heat_semigroup(f, cfg.paths.horizon), GroupPoint(f.dim()));
  if (!(mass > 0.0)) throw DomainError("Girsanov density needs E f(x_T) > 0");
  const HPolynomial fn = f * (1.0 / mass);

  GirsanovReport r;
  r.function = f.to_string();
  r.normalization = mass;
  r.fine = girsanov_run(fn, cfg.paths, cfg.windows, cfg.integrand, cfg.tol);
  r.coarse = girsanov_run(fn, cfg.paths.coarsened(2), cfg.windows, cfg.integrand, cfg.tol);
  r.refinement_ratio =
      r.fine.residual_rms == 0.0 ? std::numeric_limits<double>::infinity() : r.coarse.residual_rms / r.fine.residual_rms;

  const Tolerance& tol = cfg.tol;
  const bool exact_zero = r.fine.residual_rms == 0.0 && r.coarse.residual_rms == 0.0;
  r.checks.push_back({"exponential residual refinement", r.refinement_ratio, cfg.refinement_threshold, 0.0,
                      exact_zero || r.refinement_ratio >= cfg.refinement_threshold});
  r.checks.push_back(two_sided("weights mean", r.fine.weight_mean.value, 1.0, r.fine.weight_mean.std_error, tol));
  r.checks.push_back({"terminal identity l_T = f(x_T)", r.fine.max_terminal_error, 0.0, 0.0,
                      r.fine.max_terminal_error <= 1e-10});
  for (const auto& c : r.fine.brownian) r.checks.push_back(c);
  const double se = combined_std_error(r.fine.entropy, r.fine.half_energy);
  r.checks.push_back(two_sided("entropy identity", r.fine.entropy.value, r.fine.half_energy.value, se, tol));
  r.lsi_bound = at_least("entropy bound 1/2 E[|grad f|^2 / f]", r.fine.lsi_bound.value, r.fine.entropy.value,
                         combined_std_error(r.fine.lsi_bound, r.fine.entropy), tol);
  r.pass = all_pass(r.checks);
  return r;
}

}  // namespace heis
