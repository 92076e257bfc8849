// verify: runs the Heisenberg verification suites and writes a report.
//
// Exit codes: 0 every check passed, 1 a check failed (or a report differs
// from --compare-to), 2 usage, configuration or I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "heis/error.hpp"
#include "heis/parallel.hpp"
#include "heis/report.hpp"
#include "heis/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw heis::IoError("cannot read " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
void override(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

void print_summary(const heis::Report& rep) {
  std::map<std::string, heis::Summary> by_suite;
  std::vector<std::string> order;
  for (const auto& r : rep.records) {
    if (!by_suite.contains(r.suite)) order.push_back(r.suite);
    auto& s = by_suite[r.suite];
    if (r.kind == heis::RecordKind::Diagnostic) {
      ++s.diagnostics;
    } else {
      ++s.checks;
      (r.pass ? s.passed : s.failed) += 1;
    }
  }
  for (const auto& name : order) {
    const auto& s = by_suite[name];
    std::printf("%-11s %s  %zu/%zu checks passed, %zu diagnostics\n", name.c_str(), s.pass() ? "PASS" : "FAIL",
                s.passed, s.checks, s.diagnostics);
  }
  for (const auto& r : rep.records) {
    if (r.kind == heis::RecordKind::Check && !r.pass) {
      std::printf("  failed: [%s] %s  lhs=%.6g rhs=%.6g stderr=%.3g\n", r.suite.c_str(), r.name.c_str(), r.lhs, r.rhs,
                  r.std_error);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for Brownian motion on the Heisenberg group"};
  app.set_version_flag("--version", "verify 1.0");

  std::vector<std::string> positional;
  std::vector<std::string> suite_flags;
  std::optional<std::size_t> n, paths, steps, rep_paths, rep_steps, gir_paths, gir_steps;
  std::optional<double> horizon, tol_scale;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
  std::string compare_to;
  std::string config_file;
  unsigned threads = 0;

  app.add_option("suites", positional, "Suites to run: all, algebra, simulate, intertwine, martingale, poincare, "
                                       "logsobolev, girsanov");
  app.add_option("--suite", suite_flags, "Suite to run (repeatable)");
  app.add_option("--n", n, "Heisenberg dimension n");
  app.add_option("--paths", paths, "Monte Carlo paths");
  app.add_option("--steps", steps, "Time steps on [0, T]");
  app.add_option("--horizon", horizon, "Time horizon T");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--tolerance-scale", tol_scale, "Multiplies every k-sigma and exact tolerance");
  app.add_option("--representation-paths", rep_paths, "Paths for the representation check");
  app.add_option("--representation-steps", rep_steps, "Fine steps for the representation check");
  app.add_option("--girsanov-paths", gir_paths, "Paths for the Girsanov diagnostics");
  app.add_option("--girsanov-steps", gir_steps, "Fine steps for the Girsanov diagnostics");
  app.add_option("--out", out_dir, "Output directory (default $HEIS_VERIFY_OUT or .)");
  app.add_option("--format", format, "Report format: json or csv");
  app.add_option("--compare-to", compare_to, "Previous JSON report; exit 1 unless identical up to the timestamp");
  app.add_option("--config", config_file, "JSON configuration file; flags override its keys");
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  heis::RunConfig cfg;
  heis::Report report;
  try {
    if (!config_file.empty()) heis::apply_config_file(cfg, config_file);
    override(cfg.n, n);
    override(cfg.paths, paths);
    override(cfg.steps, steps);
    override(cfg.horizon, horizon);
    override(cfg.seed, seed);
    override(cfg.tolerance_scale, tol_scale);
    override(cfg.representation_paths, rep_paths);
    override(cfg.representation_steps, rep_steps);
    override(cfg.girsanov_paths, gir_paths);
    override(cfg.girsanov_steps, gir_steps);
    std::vector<std::string> selected = positional;
    selected.insert(selected.end(), suite_flags.begin(), suite_flags.end());
    if (!selected.empty()) cfg.suites = selected;
    cfg.validate();
    const auto fmt = heis::parse_format(format);
    if (app.count("--threads")) {
      if (threads == 0) throw heis::UsageError("--threads must be >= 1");
      heis::set_worker_count(threads);
    }
    if (out_dir.empty()) {
      const char* env = std::getenv("HEIS_VERIFY_OUT");
      out_dir = env && *env ? env : ".";
    }

    const auto t0 = std::chrono::steady_clock::now();
    report = heis::run_report(cfg);
    report.timestamp = heis::utc_timestamp();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string file = heis::emit_report(report, fmt, out_dir);
    print_summary(report);
    std::printf("report: %s (%.1f s, %u workers)\n", file.c_str(), seconds, heis::worker_count());

    if (!compare_to.empty()) {
      const std::string previous = heis::strip_timestamp(read_file(compare_to));
      if (previous != heis::strip_timestamp(heis::to_json(report))) {
        std::printf("compare: report differs from %s\n", compare_to.c_str());
        return kExitFail;
      }
      std::printf("compare: identical to %s apart from the timestamp\n", compare_to.c_str());
    }
  } catch (const heis::DomainError& e) {
    std::fprintf(stderr, "verify: domain error: %s\n", e.what());
    return kExitFail;
  } catch (const heis::UsageError& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitUsage;
  } catch (const heis::IoError& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitUsage;
  } catch (const heis::CapabilityError& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitUsage;
  }
  return heis::summarize(report.records).pass() ? kExitPass : kExitFail;
}
