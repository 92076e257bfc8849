#include "doctest.h"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heis/error.hpp"
#include "heis/parallel.hpp"
#include "heis/report.hpp"
#include "heis/suites.hpp"

using namespace heis;
namespace fs = std::filesystem;

namespace {

Report sample_report() {
  Report rep;
  rep.config.suites = {"poincare"};
  rep.timestamp = "2026-01-01T00:00:00Z";
  rep.records.push_back({"poincare", "poincare z", RecordKind::Check, 0.24981234567890123, 0.50012345678901234,
                         0.0031, true, 7, ""});
  rep.records.push_back({"poincare", "a \"quoted\", comma name", RecordKind::Diagnostic, 1.0 / 3.0, -2e-300, 0.0, false,
                         7, "line\nbreak"});
  rep.records.push_back({"girsanov", "ratio", RecordKind::Check, INFINITY, 1.4, std::nan(""), true, 9, ""});
  return rep;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("heis_report_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_config() {
  RunConfig c;
  c.paths = 2000;
  c.steps = 64;
  c.representation_paths = 500;
  c.representation_steps = 64;
  c.girsanov_paths = 2000;
  c.girsanov_steps = 64;
  return c;
}

}  // namespace

TEST_CASE("JSON round trip reproduces records and config exactly") {
  const Report rep = sample_report();
  const Report back = parse_json_report(to_json(rep));
  CHECK(back.config == rep.config);
  CHECK(back.timestamp == rep.timestamp);
  REQUIRE(back.records.size() == rep.records.size());
  for (std::size_t k = 0; k < rep.records.size(); ++k) {
    const auto& a = rep.records[k];
    const auto& b = back.records[k];
    CHECK(a.name == b.name);
    CHECK(a.kind == b.kind);
    CHECK(a.pass == b.pass);
    CHECK(a.seed == b.seed);
    CHECK(a.note == b.note);
    CHECK(std::bit_cast<std::uint64_t>(a.lhs) == std::bit_cast<std::uint64_t>(b.lhs));
    CHECK(std::bit_cast<std::uint64_t>(a.rhs) == std::bit_cast<std::uint64_t>(b.rhs));
  }
  CHECK(std::isnan(back.records[2].std_error));
  CHECK(to_json(back) == to_json(rep));
}

TEST_CASE("empty record list gives a valid report with only the summary") {
  Report rep;
  const std::string json = to_json(rep);
  CHECK(json.find("\"records\": []") != std::string::npos);
  CHECK(json.find("\"checks\": 0") != std::string::npos);
  CHECK(parse_json_report(json).records.empty());
  CHECK(to_csv(rep) == "suite,name,kind,lhs,rhs,stderr,verdict,seed,note\n");
}

TEST_CASE("numbers carry 17 significant digits") {
  Report rep;
  rep.records.push_back({"s", "third", RecordKind::Check, 1.0 / 3.0, 0.1, 0.0, true, 1, ""});
  CHECK(to_json(rep).find("0.33333333333333331") != std::string::npos);
  CHECK(to_csv(rep).find("0.33333333333333331,0.10000000000000001") != std::string::npos);
}

TEST_CASE("CSV has one row per record with quoted fields") {
  const std::string csv = to_csv(sample_report());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "suite,name,kind,lhs,rhs,stderr,verdict,seed,note");
  std::getline(in, line);
  CHECK(line.rfind("poincare,poincare z,check,0.24981234567890123,", 0) == 0);
  CHECK(csv.find("\"a \"\"quoted\"\", comma name\"") != std::string::npos);
  CHECK(csv.find(",inf,1.3999999999999999,nan,pass,9,") != std::string::npos);
}

TEST_CASE("timestamp is the only line removed for comparisons") {
  Report a = sample_report();
  Report b = a;
  b.timestamp = "2030-05-05T05:05:05Z";
  CHECK(to_json(a) != to_json(b));
  CHECK(strip_timestamp(to_json(a)) == strip_timestamp(to_json(b)));
  b.records[0].lhs = std::nextafter(b.records[0].lhs, 1.0);
  CHECK(strip_timestamp(to_json(a)) != strip_timestamp(to_json(b)));
}

TEST_CASE("summary counts checks and diagnostics separately") {
  const Summary s = summarize(sample_report().records);
  CHECK(s.checks == 2);
  CHECK(s.passed == 2);
  CHECK(s.failed == 0);
  CHECK(s.diagnostics == 1);
  CHECK(s.pass());
}

TEST_CASE("emit_report writes into the directory and reports I/O failures") {
  const fs::path dir = scratch_dir("emit");
  const std::string json = emit_report(sample_report(), ReportFormat::Json, (dir / "nested").string());
  CHECK(fs::path(json).filename() == "report.json");
  CHECK(slurp(json) == to_json(sample_report()));
  const std::string csv = emit_report(sample_report(), ReportFormat::Csv, dir.string());
  CHECK(slurp(csv) == to_csv(sample_report()));

  const fs::path blocker = dir / "file";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(emit_report(sample_report(), ReportFormat::Json, (blocker / "sub").string()), IoError);
  fs::remove_all(dir);
}

TEST_CASE("format names") {
  CHECK(parse_format("json") == ReportFormat::Json);
  CHECK(parse_format("csv") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_format("xml"), UsageError);
}

TEST_CASE("configuration validation and files") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.paths = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.horizon = 0.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.suites = {"bogus"};
  CHECK_THROWS_AS(c.validate(), UsageError);

  const fs::path dir = scratch_dir("config");
  fs::create_directories(dir);
  std::ofstream(dir / "good.json") << R"({"n": 2, "paths": 500, "suites": ["algebra"], "horizon": 0.5})";
  std::ofstream(dir / "unknown.json") << R"({"n": 2, "colour": "red"})";
  std::ofstream(dir / "typed.json") << R"({"paths": "many"})";
  std::ofstream(dir / "broken.json") << R"({"n": )";
  RunConfig f;
  apply_config_file(f, (dir / "good.json").string());
  CHECK(f.n == 2);
  CHECK(f.paths == 500);
  CHECK(f.horizon == 0.5);
  CHECK(f.suites == std::vector<std::string>{"algebra"});
  CHECK(f.steps == RunConfig{}.steps);
  CHECK_THROWS_AS(apply_config_file(f, (dir / "unknown.json").string()), UsageError);
  CHECK_THROWS_AS(apply_config_file(f, (dir / "typed.json").string()), UsageError);
  CHECK_THROWS_AS(apply_config_file(f, (dir / "broken.json").string()), UsageError);
  CHECK_THROWS_AS(apply_config_file(f, (dir / "missing.json").string()), UsageError);
  fs::remove_all(dir);
}

TEST_CASE("Poincare record for z") {
  RunConfig c = small_config();
  c.paths = 20000;
  c.steps = 256;
  c.suites = {"poincare"};
  const Report rep = run_report(c);
  bool found = false;
  for (const auto& r : rep.records) {
    if (r.name != "poincare z") continue;
    found = true;
    CHECK(std::abs(r.lhs - 0.25) <= 3.0 * r.std_error + 256.0 / 65536.0);
    CHECK(std::abs(r.rhs - 0.5) <= 3.0 * r.std_error);
    CHECK(r.pass);
    CHECK(r.suite == "poincare");
    CHECK(r.seed == c.seed);
  }
  CHECK(found);
}

TEST_CASE("reports are byte-identical across worker counts") {
  const unsigned before = worker_count();
  std::string first;
  for (unsigned workers : {1u, 4u, 8u}) {
    set_worker_count(workers);
    const std::string json = to_json(run_report(small_config()));
    if (first.empty()) first = json;
    CHECK(json == first);
  }
  set_worker_count(before);
}
