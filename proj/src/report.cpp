#include "heis/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "heis/error.hpp"

namespace heis {
namespace {

const std::set<std::string> kKnownSuites{"all",      "algebra",  "simulate",   "intertwine",
                                         "martingale", "poincare", "logsobolev", "girsanov"};

std::string number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

const char* kind_name(RecordKind k) { return k == RecordKind::Check ? "check" : "diagnostic"; }

double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw UsageError("report contains a malformed number: " + s);
  }
  return j.get<double>();
}

void write_config(std::ostringstream& os, const RunConfig& c) {
  os << "  \"config\": {\n";
  os << "    \"n\": " << c.n << ",\n";
  os << "    \"paths\": " << c.paths << ",\n";
  os << "    \"steps\": " << c.steps << ",\n";
  os << "    \"horizon\": " << number(c.horizon) << ",\n";
  os << "    \"seed\": " << c.seed << ",\n";
  os << "    \"suites\": [";
  for (std::size_t k = 0; k < c.suites.size(); ++k) os << (k ? ", " : "") << quote(c.suites[k]);
  os << "],\n";
  os << "    \"tolerance_scale\": " << number(c.tolerance_scale) << ",\n";
  os << "    \"representation_paths\": " << c.representation_paths << ",\n";
  os << "    \"representation_steps\": " << c.representation_steps << ",\n";
  os << "    \"girsanov_paths\": " << c.girsanov_paths << ",\n";
  os << "    \"girsanov_steps\": " << c.girsanov_steps << "\n";
  os << "  },\n";
}

void read_config_object(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n") cfg.n = value.get<std::size_t>();
      else if (key == "paths") cfg.paths = value.get<std::size_t>();
      else if (key == "steps") cfg.steps = value.get<std::size_t>();
      else if (key == "horizon") cfg.horizon = read_number(value);
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "suites") cfg.suites = value.get<std::vector<std::string>>();
      else if (key == "tolerance_scale") cfg.tolerance_scale = read_number(value);
      else if (key == "representation_paths") cfg.representation_paths = value.get<std::size_t>();
      else if (key == "representation_steps") cfg.representation_steps = value.get<std::size_t>();
      else if (key == "girsanov_paths") cfg.girsanov_paths = value.get<std::size_t>();
      else if (key == "girsanov_steps") cfg.girsanov_steps = value.get<std::size_t>();
      else throw UsageError("unknown configuration key '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw UsageError("configuration key '" + key + "' has the wrong type");
    }
  }
}

}  // namespace

Record record_from(const std::string& suite, const Check& c, std::uint64_t seed, RecordKind kind, std::string note) {
  return {suite, c.label, kind, c.value, c.target, c.std_error, c.pass, seed, std::move(note)};
}

Record record_from(const std::string& suite, const InequalityReport& r, std::string name) {
  if (name.empty()) {
    name = r.kind + (r.mode == CheckMode::Equality ? " equality " : " ") + r.function;
    if (r.kind == "logsobolev" && r.constant != 2.0) name += " constant " + csv_number(r.constant);
  }
  std::string note = r.outside_hypotheses ? "outside the bounded-derivative hypotheses" : "";
  if (r.lhs.interval) {
    if (!note.empty()) note += "; ";
    note += "lhs 99% bootstrap [" + csv_number(r.lhs.interval->lo) + ", " + csv_number(r.lhs.interval->hi) + "]";
  }
  return {suite, name, RecordKind::Check, r.lhs.value, r.rhs.value, r.slack_std_error, r.pass, r.seed, note};
}

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw UsageError("unknown report format '" + text + "' (json or csv)");
}

void RunConfig::validate() const {
  if (n < 1) throw UsageError("--n must be >= 1");
  if (paths < 2) throw UsageError("--paths must be >= 2");
  if (steps < 1) throw UsageError("--steps must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw UsageError("--horizon must be > 0");
  if (!(tolerance_scale > 0.0) || !std::isfinite(tolerance_scale)) throw UsageError("--tolerance-scale must be > 0");
  if (representation_paths < 2 || representation_steps < 2 || representation_steps % 2 != 0) {
    throw UsageError("representation run needs >= 2 paths and an even step count");
  }
  if (girsanov_paths < 2 || girsanov_steps < 2 || girsanov_steps % 2 != 0) {
    throw UsageError("Girsanov run needs >= 2 paths and an even step count");
  }
  if (suites.empty()) throw UsageError("no suite selected");
  for (const auto& s : suites) {
    if (!kKnownSuites.contains(s)) throw UsageError("unknown suite '" + s + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read configuration file " + file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("configuration file " + file + " is not valid JSON: " + e.what());
  }
  read_config_object(cfg, j);
}

Summary summarize(const std::vector<Record>& records) {
  Summary s;
  for (const auto& r : records) {
    if (r.kind == RecordKind::Diagnostic) {
      ++s.diagnostics;
      continue;
    }
    ++s.checks;
    (r.pass ? s.passed : s.failed) += 1;
  }
  return s;
}

std::string to_json(const Report& report) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"format\": \"heis-verify-report/1\",\n";
  os << "  \"timestamp\": " << quote(report.timestamp) << ",\n";
  write_config(os, report.config);
  os << "  \"records\": [";
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    const auto& r = report.records[k];
    os << (k ? ",\n" : "\n");
    os << "    {\"suite\": " << quote(r.suite) << ", \"name\": " << quote(r.name) << ", \"kind\": \""
       << kind_name(r.kind) << "\", \"lhs\": " << number(r.lhs) << ", \"rhs\": " << number(r.rhs)
       << ", \"stderr\": " << number(r.std_error) << ", \"verdict\": \"" << (r.pass ? "pass" : "fail")
       << "\", \"seed\": " << r.seed << ", \"note\": " << quote(r.note) << "}";
  }
  os << (report.records.empty() ? "],\n" : "\n  ],\n");
  const Summary s = summarize(report.records);
  os << "  \"summary\": {\"checks\": " << s.checks << ", \"passed\": " << s.passed << ", \"failed\": " << s.failed
     << ", \"diagnostics\": " << s.diagnostics << ", \"verdict\": \"" << (s.pass() ? "pass" : "fail") << "\"}\n";
  os << "}\n";
  return os.str();
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "suite,name,kind,lhs,rhs,stderr,verdict,seed,note\n";
  for (const auto& r : report.records) {
    os << csv_field(r.suite) << ',' << csv_field(r.name) << ',' << kind_name(r.kind) << ',' << csv_number(r.lhs) << ','
       << csv_number(r.rhs) << ',' << csv_number(r.std_error) << ',' << (r.pass ? "pass" : "fail") << ',' << r.seed
       << ',' << csv_field(r.note) << '\n';
  }
  return os.str();
}

std::string strip_timestamp(const std::string& json) {
  std::istringstream in(json);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("  \"timestamp\":", 0) == 0) continue;
    out += line;
    out += '\n';
  }
  return out;
}

Report parse_json_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("report is not valid JSON: ") + e.what());
  }
  Report rep;
  try {
    rep.timestamp = j.value("timestamp", "");
    read_config_object(rep.config, j.at("config"));
    for (const auto& r : j.at("records")) {
      Record rec;
      rec.suite = r.at("suite").get<std::string>();
      rec.name = r.at("name").get<std::string>();
      rec.kind = r.at("kind").get<std::string>() == "check" ? RecordKind::Check : RecordKind::Diagnostic;
      rec.lhs = read_number(r.at("lhs"));
      rec.rhs = read_number(r.at("rhs"));
      rec.std_error = read_number(r.at("stderr"));
      rec.pass = r.at("verdict").get<std::string>() == "pass";
      rec.seed = r.at("seed").get<std::uint64_t>();
      rec.note = r.at("note").get<std::string>();
      rep.records.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("report does not follow the schema: ") + e.what());
  }
  return rep;
}

std::string emit_report(const Report& report, ReportFormat format, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path file = fs::path(dir) / (format == ReportFormat::Json ? "report.json" : "report.csv");
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out << (format == ReportFormat::Json ? to_json(report) : to_csv(report));
  out.close();
  if (!out) throw IoError("writing " + file.string() + " failed");
  return file.string();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace heis
