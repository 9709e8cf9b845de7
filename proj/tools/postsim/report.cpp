#include <cstdio>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "cli.hpp"
#include "postsim/errors.hpp"

namespace postsim::cli {

namespace {

using nlohmann::json;

template <typename T>
json optional_json(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json config_json(const RunConfig& c) {
  return json{
      {"command", std::string(to_string(c.command))},
      {"mode", std::string(to_string(c.mode))},
      {"seed", c.seed},
      {"trials", c.trials},
      {"n", optional_json(c.n)},
      {"alpha", complex_json(c.alpha)},
      {"beta", complex_json(c.beta)},
      {"oracle", optional_json(c.oracle)},
      {"function", optional_json(c.function)},
      {"secret", optional_json(c.secret)},
      {"max_samples", c.max_samples},
      {"marked", c.marked},
      {"observable", optional_json(c.observable)},
      {"state", optional_json(c.state)},
  };
}

RunConfig config_from(const json& j) {
  RunConfig c;
  c.command = parse_command(j.at("command").get<std::string>());
  c.mode = parse_semantics_mode(j.at("mode").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.trials = j.at("trials").get<std::uint64_t>();
  c.n = optional_from<std::size_t>(j, "n");
  c.alpha = complex_from(j.at("alpha"));
  c.beta = complex_from(j.at("beta"));
  c.oracle = optional_from<std::string>(j, "oracle");
  c.function = optional_from<std::string>(j, "function");
  c.secret = optional_from<std::string>(j, "secret");
  c.max_samples = j.at("max_samples").get<std::size_t>();
  c.marked = j.at("marked").get<std::vector<std::size_t>>();
  c.observable = optional_from<std::string>(j, "observable");
  c.state = optional_from<std::string>(j, "state");
  return c;
}

json trial_json(const TrialRecord& t) {
  return json{
      {"trial", t.trial},
      {"outcome", t.outcome},
      {"eigenvalue", optional_json(t.eigenvalue)},
      {"probability", optional_json(t.probability)},
      {"determined", t.determined},
      {"fidelity", optional_json(t.fidelity)},
      {"detail", optional_json(t.detail)},
  };
}

TrialRecord trial_from(const json& j) {
  TrialRecord t;
  t.trial = j.at("trial").get<std::uint64_t>();
  t.outcome = j.at("outcome").get<std::string>();
  t.eigenvalue = optional_from<double>(j, "eigenvalue");
  t.probability = optional_from<double>(j, "probability");
  t.determined = j.at("determined").get<bool>();
  t.fidelity = optional_from<double>(j, "fidelity");
  t.detail = optional_from<std::string>(j, "detail");
  return t;
}

json blocked_json(const std::optional<DegeneracyReport>& b) {
  if (!b) return nullptr;
  return json{
      {"dimension", b->dimension},
      {"distinct_eigenvalues", b->distinct_eigenvalues},
      {"multiplicities", b->multiplicities},
  };
}

std::optional<DegeneracyReport> blocked_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return DegeneracyReport{
      j.at("dimension").get<std::size_t>(),
      j.at("distinct_eigenvalues").get<std::size_t>(),
      j.at("multiplicities").get<std::vector<std::size_t>>(),
  };
}

json report_json(const RunReport& r) {
  json outcomes = json::array();
  for (const TrialRecord& t : r.outcomes) outcomes.push_back(trial_json(t));
  return json{
      {"schema", r.schema},
      {"version", r.version},
      {"config", config_json(r.config)},
      {"outcomes", std::move(outcomes)},
      {"frequencies", r.frequencies},
      {"born_probabilities", r.born_probabilities},
      {"metrics", r.metrics},
      {"results", r.results},
      {"verdict", r.verdict},
      {"blocked", blocked_json(r.blocked)},
      {"warnings", r.warnings},
      {"exit_code", r.exit_code},
  };
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string emit_text(const RunReport& r) {
  std::ostringstream out;
  out << r.schema << "  postsim " << r.version << '\n';
  out << "command: " << to_string(r.config.command) << "  mode: " << to_string(r.config.mode)
      << "  seed: " << r.config.seed << "  trials: " << r.config.trials << '\n';
  out << "verdict: " << r.verdict << " (exit " << r.exit_code << ")\n";
  if (r.blocked) {
    out << "blocked by degeneracy: dimension " << r.blocked->dimension << ", "
        << r.blocked->distinct_eigenvalues << " distinct eigenvalues, multiplicities [";
    for (std::size_t i = 0; i < r.blocked->multiplicities.size(); ++i) {
      out << (i ? "," : "") << r.blocked->multiplicities[i];
    }
    out << "]\n";
  }
  if (!r.frequencies.empty()) {
    out << "frequencies:\n";
    for (const auto& [label, f] : r.frequencies) {
      out << "  " << label << "  " << format_number(f);
      if (auto it = r.born_probabilities.find(label); it != r.born_probabilities.end()) {
        out << "  (exact " << format_number(it->second) << ")";
      }
      out << '\n';
    }
  }
  bool header = false;
  for (const auto& [label, p] : r.born_probabilities) {
    if (r.frequencies.contains(label)) continue;
    if (!header) out << "exact probabilities:\n";
    header = true;
    out << "  " << label << "  " << format_number(p) << '\n';
  }
  if (!r.metrics.empty()) {
    out << "metrics:\n";
    for (const auto& [k, v] : r.metrics) out << "  " << k << "  " << format_number(v) << '\n';
  }
  if (!r.results.empty()) {
    out << "results:\n";
    for (const auto& [k, v] : r.results) out << "  " << k << "  " << v << '\n';
  }
  for (const std::string& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::Text) return emit_text(report);
  return report_json(report).dump(2) + "\n";
}

RunReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.schema = j.at("schema").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.config = config_from(j.at("config"));
    for (const json& t : j.at("outcomes")) r.outcomes.push_back(trial_from(t));
    r.frequencies = j.at("frequencies").get<std::map<std::string, double>>();
    r.born_probabilities = j.at("born_probabilities").get<std::map<std::string, double>>();
    r.metrics = j.at("metrics").get<std::map<std::string, double>>();
    r.results = j.at("results").get<std::map<std::string, std::string>>();
    r.verdict = j.at("verdict").get<std::string>();
    r.blocked = blocked_from(j.at("blocked"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.exit_code = j.at("exit_code").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace postsim::cli
