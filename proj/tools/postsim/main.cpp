// postsim: run teleportation and algorithm trials under a chosen measurement
// semantics and print a deterministic report.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "postsim/errors.hpp"

namespace {

using postsim::cli::Command;
using postsim::cli::ReportFormat;
using postsim::cli::RunConfig;

struct Options {
  RunConfig config;
  std::string mode;
  std::string alpha = "1,0";
  std::string beta = "0,0";
  std::string marked;
  std::string format = "json";
  std::string output;
  std::size_t n = 0;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--mode", opt.mode, "Measurement semantics: von-neumann | lueders")
      ->required()
      ->check(CLI::IsMember({"von-neumann", "lueders"}));
  sub->add_option("--seed", opt.config.seed, "Random seed")->capture_default_str();
  sub->add_option("--trials", opt.config.trials, "Number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--format", opt.format, "Report format: json | text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  sub->add_option("--output,-o", opt.output, "Write the report to a file instead of stdout");
}

std::vector<std::size_t> parse_marked(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string field = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (field.empty() || used != field.size()) {
      throw postsim::Error(postsim::ErrorCode::ParseError, "bad marked index '" + field + "'");
    }
    out.push_back(static_cast<std::size_t>(value));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum measurement-semantics simulator"};
  app.set_version_flag("--version", postsim::cli::version_string());
  app.require_subcommand(1);

  Options opt;

  auto* teleport = app.add_subcommand("teleport", "Teleport one qubit over a shared |Phi+> pair");
  add_common(teleport, opt);
  teleport->add_option("--alpha", opt.alpha, "Amplitude of |0> as re,im")->capture_default_str();
  teleport->add_option("--beta", opt.beta, "Amplitude of |1> as re,im")->capture_default_str();

  auto* dj = app.add_subcommand("dj", "Deutsch-Jozsa on a constant or balanced oracle");
  add_common(dj, opt);
  dj->add_option("--n", opt.n, "Argument register width");
  dj->add_option("--oracle", opt.config.oracle, "Truth-table file")->check(CLI::ExistingFile);
  dj->add_option("--function", opt.config.function, "Generated oracle: constant0 | constant1 | balanced")
      ->check(CLI::IsMember({"constant0", "constant1", "balanced"}));

  auto* simon = app.add_subcommand("simon", "Simon's algorithm with GF(2) period recovery");
  add_common(simon, opt);
  simon->add_option("--n", opt.n, "Argument register width");
  simon->add_option("--oracle", opt.config.oracle, "Truth-table file")->check(CLI::ExistingFile);
  simon->add_option("--secret", opt.config.secret, "Hidden period as a bit-string (generates an oracle)");
  simon->add_option("--max-samples", opt.config.max_samples, "Sample budget per trial")->capture_default_str();

  auto* grover = app.add_subcommand("grover", "Grover search over 2^n items");
  add_common(grover, opt);
  grover->add_option("--n", opt.n, "Register width")->required();
  grover->add_option("--marked", opt.marked, "Comma-separated marked indices")->required();

  auto* measure = app.add_subcommand("measure", "Measure a Pauli-product observable on a state");
  add_common(measure, opt);
  measure->add_option("--observable", opt.config.observable, "Pauli product, e.g. Z,I")->required();
  measure->add_option("--state", opt.config.state, "Amplitudes as re,im;re,im;...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : postsim::cli::kExitUsage;
  }

  RunConfig& config = opt.config;
  try {
    if (app.got_subcommand(teleport)) {
      config.command = Command::Teleport;
      config.alpha = postsim::cli::parse_complex(opt.alpha);
      config.beta = postsim::cli::parse_complex(opt.beta);
    } else if (app.got_subcommand(dj)) {
      config.command = Command::Dj;
    } else if (app.got_subcommand(simon)) {
      config.command = Command::Simon;
    } else if (app.got_subcommand(grover)) {
      config.command = Command::Grover;
      config.marked = parse_marked(opt.marked);
    } else {
      config.command = Command::Measure;
    }
    config.mode = postsim::parse_semantics_mode(opt.mode);
    if (opt.n != 0) config.n = opt.n;

    const postsim::cli::RunReport report = postsim::cli::run(config);
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';

    const std::string text =
        postsim::cli::emit_report(report, opt.format == "text" ? ReportFormat::Text : ReportFormat::Json);
    if (opt.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(opt.output, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << opt.output << '\n';
        return postsim::cli::kExitUsage;
      }
      out << text;
    }
    return report.exit_code;
  } catch (const postsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return postsim::cli::kExitUsage;
  }
}
