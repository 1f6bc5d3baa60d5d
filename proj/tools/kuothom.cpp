#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "kuothom/cli.hpp"
#include "kuothom/errors.hpp"
#include "kuothom/text.hpp"

namespace fs = std::filesystem;
using namespace kuothom;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw cli::ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Options {
  std::string germ, sigma, config, out;
  std::optional<std::uint64_t> seed;
};

cli::TaskConfig load_config(const Options& o) {
  cli::TaskConfig c = o.config.empty() ? cli::TaskConfig{} : cli::parse_config_text(read_file(o.config));
  if (o.seed) c.seed = o.seed;
  // Arc files are named relative to the config file.
  if (c.arcs.file && !o.config.empty() && fs::path(*c.arcs.file).is_relative())
    c.arcs.file = (fs::path(o.config).parent_path() / *c.arcs.file).string();
  return c;
}

/// A ParseError tagged with the file it came from.
class FileParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
auto in_file(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw FileParseError(path + ": " + e.what());
  }
}

cli::Report run(const std::string& command, const Options& o) {
  const cli::TaskConfig config = load_config(o);
  if (command == "example") return cli::cmd_example(config);
  const MapGerm f = in_file(o.germ, [&] { return cli::parse_germ(read_file(o.germ)); });
  if (command == "analyze") return cli::cmd_analyze(f, config);
  if (command == "arcs") {
    if (!config.arcs.file) return cli::cmd_arcs(f, config);
    const auto arcs = in_file(*config.arcs.file, [&] { return parse_arcs(read_file(*config.arcs.file)); });
    return cli::cmd_arcs(f, config, std::span<const Arc>(arcs));
  }
  const SigmaSet sigma = in_file(o.sigma, [&] { return parse_sigma(read_file(o.sigma), f.n()); });
  return cli::cmd_relative(f, sigma, config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kuo and Thom quantities of polynomial map germs"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON task config")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "directory for report.json and CSV files (default: JSON on stdout)");
    sub->add_option("--seed", seed, "master seed; overrides the config");
  };
  auto* analyze = app.add_subcommand("analyze", "minors, symbolic K_2/T_2 and condition verdicts");
  auto* arcs = app.add_subcommand("arcs", "exact orders of K_m and T_m along arcs");
  auto* relative = app.add_subcommand("relative", "conditions relative to a closed set Sigma");
  auto* example = app.add_subcommand("example", "the built-in example f = (x - y^2, x^2)");
  for (auto* sub : {analyze, arcs, relative}) {
    sub->add_option("--germ", o.germ, "germ file")->required()->check(CLI::ExistingFile);
    add_common(sub);
  }
  relative->add_option("--sigma", o.sigma, "Sigma file")->required()->check(CLI::ExistingFile);
  add_common(example);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kInvalidInput;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->count("--seed") > 0) o.seed = seed;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const cli::Report report = run(command, o);
    if (o.out.empty()) std::cout << cli::render(report);
    else cli::write_report(report, o.out);
    if (report.exit_code != cli::kOk) std::cerr << "error: " << report.message << "\n";
    return report.exit_code;
  } catch (const FileParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return cli::kInvalidInput;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return cli::kInvalidInput;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return cli::kPrecondition;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return cli::kPrecondition;
  } catch (const InconsistencyError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return cli::kInconsistency;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return cli::kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInconsistency;
  }
}
