#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kuothom/arcs.hpp"
#include "kuothom/germ.hpp"
#include "kuothom/relative.hpp"

namespace kuothom::cli {

inline constexpr const char* kToolName = "kuothom";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,   ///< parse or validation error
  kPrecondition = 2,   ///< precondition violation or unsupported variant
  kInconsistency = 3,  ///< a result contradicts a guarantee
};

/// Invalid configuration value or missing mandatory setting.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ArcTask {
  unsigned count = 50;
  ArcBounds bounds;
  std::optional<std::string> file;  ///< explicit arc list instead of random arcs
};

struct CompatibilityTask {
  std::vector<std::string> g;  ///< components of the second germ
  std::vector<std::string> t{"0", "1/4", "1/2", "3/4", "1"};
  std::optional<unsigned> r;   ///< defaults to the first r
  std::optional<unsigned> m;   ///< defaults to the first m
};

struct RelativeTask {
  double ball = 0.05;
  unsigned bands = 8;
  unsigned samples = 512;
  unsigned multistart = 8;
  unsigned alpha_max = 4;
  std::optional<CompatibilityTask> compatibility;
};

/// Every tunable of a run. Numeric values must be positive; the seed is
/// mandatory for analyze, arcs and relative.
struct TaskConfig {
  std::vector<unsigned> m{2};
  std::vector<unsigned> r{1, 2, 3, 4};
  std::vector<double> radii = default_radii();
  unsigned grid = 720;
  unsigned multistart = 16;
  unsigned directions = 4096;
  double tolerance = 0.1;
  std::optional<std::uint64_t> seed;
  double horn_width = 1.0;
  unsigned ratio_samples = 10000;
  ArcTask arcs;
  RelativeTask relative;
};

/// Reads a config object; absent keys keep their defaults, unknown keys and
/// bad values throw ConfigError.
TaskConfig parse_config(const nlohmann::json& j);
TaskConfig parse_config_text(std::string_view text);
nlohmann::ordered_json config_json(const TaskConfig& config);

/// Germ file: one component per line in the polynomial grammar, with
/// optional "n: <int>" and "r: <int>" lines and '#' comments. Without "n:"
/// the dimension is the highest variable index used. Throws ParseError.
MapGerm parse_germ(std::string_view text);

struct Report {
  nlohmann::ordered_json json;
  std::vector<std::pair<std::string, std::string>> csv_files;  ///< name, content
  int exit_code = kOk;
  std::string message;  ///< stderr note for a nonzero exit code
};

Report cmd_analyze(const MapGerm& f, const TaskConfig& config);

/// Uses `arcs` when given, otherwise config.arcs.count random arcs. Exit
/// code kInconsistency when any arc gives ord K_m != ord T_m.
Report cmd_arcs(const MapGerm& f, const TaskConfig& config,
                std::optional<std::span<const Arc>> arcs = std::nullopt);

/// Throws PreconditionError when a compatibility germ has a different r-jet
/// on Sigma, UnsupportedError when Sigma is algebraic.
Report cmd_relative(const MapGerm& f, const SigmaSet& sigma, const TaskConfig& config);

/// The built-in example f = (x - y^2, x^2) end to end: symbolic K_2, T_2
/// against their reference expansions, the K_2/T_2 ratio on a polar grid,
/// analyze and arcs. The seed defaults to 7.
Report cmd_example(const TaskConfig& config);

/// Two-space indented JSON followed by a newline.
std::string render(const Report& report);

/// Writes report.json and every CSV file into `dir`, creating it.
void write_report(const Report& report, const std::filesystem::path& dir);

/// Rounds to 12 significant digits; nonfinite values become null.
nlohmann::ordered_json number(double v);

}  // namespace kuothom::cli
