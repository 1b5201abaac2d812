#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>

#include "isopar/geometry.hpp"

namespace isopar::cli {

enum class Command { Catalog, Verify, Spectrum, Focal, Identity, Flow };
enum class Format { Json, Csv, Text };

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Fixed tolerances for checks without a command-line override.
inline constexpr double kTolMeanCurvature = 1e-6;
inline constexpr double kTolSymmetry = 1e-10;
inline constexpr double kTolLevel = 1e-10;
inline constexpr double kTolFocalShape = 1e-5;
inline constexpr double kTolFocalTrace = 1e-6;
inline constexpr double kTolFocalValue = 1e-9;
inline constexpr double kTolFlow = 1e-6;

struct RunConfig {
  Command command = Command::Catalog;
  std::string family;
  double level = 0.0;
  int samples = 10;
  std::uint64_t seed = kDefaultSeed;
  /// Empty writes to the output stream passed to run().
  std::string output;
  Format format = Format::Json;
  double tol_spectral = 1e-7;
  double tol_identity = 1e-9;
  /// Arc length for `flow`.
  double arc = std::numbers::pi / 8.0;
  /// Parallel times per base point for `identity`.
  int parallel_times = 10;
};

/// Runs one pipeline. Returns 0 when every check passes, 1 when one fails,
/// 2 on a usage error (including an unknown family, reported on `err` with
/// the catalog names).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand plus flags) and calls run(). ISOPAR_SEED, when
/// set, replaces the default seed; --seed wins over both.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command command);

}  // namespace isopar::cli
