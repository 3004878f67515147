#pragma once

// End-to-end command surface. Every run writes its artifacts plus a
// manifest.json that records the effective configuration and input digests,
// enough to rerun the command from the manifest alone.

#include <engage/chatlog.hpp>
#include <engage/ensemble.hpp>
#include <engage/netbuild.hpp>
#include <engage/synth.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace engage {

enum class Command { parse, build, metrics, classify, rank, series, compare, simulate, report };

Command parse_command(std::string_view name);
std::string_view to_string(Command command);

struct RunConfig {
  Command command = Command::report;
  std::vector<std::string> inputs;
  std::string output_dir = ".";

  // parse
  std::string profile = "whatsapp-en-dash";
  std::string tz = "UTC";
  std::int64_t slack_seconds = 0;
  std::string salt_hex;  // generated when empty, then recorded
  std::optional<std::string> prior_mapping;
  LogFormat format = LogFormat::csv;

  // windows
  std::int64_t interval_minutes = 10;
  Alignment alignment = Alignment::wall_clock;
  std::optional<Timestamp> from;
  std::optional<Timestamp> to;

  // classification and ranking
  Thresholds thresholds;
  StdMode std_mode = StdMode::population;
  AveragingMode averaging = AveragingMode::absent_as_zero;
  std::size_t top_k = 10;

  // temporal
  std::vector<UserId> users;
  std::optional<Timestamp> split;
  std::optional<double> drop_threshold;

  // simulate
  Regime regime;

  WindowSpec window_spec() const;
};

/// Process exit codes.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int usage = 2;
inline constexpr int parse = 3;
inline constexpr int schema = 4;
inline constexpr int insufficient_data = 5;
inline constexpr int io = 6;
inline constexpr int mapping_conflict = 7;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

/// Executes one command. Throws engage::Error; artifacts already written
/// stay on disk.
void run(RunConfig config, std::ostream& log);

/// Loads the configuration recorded in a manifest.
RunConfig config_from_manifest(const std::string& manifest_path);

/// Parses argv-style arguments (without the program name), runs, and maps
/// failures to exit codes with a one-line JSON diagnostic on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace engage
