#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symflow/types.hpp"

namespace symflow {

enum class Command { VerifySymmetries, Classify, Reduce, Invert, Simulate, Audit };

std::string command_name(Command c);
/// Throws ConfigError for an unknown name.
Command parse_command(const std::string& name);

struct Tolerances {
  double defect = 1e-7;
  double residual = 1e-5;
  double newton = 1e-12;
};

struct GridSpec {
  double t0 = 1.0;
  double t1 = 2.0;
  double x0 = 0.0;
  double x1 = 1.0;
  int nx = 100;
  double cfl = 0.45;
};

struct ReduceSpec {
  double a = 1.0;
  double p0 = 0.0;
  State state0{0.0, 1.0};
  double p_end = 0.5;
};

struct Campaign {
  Command command = Command::VerifySymmetries;
  FluidParams params;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  /// Catalog ids to exercise; empty means every entry.
  std::vector<std::string> catalog;
  GridSpec grid;
  ReduceSpec reduce;
  /// Directory for CSV artifacts; empty disables them.
  std::string out_dir;
};

/// Parses a JSON configuration. Throws ConfigError naming the offending
/// field path, unknown catalog id, or bad value.
Campaign parse_config(const std::string& json_text);
/// Throws ConfigError when the file cannot be read.
Campaign load_config(const std::string& path);

enum class CheckStatus { Pass, Flag, Fail };

std::string status_name(CheckStatus s);

struct Check {
  std::string name;
  /// Mathematical statement the check exercises.
  std::string anchor;
  /// Measured value; NaN when the check crashed.
  double value = 0;
  double tol = 0;
  CheckStatus status = CheckStatus::Pass;
  std::string note;
};

struct Report {
  Command command = Command::VerifySymmetries;
  std::uint64_t seed = 0;
  FluidParams params;
  std::vector<Check> checks;

  int count(CheckStatus s) const;
  bool ok() const { return count(CheckStatus::Fail) == 0; }
};

inline constexpr const char* kVersion = "0.1.0";

/// Runs every check of the campaign's command. A check that throws is
/// recorded as failed with the message as its note.
Report run(const Campaign& campaign);

enum class ReportFormat { Json, CsvSummary };

/// Deterministic serialization: sorted keys, shortest round-trip floats.
std::string format_report(const Report& report, ReportFormat format);
/// Writes report.json or report.csv into dir. Throws ConfigError when the
/// file cannot be written. Returns the path written.
std::string emit_report(const Report& report, ReportFormat format, const std::string& dir);

}  // namespace symflow
