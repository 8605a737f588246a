#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stokes_spectra/config.hpp"

namespace stokes_spectra {

/// Exit codes shared by the library front ends.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numerical = 2 };

inline constexpr int csv_schema_version = 1;
inline constexpr int json_schema_version = 1;

struct CommandOutput {
  int exit_code = exit_ok;
  std::string status;  // "ok", "invalid_argument", "numerical_failure", "not_converged", "blow_up"
  std::string message;  // empty on success
  /// (file name, content) in write order. The JSON report is always last.
  std::vector<std::pair<std::string, std::string>> files;
};

/// dispersion, resonance, stokes, bands, figure8, isola, wbscan, kato, evolve
const std::vector<std::string>& commands();

/// Runs one pipeline entirely in memory. Module errors do not escape:
/// they become a JSON report with an `error` field and a nonzero code.
/// An unknown command throws InvalidArgument.
CommandOutput run_command(const std::string& command, const RunConfig& config, int jobs = 1);

/// Creates the directory if needed and writes every file. Throws
/// std::runtime_error on I/O failure.
void write_outputs(const CommandOutput& output, const std::string& directory);

}  // namespace stokes_spectra
