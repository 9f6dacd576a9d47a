#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spi/error.hpp"
#include "spi/problem_io.hpp"

namespace spi {

struct CommandOptions {
  std::optional<Window> window;
  std::optional<double> grid_step;
  std::optional<double> tol;  // overrides the structure/identity tolerance
  std::uint64_t seed = 20240611;
  unsigned jobs = 1;

  double t = 0.0;                   // evolve, paths
  double x = 0.0;                   // paths
  std::string function = "bump";    // evolve: bump | eigen:K | atoms:<json>
  std::optional<double> modulus;    // congruence; defaults to L
  std::size_t trials = 200;         // verify: local translation trials
  std::size_t probes = 20;          // verify: path-sum and group-law probes
};

struct CommandResult {
  int exit_code = 0;
  ojson report;
  std::string csv;  // header line plus rows; empty when the command has none
};

/// 0 success, 1 validation, 2 numerical failure, 3 guard exceeded.
int exit_code_for(ErrorCode code);

CommandResult cmd_spectrum(const ProblemFile& problem, const CommandOptions& options);
CommandResult cmd_evolve(const ProblemFile& problem, const CommandOptions& options);
CommandResult cmd_verify(const ProblemFile& problem, const CommandOptions& options);
CommandResult cmd_classify(const ProblemFile& problem, const CommandOptions& options);
CommandResult cmd_paths(const ProblemFile& problem, const CommandOptions& options);
CommandResult cmd_congruence(const ProblemFile& problem, const CommandOptions& options);

/// Dispatch by name; unknown names give exit code 1.
CommandResult run_command(const std::string& name, const ProblemFile& problem, const CommandOptions& options);

/// CSV column descriptions for --help.
std::string csv_columns_help();

}  // namespace spi
