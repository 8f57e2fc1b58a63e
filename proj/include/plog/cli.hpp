#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace plog::cli {

// Process exit codes. 0-4 are a stable contract.
enum class ExitCode : int {
  Ok = 0,
  Infeasible = 1,
  BadInput = 2,
  ResourceCap = 3,
  UndefinedConditional = 4,
  NumericalFailure = 5,
};

enum class Format { Text, Csv };

struct RunConfig {
  std::string subcommand;
  std::string kb_path;
  std::optional<std::string> prior_path;  // uniform over worlds when empty
  double tol = 1e-8;
  std::size_t world_cap = 20;
  Format format = Format::Text;
};

// Twelve decimals.
std::string format_probability(double p);

// Entry point of the `plog` tool. Reads PLOG_WORLD_CAP from the environment.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plog::cli
