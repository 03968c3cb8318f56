#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qpencil/problem.hpp"

namespace qpencil::cli {

/// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitInvariant = 3;

/// Runs `qpencil <subcommand> <problem.json> [options]`. `args` excludes the program name.
/// CSV goes to `out` unless --output is given; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Eigenvalue window used when --window is absent: the whole-line default window for the whole
/// line, an enlarged Galerkin bound otherwise.
std::pair<double, double> eigen_window(const Problem& problem);

struct CheckItem {
  std::string name;
  bool pass;
  double value;
  double limit;
};

/// The invariant suite behind `check`.
std::vector<CheckItem> check_suite(const Problem& problem);

}  // namespace qpencil::cli
