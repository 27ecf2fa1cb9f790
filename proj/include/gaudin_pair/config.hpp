#ifndef GAUDIN_PAIR_CONFIG_HPP
#define GAUDIN_PAIR_CONFIG_HPP

// Run configuration. One file describes one scheme:
//
//   # comment
//   mode = degenerate
//   g = 1.0
//   seed = 20080613
//   pairs = 0..2
//   [level]
//   omega = 1
//   epsilon = 0.0
//   c = 0.447214
//   [level]
//   ...
//
// Top-level keys: mode, g, command, pairs, format, out, seed, tol_newton,
// tol_sep, seeds_per_pair, max_iterations, perturb_roots. Level keys: omega,
// epsilon, c.

#include <optional>
#include <string>
#include <vector>

#include "gaudin_pair/bethe.hpp"

namespace gaudin_pair {

enum class Command { verify, solve, spectrum, oracle, compare };
enum class OutputFormat { csv, table };

std::string to_string(Command command);
Command parse_command(const std::string& text);
OutputFormat parse_format(const std::string& text);

struct PairRange {
  int first = 0;
  int last = 0;
};

/// "N" or "N..M".
PairRange parse_pair_range(const std::string& text);

struct RunConfig {
  LevelScheme scheme;
  Command command = Command::verify;
  /// Whole pair space when unset.
  std::optional<PairRange> pairs;
  SolverOptions solver;
  /// Test fixture: shifts every Bethe root before states are built.
  double perturb_roots = 0.0;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;
  /// Informational messages produced while loading (normalization).
  std::vector<std::string> log;

  PairRange pair_range() const;
};

/// Invalid configuration. Syntax errors carry a 1-based line and column;
/// scheme violations carry the invariant name and 1-based level.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0, std::string invariant = {}, int level = 0)
      : DomainError(what), line_(line), column_(column), invariant_(std::move(invariant)), level_(level) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& invariant() const noexcept { return invariant_; }
  int level() const noexcept { return level_; }

 private:
  int line_;
  int column_;
  std::string invariant_;
  int level_;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<inline>");
RunConfig load_config(const std::string& path);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_CONFIG_HPP
