#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fjlim/model.hpp"
#include "fjlim/types.hpp"

// Instance ingestion for the CLI and the test harness: JSON instance files
// (with optional CSV-referenced matrices), the two built-in example
// instances, assumption reporting, and the seeded random-instance generator
// behind the property campaigns.

namespace fjlim {

/// Raw, not-yet-validated model instance.
struct Instance {
  std::string name;
  Matrix w;
  Vector sigma_tilde;
  std::optional<double> sigma_max;
  std::optional<Vector> y0;
};

/// 4-agent instance with a primitive influence matrix; carries the reference
/// initial opinions (0.20, 0.50, 0.01, 0.29).
Instance builtin_ex1();

/// 4-agent instance whose influence matrix is irreducible but periodic
/// (period 2, eigenvalues -1 and 1 on the unit circle); same reference
/// initial opinions, sigma_max = 0.1.
Instance builtin_ex2();

/// Parses a JSON instance file. Keys: W (array of row arrays, or a string
/// path to a CSV file resolved relative to the instance file), sigma_tilde
/// (array), sigma_max (number, optional), y0 (array, optional). Throws
/// ParseError with row/entry coordinates.
Instance parse_instance_file(const std::string& path);

/// Built-in name ("ex1", "ex2") or path dispatch.
Instance load_instance(const std::string& name_or_path);

struct Finding {
  std::string name;
  bool ok = true;
  bool is_assumption = true;  // informational findings don't gate exit codes
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool assumptions_ok = true;
  /// Name of the first violated assumption, when any.
  std::string violated;
};

/// Checks every model assumption plus informational findings (primitivity)
/// without throwing; used by the validate command.
ValidationReport validate_instance(const Instance& instance,
                                   const ImmunityOptions& options = {});

/// Deterministic uniform generator: identical streams on every platform for
/// a given seed (the raw mt19937_64 output is specified by the standard; the
/// floating-point mapping here avoids the unspecified std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in (lo, hi]: never returns lo.
  double open_closed(double lo, double hi) { return hi - (hi - lo) * u01(); }
  /// Uniform index in [0, n).
  int index(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

/// Random instance satisfying the model assumptions by construction:
/// uniform(0, 1) entries with the ring edge i -> (i+1 mod n) floored at 0.05
/// before row normalization (forcing strong connectivity), sigma_tilde drawn
/// uniform(0.1, 1] with one coordinate forced to exactly 1, and uniform y0.
Instance random_instance(Rng& rng, int n);

/// Random square matrix with row norms controlled in (0.1 * beta, beta];
/// exercises the minimum-singular-value bound.
Matrix random_row_bounded_matrix(Rng& rng, int n, double beta);

/// Shortest decimal round-trip style formatting used for all CSV output:
/// 12 significant digits.
std::string format_number(double value);

}  // namespace fjlim
