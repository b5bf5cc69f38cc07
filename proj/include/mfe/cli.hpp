#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfe/analysis.hpp"

namespace mfe::cli {

/// Malformed carrier or values file; line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string &what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// Carrier file contents. Names label elements in reports and are otherwise
/// ignored.
struct CarrierFile {
  Carrier carrier;
  std::vector<std::string> names;
};

/// Grammar, one directive per line, `#` to end of line is a comment:
///   finite <n> | lattice <d>          first line
///   <n rows of n indices>             finite only
///   identity <i>                      finite only
///   names <n labels>                  optional, finite only
///   generators <indices>              optional, finite only
CarrierFile parse_carrier_file(std::string_view text);
Carrier parse_carrier(std::string_view text);
std::string render_carrier(const CarrierFile &file);
std::string render_carrier(const Carrier &c);

/// Triple values file: `<slot> <index> <re> <im>` per line, slot in
/// {f, g, h, k, l}. Every slot that appears must list every element once.
Slots parse_values(std::string_view text, const FiniteMonoid &m);

// ---------------------------------------------------------------------------
// Family sweep

struct SweepOptions {
  VerifyOptions verify;
  std::optional<EquationId> equation;  // all equations when empty
  // Lattice carriers only: the character and additive function to use.
  std::optional<MultiplicativeFunction> chi;
  std::optional<AdditiveFunction> additive;
};

struct SweepRow {
  std::string family, case_label;
  EquationId equation = EquationId::Main;
  int chi_index = -1, chi2_index = -1;  // into the character list; -1 on lattices
  std::vector<std::pair<std::string, Complex>> constants;
  int theta_index = -1;                 // into sweep_thetas(); -1 when unused
  double max_residual = 0.0;
  bool ok = false;
  bool degenerate = false;
  std::string message;                  // warning or failure reason
  std::optional<SolutionTriple> triple;
};

/// The three values each free constant takes in a sweep.
const std::vector<Complex> &sweep_constants();

/// Nullspace elements substituted for theta: 0, the first basis element, and
/// a combination of all of them. Only 0 on lattices.
std::vector<ScalarFunction> sweep_thetas(const WeightFunction &mu);

/// Constructs every applicable family member for one (sigma, mu) over every
/// character and the constant sweep. Constructor failures are reported as
/// rows with ok = false, never thrown.
std::vector<SweepRow> sweep_families(const WeightFunction &mu, const SweepOptions &opts);

// ---------------------------------------------------------------------------

/// Parses a complex literal: `re`, `re:im`, or `re+imi` / `re-imi` / `imi`.
Complex parse_complex(std::string_view s);

/// Rounds to 12 significant digits; -0 becomes 0.
double round12(double v);

/// Runs one command. `args` excludes the program name. Returns the exit code:
/// 0 success, 1 usage, 2 validation, 3 verification failure.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace mfe::cli
