#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfe/families.hpp"

namespace mfe {

enum class NullspaceMethod { Auto, Exact, Float };

/// Basis of {theta : theta(xy) = mu(y) theta(sigma(y) x) for all x, y}.
struct NullspaceBasis {
  FiniteMonoid carrier;
  WeightFunction weight;
  std::vector<ScalarFunction> basis;
  int dimension = 0;
  /// Exact path: reduced-echelon basis over Gaussian rationals.
  /// Float path: orthonormal basis from the SVD.
  bool exact = false;

  /// Basis vectors as columns (n x dimension).
  ComplexMatrix matrix() const;
};

/// The n^2 x n matrix of theta -> [theta(xy) - mu(y) theta(sigma(y) x)]_(x,y),
/// row index x*n + y.
ComplexMatrix main_operator_matrix(const FiniteMonoid &m, const WeightFunction &mu);

/// Auto takes the exact path when every mu value is in {1, -1, i, -i} and
/// falls back to the float path if exact arithmetic overflows.
NullspaceBasis nullspace_basis(const FiniteMonoid &m, const WeightFunction &mu,
                               NullspaceMethod method = NullspaceMethod::Auto);

// ---------------------------------------------------------------------------

inline constexpr int kOracleMaxCarrier = 12;

struct OracleOptions {
  int max_iterations = 100;
  double damping = 1e-8;              // Tikhonov term of the Newton step
  double converge_tolerance = 1e-12;  // on the constraint residual
  double soundness_tolerance = 1e-8;  // independent MAIN re-verification
  double classify_tolerance = 1e-6;
  double dedup_tolerance = 1e-6;
};

struct OracleSolution {
  ComplexVector f, g, h;  // gauge fixed: h(p) = 1 at its first max-modulus point,
                          // f orthogonal to the nullspace
  double residual = 0.0;  // max |MAIN residual| over all pairs
  bool classified = false;
  std::string tag;        // "main/DISTINCT" or "UNCLASSIFIED"
  int chi_index = -1;     // into enumerate_multiplicative(carrier)
  Complex c, c1, c2;      // fitted family constants
  double fit_error = 0.0;
};

struct OracleReport {
  std::vector<OracleSolution> found;
  int starts = 0;
  std::uint64_t seed = 0;
  int converged = 0;             // starts that reached the rank-one set
  int image_dimension = 0;       // dim of the image of f -> F
  int nullspace_dimension = 0;   // degenerate solutions: g or h == 0, f in here

  std::size_t unclassified() const;
};

/// Searches for nondegenerate MAIN solutions from random starts and
/// classifies each against the main families. Throws CarrierTooLarge for
/// carriers beyond kOracleMaxCarrier elements.
OracleReport oracle_solve_main(const FiniteMonoid &m, const WeightFunction &mu, int starts,
                               std::uint64_t seed, const OracleOptions &opts = {});

// ---------------------------------------------------------------------------

struct ClauseResult {
  std::string name;
  bool pass = false;
  double max_violation = 0.0;
  std::optional<Point> witness_x, witness_y;
};

struct StructureReport {
  std::vector<ClauseResult> clauses;
  bool g_at_identity_zero = false;
  std::optional<Complex> b;  // g = b h when g(e) = 0

  bool all_pass() const;
  const ClauseResult *find(const std::string &name) const;
};

/// Structural properties of a MAIN solution with g != 0 and h != 0:
///   odd               h(sigma(x)) = -mu(sigma(x)) h(x)
///   central           h(xy) = h(yx)
///   sine_subtraction  h satisfies the mu-sine subtraction law (companion
///                     reconstructed from the law itself at a point where h != 0)
///   g_equals_bh       when g(e) = 0: g = b h, b != 0
///   companion_g       when g(e) != 0: g/g(e) is a companion of h
StructureReport verify_main_structure(const Slots &slots, const WeightFunction &mu,
                              const VerifyOptions &opts = {});
StructureReport verify_main_structure(const SolutionTriple &t, const VerifyOptions &opts = {});

}  // namespace mfe
