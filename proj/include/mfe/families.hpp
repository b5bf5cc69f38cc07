#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfe/equations.hpp"

namespace mfe {

/// Inputs shared by every family constructor. Each constructor reads the
/// subset it needs and validates it.
struct FamilyParams {
  Complex c{}, c1{}, c2{}, alpha{}, b{}, kappa{};
  std::optional<MultiplicativeFunction> chi;
  std::optional<MultiplicativeFunction> chi2;  // second character, sine addition only
  std::optional<AdditiveFunction> A;
  std::optional<ScalarFunction> theta;         // element of the nullspace
  std::optional<ScalarFunction> arbitrary_g;   // Wilson ZERO case
  std::optional<Branch> branch;                // filled in by the constructor
};

struct VerifyOptions {
  double tolerance = kDefaultTolerance;
  int box = kDefaultBox;
};

/// A family member together with the evidence that it solves its equation.
struct SolutionTriple {
  Slots slots;
  EquationId equation = EquationId::Main;
  std::string family;      // e.g. "main"
  std::string case_label;  // e.g. "DISTINCT"
  FamilyParams params;
  WeightFunction weight;
  double max_residual = 0.0;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

enum class SineAdditionCase { DistinctChars, EqualChars };
enum class MuSineCase { Distinct, Equal };
enum class WilsonCase { Zero, EvenScaled, Third, Additive };
enum class MainCase { Distinct, Equal };
enum class ApplicationCase { A, B };

const char *case_name(SineAdditionCase c);
const char *case_name(MuSineCase c);
const char *case_name(WilsonCase c);
const char *case_name(MainCase c);
const char *case_name(ApplicationCase c);

/// DISTINCT_CHARS: g = (chi+chi2)/2, f = c(chi-chi2), c != 0.
/// EQUAL_CHARS:    g = chi, f = chi*A (zero on I_chi).
SolutionTriple sine_addition_family(SineAdditionCase kase, const FamilyParams &p,
                                    const VerifyOptions &opts = {});

/// With u = (chi + mu chi o sigma)/2 and v = (chi - mu chi o sigma)/2:
/// DISTINCT: k = c2 v, l = u + c1 v (c2 != 0).
/// EQUAL:    k = chi A, l = chi (1 + c1 A), A o sigma = -A.
SolutionTriple mu_sine_subtraction_family(MuSineCase kase, const WeightFunction &mu,
                                          const FamilyParams &p,
                                          const VerifyOptions &opts = {});

/// ZERO: f = 0, g = p.arbitrary_g.  EVEN_SCALED: g = u, f = alpha g.
/// THIRD: g = u, f = (c + alpha/2) chi - (c - alpha/2) chi o sigma, valid
/// when (mu - 1) chi == (mu - 1) chi o sigma.
/// ADDITIVE: g = chi, f = chi (A + alpha), chi == mu chi o sigma.
SolutionTriple wilson_family(WilsonCase kase, const WeightFunction &mu,
                             const FamilyParams &p, const VerifyOptions &opts = {});

/// DISTINCT: h = c1 v, g = c u + c2 v, f = theta + (c1/2)(c v + c2 u).
/// EQUAL:    h = chi A, g = chi (c + c2 A), f = theta + chi A (c/2 + c2 A/4).
SolutionTriple main_family(MainCase kase, const WeightFunction &mu, const FamilyParams &p,
                           const VerifyOptions &opts = {});

/// A: h = alpha (u + c2 v), f = [alpha^2 (1+c2^2) u + 2 alpha^2 c2 v + theta]/2,
///    g = [alpha^2 (1-c2^2) u - theta]/2.
/// B: h = alpha chi (1 + kappa A),
///    f = [alpha^2 chi (1 + 2 kappa A + kappa^2 A^2/2) + theta]/2,
///    g = [alpha^2 chi (1 - kappa^2 A^2/2) - theta]/2.
SolutionTriple application_family(ApplicationCase kase, const WeightFunction &mu,
                                  const FamilyParams &p, const VerifyOptions &opts = {});

/// Constants of the alternative (alpha, c1, c2) parameterization of the
/// application families. Only the slices alpha^2 = 1 (case A) and
/// kappa = 1/2 (case B) have such a representation.
struct PrintedApplicationConstants {
  Complex alpha, c1, c2;
};
std::optional<PrintedApplicationConstants> printed_application_constants(
    const SolutionTriple &t);

/// theta(xy) - mu(y) theta(sigma(y) x) == 0 on the scope.
bool in_nullspace(const ScalarFunction &theta, const WeightFunction &mu,
                  const VerifyOptions &opts = {});

/// (chi + mu chi o sigma)/2 and (chi - mu chi o sigma)/2.
std::pair<ScalarFunction, ScalarFunction> even_odd_characters(const MultiplicativeFunction &chi,
                                                              const WeightFunction &mu);

}  // namespace mfe
