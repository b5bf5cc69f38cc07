#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Core>

namespace mfe {

using Complex = std::complex<double>;
using Index = int;
using LatticePoint = Eigen::VectorXi;

// A carrier element: an index into a finite monoid, or an integer vector of a
// lattice group.
using Point = std::variant<Index, LatticePoint>;

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr int kDefaultBox = 5;

enum class Errc {
  NotAssociative,
  NoIdentity,
  IndexOutOfRange,
  ZeroCharacter,
  InvalidMorphism,
  NotAdmissible,
  CarrierMismatch,
  MissingSlot,
  InvalidParams,
  BranchMismatch,
  NotSquaresGenerated,
  SideConditionViolated,
  ThetaNotInNullspace,
  PreconditionViolated,
  CarrierTooLarge,
  ResidualTooLarge,
  SyntaxError,
};

const char *errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mfe
