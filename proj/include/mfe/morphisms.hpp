#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfe/carrier.hpp"
#include "mfe/exact.hpp"

namespace mfe {

class InvolutiveAutomorphism;

/// chi with chi(xy) = chi(x) chi(y), chi != 0. On a finite monoid the values
/// are exact (zero or a root of unity); on Z^d, chi(x) = prod_i z_i^{x_i}
/// with every base z_i nonzero.
class MultiplicativeFunction {
 public:
  static MultiplicativeFunction finite(const FiniteMonoid &m,
                                       std::vector<ExactValue> values);
  static MultiplicativeFunction lattice(const LatticeGroup &g, ComplexVector bases);
  static MultiplicativeFunction one(const Carrier &c);

  const Carrier &carrier() const { return carrier_; }
  Complex operator()(const Point &x) const;
  const ExactValue &exact(Index x) const { return values_[x]; }
  const std::vector<ExactValue> &exact_values() const { return values_; }
  const ComplexVector &bases() const { return bases_; }

  /// Pointwise product; still multiplicative.
  MultiplicativeFunction operator*(const MultiplicativeFunction &o) const;
  /// chi o sigma.
  MultiplicativeFunction compose(const InvolutiveAutomorphism &sigma) const;

  /// Exact on finite carriers; lattice bases compared to 1e-12 relative.
  bool equals(const MultiplicativeFunction &o) const;

  /// Dense values (finite carriers only).
  ComplexVector dense() const;
  std::string str() const;

 private:
  MultiplicativeFunction(Carrier c) : carrier_(std::move(c)) {}  // NOLINT
  Carrier carrier_;
  std::vector<ExactValue> values_;
  ComplexVector bases_;
};

/// sigma with sigma(xy) = sigma(x) sigma(y), sigma o sigma = id. Finite: an
/// element permutation. Lattice: an integer matrix S with S*S = I acting on
/// column vectors.
class InvolutiveAutomorphism {
 public:
  static InvolutiveAutomorphism identity(const Carrier &c);
  static InvolutiveAutomorphism finite(const FiniteMonoid &m, std::vector<Index> perm);
  static InvolutiveAutomorphism lattice(const LatticeGroup &g, Eigen::MatrixXi matrix);

  const Carrier &carrier() const { return carrier_; }
  Point operator()(const Point &x) const;
  Index operator()(Index x) const { return perm_[x]; }
  const std::vector<Index> &perm() const { return perm_; }
  const Eigen::MatrixXi &matrix() const { return matrix_; }
  bool is_identity() const;
  std::string str() const;

  friend bool operator==(const InvolutiveAutomorphism &a,
                         const InvolutiveAutomorphism &b) {
    return a.carrier_ == b.carrier_ && a.perm_ == b.perm_ && a.matrix_ == b.matrix_;
  }

 private:
  InvolutiveAutomorphism(Carrier c) : carrier_(std::move(c)) {}  // NOLINT
  Carrier carrier_;
  std::vector<Index> perm_;
  Eigen::MatrixXi matrix_;
};

/// A multiplicative mu bound to the sigma it is admissible for:
/// mu(x sigma(x)) = 1 for every x. Construction validates admissibility.
class WeightFunction {
 public:
  WeightFunction(MultiplicativeFunction mu, InvolutiveAutomorphism sigma);
  static WeightFunction trivial(const Carrier &c);

  const MultiplicativeFunction &mu() const { return mu_; }
  const InvolutiveAutomorphism &sigma() const { return sigma_; }
  const Carrier &carrier() const { return mu_.carrier(); }
  Complex operator()(const Point &x) const { return mu_(x); }

 private:
  MultiplicativeFunction mu_;
  InvolutiveAutomorphism sigma_;
};

/// A(xy) = A(x) + A(y). Finite carriers carry dense values (necessarily zero
/// for a valid A); lattice carriers carry a in C^d with A(x) = <a, x>.
/// Elements of `excluded` (an ideal I_chi) lie outside the domain and read 0.
class AdditiveFunction {
 public:
  static AdditiveFunction zero(const Carrier &c);
  static AdditiveFunction lattice(const LatticeGroup &g, ComplexVector a);

  const Carrier &carrier() const { return carrier_; }
  Complex operator()(const Point &x) const;
  const ComplexVector &coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.isZero(0.0); }
  /// A o sigma == -A (symbolic on lattices, full scan on finite carriers).
  bool is_sigma_odd(const InvolutiveAutomorphism &sigma) const;

  AdditiveFunction restricted(CharacterIdeal excluded) const;
  const std::optional<CharacterIdeal> &excluded() const { return excluded_; }

 private:
  AdditiveFunction(Carrier c) : carrier_(std::move(c)) {}  // NOLINT
  Carrier carrier_;
  ComplexVector coeffs_;
  std::optional<CharacterIdeal> excluded_;
};

/// Every multiplicative chi != 0, each exactly once, in lexicographic value
/// order (chi == 1 first).
std::vector<MultiplicativeFunction> enumerate_multiplicative(const FiniteMonoid &m);

/// Every involutive automorphism, lexicographic by permutation (identity first).
std::vector<InvolutiveAutomorphism> enumerate_involutive_automorphisms(
    const FiniteMonoid &m);

/// Admissible weights for sigma, in the order of enumerate_multiplicative.
std::vector<WeightFunction> enumerate_admissible_mu(const FiniteMonoid &m,
                                                    const InvolutiveAutomorphism &sigma);

/// Zero set of chi. Throws ZeroCharacter for chi == 0.
CharacterIdeal character_ideal(const MultiplicativeFunction &chi);

/// Description of the space of additive functions on a carrier.
struct AdditiveSpace {
  int dimension = 0;
  /// Columns are the a-vectors spanning the lattice family; empty when finite.
  ComplexMatrix basis;
  /// Why the space is what it is.
  std::string proof;
};

/// Finite carrier: the space is {0}, proved per element from x^m = x^(m+p).
/// Lattice: A(x) = <a, x>, optionally restricted to A o sigma = -A.
AdditiveSpace additive_functions(const Carrier &c,
                                 const std::optional<CharacterIdeal> &restrict_to = {},
                                 const InvolutiveAutomorphism *odd_under = nullptr);

/// Independent route for finite carriers: dimension of the solution space of
/// the linear system A(xy) - A(x) - A(y) = 0 over the domain.
int additive_dimension_by_linear_solve(
    const FiniteMonoid &m, const std::optional<CharacterIdeal> &restrict_to = {});

enum class Branch { Distinct, Equal };
const char *branch_name(Branch b);

/// mu * (chi o sigma), the partner character of chi.
MultiplicativeFunction twisted(const MultiplicativeFunction &chi, const WeightFunction &mu);

/// Equal iff chi == mu * (chi o sigma).
Branch sigma_branch(const MultiplicativeFunction &chi, const WeightFunction &mu);

/// (mu - 1) chi == (mu - 1) (chi o sigma) pointwise.
bool wilson_third_condition(const MultiplicativeFunction &chi, const WeightFunction &mu);

/// Integer power with exact dyadic behaviour for dyadic bases.
Complex ipow(Complex base, long exponent);

}  // namespace mfe
