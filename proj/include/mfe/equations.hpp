#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfe/morphisms.hpp"

namespace mfe {

/// x -> <a, x> + b on Z^d.
struct AffineForm {
  ComplexVector a;
  Complex b{};
};

/// coef * prod_i z_i^{x_i} * prod_j (<a_j, x> + b_j).
struct ExpPolyTerm {
  Complex coef{1.0, 0.0};
  ComplexVector base;
  std::vector<AffineForm> factors;
};

/// A complex-valued function on a carrier: a dense table on finite monoids,
/// an exponential polynomial on lattices. Both representations are closed
/// under linear combinations, pointwise products, composition with sigma and
/// left translation.
class ScalarFunction {
 public:
  static ScalarFunction zero(const Carrier &c);
  static ScalarFunction dense(const FiniteMonoid &m, ComplexVector values);
  static ScalarFunction lattice(const LatticeGroup &g, std::vector<ExpPolyTerm> terms);
  static ScalarFunction constant(const Carrier &c, Complex value);
  static ScalarFunction from(const MultiplicativeFunction &chi);
  static ScalarFunction from(const AdditiveFunction &a);

  const Carrier &carrier() const { return carrier_; }
  bool is_dense() const { return carrier_.is_finite(); }
  const ComplexVector &values() const { return values_; }
  const std::vector<ExpPolyTerm> &terms() const { return terms_; }

  Complex operator()(const Point &x) const;

  /// x -> this(sigma(x)).
  ScalarFunction compose(const InvolutiveAutomorphism &sigma) const;
  /// y -> this(x0 * y).
  ScalarFunction left_translate(const Point &x0) const;
  /// Largest modulus over the carrier (finite) or the sample box (lattice).
  double sup_norm(int box = kDefaultBox) const;

  ScalarFunction &operator+=(const ScalarFunction &o);
  ScalarFunction &operator*=(Complex s);

  friend ScalarFunction operator+(ScalarFunction a, const ScalarFunction &b) { return a += b; }
  friend ScalarFunction operator-(ScalarFunction a, const ScalarFunction &b) {
    return a += b * Complex{-1.0, 0.0};
  }
  friend ScalarFunction operator*(ScalarFunction a, Complex s) { return a *= s; }
  friend ScalarFunction operator*(Complex s, ScalarFunction a) { return a *= s; }
  friend ScalarFunction operator*(const ScalarFunction &a, const ScalarFunction &b);

 private:
  explicit ScalarFunction(Carrier c) : carrier_(std::move(c)) {}
  Carrier carrier_;
  ComplexVector values_;
  std::vector<ExpPolyTerm> terms_;
};

ScalarFunction operator*(const ScalarFunction &a, const MultiplicativeFunction &chi);
inline ScalarFunction operator*(const MultiplicativeFunction &chi, const ScalarFunction &a) {
  return a * chi;
}

enum class EquationId { SineAddition, MuSineSubtraction, Wilson, Main, Application };

const char *equation_name(EquationId eq);
std::optional<EquationId> parse_equation(std::string_view name);
/// Slot names the equation reads, e.g. {"f", "g", "h"} for MAIN.
std::vector<std::string> required_slots(EquationId eq);

struct Slots {
  std::optional<ScalarFunction> f, g, h, k, l;

  const std::optional<ScalarFunction> &get(std::string_view name) const;
  std::optional<ScalarFunction> &get(std::string_view name);
};

/// Left side minus right side at (x, y):
///   SINE_ADDITION        f(xy) - f(x)g(y) - f(y)g(x)
///   MU_SINE_SUBTRACTION  mu(y)k(x sigma(y)) - k(x)l(y) + k(y)l(x)
///   WILSON               f(xy) + mu(y)f(sigma(y)x) - 2f(x)g(y)
///   MAIN                 f(xy) - mu(y)f(sigma(y)x) - g(x)h(y)
///   APPLICATION          f(xy) + mu(y)g(sigma(y)x) - h(x)h(y)
Complex residual(EquationId eq, const Slots &slots, const WeightFunction &mu,
                 const Point &x, const Point &y);

struct Scope {
  bool all_pairs = true;
  int box = kDefaultBox;

  static Scope all() { return {}; }
  static Scope sample_box(int b) { return {false, b}; }
  static Scope default_for(const Carrier &c) {
    return c.is_finite() ? all() : sample_box(kDefaultBox);
  }
};

struct ResidualScan {
  double max = 0.0;
  Point x;
  Point y;
};

/// Scans every pair in scope (row-major over the carrier sample) and keeps the
/// first pair attaining the maximum modulus.
ResidualScan scan_residual(EquationId eq, const Slots &slots, const WeightFunction &mu,
                           const Scope &scope);

double max_residual(EquationId eq, const Slots &slots, const WeightFunction &mu,
                    const Scope &scope);

/// h_e = (h + mu h o sigma)/2 and h_o = (h - mu h o sigma)/2.
std::pair<ScalarFunction, ScalarFunction> mu_even_odd(const ScalarFunction &h,
                                                      const WeightFunction &mu);

std::string point_str(const Point &p);

}  // namespace mfe
