#include "mfe/morphisms.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mfe/linalg.hpp"

namespace mfe {

namespace {

constexpr double kLatticeEqualityTolerance = 1e-12;

bool near(Complex a, Complex b) {
  return std::abs(a - b) <= kLatticeEqualityTolerance * std::max(1.0, std::abs(a));
}

const LatticePoint &as_lattice(const Point &p) { return std::get<LatticePoint>(p); }

void require_same_carrier(const Carrier &a, const Carrier &b) {
  if (!(a == b)) throw Error(Errc::CarrierMismatch, "maps live on different carriers");
}

}  // namespace

Complex ipow(Complex base, long exponent) {
  if (exponent < 0) {
    base = std::conj(base) / std::norm(base);
    exponent = -exponent;
  }
  Complex result{1.0, 0.0};
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// MultiplicativeFunction

MultiplicativeFunction MultiplicativeFunction::finite(const FiniteMonoid &m,
                                                      std::vector<ExactValue> values) {
  const int n = m.size();
  if (static_cast<int>(values.size()) != n)
    throw Error(Errc::IndexOutOfRange, "one value per element required");
  if (std::all_of(values.begin(), values.end(), [](auto &v) { return v.is_zero(); }))
    throw Error(Errc::ZeroCharacter, "chi vanishes identically");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (!(values[m.mul(x, y)] == values[x] * values[y]))
        throw Error(Errc::InvalidMorphism, "chi(xy) != chi(x)chi(y) at (" +
                                               std::to_string(x) + ", " +
                                               std::to_string(y) + ")");
  MultiplicativeFunction chi{Carrier(m)};
  chi.values_ = std::move(values);
  return chi;
}

MultiplicativeFunction MultiplicativeFunction::lattice(const LatticeGroup &g,
                                                       ComplexVector bases) {
  if (bases.size() != g.rank())
    throw Error(Errc::IndexOutOfRange, "one base per lattice coordinate required");
  for (Eigen::Index i = 0; i < bases.size(); ++i)
    if (bases(i) == Complex{})
      throw Error(Errc::InvalidParams, "zero base: group characters never vanish");
  MultiplicativeFunction chi{Carrier(g)};
  chi.bases_ = std::move(bases);
  return chi;
}

MultiplicativeFunction MultiplicativeFunction::one(const Carrier &c) {
  if (c.is_finite())
    return finite(c.finite(), std::vector<ExactValue>(c.finite().size()));
  return lattice(c.lattice(), ComplexVector::Ones(c.lattice().rank()));
}

Complex MultiplicativeFunction::operator()(const Point &x) const {
  if (carrier_.is_finite()) return values_[std::get<Index>(x)].to_complex();
  const LatticePoint &p = as_lattice(x);
  Complex v{1.0, 0.0};
  for (Eigen::Index i = 0; i < p.size(); ++i) v *= ipow(bases_(i), p(i));
  return v;
}

MultiplicativeFunction MultiplicativeFunction::operator*(
    const MultiplicativeFunction &o) const {
  require_same_carrier(carrier_, o.carrier_);
  MultiplicativeFunction r{carrier_};
  if (carrier_.is_finite()) {
    r.values_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
      r.values_[i] = values_[i] * o.values_[i];
  } else {
    r.bases_ = bases_.cwiseProduct(o.bases_);
  }
  return r;
}

MultiplicativeFunction MultiplicativeFunction::compose(
    const InvolutiveAutomorphism &sigma) const {
  require_same_carrier(carrier_, sigma.carrier());
  MultiplicativeFunction r{carrier_};
  if (carrier_.is_finite()) {
    r.values_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
      r.values_[i] = values_[sigma(static_cast<Index>(i))];
  } else {
    // chi(S x) = prod_j z_j^{sum_i S_ji x_i} = prod_i (prod_j z_j^{S_ji})^{x_i}.
    const Eigen::MatrixXi &s = sigma.matrix();
    r.bases_ = ComplexVector::Ones(bases_.size());
    for (Eigen::Index i = 0; i < s.cols(); ++i)
      for (Eigen::Index j = 0; j < s.rows(); ++j) r.bases_(i) *= ipow(bases_(j), s(j, i));
  }
  return r;
}

bool MultiplicativeFunction::equals(const MultiplicativeFunction &o) const {
  if (!(carrier_ == o.carrier_)) return false;
  if (carrier_.is_finite()) return values_ == o.values_;
  for (Eigen::Index i = 0; i < bases_.size(); ++i)
    if (!near(bases_(i), o.bases_(i))) return false;
  return true;
}

ComplexVector MultiplicativeFunction::dense() const {
  if (!carrier_.is_finite())
    throw Error(Errc::CarrierMismatch, "dense values need a finite carrier");
  ComplexVector v(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) v(i) = values_[i].to_complex();
  return v;
}

std::string MultiplicativeFunction::str() const {
  std::ostringstream os;
  os << "[";
  if (carrier_.is_finite()) {
    for (std::size_t i = 0; i < values_.size(); ++i)
      os << (i ? " " : "") << values_[i].str();
  } else {
    for (Eigen::Index i = 0; i < bases_.size(); ++i)
      os << (i ? " " : "") << bases_(i).real() << (bases_(i).imag() < 0 ? "" : "+")
         << bases_(i).imag() << "i";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// InvolutiveAutomorphism

InvolutiveAutomorphism InvolutiveAutomorphism::identity(const Carrier &c) {
  if (c.is_finite()) {
    std::vector<Index> perm(c.finite().size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Index>(i);
    return finite(c.finite(), std::move(perm));
  }
  const int d = c.lattice().rank();
  return lattice(c.lattice(), Eigen::MatrixXi::Identity(d, d));
}

InvolutiveAutomorphism InvolutiveAutomorphism::finite(const FiniteMonoid &m,
                                                      std::vector<Index> perm) {
  const int n = m.size();
  if (static_cast<int>(perm.size()) != n)
    throw Error(Errc::IndexOutOfRange, "one image per element required");
  for (Index v : perm)
    if (v < 0 || v >= n) throw Error(Errc::IndexOutOfRange, "image out of range");
  for (int x = 0; x < n; ++x)
    if (perm[perm[x]] != x)
      throw Error(Errc::InvalidMorphism, "sigma(sigma(x)) != x at " + std::to_string(x));
  if (perm[m.identity()] != m.identity())
    throw Error(Errc::InvalidMorphism, "sigma(e) != e");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (perm[m.mul(x, y)] != m.mul(perm[x], perm[y]))
        throw Error(Errc::InvalidMorphism, "sigma(xy) != sigma(x)sigma(y) at (" +
                                               std::to_string(x) + ", " +
                                               std::to_string(y) + ")");
  InvolutiveAutomorphism s{Carrier(m)};
  s.perm_ = std::move(perm);
  return s;
}

InvolutiveAutomorphism InvolutiveAutomorphism::lattice(const LatticeGroup &g,
                                                       Eigen::MatrixXi matrix) {
  const int d = g.rank();
  if (matrix.rows() != d || matrix.cols() != d)
    throw Error(Errc::IndexOutOfRange, "sigma matrix must be d x d");
  if (matrix * matrix != Eigen::MatrixXi::Identity(d, d))
    throw Error(Errc::InvalidMorphism, "sigma matrix does not square to the identity");
  InvolutiveAutomorphism s{Carrier(g)};
  s.matrix_ = std::move(matrix);
  return s;
}

Point InvolutiveAutomorphism::operator()(const Point &x) const {
  if (carrier_.is_finite()) return perm_[std::get<Index>(x)];
  return LatticePoint(matrix_ * as_lattice(x));
}

bool InvolutiveAutomorphism::is_identity() const {
  if (carrier_.is_finite()) {
    for (std::size_t i = 0; i < perm_.size(); ++i)
      if (perm_[i] != static_cast<Index>(i)) return false;
    return true;
  }
  return matrix_.isIdentity();
}

std::string InvolutiveAutomorphism::str() const {
  std::ostringstream os;
  os << "[";
  if (carrier_.is_finite()) {
    for (std::size_t i = 0; i < perm_.size(); ++i) os << (i ? " " : "") << perm_[i];
  } else {
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
      if (r) os << ";";
      for (Eigen::Index c = 0; c < matrix_.cols(); ++c) os << (c ? "," : "") << matrix_(r, c);
    }
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// WeightFunction

WeightFunction::WeightFunction(MultiplicativeFunction mu, InvolutiveAutomorphism sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  require_same_carrier(mu_.carrier(), sigma_.carrier());
  const Carrier &c = mu_.carrier();
  if (c.is_finite()) {
    const FiniteMonoid &m = c.finite();
    for (int x = 0; x < m.size(); ++x)
      if (!(mu_.exact(m.mul(x, sigma_(x))) == ExactValue()))
        throw Error(Errc::NotAdmissible,
                    "mu(x sigma(x)) != 1 at x = " + std::to_string(x));
    return;
  }
  // Multiplicative on both sides, so checking the generators suffices.
  const int d = c.lattice().rank();
  for (int i = 0; i < d; ++i) {
    LatticePoint ei = LatticePoint::Unit(d, i);
    LatticePoint p = ei + sigma_.matrix() * ei;
    if (!near(mu_(p), Complex{1.0, 0.0}))
      throw Error(Errc::NotAdmissible,
                  "mu(x sigma(x)) != 1 at generator " + std::to_string(i));
  }
}

WeightFunction WeightFunction::trivial(const Carrier &c) {
  return WeightFunction(MultiplicativeFunction::one(c), InvolutiveAutomorphism::identity(c));
}

// ---------------------------------------------------------------------------
// AdditiveFunction

AdditiveFunction AdditiveFunction::zero(const Carrier &c) {
  AdditiveFunction a{c};
  a.coeffs_ = ComplexVector::Zero(c.is_finite() ? c.finite().size() : c.lattice().rank());
  return a;
}

AdditiveFunction AdditiveFunction::lattice(const LatticeGroup &g, ComplexVector a) {
  if (a.size() != g.rank())
    throw Error(Errc::IndexOutOfRange, "one coefficient per lattice coordinate required");
  AdditiveFunction f{Carrier(g)};
  f.coeffs_ = std::move(a);
  return f;
}

Complex AdditiveFunction::operator()(const Point &x) const {
  if (carrier_.is_finite()) {
    Index i = std::get<Index>(x);
    if (excluded_ && excluded_->contains(i)) return {};
    return coeffs_(i);
  }
  const LatticePoint &p = as_lattice(x);
  Complex v{};
  for (Eigen::Index i = 0; i < p.size(); ++i) v += coeffs_(i) * static_cast<double>(p(i));
  return v;
}

bool AdditiveFunction::is_sigma_odd(const InvolutiveAutomorphism &sigma) const {
  require_same_carrier(carrier_, sigma.carrier());
  if (carrier_.is_finite()) {
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
      if (std::abs((*this)(sigma(static_cast<Index>(i))) + (*this)(static_cast<Index>(i))) >
          kLatticeEqualityTolerance)
        return false;
    return true;
  }
  // A(S x) = <S^T a, x>, so oddness is S^T a == -a.
  ComplexVector st = sigma.matrix().transpose().cast<Complex>() * coeffs_;
  return (st + coeffs_).norm() <= kLatticeEqualityTolerance * std::max(1.0, coeffs_.norm());
}

AdditiveFunction AdditiveFunction::restricted(CharacterIdeal excluded) const {
  if (!carrier_.is_finite() || !(Carrier(excluded.carrier) == carrier_))
    throw Error(Errc::CarrierMismatch, "ideal lives on another carrier");
  AdditiveFunction r = *this;
  r.excluded_ = std::move(excluded);
  return r;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::vector<Index> branching_order(const FiniteMonoid &m) {
  std::vector<Index> order = m.generators();
  for (int x = 0; x < m.size(); ++x)
    if (std::find(order.begin(), order.end(), x) == order.end()) order.push_back(x);
  return order;
}

class CharacterSearch {
 public:
  explicit CharacterSearch(const FiniteMonoid &m) : m_(m), order_(branching_order(m)) {
    for (int x = 0; x < m.size(); ++x) {
      const int p = cyclic_data(m, x).period;
      std::vector<ExactValue> cand;
      for (int k = 0; k < p; ++k) cand.push_back(ExactValue::root(Turn(k, p)));
      cand.push_back(ExactValue::zero());
      candidates_.push_back(std::move(cand));
    }
  }

  std::vector<std::vector<ExactValue>> run() {
    State s(m_.size());
    // chi(e)^2 = chi(e), and chi(e) = 0 would force chi == 0.
    if (assign(s, m_.identity(), ExactValue())) recurse(s);
    return std::move(found_);
  }

 private:
  using State = std::vector<std::optional<ExactValue>>;

  bool assign(State &s, Index x, const ExactValue &v) {
    std::vector<Index> work{x};
    s[x] = v;
    while (!work.empty()) {
      Index a = work.back();
      work.pop_back();
      for (int b = 0; b < m_.size(); ++b) {
        if (!s[b]) continue;
        for (auto [p, q] : {std::pair{a, b}, std::pair{b, static_cast<int>(a)}}) {
          const Index prod = m_.mul(p, q);
          const ExactValue want = *s[p] * *s[q];
          if (!s[prod]) {
            s[prod] = want;
            work.push_back(prod);
          } else if (!(*s[prod] == want)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  void recurse(const State &s) {
    auto next = std::find_if(order_.begin(), order_.end(), [&](Index x) { return !s[x]; });
    if (next == order_.end()) {
      std::vector<ExactValue> vals;
      for (auto &v : s) vals.push_back(*v);
      found_.push_back(std::move(vals));
      return;
    }
    for (const ExactValue &v : candidates_[*next]) {
      State t = s;
      if (assign(t, *next, v)) recurse(t);
    }
  }

  const FiniteMonoid &m_;
  std::vector<Index> order_;
  std::vector<std::vector<ExactValue>> candidates_;
  std::vector<std::vector<ExactValue>> found_;
};

class InvolutionSearch {
 public:
  explicit InvolutionSearch(const FiniteMonoid &m) : m_(m), order_(branching_order(m)) {}

  std::vector<std::vector<Index>> run() {
    State s(m_.size(), -1);
    if (assign(s, m_.identity(), m_.identity())) recurse(s);
    return std::move(found_);
  }

 private:
  using State = std::vector<Index>;

  // Sets pi(x) = y and pi(y) = x, then closes under pi(ab) = pi(a)pi(b).
  // The assigned set is always closed under pi, so an unassigned y is also
  // not yet anyone's image.
  bool assign(State &s, Index x0, Index y0) {
    std::vector<std::pair<Index, Index>> pending{{x0, y0}};
    while (!pending.empty()) {
      auto [x, y] = pending.back();
      pending.pop_back();
      if (s[x] != -1) {
        if (s[x] != y) return false;
        continue;
      }
      if (s[y] != -1) return false;
      s[x] = y;
      s[y] = x;
      for (Index a : {x, y})
        for (int b = 0; b < m_.size(); ++b) {
          if (s[b] == -1) continue;
          for (auto [p, q] : {std::pair{a, b}, std::pair{b, static_cast<int>(a)}}) {
            const Index prod = m_.mul(p, q);
            const Index want = m_.mul(s[p], s[q]);
            if (s[prod] == -1)
              pending.emplace_back(prod, want);
            else if (s[prod] != want)
              return false;
          }
        }
    }
    return true;
  }

  void recurse(const State &s) {
    auto next = std::find_if(order_.begin(), order_.end(), [&](Index x) { return s[x] == -1; });
    if (next == order_.end()) {
      found_.push_back(s);
      return;
    }
    for (int y = 0; y < m_.size(); ++y) {
      if (s[y] != -1) continue;
      State t = s;
      if (assign(t, *next, y)) recurse(t);
    }
  }

  const FiniteMonoid &m_;
  std::vector<Index> order_;
  std::vector<std::vector<Index>> found_;
};

}  // namespace

std::vector<MultiplicativeFunction> enumerate_multiplicative(const FiniteMonoid &m) {
  auto found = CharacterSearch(m).run();
  std::sort(found.begin(), found.end());
  std::vector<MultiplicativeFunction> out;
  for (auto &vals : found) out.push_back(MultiplicativeFunction::finite(m, std::move(vals)));
  return out;
}

std::vector<InvolutiveAutomorphism> enumerate_involutive_automorphisms(
    const FiniteMonoid &m) {
  auto found = InvolutionSearch(m).run();
  std::sort(found.begin(), found.end());
  std::vector<InvolutiveAutomorphism> out;
  for (auto &perm : found) out.push_back(InvolutiveAutomorphism::finite(m, std::move(perm)));
  return out;
}

std::vector<WeightFunction> enumerate_admissible_mu(const FiniteMonoid &m,
                                                    const InvolutiveAutomorphism &sigma) {
  std::vector<WeightFunction> out;
  for (auto &chi : enumerate_multiplicative(m)) {
    bool admissible = true;
    for (int x = 0; x < m.size() && admissible; ++x)
      admissible = chi.exact(m.mul(x, sigma(x))) == ExactValue();
    if (admissible) out.emplace_back(chi, sigma);
  }
  return out;
}

CharacterIdeal character_ideal(const MultiplicativeFunction &chi) {
  const Carrier &c = chi.carrier();
  if (!c.is_finite()) return CharacterIdeal{trivial_monoid(), {}};
  const FiniteMonoid &m = c.finite();
  CharacterIdeal ideal{m, {}};
  for (int x = 0; x < m.size(); ++x)
    if (chi.exact(x).is_zero()) ideal.members.insert(x);
  if (static_cast<int>(ideal.members.size()) == m.size())
    throw Error(Errc::ZeroCharacter, "chi vanishes identically");
  if (!is_two_sided_ideal(m, ideal.members))
    throw Error(Errc::InvalidMorphism, "zero set of chi is not a two-sided ideal");
  return ideal;
}

// ---------------------------------------------------------------------------
// Additive functions

AdditiveSpace additive_functions(const Carrier &c,
                                 const std::optional<CharacterIdeal> &restrict_to,
                                 const InvolutiveAutomorphism *odd_under) {
  AdditiveSpace space;
  if (c.is_finite()) {
    const FiniteMonoid &m = c.finite();
    // The domain M \ I is a subsemigroup, so x's powers stay inside it and
    // m A(x) = A(x^m) = A(x^(m+p)) = (m+p) A(x) forces A(x) = 0.
    std::ostringstream proof;
    proof << "order argument:";
    for (int x = 0; x < m.size(); ++x) {
      if (restrict_to && restrict_to->contains(x)) continue;
      const CyclicData cd = cyclic_data(m, x);
      proof << " x" << x << "^" << cd.index << "=x" << x << "^" << cd.index + cd.period
            << ";";
    }
    proof << " hence p*A(x)=0 with p>=1 for every x";
    space.proof = proof.str();
    space.basis = ComplexMatrix(0, 0);
    return space;
  }
  const int d = c.lattice().rank();
  if (odd_under == nullptr) {
    space.dimension = d;
    space.basis = ComplexMatrix::Identity(d, d);
    space.proof = "A(x) = <a, x> for a in C^d";
    return space;
  }
  // <a, S x> = -<a, x> for all x  <=>  (S^T + I) a = 0.
  Eigen::MatrixXd system =
      (odd_under->matrix().transpose() + Eigen::MatrixXi::Identity(d, d)).cast<double>();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  Eigen::MatrixXd kernel = lu.kernel();
  if (lu.rank() == d) kernel = Eigen::MatrixXd(d, 0);
  space.dimension = static_cast<int>(kernel.cols());
  space.basis = kernel.cast<Complex>();
  space.proof = "A(x) = <a, x> with (S^T + I) a = 0";
  return space;
}

int additive_dimension_by_linear_solve(const FiniteMonoid &m,
                                       const std::optional<CharacterIdeal> &restrict_to) {
  std::vector<Index> domain;
  for (int x = 0; x < m.size(); ++x)
    if (!restrict_to || !restrict_to->contains(x)) domain.push_back(x);
  const int k = static_cast<int>(domain.size());
  std::vector<int> column(m.size(), -1);
  for (int i = 0; i < k; ++i) column[domain[i]] = i;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(k * k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int row = i * k + j;
      system(row, column[m.mul(domain[i], domain[j])]) += 1.0;
      system(row, i) -= 1.0;
      system(row, j) -= 1.0;
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  return k - static_cast<int>(lu.rank());
}

// ---------------------------------------------------------------------------
// Branches

const char *branch_name(Branch b) { return b == Branch::Equal ? "EQUAL" : "DISTINCT"; }

MultiplicativeFunction twisted(const MultiplicativeFunction &chi, const WeightFunction &mu) {
  return mu.mu() * chi.compose(mu.sigma());
}

Branch sigma_branch(const MultiplicativeFunction &chi, const WeightFunction &mu) {
  return chi.equals(twisted(chi, mu)) ? Branch::Equal : Branch::Distinct;
}

bool wilson_third_condition(const MultiplicativeFunction &chi, const WeightFunction &mu) {
  const InvolutiveAutomorphism &sigma = mu.sigma();
  if (chi.carrier().is_finite()) {
    const FiniteMonoid &m = chi.carrier().finite();
    for (int x = 0; x < m.size(); ++x) {
      if (mu.mu().exact(x) == ExactValue()) continue;
      if (!(chi.exact(x) == chi.exact(sigma(x)))) return false;
    }
    return true;
  }
  for (const Point &x : chi.carrier().sample()) {
    const Complex w = mu(x) - 1.0;
    if (std::abs(w * chi(x) - w * chi(sigma(x))) >
        kDefaultTolerance * std::max(1.0, std::abs(w * chi(x))))
      return false;
  }
  return true;
}

}  // namespace mfe
