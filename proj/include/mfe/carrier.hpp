#pragma once

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "mfe/types.hpp"

namespace mfe {

/// Finite monoid given by its Cayley table. Element x*y is table(x, y);
/// elements are 0-based indices. Copies share the immutable table.
class FiniteMonoid {
 public:
  int size() const { return static_cast<int>(data_->table.rows()); }
  Index identity() const { return data_->identity; }
  Index mul(Index x, Index y) const { return data_->table(x, y); }
  const Eigen::MatrixXi &table() const { return data_->table; }

  /// Optional generating set; empty means "all elements".
  const std::vector<Index> &generators() const { return data_->generators; }

  bool is_group() const { return data_->is_group; }

  friend bool operator==(const FiniteMonoid &a, const FiniteMonoid &b) {
    return a.data_ == b.data_ || (a.identity() == b.identity() &&
                                  a.table() == b.table());
  }

 private:
  struct Data {
    Eigen::MatrixXi table;
    Index identity = 0;
    std::vector<Index> generators;
    bool is_group = false;
  };
  explicit FiniteMonoid(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;

  friend FiniteMonoid make_finite_monoid(const std::vector<std::vector<Index>> &,
                                         Index, std::vector<Index>);
};

/// The additive group Z^d. Never enumerated; checks run over a sample box.
class LatticeGroup {
 public:
  explicit LatticeGroup(int rank);
  int rank() const { return rank_; }
  friend bool operator==(const LatticeGroup &, const LatticeGroup &) = default;

 private:
  int rank_;
};

/// Thrown by make_finite_monoid; carries the offending triple (x, y, z).
class NotAssociative : public Error {
 public:
  NotAssociative(Index x, Index y, Index z);
  std::array<Index, 3> witness() const { return witness_; }

 private:
  std::array<Index, 3> witness_;
};

/// Validates the table eagerly: index range, identity law, associativity.
FiniteMonoid make_finite_monoid(const std::vector<std::vector<Index>> &table,
                                Index identity,
                                std::vector<Index> generators = {});

class Carrier {
 public:
  Carrier(FiniteMonoid m) : stage_(std::move(m)) {}  // NOLINT
  Carrier(LatticeGroup g) : stage_(g) {}             // NOLINT

  bool is_finite() const { return std::holds_alternative<FiniteMonoid>(stage_); }
  bool is_group() const { return !is_finite() || finite().is_group(); }
  const FiniteMonoid &finite() const { return std::get<FiniteMonoid>(stage_); }
  const LatticeGroup &lattice() const { return std::get<LatticeGroup>(stage_); }

  Point identity() const;
  Point multiply(const Point &x, const Point &y) const;

  /// Finite: all elements. Lattice: every point of [-box, box]^d.
  std::vector<Point> sample(int box = kDefaultBox) const;

  friend bool operator==(const Carrier &a, const Carrier &b) {
    return a.stage_ == b.stage_;
  }

 private:
  std::variant<FiniteMonoid, LatticeGroup> stage_;
};

/// Zero set of a multiplicative function on a finite monoid.
struct CharacterIdeal {
  FiniteMonoid carrier;
  std::set<Index> members;

  bool contains(Index x) const { return members.count(x) != 0; }
  bool empty() const { return members.empty(); }
};

/// True iff every x, y with x in the set has xy and yx in the set.
bool is_two_sided_ideal(const FiniteMonoid &m, const std::set<Index> &members);

/// Closure of {e} and {x*x} under multiplication equals the whole monoid.
bool is_generated_by_squares(const FiniteMonoid &m);

/// Number of closure rounds needed by is_generated_by_squares' fixpoint.
int squares_closure_rounds(const FiniteMonoid &m);

/// Index m(x) and period p(x) of the cyclic sequence x, x^2, x^3, ...:
/// x^(m+p) == x^m with m, p minimal.
struct CyclicData {
  int index = 1;
  int period = 1;
};
CyclicData cyclic_data(const FiniteMonoid &m, Index x);

// Standard carriers used by the tests, the CLI corpus, and the acceptance
// suite.
FiniteMonoid trivial_monoid();
FiniteMonoid cyclic_group(int n);
FiniteMonoid klein_four_group();
FiniteMonoid symmetric_group_s3();
/// {1, 0} under multiplication: index 0 is 1 (identity), index 1 is 0.
FiniteMonoid zero_one_monoid();

/// Conjugates the table by a permutation: new index of x is perm[x].
FiniteMonoid relabel(const FiniteMonoid &m, const std::vector<Index> &perm);

}  // namespace mfe
