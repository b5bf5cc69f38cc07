#include "mfe/carrier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mfe {

const char *errc_name(Errc code) {
  switch (code) {
    case Errc::NotAssociative: return "NotAssociative";
    case Errc::NoIdentity: return "NoIdentity";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ZeroCharacter: return "ZeroCharacter";
    case Errc::InvalidMorphism: return "InvalidMorphism";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::CarrierMismatch: return "CarrierMismatch";
    case Errc::MissingSlot: return "MissingSlot";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::BranchMismatch: return "BranchMismatch";
    case Errc::NotSquaresGenerated: return "NotSquaresGenerated";
    case Errc::SideConditionViolated: return "SideConditionViolated";
    case Errc::ThetaNotInNullspace: return "ThetaNotInNullspace";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::CarrierTooLarge: return "CarrierTooLarge";
    case Errc::ResidualTooLarge: return "ResidualTooLarge";
    case Errc::SyntaxError: return "SyntaxError";
  }
  return "Unknown";
}

NotAssociative::NotAssociative(Index x, Index y, Index z)
    : Error(Errc::NotAssociative,
            "(xy)z != x(yz) at (" + std::to_string(x) + ", " +
                std::to_string(y) + ", " + std::to_string(z) + ")"),
      witness_{x, y, z} {}

LatticeGroup::LatticeGroup(int rank) : rank_(rank) {
  if (rank <= 0) throw Error(Errc::InvalidParams, "lattice rank must be positive");
}

FiniteMonoid make_finite_monoid(const std::vector<std::vector<Index>> &table,
                                Index identity, std::vector<Index> generators) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(Errc::IndexOutOfRange, "empty table");
  auto in_range = [n](Index v) { return v >= 0 && v < n; };
  if (!in_range(identity))
    throw Error(Errc::IndexOutOfRange,
                "identity " + std::to_string(identity) + " not in [0, n)");

  Eigen::MatrixXi t(n, n);
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(table[x].size()) != n)
      throw Error(Errc::IndexOutOfRange,
                  "row " + std::to_string(x) + " has wrong length");
    for (int y = 0; y < n; ++y) {
      if (!in_range(table[x][y]))
        throw Error(Errc::IndexOutOfRange,
                    "entry (" + std::to_string(x) + ", " + std::to_string(y) +
                        ") out of range");
      t(x, y) = table[x][y];
    }
  }
  for (Index g : generators)
    if (!in_range(g)) throw Error(Errc::IndexOutOfRange, "generator out of range");

  for (int x = 0; x < n; ++x)
    if (t(identity, x) != x || t(x, identity) != x)
      throw Error(Errc::NoIdentity, "identity law fails at element " +
                                        std::to_string(x));

  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (t(t(x, y), z) != t(x, t(y, z))) throw NotAssociative(x, y, z);

  // A finite monoid is a group iff every row of the table is a permutation.
  bool group = true;
  for (int x = 0; x < n && group; ++x) {
    bool has_inverse = false;
    for (int y = 0; y < n; ++y)
      if (t(x, y) == identity) has_inverse = true;
    group = has_inverse;
  }

  auto d = std::make_shared<FiniteMonoid::Data>();
  d->table = std::move(t);
  d->identity = identity;
  d->generators = std::move(generators);
  d->is_group = group;
  return FiniteMonoid(std::move(d));
}

Point Carrier::identity() const {
  if (is_finite()) return finite().identity();
  return LatticePoint(LatticePoint::Zero(lattice().rank()));
}

Point Carrier::multiply(const Point &x, const Point &y) const {
  if (is_finite()) return finite().mul(std::get<Index>(x), std::get<Index>(y));
  return LatticePoint(std::get<LatticePoint>(x) + std::get<LatticePoint>(y));
}

std::vector<Point> Carrier::sample(int box) const {
  std::vector<Point> out;
  if (is_finite()) {
    for (int x = 0; x < finite().size(); ++x) out.emplace_back(x);
    return out;
  }
  const int d = lattice().rank();
  LatticePoint p = LatticePoint::Constant(d, -box);
  while (true) {
    out.emplace_back(p);
    int i = d - 1;
    while (i >= 0 && p[i] == box) p[i--] = -box;
    if (i < 0) break;
    ++p[i];
  }
  return out;
}

bool is_two_sided_ideal(const FiniteMonoid &m, const std::set<Index> &members) {
  for (Index x : members)
    for (int y = 0; y < m.size(); ++y)
      if (!members.count(m.mul(x, y)) || !members.count(m.mul(y, x))) return false;
  return true;
}

namespace {

// Returns the number of rounds until the fixpoint and the closure itself.
std::pair<int, std::vector<bool>> squares_closure(const FiniteMonoid &m) {
  const int n = m.size();
  std::vector<bool> in(n, false);
  in[m.identity()] = true;
  for (int x = 0; x < n; ++x) in[m.mul(x, x)] = true;
  int rounds = 0;
  bool grew = true;
  while (grew) {
    grew = false;
    ++rounds;
    std::vector<bool> next = in;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (in[x] && in[y] && !next[m.mul(x, y)]) {
          next[m.mul(x, y)] = true;
          grew = true;
        }
    in = std::move(next);
  }
  return {rounds, in};
}

}  // namespace

bool is_generated_by_squares(const FiniteMonoid &m) {
  auto [rounds, in] = squares_closure(m);
  return std::all_of(in.begin(), in.end(), [](bool b) { return b; });
}

int squares_closure_rounds(const FiniteMonoid &m) { return squares_closure(m).first; }

CyclicData cyclic_data(const FiniteMonoid &m, Index x) {
  // first_seen[v] = k such that x^k == v, k >= 1.
  std::vector<int> first_seen(m.size(), 0);
  Index power = x;
  for (int k = 1;; ++k) {
    if (first_seen[power] != 0)
      return {first_seen[power], k - first_seen[power]};
    first_seen[power] = k;
    power = m.mul(power, x);
  }
}

FiniteMonoid trivial_monoid() { return make_finite_monoid({{0}}, 0); }

FiniteMonoid cyclic_group(int n) {
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t[x][y] = (x + y) % n;
  return make_finite_monoid(t, 0);
}

FiniteMonoid klein_four_group() {
  std::vector<std::vector<Index>> t(4, std::vector<Index>(4));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) t[x][y] = x ^ y;
  return make_finite_monoid(t, 0);
}

FiniteMonoid symmetric_group_s3() {
  // Elements are the permutations of {0,1,2} in lexicographic order; the
  // product xy is the composition x after y.
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index_of = [&](const std::array<int, 3> &q) {
    return static_cast<Index>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<Index>> t(6, std::vector<Index>(6));
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[x][perms[y][i]];
      t[x][y] = index_of(c);
    }
  return make_finite_monoid(t, 0);
}

FiniteMonoid zero_one_monoid() { return make_finite_monoid({{0, 1}, {1, 1}}, 0); }

FiniteMonoid relabel(const FiniteMonoid &m, const std::vector<Index> &perm) {
  const int n = m.size();
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t[perm[x]][perm[y]] = perm[m.mul(x, y)];
  std::vector<Index> gens;
  for (Index g : m.generators()) gens.push_back(perm[g]);
  return make_finite_monoid(t, perm[m.identity()], gens);
}

}  // namespace mfe
