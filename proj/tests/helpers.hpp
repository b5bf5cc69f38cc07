// Conversions between library objects and the plain vectors the reference
// computations in oracles.hpp work on.
#pragma once

#include <string>
#include <vector>

#include "mfe/analysis.hpp"
#include "oracles.hpp"

namespace testing {

struct NamedCarrier {
  std::string name;
  mfe::FiniteMonoid monoid;
};

inline std::vector<NamedCarrier> corpus() {
  return {{"trivial", mfe::trivial_monoid()},    {"Z2", mfe::cyclic_group(2)},
          {"Z3", mfe::cyclic_group(3)},          {"Z4", mfe::cyclic_group(4)},
          {"Z6", mfe::cyclic_group(6)},          {"Z2xZ2", mfe::klein_four_group()},
          {"S3", mfe::symmetric_group_s3()},     {"zero_one", mfe::zero_one_monoid()}};
}

inline oracle::Table table_of(const mfe::FiniteMonoid &m) {
  oracle::Table t(m.size(), std::vector<int>(m.size()));
  for (int x = 0; x < m.size(); ++x)
    for (int y = 0; y < m.size(); ++y) t[x][y] = m.mul(x, y);
  return t;
}

inline oracle::Vec values_of(const mfe::ScalarFunction &f) {
  const auto &v = f.values();
  return {v.data(), v.data() + v.size()};
}

inline oracle::Vec values_of(const mfe::MultiplicativeFunction &chi) {
  oracle::Vec out;
  for (const auto &v : chi.exact_values()) out.push_back(v.to_complex());
  return out;
}

inline std::vector<oracle::Rot> rotations_of(const mfe::MultiplicativeFunction &chi) {
  std::vector<oracle::Rot> out;
  for (const auto &v : chi.exact_values())
    out.push_back(v.is_zero() ? oracle::Rot{true, 0, 1}
                              : oracle::reduce(v.turn().num(), v.turn().den()));
  return out;
}

inline mfe::Point pt(int x) { return mfe::Point{x}; }

inline mfe::Point lp(std::initializer_list<int> xs) {
  mfe::LatticePoint p(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (int x : xs) p(i++) = x;
  return mfe::Point{p};
}

// Z^1 with sigma = -id and mu(x) = m^x.
inline mfe::WeightFunction z1_weight(double m) {
  const mfe::LatticeGroup g(1);
  Eigen::MatrixXi neg(1, 1);
  neg << -1;
  return mfe::WeightFunction(
      mfe::MultiplicativeFunction::lattice(g, mfe::ComplexVector::Constant(1, m)),
      mfe::InvolutiveAutomorphism::lattice(g, neg));
}

inline mfe::MultiplicativeFunction z1_char(double z) {
  return mfe::MultiplicativeFunction::lattice(mfe::LatticeGroup(1),
                                              mfe::ComplexVector::Constant(1, z));
}

inline mfe::AdditiveFunction z1_identity_additive() {
  return mfe::AdditiveFunction::lattice(mfe::LatticeGroup(1), mfe::ComplexVector::Ones(1));
}

// Z/4 with sigma = -id and the weight at position `mu_index` of its admissible list.
inline mfe::WeightFunction z4_negation(int mu_index = 0) {
  const auto m = mfe::cyclic_group(4);
  return mfe::enumerate_admissible_mu(m, mfe::InvolutiveAutomorphism::finite(m, {0, 3, 2, 1}))
      .at(mu_index);
}

}  // namespace testing
