#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace mfe;
using testing::lp;
using testing::z1_char;
using testing::z1_weight;

namespace {

ScalarFunction chi_fn(double z) { return ScalarFunction::from(z1_char(z)); }

ScalarFunction dense(const FiniteMonoid &m, std::vector<Complex> v) {
  return ScalarFunction::dense(m, Eigen::Map<ComplexVector>(v.data(), v.size()));
}

}  // namespace

TEST_CASE("MAIN residual on Z at (1, 1)") {
  const auto w = z1_weight(1);
  Slots s;
  s.f = chi_fn(2);
  s.g = chi_fn(2);
  s.h = chi_fn(2) - chi_fn(0.5);
  CHECK((*s.f)(lp({2})) == Complex(4, 0));
  CHECK((*s.h)(lp({1})) == Complex(1.5, 0));
  CHECK(residual(EquationId::Main, s, w, lp({1}), lp({1})) == Complex(0, 0));
  CHECK(max_residual(EquationId::Main, s, w, Scope::sample_box(5)) == 0.0);
}

TEST_CASE("WILSON with zero slots vanishes") {
  const auto m = cyclic_group(3);
  Slots s;
  s.f = ScalarFunction::zero(m);
  s.g = ScalarFunction::zero(m);
  CHECK(max_residual(EquationId::Wilson, s, WeightFunction::trivial(m), Scope::all()) == 0.0);
}

TEST_CASE("APPLICATION residual on Z at (1, 1)") {
  const auto w = z1_weight(4);
  const ScalarFunction x = ScalarFunction::from(testing::z1_identity_additive());
  const ScalarFunction one = ScalarFunction::constant(LatticeGroup(1), 1.0);
  const ScalarFunction c = chi_fn(2);
  Slots s;
  s.h = c * (one + x);
  s.f = c * (one + x * 2.0 + x * x * 0.5) * 0.5;
  s.g = c * (one - x * x * 0.5) * 0.5;
  CHECK((*s.f)(lp({2})) == Complex(14, 0));
  CHECK((*s.g)(lp({0})) == Complex(0.5, 0));
  CHECK((*s.h)(lp({1})) == Complex(4, 0));
  CHECK(residual(EquationId::Application, s, w, lp({1}), lp({1})) == Complex(0, 0));
  CHECK(max_residual(EquationId::Application, s, w, Scope::sample_box(5)) == 0.0);
}

TEST_CASE("constant slots violate MAIN") {
  const auto m = cyclic_group(2);
  Slots s;
  s.f = s.g = s.h = ScalarFunction::constant(m, 1.0);
  CHECK(max_residual(EquationId::Main, s, WeightFunction::trivial(m), Scope::all()) == 1.0);
}

TEST_CASE("residual errors") {
  const auto m = cyclic_group(2);
  Slots s;
  s.f = ScalarFunction::zero(m);
  try {
    residual(EquationId::Main, s, WeightFunction::trivial(m), Point{0}, Point{0});
    FAIL("missing slot accepted");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::MissingSlot);
  }
  s.g = ScalarFunction::zero(m);
  s.h = ScalarFunction::zero(cyclic_group(3));
  try {
    residual(EquationId::Main, s, WeightFunction::trivial(m), Point{0}, Point{0});
    FAIL("carrier mismatch accepted");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::CarrierMismatch);
  }
  s.h = ScalarFunction::zero(m);
  CHECK_THROWS_AS(max_residual(EquationId::Main, s, z1_weight(1), Scope::all()), Error);
}

TEST_CASE("equation names round-trip") {
  for (auto eq : {EquationId::SineAddition, EquationId::MuSineSubtraction, EquationId::Wilson,
                  EquationId::Main, EquationId::Application})
    CHECK(parse_equation(equation_name(eq)) == eq);
  CHECK_FALSE(parse_equation("NOPE"));
  CHECK(required_slots(EquationId::MuSineSubtraction) == std::vector<std::string>{"k", "l"});
  CHECK(required_slots(EquationId::Main) == std::vector<std::string>{"f", "g", "h"});
}

TEST_CASE("residuals agree with direct evaluation on random data") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (const auto &[name, m] : testing::corpus()) {
    const auto t = testing::table_of(m);
    for (const auto &sigma : enumerate_involutive_automorphisms(m))
      for (const auto &w : enumerate_admissible_mu(m, sigma)) {
        auto random = [&] {
          ComplexVector v(m.size());
          for (auto &z : v) z = {nd(rng), nd(rng)};
          return ScalarFunction::dense(m, v);
        };
        Slots s;
        s.f = random();
        s.g = random();
        s.h = random();
        s.k = random();
        s.l = random();
        const auto mu = testing::values_of(w.mu());
        const auto f = testing::values_of(*s.f), g = testing::values_of(*s.g),
                   h = testing::values_of(*s.h), k = testing::values_of(*s.k),
                   l = testing::values_of(*s.l);
        const auto &p = sigma.perm();
        for (int x = 0; x < m.size(); ++x)
          for (int y = 0; y < m.size(); ++y) {
            const Point px{x}, py{y};
            CHECK(std::abs(residual(EquationId::Main, s, w, px, py) -
                           oracle::main_residual(t, p, mu, f, g, h, x, y)) < 1e-12);
            CHECK(std::abs(residual(EquationId::Wilson, s, w, px, py) -
                           oracle::wilson_residual(t, p, mu, f, g, x, y)) < 1e-12);
            CHECK(std::abs(residual(EquationId::Application, s, w, px, py) -
                           oracle::application_residual(t, p, mu, f, g, h, x, y)) < 1e-12);
            CHECK(std::abs(residual(EquationId::SineAddition, s, w, px, py) -
                           oracle::sine_addition_residual(t, f, g, x, y)) < 1e-12);
            CHECK(std::abs(residual(EquationId::MuSineSubtraction, s, w, px, py) -
                           oracle::mu_sine_residual(t, p, mu, k, l, x, y)) < 1e-12);
          }
      }
  }
}

TEST_CASE("scan keeps the first maximal pair") {
  const auto m = cyclic_group(2);
  Slots s;
  s.f = ScalarFunction::zero(m);
  s.g = ScalarFunction::constant(m, 1.0);
  s.h = ScalarFunction::constant(m, 1.0);
  const ResidualScan scan = scan_residual(EquationId::Main, s, WeightFunction::trivial(m), Scope::all());
  CHECK(scan.max == 1.0);
  CHECK(std::get<Index>(scan.x) == 0);
  CHECK(std::get<Index>(scan.y) == 0);
}

TEST_CASE("mu-even and mu-odd parts") {
  SUBCASE("Z with mu = 1") {
    const auto w = z1_weight(1);
    const auto [he, ho] = mu_even_odd(chi_fn(2), w);
    for (int x = -5; x <= 5; ++x) {
      const double p = std::pow(2.0, x), q = std::pow(2.0, -x);
      CHECK(std::abs(he(lp({x})) - Complex((p + q) / 2, 0)) < 1e-12);
      CHECK(std::abs(ho(lp({x})) - Complex((p - q) / 2, 0)) < 1e-12);
    }
  }
  SUBCASE("x 2^x is odd for mu = 4^x") {
    const auto w = z1_weight(4);
    const ScalarFunction h = ScalarFunction::from(testing::z1_identity_additive()) * z1_char(2);
    const auto [he, ho] = mu_even_odd(h, w);
    CHECK(he.sup_norm(5) == 0.0);
    for (int x = -5; x <= 5; ++x) CHECK(ho(lp({x})) == h(lp({x})));
  }
  SUBCASE("even input is a fixed point") {
    const auto w = z1_weight(1);
    const auto [he, ho] = mu_even_odd(chi_fn(2), w);
    const auto [he2, ho2] = mu_even_odd(he, w);
    CHECK(ho2.sup_norm(5) < 1e-12);
    CHECK((he2 - he).sup_norm(5) < 1e-12);
  }
}

TEST_CASE("parity decomposition holds for every finite weight") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (const auto &[name, m] : testing::corpus())
    for (const auto &sigma : enumerate_involutive_automorphisms(m))
      for (const auto &w : enumerate_admissible_mu(m, sigma)) {
        ComplexVector v(m.size());
        for (auto &z : v) z = {nd(rng), nd(rng)};
        const ScalarFunction h = ScalarFunction::dense(m, v);
        const auto [he, ho] = mu_even_odd(h, w);
        for (int x = 0; x < m.size(); ++x) {
          const Point p{x}, sp{sigma(x)};
          CHECK(std::abs(he(p) + ho(p) - h(p)) < 1e-12);
          CHECK(std::abs(w(p) * he(sp) - he(p)) < 1e-12);
          CHECK(std::abs(w(p) * ho(sp) + ho(p)) < 1e-12);
        }
      }
}

TEST_CASE("MAIN residual is affine in f") {
  const auto w = testing::z4_negation();
  const auto m = cyclic_group(4);
  Slots a, b, sum;
  a.f = dense(m, {1, {0, 2}, -1, 3});
  b.f = dense(m, {{0.5, 1}, 2, 0, -1});
  a.g = b.g = sum.g = dense(m, {1, 2, 3, 4});
  a.h = b.h = sum.h = dense(m, {0, 1, 0, -1});
  sum.f = *a.f + *b.f;
  Slots zero_f = a;
  zero_f.f = ScalarFunction::zero(m);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const Point px{x}, py{y};
      const Complex lhs = residual(EquationId::Main, sum, w, px, py);
      const Complex rhs = residual(EquationId::Main, a, w, px, py) +
                          residual(EquationId::Main, b, w, px, py) -
                          residual(EquationId::Main, zero_f, w, px, py);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("lattice functions compose, translate and multiply") {
  Eigen::MatrixXi swap(2, 2);
  swap << 0, 1, 1, 0;
  const LatticeGroup g(2);
  const auto s = InvolutiveAutomorphism::lattice(g, swap);
  const auto chi = MultiplicativeFunction::lattice(g, Eigen::Vector2cd(2.0, 3.0));
  const auto a = AdditiveFunction::lattice(g, Eigen::Vector2cd(1.0, -1.0));
  const ScalarFunction f = ScalarFunction::from(chi) * ScalarFunction::from(a);
  const ScalarFunction fs = f.compose(s);
  const ScalarFunction ft = f.left_translate(lp({1, 2}));
  for (const Point &p : Carrier(g).sample(2)) {
    const auto &v = std::get<LatticePoint>(p);
    CHECK(std::abs(fs(p) - f(Point{LatticePoint(Eigen::Vector2i(v(1), v(0)))})) < 1e-9);
    CHECK(std::abs(ft(p) - f(Point{LatticePoint(v + Eigen::Vector2i(1, 2))})) < 1e-9);
    CHECK(std::abs(f(p) - std::pow(2.0, v(0)) * std::pow(3.0, v(1)) * double(v(0) - v(1))) < 1e-9);
  }
}
