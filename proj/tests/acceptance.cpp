// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "helpers.hpp"
#include "mfe/cli.hpp"

using namespace mfe;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const std::vector<testing::NamedCarrier> &family_corpus() {
  static const std::vector<testing::NamedCarrier> c{
      {"Z2", cyclic_group(2)},        {"Z3", cyclic_group(3)}, {"Z4", cyclic_group(4)},
      {"Z6", cyclic_group(6)},        {"Z2xZ2", klein_four_group()},
      {"S3", symmetric_group_s3()},   {"zero_one", zero_one_monoid()}};
  return c;
}

// Max residual of a finite triple recomputed from raw values.
double independent_residual(const SolutionTriple &t) {
  const FiniteMonoid &m = t.weight.carrier().finite();
  const auto table = testing::table_of(m);
  const auto &s = t.weight.sigma().perm();
  const auto mu = testing::values_of(t.weight.mu());
  auto vals = [&](const std::optional<ScalarFunction> &f) {
    return f ? testing::values_of(*f) : oracle::Vec(m.size(), 0.0);
  };
  const auto f = vals(t.slots.f), g = vals(t.slots.g), h = vals(t.slots.h), k = vals(t.slots.k),
             l = vals(t.slots.l);
  double worst = 0.0;
  for (int x = 0; x < m.size(); ++x)
    for (int y = 0; y < m.size(); ++y) {
      oracle::C r;
      switch (t.equation) {
        case EquationId::SineAddition: r = oracle::sine_addition_residual(table, f, g, x, y); break;
        case EquationId::MuSineSubtraction: r = oracle::mu_sine_residual(table, s, mu, k, l, x, y); break;
        case EquationId::Wilson: r = oracle::wilson_residual(table, s, mu, f, g, x, y); break;
        case EquationId::Main: r = oracle::main_residual(table, s, mu, f, g, h, x, y); break;
        case EquationId::Application:
          r = oracle::application_residual(table, s, mu, f, g, h, x, y);
          break;
      }
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

std::vector<SolutionTriple> g_main_triples;

Outcome family_residuals() {
  const auto start = Clock::now();
  std::size_t triples = 0, failures = 0;
  std::set<std::string> cases;
  double worst = 0.0;
  for (const auto &[name, m] : family_corpus())
    for (const auto &sigma : enumerate_involutive_automorphisms(m))
      for (const auto &w : enumerate_admissible_mu(m, sigma))
        for (const cli::SweepRow &row : cli::sweep_families(w, {})) {
          ++triples;
          if (!row.ok || !row.triple) {
            ++failures;
            std::printf("    %s %s/%s: %s\n", name.c_str(), row.family.c_str(),
                        row.case_label.c_str(), row.message.c_str());
            continue;
          }
          const double r = independent_residual(*row.triple);
          worst = std::max(worst, r);
          if (!(r < 1e-9)) ++failures;
          cases.insert(row.family + "/" + row.case_label);
          if (row.equation == EquationId::Main) g_main_triples.push_back(*row.triple);
        }
  const double secs = seconds_since(start);
  return {failures == 0 && cases.size() == 12 && secs < 60.0,
          std::to_string(triples) + " triples over " + std::to_string(cases.size()) +
              " family cases, worst residual " + num(worst) + ", " + num(secs) + " s"};
}

Outcome structure_checks() {
  std::size_t checked = 0, failures = 0;
  for (const SolutionTriple &t : g_main_triples) {
    if (t.slots.g->sup_norm() < 1e-9 || t.slots.h->sup_norm() < 1e-9) continue;
    ++checked;
    const StructureReport r = verify_main_structure(t);
    bool ok = r.all_pass() && r.find("odd") && r.find("central") && r.find("sine_subtraction") &&
              (r.find("g_equals_bh") || r.find("companion_g"));
    if (!ok) ++failures;
  }
  return {checked > 0 && failures == 0,
          std::to_string(checked) + " MAIN triples with g, h != 0, " + std::to_string(failures) +
              " failing"};
}

Outcome nullspace_z4() {
  const auto m = cyclic_group(4);
  const auto w = testing::z4_negation(0);
  const NullspaceBasis nb = nullspace_basis(m, w);
  const int by_rank =
      m.size() - oracle::rank(oracle::main_constraints(testing::table_of(m), w.sigma().perm(),
                                                       testing::values_of(w.mu())));
  double worst = 0.0;
  for (const auto &theta : nb.basis) {
    Slots s;
    s.f = theta;
    s.g = s.h = ScalarFunction::zero(m);
    worst = std::max(worst, max_residual(EquationId::Main, s, w, Scope::all()));
  }
  return {nb.dimension == 2 && by_rank == 2 && worst == 0.0,
          "dimension " + std::to_string(nb.dimension) + ", independent rank gives " +
              std::to_string(by_rank) + ", worst basis residual " + num(worst)};
}

Outcome oracle_completeness() {
  const auto start = Clock::now();
  std::size_t found = 0, unclassified = 0, unsound = 0;
  const std::vector<testing::NamedCarrier> carriers{{"Z2", cyclic_group(2)},
                                                    {"Z3", cyclic_group(3)},
                                                    {"Z4", cyclic_group(4)},
                                                    {"S3", symmetric_group_s3()}};
  for (const auto &[name, m] : carriers)
    for (const auto &sigma : enumerate_involutive_automorphisms(m))
      for (const auto &w : enumerate_admissible_mu(m, sigma)) {
        const OracleReport r = oracle_solve_main(m, w, 200, 42);
        found += r.found.size();
        unclassified += r.unclassified();
        for (const auto &s : r.found) {
          Slots slots;
          slots.f = ScalarFunction::dense(m, s.f);
          slots.g = ScalarFunction::dense(m, s.g);
          slots.h = ScalarFunction::dense(m, s.h);
          SolutionTriple t{.slots = slots, .equation = EquationId::Main, .weight = w};
          if (!(independent_residual(t) < 1e-8)) ++unsound;
        }
      }
  const double secs = seconds_since(start);
  return {unclassified == 0 && unsound == 0 && found > 0 && secs < 120.0,
          std::to_string(found) + " nondegenerate solutions, " + std::to_string(unclassified) +
              " unclassified, " + std::to_string(unsound) + " above 1e-8, " + num(secs) + " s"};
}

Outcome additive_degeneracy() {
  std::size_t checks = 0, bad = 0;
  for (const auto &[name, m] : testing::corpus()) {
    std::vector<std::optional<CharacterIdeal>> domains{std::nullopt};
    for (const auto &chi : enumerate_multiplicative(m)) domains.push_back(character_ideal(chi));
    for (const auto &d : domains) {
      ++checks;
      const AdditiveSpace s = additive_functions(m, d);
      if (s.dimension != 0 || s.proof.empty() || additive_dimension_by_linear_solve(m, d) != 0)
        ++bad;
    }
  }
  return {bad == 0, std::to_string(checks) + " domains, " + std::to_string(bad) + " nonzero"};
}

Outcome lattice_instances() {
  using testing::lp;
  const Point one = lp({1});
  const VerifyOptions box{1e-9, 5};
  std::string detail;
  bool pass = true;
  auto record = [&](const char *label, const SolutionTriple &t, double expect, auto lhs_fn) {
    const Complex lhs = lhs_fn(t);
    const Complex rhs = t.equation == EquationId::Main
                            ? (*t.slots.g)(one) * (*t.slots.h)(one)
                            : (*t.slots.h)(one) * (*t.slots.h)(one);
    const double r = max_residual(t.equation, t.slots, t.weight, Scope::sample_box(5));
    pass &= r == 0.0 && lhs == Complex(expect, 0) && rhs == Complex(expect, 0);
    detail += std::string(label) + ": " + num(lhs.real()) + "=" + num(rhs.real()) +
              " residual " + num(r) + "; ";
  };
  {
    FamilyParams p;
    p.chi = testing::z1_char(2);
    p.c = 1.0;
    p.c1 = 2.0;
    p.c2 = 1.0;
    const auto w = testing::z1_weight(1);
    record("MAIN", main_family(MainCase::Distinct, w, p, box), 3.0, [&](const SolutionTriple &t) {
      return (*t.slots.f)(lp({2})) - w(one) * (*t.slots.f)(lp({0}));
    });
  }
  {
    FamilyParams p;
    p.chi = testing::z1_char(2);
    p.c = 1.0;
    p.c2 = 0.0;
    p.A = testing::z1_identity_additive();
    const auto w = testing::z1_weight(4);
    record("MAIN EQUAL", main_family(MainCase::Equal, w, p, box), 4.0,
           [&](const SolutionTriple &t) {
             return (*t.slots.f)(lp({2})) - w(one) * (*t.slots.f)(lp({0}));
           });
  }
  {
    FamilyParams p;
    p.chi = testing::z1_char(2);
    p.alpha = 1.0;
    p.kappa = 1.0;
    p.A = testing::z1_identity_additive();
    const auto w = testing::z1_weight(4);
    record("APPLICATION B", application_family(ApplicationCase::B, w, p, box), 16.0,
           [&](const SolutionTriple &t) {
             return (*t.slots.f)(lp({2})) + w(one) * (*t.slots.g)(lp({0}));
           });
  }
  return {pass, detail};
}

Outcome printed_constant_regression() {
  const auto m = cyclic_group(4);
  const auto w = testing::z4_negation(0);
  const auto chi = enumerate_multiplicative(m)[1];
  const Complex c = 2.0, c1 = 2.0, c2 = 0.5;
  const auto [u, v] = even_odd_characters(chi, w);
  // The alternative statement of the DISTINCT family leaves c out of g.
  Slots printed;
  printed.h = v * c1;
  printed.g = u + v * c2;
  printed.f = (v * c + u * c2) * (c1 * 0.5);
  const double printed_r = max_residual(EquationId::Main, printed, w, Scope::all());
  FamilyParams p;
  p.chi = chi;
  p.c = c;
  p.c1 = c1;
  p.c2 = c2;
  const double proof_r = main_family(MainCase::Distinct, w, p).max_residual;
  return {printed_r > 0.1 && proof_r < 1e-9,
          "without c: " + num(printed_r) + ", with c: " + num(proof_r)};
}

Outcome enumeration_counts() {
  std::string detail;
  bool pass = true;
  for (int n : {2, 3, 4, 6}) {
    const std::size_t k = enumerate_multiplicative(cyclic_group(n)).size();
    pass &= k == static_cast<std::size_t>(n);
    detail += "Z/" + std::to_string(n) + ": " + std::to_string(k) + " characters; ";
  }
  const std::size_t inv = enumerate_involutive_automorphisms(cyclic_group(4)).size();
  pass &= inv == 2;
  detail += "Z/4: " + std::to_string(inv) + " involutions";
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"1 family residuals over the finite corpus", family_residuals},
      {"2 structure checks on MAIN triples", structure_checks},
      {"3 nullspace of Z/4 under negation", nullspace_z4},
      {"4 oracle completeness and soundness", oracle_completeness},
      {"5 additive functions vanish on finite carriers", additive_degeneracy},
      {"6 lattice instances on Z", lattice_instances},
      {"7 DISTINCT family needs c in g", printed_constant_regression},
      {"8 enumeration counts", enumeration_counts},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}
