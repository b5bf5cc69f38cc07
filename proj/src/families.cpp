#include "mfe/families.hpp"

#include <cmath>

namespace mfe {

const char *case_name(SineAdditionCase c) {
  return c == SineAdditionCase::DistinctChars ? "DISTINCT_CHARS" : "EQUAL_CHARS";
}
const char *case_name(MuSineCase c) { return c == MuSineCase::Distinct ? "DISTINCT" : "EQUAL"; }
const char *case_name(WilsonCase c) {
  switch (c) {
    case WilsonCase::Zero: return "ZERO";
    case WilsonCase::EvenScaled: return "EVEN_SCALED";
    case WilsonCase::Third: return "THIRD";
    case WilsonCase::Additive: return "ADDITIVE";
  }
  return "?";
}
const char *case_name(MainCase c) { return c == MainCase::Distinct ? "DISTINCT" : "EQUAL"; }
const char *case_name(ApplicationCase c) { return c == ApplicationCase::A ? "A" : "B"; }

namespace {

constexpr Complex kHalf{0.5, 0.0};
constexpr Complex kOne{1.0, 0.0};

const MultiplicativeFunction &require_chi(const FamilyParams &p) {
  if (!p.chi) throw Error(Errc::InvalidParams, "chi is required");
  return *p.chi;
}

void require_carrier(const Carrier &a, const Carrier &b) {
  if (!(a == b)) throw Error(Errc::CarrierMismatch, "parameters live on different carriers");
}

// Additive function for the EQUAL-type cases. Finite carriers only admit A = 0;
// a missing A defaults to it. On lattices A must be sigma-odd.
AdditiveFunction additive_for(const FamilyParams &p, const WeightFunction *mu,
                              const Carrier &c) {
  AdditiveFunction a = p.A ? *p.A : AdditiveFunction::zero(c);
  require_carrier(a.carrier(), c);
  if (c.is_finite() && !a.is_zero())
    throw Error(Errc::InvalidParams, "additive functions vanish on finite carriers");
  if (mu && !a.is_sigma_odd(mu->sigma()))
    throw Error(Errc::SideConditionViolated, "A o sigma != -A");
  return a;
}

void require_squares_generated(const Carrier &c) {
  if (c.is_finite() && !c.finite().is_group() && !is_generated_by_squares(c.finite()))
    throw Error(Errc::NotSquaresGenerated,
                "the EQUAL branch on a monoid needs a monoid generated by its squares");
}

void require_branch(const MultiplicativeFunction &chi, const WeightFunction &mu, Branch want) {
  if (sigma_branch(chi, mu) != want)
    throw Error(Errc::BranchMismatch, std::string("chi is in the ") +
                                          branch_name(sigma_branch(chi, mu)) + " branch");
}

ScalarFunction theta_or_zero(const FamilyParams &p, const WeightFunction &mu,
                             const VerifyOptions &opts) {
  if (!p.theta) return ScalarFunction::zero(mu.carrier());
  require_carrier(p.theta->carrier(), mu.carrier());
  if (!in_nullspace(*p.theta, mu, opts))
    throw Error(Errc::ThetaNotInNullspace, "theta(xy) != mu(y) theta(sigma(y) x)");
  return *p.theta;
}

void finish(SolutionTriple &t, const VerifyOptions &opts) {
  const Scope scope = t.weight.carrier().is_finite() ? Scope::all() : Scope::sample_box(opts.box);
  const ResidualScan scan = scan_residual(t.equation, t.slots, t.weight, scope);
  t.max_residual = scan.max;
  if (!(scan.max < opts.tolerance))
    throw Error(Errc::ResidualTooLarge,
                t.family + "/" + t.case_label + " residual " + std::to_string(scan.max) +
                    " at (" + point_str(scan.x) + ", " + point_str(scan.y) + ")");
}

void mark_degenerate(SolutionTriple &t, const std::string &why) {
  t.degenerate = true;
  t.warnings.push_back(why);
}

}  // namespace

bool in_nullspace(const ScalarFunction &theta, const WeightFunction &mu,
                  const VerifyOptions &opts) {
  Slots s;
  s.f = theta;
  s.g = ScalarFunction::zero(mu.carrier());
  s.h = ScalarFunction::zero(mu.carrier());
  const Scope scope = mu.carrier().is_finite() ? Scope::all() : Scope::sample_box(opts.box);
  return max_residual(EquationId::Main, s, mu, scope) < opts.tolerance;
}

std::pair<ScalarFunction, ScalarFunction> even_odd_characters(const MultiplicativeFunction &chi,
                                                              const WeightFunction &mu) {
  const ScalarFunction a = ScalarFunction::from(chi);
  const ScalarFunction b = ScalarFunction::from(twisted(chi, mu));
  return {(a + b) * kHalf, (a - b) * kHalf};
}

// ---------------------------------------------------------------------------

SolutionTriple sine_addition_family(SineAdditionCase kase, const FamilyParams &p,
                                    const VerifyOptions &opts) {
  const MultiplicativeFunction &chi = require_chi(p);
  const Carrier &c = chi.carrier();
  SolutionTriple t{.slots = {},
                   .equation = EquationId::SineAddition,
                   .family = "sine_addition",
                   .case_label = case_name(kase),
                   .params = p,
                   .weight = WeightFunction::trivial(c)};
  const ScalarFunction x1 = ScalarFunction::from(chi);
  if (kase == SineAdditionCase::DistinctChars) {
    if (!p.chi2) throw Error(Errc::InvalidParams, "chi2 is required");
    require_carrier(p.chi2->carrier(), c);
    if (chi.equals(*p.chi2)) throw Error(Errc::InvalidParams, "chi1 == chi2");
    if (p.c == Complex{}) throw Error(Errc::InvalidParams, "c must be nonzero");
    const ScalarFunction x2 = ScalarFunction::from(*p.chi2);
    t.slots.g = (x1 + x2) * kHalf;
    t.slots.f = (x1 - x2) * p.c;
  } else {
    require_squares_generated(c);
    const AdditiveFunction a = additive_for(p, nullptr, c);
    t.params.A = a;
    t.slots.g = x1;
    t.slots.f = x1 * ScalarFunction::from(a);
    if (a.is_zero()) mark_degenerate(t, "A == 0 forces f == 0");
  }
  finish(t, opts);
  return t;
}

SolutionTriple mu_sine_subtraction_family(MuSineCase kase, const WeightFunction &mu,
                                          const FamilyParams &p, const VerifyOptions &opts) {
  const MultiplicativeFunction &chi = require_chi(p);
  const Carrier &c = mu.carrier();
  require_carrier(chi.carrier(), c);
  SolutionTriple t{.slots = {},
                   .equation = EquationId::MuSineSubtraction,
                   .family = "mu_sine_subtraction",
                   .case_label = case_name(kase),
                   .params = p,
                   .weight = mu};
  if (kase == MuSineCase::Distinct) {
    require_branch(chi, mu, Branch::Distinct);
    if (p.c2 == Complex{}) throw Error(Errc::InvalidParams, "c2 = 0 makes k == 0");
    auto [u, v] = even_odd_characters(chi, mu);
    t.slots.k = v * p.c2;
    t.slots.l = u + v * p.c1;
    t.params.branch = Branch::Distinct;
  } else {
    require_branch(chi, mu, Branch::Equal);
    require_squares_generated(c);
    const AdditiveFunction a = additive_for(p, &mu, c);
    if (!c.is_finite() && a.is_zero())
      throw Error(Errc::InvalidParams, "A = 0 makes k == 0");
    t.params.A = a;
    const ScalarFunction x = ScalarFunction::from(chi), fa = ScalarFunction::from(a);
    t.slots.k = x * fa;
    t.slots.l = x * (ScalarFunction::constant(c, kOne) + fa * p.c1);
    t.params.branch = Branch::Equal;
    if (a.is_zero()) mark_degenerate(t, "A == 0 on a finite carrier forces k == 0");
  }
  finish(t, opts);
  return t;
}

SolutionTriple wilson_family(WilsonCase kase, const WeightFunction &mu, const FamilyParams &p,
                             const VerifyOptions &opts) {
  const Carrier &c = mu.carrier();
  SolutionTriple t{.slots = {},
                   .equation = EquationId::Wilson,
                   .family = "wilson",
                   .case_label = case_name(kase),
                   .params = p,
                   .weight = mu};
  if (kase == WilsonCase::Zero) {
    t.slots.f = ScalarFunction::zero(c);
    t.slots.g = p.arbitrary_g ? *p.arbitrary_g : ScalarFunction::zero(c);
    require_carrier(t.slots.g->carrier(), c);
    finish(t, opts);
    return t;
  }
  const MultiplicativeFunction &chi = require_chi(p);
  require_carrier(chi.carrier(), c);
  t.params.branch = sigma_branch(chi, mu);
  auto [u, v] = even_odd_characters(chi, mu);
  switch (kase) {
    case WilsonCase::EvenScaled:
      if (p.alpha == Complex{}) throw Error(Errc::InvalidParams, "alpha must be nonzero");
      t.slots.g = u;
      t.slots.f = u * p.alpha;
      break;
    case WilsonCase::Third: {
      if (p.alpha == Complex{} || p.c == Complex{})
        throw Error(Errc::InvalidParams, "c and alpha must be nonzero");
      if (!wilson_third_condition(chi, mu))
        throw Error(Errc::SideConditionViolated, "(mu-1) chi != (mu-1) chi o sigma");
      const ScalarFunction x = ScalarFunction::from(chi);
      t.slots.g = u;
      t.slots.f = x * (p.c + p.alpha * kHalf) - x.compose(mu.sigma()) * (p.c - p.alpha * kHalf);
      break;
    }
    case WilsonCase::Additive: {
      if (t.params.branch != Branch::Equal)
        throw Error(Errc::SideConditionViolated, "ADDITIVE needs chi == mu chi o sigma");
      require_squares_generated(c);
      const AdditiveFunction a = additive_for(p, &mu, c);
      if (a.is_zero() && p.alpha == Complex{})
        throw Error(Errc::InvalidParams, "A = 0 and alpha = 0 make f == 0");
      t.params.A = a;
      const ScalarFunction x = ScalarFunction::from(chi);
      t.slots.g = x;
      t.slots.f = x * (ScalarFunction::from(a) + ScalarFunction::constant(c, p.alpha));
      break;
    }
    case WilsonCase::Zero: break;
  }
  finish(t, opts);
  return t;
}

SolutionTriple main_family(MainCase kase, const WeightFunction &mu, const FamilyParams &p,
                           const VerifyOptions &opts) {
  const MultiplicativeFunction &chi = require_chi(p);
  const Carrier &c = mu.carrier();
  require_carrier(chi.carrier(), c);
  SolutionTriple t{.slots = {},
                   .equation = EquationId::Main,
                   .family = "main",
                   .case_label = case_name(kase),
                   .params = p,
                   .weight = mu};
  const ScalarFunction theta = theta_or_zero(p, mu, opts);
  if (kase == MainCase::Distinct) {
    require_branch(chi, mu, Branch::Distinct);
    if (p.c1 == Complex{}) throw Error(Errc::InvalidParams, "c1 = 0 makes h == 0");
    if (p.c == Complex{} && p.c2 == Complex{})
      throw Error(Errc::InvalidParams, "c = c2 = 0 makes g == 0");
    auto [u, v] = even_odd_characters(chi, mu);
    t.slots.h = v * p.c1;
    t.slots.g = u * p.c + v * p.c2;
    t.slots.f = theta + (v * p.c + u * p.c2) * (p.c1 * kHalf);
    t.params.branch = Branch::Distinct;
  } else {
    require_branch(chi, mu, Branch::Equal);
    require_squares_generated(c);
    const AdditiveFunction a = additive_for(p, &mu, c);
    if (!c.is_finite() && a.is_zero()) throw Error(Errc::InvalidParams, "A = 0 makes h == 0");
    if (p.c == Complex{} && p.c2 == Complex{})
      throw Error(Errc::InvalidParams, "c = c2 = 0 makes g == 0");
    t.params.A = a;
    const ScalarFunction x = ScalarFunction::from(chi), fa = ScalarFunction::from(a);
    const ScalarFunction one = ScalarFunction::constant(c, kOne);
    t.slots.h = x * fa;
    t.slots.g = x * (one * p.c + fa * p.c2);
    t.slots.f = theta + x * fa * (one * (p.c * kHalf) + fa * (p.c2 * 0.25));
    t.params.branch = Branch::Equal;
    if (a.is_zero())
      mark_degenerate(t, "A == 0 on a finite carrier: h == 0, g = c chi, f = theta");
  }
  finish(t, opts);
  return t;
}

SolutionTriple application_family(ApplicationCase kase, const WeightFunction &mu,
                                  const FamilyParams &p, const VerifyOptions &opts) {
  const MultiplicativeFunction &chi = require_chi(p);
  const Carrier &c = mu.carrier();
  require_carrier(chi.carrier(), c);
  if (p.alpha == Complex{}) throw Error(Errc::InvalidParams, "alpha must be nonzero");
  SolutionTriple t{.slots = {},
                   .equation = EquationId::Application,
                   .family = "application",
                   .case_label = case_name(kase),
                   .params = p,
                   .weight = mu};
  const ScalarFunction theta = theta_or_zero(p, mu, opts);
  const Complex a2 = p.alpha * p.alpha;
  if (kase == ApplicationCase::A) {
    require_branch(chi, mu, Branch::Distinct);
    auto [u, v] = even_odd_characters(chi, mu);
    t.slots.h = (u + v * p.c2) * p.alpha;
    t.slots.f = (u * (a2 * (kOne + p.c2 * p.c2)) + v * (2.0 * a2 * p.c2) + theta) * kHalf;
    t.slots.g = (u * (a2 * (kOne - p.c2 * p.c2)) - theta) * kHalf;
    t.params.branch = Branch::Distinct;
  } else {
    require_branch(chi, mu, Branch::Equal);
    require_squares_generated(c);
    const AdditiveFunction a = additive_for(p, &mu, c);
    t.params.A = a;
    const ScalarFunction x = ScalarFunction::from(chi), fa = ScalarFunction::from(a);
    const ScalarFunction one = ScalarFunction::constant(c, kOne);
    const Complex k = p.kappa;
    t.slots.h = x * (one + fa * k) * p.alpha;
    t.slots.f = (x * (one + fa * (2.0 * k) + fa * fa * (k * k * 0.5)) * a2 + theta) * kHalf;
    t.slots.g = (x * (one - fa * fa * (k * k * 0.5)) * a2 - theta) * kHalf;
    t.params.branch = Branch::Equal;
    if (a.is_zero() && c.is_finite())
      mark_degenerate(t, "A == 0 on a finite carrier: h = alpha chi");
  }
  finish(t, opts);
  return t;
}

std::optional<PrintedApplicationConstants> printed_application_constants(
    const SolutionTriple &t) {
  if (t.equation != EquationId::Application) return std::nullopt;
  const FamilyParams &p = t.params;
  constexpr double eps = 1e-12;
  if (t.case_label == "A") {
    // h = (1/alpha')(u + c2 v) with f, g free of alpha' needs alpha^2 = 1;
    // c1' c2' / 2 = c2^2 then gives c1' = 2 c2.
    if (std::abs(p.alpha * p.alpha - kOne) > eps) return std::nullopt;
    return PrintedApplicationConstants{kOne / p.alpha, 2.0 * p.c2, p.c2};
  }
  // f = [c2' chi (2 + 2A + A^2/4) + theta]/2 is the kappa = 1/2 slice with
  // alpha^2 = 2 c2'; h = (1/alpha') c2' chi (2 + A) then gives alpha' = alpha.
  if (std::abs(p.kappa - kHalf) > eps) return std::nullopt;
  return PrintedApplicationConstants{p.alpha, {}, p.alpha * p.alpha * kHalf};
}

}  // namespace mfe
