#include "mfe/equations.hpp"

#include <algorithm>
#include <sstream>

namespace mfe {

namespace {

void require_same_carrier(const Carrier &a, const Carrier &b) {
  if (!(a == b)) throw Error(Errc::CarrierMismatch, "functions live on different carriers");
}

ComplexVector compose_bases(const ComplexVector &bases, const Eigen::MatrixXi &s) {
  ComplexVector out = ComplexVector::Ones(bases.size());
  for (Eigen::Index i = 0; i < s.cols(); ++i)
    for (Eigen::Index j = 0; j < s.rows(); ++j) out(i) *= ipow(bases(j), s(j, i));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarFunction

ScalarFunction ScalarFunction::zero(const Carrier &c) {
  ScalarFunction f{c};
  if (c.is_finite()) f.values_ = ComplexVector::Zero(c.finite().size());
  return f;
}

ScalarFunction ScalarFunction::dense(const FiniteMonoid &m, ComplexVector values) {
  if (values.size() != m.size())
    throw Error(Errc::IndexOutOfRange, "one value per element required");
  ScalarFunction f{Carrier(m)};
  f.values_ = std::move(values);
  return f;
}

ScalarFunction ScalarFunction::lattice(const LatticeGroup &g, std::vector<ExpPolyTerm> terms) {
  for (const auto &t : terms) {
    if (t.base.size() != g.rank())
      throw Error(Errc::IndexOutOfRange, "term base has wrong dimension");
    for (const auto &a : t.factors)
      if (a.a.size() != g.rank())
        throw Error(Errc::IndexOutOfRange, "term factor has wrong dimension");
  }
  ScalarFunction f{Carrier(g)};
  f.terms_ = std::move(terms);
  return f;
}

ScalarFunction ScalarFunction::constant(const Carrier &c, Complex value) {
  if (c.is_finite())
    return dense(c.finite(), ComplexVector::Constant(c.finite().size(), value));
  const int d = c.lattice().rank();
  return lattice(c.lattice(), {ExpPolyTerm{value, ComplexVector::Ones(d), {}}});
}

ScalarFunction ScalarFunction::from(const MultiplicativeFunction &chi) {
  if (chi.carrier().is_finite()) return dense(chi.carrier().finite(), chi.dense());
  return lattice(chi.carrier().lattice(), {ExpPolyTerm{{1.0, 0.0}, chi.bases(), {}}});
}

ScalarFunction ScalarFunction::from(const AdditiveFunction &a) {
  const Carrier &c = a.carrier();
  if (c.is_finite()) {
    ComplexVector v(c.finite().size());
    for (int x = 0; x < c.finite().size(); ++x) v(x) = a(x);
    return dense(c.finite(), v);
  }
  const int d = c.lattice().rank();
  return lattice(c.lattice(),
                 {ExpPolyTerm{{1.0, 0.0}, ComplexVector::Ones(d), {AffineForm{a.coefficients(), {}}}}});
}

Complex ScalarFunction::operator()(const Point &x) const {
  if (is_dense()) return values_(std::get<Index>(x));
  const LatticePoint &p = std::get<LatticePoint>(x);
  const ComplexVector pc = p.cast<double>().cast<Complex>();
  Complex sum{};
  for (const auto &t : terms_) {
    Complex v = t.coef;
    for (Eigen::Index i = 0; i < p.size(); ++i) v *= ipow(t.base(i), p(i));
    for (const auto &f : t.factors) v *= f.a.cwiseProduct(pc).sum() + f.b;
    sum += v;
  }
  return sum;
}

ScalarFunction ScalarFunction::compose(const InvolutiveAutomorphism &sigma) const {
  require_same_carrier(carrier_, sigma.carrier());
  ScalarFunction r{carrier_};
  if (is_dense()) {
    r.values_.resize(values_.size());
    for (Eigen::Index x = 0; x < values_.size(); ++x)
      r.values_(x) = values_(sigma(static_cast<Index>(x)));
    return r;
  }
  // <a, S x> = <S^T a, x>.
  const Eigen::MatrixXcd st = sigma.matrix().transpose().cast<double>().cast<Complex>();
  for (const auto &t : terms_) {
    ExpPolyTerm u{t.coef, compose_bases(t.base, sigma.matrix()), {}};
    for (const auto &f : t.factors) u.factors.push_back({st * f.a, f.b});
    r.terms_.push_back(std::move(u));
  }
  return r;
}

ScalarFunction ScalarFunction::left_translate(const Point &x0) const {
  ScalarFunction r{carrier_};
  if (is_dense()) {
    const FiniteMonoid &m = carrier_.finite();
    const Index a = std::get<Index>(x0);
    r.values_.resize(values_.size());
    for (int y = 0; y < m.size(); ++y) r.values_(y) = values_(m.mul(a, y));
    return r;
  }
  const LatticePoint &p = std::get<LatticePoint>(x0);
  const ComplexVector pc = p.cast<double>().cast<Complex>();
  for (const auto &t : terms_) {
    ExpPolyTerm u = t;
    for (Eigen::Index i = 0; i < p.size(); ++i) u.coef *= ipow(t.base(i), p(i));
    for (auto &f : u.factors) f.b += f.a.cwiseProduct(pc).sum();
    r.terms_.push_back(std::move(u));
  }
  return r;
}

double ScalarFunction::sup_norm(int box) const {
  if (is_dense()) return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  double best = 0.0;
  for (const Point &x : carrier_.sample(box)) best = std::max(best, std::abs((*this)(x)));
  return best;
}

ScalarFunction &ScalarFunction::operator+=(const ScalarFunction &o) {
  require_same_carrier(carrier_, o.carrier_);
  if (is_dense()) {
    values_ += o.values_;
  } else {
    for (const auto &t : o.terms_)
      if (t.coef != Complex{}) terms_.push_back(t);
  }
  return *this;
}

ScalarFunction &ScalarFunction::operator*=(Complex s) {
  if (is_dense()) {
    values_ *= s;
  } else if (s == Complex{}) {
    terms_.clear();
  } else {
    for (auto &t : terms_) t.coef *= s;
  }
  return *this;
}

ScalarFunction operator*(const ScalarFunction &a, const ScalarFunction &b) {
  require_same_carrier(a.carrier(), b.carrier());
  if (a.is_dense()) return ScalarFunction::dense(a.carrier().finite(), a.values().cwiseProduct(b.values()));
  std::vector<ExpPolyTerm> terms;
  for (const auto &s : a.terms())
    for (const auto &t : b.terms()) {
      ExpPolyTerm u{s.coef * t.coef, s.base.cwiseProduct(t.base), s.factors};
      u.factors.insert(u.factors.end(), t.factors.begin(), t.factors.end());
      if (u.coef != Complex{}) terms.push_back(std::move(u));
    }
  return ScalarFunction::lattice(a.carrier().lattice(), std::move(terms));
}

ScalarFunction operator*(const ScalarFunction &a, const MultiplicativeFunction &chi) {
  return a * ScalarFunction::from(chi);
}

// ---------------------------------------------------------------------------
// Equations

const char *equation_name(EquationId eq) {
  switch (eq) {
    case EquationId::SineAddition: return "SINE_ADDITION";
    case EquationId::MuSineSubtraction: return "MU_SINE_SUBTRACTION";
    case EquationId::Wilson: return "WILSON";
    case EquationId::Main: return "MAIN";
    case EquationId::Application: return "APPLICATION";
  }
  return "?";
}

std::optional<EquationId> parse_equation(std::string_view name) {
  for (EquationId eq : {EquationId::SineAddition, EquationId::MuSineSubtraction,
                        EquationId::Wilson, EquationId::Main, EquationId::Application})
    if (name == equation_name(eq)) return eq;
  return std::nullopt;
}

std::vector<std::string> required_slots(EquationId eq) {
  switch (eq) {
    case EquationId::SineAddition:
    case EquationId::Wilson: return {"f", "g"};
    case EquationId::MuSineSubtraction: return {"k", "l"};
    case EquationId::Main:
    case EquationId::Application: return {"f", "g", "h"};
  }
  return {};
}

const std::optional<ScalarFunction> &Slots::get(std::string_view name) const {
  return const_cast<Slots *>(this)->get(name);
}

std::optional<ScalarFunction> &Slots::get(std::string_view name) {
  if (name == "f") return f;
  if (name == "g") return g;
  if (name == "h") return h;
  if (name == "k") return k;
  if (name == "l") return l;
  throw Error(Errc::MissingSlot, "unknown slot " + std::string(name));
}

namespace {

void check_slots(EquationId eq, const Slots &slots, const WeightFunction &mu) {
  for (const auto &name : required_slots(eq)) {
    const auto &s = slots.get(name);
    if (!s) throw Error(Errc::MissingSlot, std::string(equation_name(eq)) + " needs slot " + name);
    require_same_carrier(s->carrier(), mu.carrier());
  }
}

Complex residual_unchecked(EquationId eq, const Slots &s, const WeightFunction &mu,
                           const Carrier &c, const Point &x, const Point &y) {
  const auto &sigma = mu.sigma();
  switch (eq) {
    case EquationId::SineAddition: {
      const auto &f = *s.f, &g = *s.g;
      return f(c.multiply(x, y)) - f(x) * g(y) - f(y) * g(x);
    }
    case EquationId::MuSineSubtraction: {
      const auto &k = *s.k, &l = *s.l;
      return mu(y) * k(c.multiply(x, sigma(y))) - k(x) * l(y) + k(y) * l(x);
    }
    case EquationId::Wilson: {
      const auto &f = *s.f, &g = *s.g;
      return f(c.multiply(x, y)) + mu(y) * f(c.multiply(sigma(y), x)) - 2.0 * f(x) * g(y);
    }
    case EquationId::Main: {
      const auto &f = *s.f, &g = *s.g, &h = *s.h;
      return f(c.multiply(x, y)) - mu(y) * f(c.multiply(sigma(y), x)) - g(x) * h(y);
    }
    case EquationId::Application: {
      const auto &f = *s.f, &g = *s.g, &h = *s.h;
      return f(c.multiply(x, y)) + mu(y) * g(c.multiply(sigma(y), x)) - h(x) * h(y);
    }
  }
  return {};
}

}  // namespace

Complex residual(EquationId eq, const Slots &slots, const WeightFunction &mu,
                 const Point &x, const Point &y) {
  check_slots(eq, slots, mu);
  return residual_unchecked(eq, slots, mu, mu.carrier(), x, y);
}

ResidualScan scan_residual(EquationId eq, const Slots &slots, const WeightFunction &mu,
                           const Scope &scope) {
  check_slots(eq, slots, mu);
  const Carrier &c = mu.carrier();
  if (scope.all_pairs && !c.is_finite())
    throw Error(Errc::InvalidParams, "ALL_PAIRS needs a finite carrier; use a box");
  const auto points = c.sample(scope.box);
  ResidualScan scan{0.0, points.front(), points.front()};
  for (const Point &x : points)
    for (const Point &y : points) {
      const double r = std::abs(residual_unchecked(eq, slots, mu, c, x, y));
      if (r > scan.max) scan = {r, x, y};
    }
  return scan;
}

double max_residual(EquationId eq, const Slots &slots, const WeightFunction &mu,
                    const Scope &scope) {
  return scan_residual(eq, slots, mu, scope).max;
}

std::pair<ScalarFunction, ScalarFunction> mu_even_odd(const ScalarFunction &h,
                                                      const WeightFunction &mu) {
  require_same_carrier(h.carrier(), mu.carrier());
  const ScalarFunction reflected = h.compose(mu.sigma()) * mu.mu();
  return {(h + reflected) * Complex{0.5, 0.0}, (h - reflected) * Complex{0.5, 0.0}};
}

std::string point_str(const Point &p) {
  if (std::holds_alternative<Index>(p)) return std::to_string(std::get<Index>(p));
  const auto &v = std::get<LatticePoint>(p);
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace mfe
