#include "mfe/analysis.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "mfe/linalg.hpp"

namespace mfe {

ComplexMatrix NullspaceBasis::matrix() const {
  ComplexMatrix out(carrier.size(), dimension);
  for (int j = 0; j < dimension; ++j) out.col(j) = basis[j].values();
  return out;
}

ComplexMatrix main_operator_matrix(const FiniteMonoid &m, const WeightFunction &mu) {
  const int n = m.size();
  const auto &sigma = mu.sigma();
  ComplexMatrix a = ComplexMatrix::Zero(n * n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int row = x * n + y;
      a(row, m.mul(x, y)) += 1.0;
      a(row, m.mul(sigma(y), x)) -= mu(y);
    }
  return a;
}

namespace {

using ExactMatrix = std::vector<std::vector<GaussianRational>>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(ExactMatrix &a, int cols) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < static_cast<int>(a.size()); ++col) {
    int p = row;
    while (p < static_cast<int>(a.size()) && a[p][col].is_zero()) ++p;
    if (p == static_cast<int>(a.size())) continue;
    std::swap(a[p], a[row]);
    const GaussianRational lead = a[row][col];
    for (int j = col; j < cols; ++j) a[row][j] = a[row][j] / lead;
    for (int r = 0; r < static_cast<int>(a.size()); ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      const GaussianRational factor = a[r][col];
      for (int j = col; j < cols; ++j) a[r][j] = a[r][j] - factor * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::optional<std::vector<ComplexVector>> exact_nullspace(const FiniteMonoid &m,
                                                          const WeightFunction &mu) {
  const int n = m.size();
  std::vector<GaussianRational> mu_exact(n);
  for (int y = 0; y < n; ++y)
    if (!GaussianRational::from_quarter_turn(mu.mu().exact(y), mu_exact[y]))
      return std::nullopt;
  const auto &sigma = mu.sigma();
  try {
    ExactMatrix a;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        std::vector<GaussianRational> row(n);
        row[m.mul(x, y)] = row[m.mul(x, y)] + GaussianRational(1);
        row[m.mul(sigma(y), x)] = row[m.mul(sigma(y), x)] - mu_exact[y];
        if (std::any_of(row.begin(), row.end(), [](auto &v) { return !v.is_zero(); }))
          a.push_back(std::move(row));
      }
    const std::vector<int> pivots = rref(a, n);
    std::vector<ComplexVector> basis;
    for (int free = 0; free < n; ++free) {
      if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
      ComplexVector v = ComplexVector::Zero(n);
      v(free) = 1.0;
      for (std::size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = (-a[r][free]).to_complex();
      basis.push_back(std::move(v));
    }
    return basis;
  } catch (const std::overflow_error &) {
    return std::nullopt;
  }
}

}  // namespace

NullspaceBasis nullspace_basis(const FiniteMonoid &m, const WeightFunction &mu,
                               NullspaceMethod method) {
  if (!(mu.carrier() == Carrier(m)))
    throw Error(Errc::CarrierMismatch, "weight lives on another carrier");
  NullspaceBasis out{m, mu, {}, 0, false};
  if (method != NullspaceMethod::Float) {
    if (auto exact = exact_nullspace(m, mu)) {
      for (auto &v : *exact) out.basis.push_back(ScalarFunction::dense(m, std::move(v)));
      out.dimension = static_cast<int>(out.basis.size());
      out.exact = true;
      return out;
    }
    if (method == NullspaceMethod::Exact)
      throw Error(Errc::InvalidParams, "mu values are not exact Gaussian rationals");
  }
  const ComplexMatrix kernel = orthonormal_nullspace(main_operator_matrix(m, mu));
  for (Eigen::Index j = 0; j < kernel.cols(); ++j)
    out.basis.push_back(ScalarFunction::dense(m, kernel.col(j)));
  out.dimension = static_cast<int>(kernel.cols());
  return out;
}

// ---------------------------------------------------------------------------
// Oracle

std::size_t OracleReport::unclassified() const {
  return static_cast<std::size_t>(
      std::count_if(found.begin(), found.end(), [](auto &s) { return !s.classified; }));
}

namespace {

// Residual of the rank-one constraint: the part of vec(g h^T) outside the
// image of f -> F, plus the two normalizations |g|^2 = |h|^2 = 1.
class RankOneProblem {
 public:
  RankOneProblem(ComplexMatrix complement_adjoint, int n)
      : qh_(std::move(complement_adjoint)), n_(n) {}

  int unknowns() const { return 4 * n_; }

  Eigen::VectorXd residual(const Eigen::VectorXd &w) const {
    const auto [g, h] = split(w);
    ComplexVector outer(n_ * n_);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) outer(x * n_ + y) = g(x) * h(y);
    const ComplexVector r = qh_ * outer;
    Eigen::VectorXd out(2 * r.size() + 2);
    out << r.real(), r.imag(), g.squaredNorm() - 1.0, h.squaredNorm() - 1.0;
    return out;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd &w) const {
    const auto [g, h] = split(w);
    const Eigen::Index m = qh_.rows();
    ComplexMatrix jg = ComplexMatrix::Zero(m, n_), jh = ComplexMatrix::Zero(m, n_);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        jg.col(x) += qh_.col(x * n_ + y) * h(y);
        jh.col(y) += qh_.col(x * n_ + y) * g(x);
      }
    // The residual is holomorphic in (g, h): d/d(re) = J, d/d(im) = iJ.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * m + 2, 4 * n_);
    auto place = [&](const ComplexMatrix &j, int offset) {
      jac.block(0, offset, m, n_) = j.real();
      jac.block(0, offset + n_, m, n_) = -j.imag();
      jac.block(m, offset, m, n_) = j.imag();
      jac.block(m, offset + n_, m, n_) = j.real();
    };
    place(jg, 0);
    place(jh, 2 * n_);
    jac.block(2 * m, 0, 1, 2 * n_) = 2.0 * w.segment(0, 2 * n_).transpose();
    jac.block(2 * m + 1, 2 * n_, 1, 2 * n_) = 2.0 * w.segment(2 * n_, 2 * n_).transpose();
    return jac;
  }

  std::pair<ComplexVector, ComplexVector> split(const Eigen::VectorXd &w) const {
    ComplexVector g(n_), h(n_);
    for (int i = 0; i < n_; ++i) {
      g(i) = {w(i), w(n_ + i)};
      h(i) = {w(2 * n_ + i), w(3 * n_ + i)};
    }
    return {g, h};
  }

 private:
  ComplexMatrix qh_;
  int n_;
};

// Damped Gauss-Newton with backtracking; returns the final residual norm.
double newton_solve(const RankOneProblem &p, Eigen::VectorXd &w, const OracleOptions &opts) {
  Eigen::VectorXd r = p.residual(w);
  double norm = r.norm();
  double lambda = opts.damping;
  for (int it = 0; it < opts.max_iterations && norm > opts.converge_tolerance; ++it) {
    const Eigen::MatrixXd j = p.jacobian(w);
    const Eigen::MatrixXd normal =
        j.transpose() * j + lambda * Eigen::MatrixXd::Identity(w.size(), w.size());
    const Eigen::VectorXd step = normal.ldlt().solve(-(j.transpose() * r));
    double t = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, t *= 0.5) {
      Eigen::VectorXd trial = w + t * step;
      Eigen::VectorXd tr = p.residual(trial);
      if (tr.norm() < norm) {
        w = std::move(trial);
        r = std::move(tr);
        norm = r.norm();
        improved = true;
        break;
      }
    }
    if (improved) {
      lambda = std::max(opts.damping, lambda * 0.1);
    } else {
      lambda *= 100.0;
      if (lambda > 1e6) break;
    }
  }
  return norm;
}

struct Fit {
  double error = 1e300;
  int chi = -1;
  Complex c, c1, c2;
};

// Relative least-squares error of approximating target in span(columns).
double span_fit(const ComplexMatrix &columns, const ComplexVector &target, ComplexVector &coef) {
  coef = columns.completeOrthogonalDecomposition().solve(target);
  return (columns * coef - target).norm() / std::max(1.0, target.norm());
}

Fit classify(const OracleSolution &s, const std::vector<MultiplicativeFunction> &chars,
             const WeightFunction &mu, const ComplexMatrix &null_basis) {
  Fit best;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    // EQUAL-branch characters only produce h == 0 on finite carriers.
    if (sigma_branch(chars[i], mu) != Branch::Distinct) continue;
    auto [uf, vf] = even_odd_characters(chars[i], mu);
    const ComplexVector u = uf.values(), v = vf.values();
    ComplexVector coef;
    ComplexMatrix hv(v.size(), 1);
    hv.col(0) = v;
    const double eh = span_fit(hv, s.h, coef);
    const Complex c1 = coef(0);
    ComplexMatrix uv(u.size(), 2);
    uv << u, v;
    const double eg = span_fit(uv, s.g, coef);
    const Complex c = coef(0), c2 = coef(1);
    const ComplexVector theta = s.f - 0.5 * c1 * (c * v + c2 * u);
    const ComplexVector off = theta - null_basis * (null_basis.adjoint() * theta);
    const double ef = off.norm() / std::max(1.0, s.f.norm());
    const double err = std::max({eh, eg, ef});
    if (err < best.error) best = {err, static_cast<int>(i), c, c1, c2};
  }
  return best;
}

}  // namespace

OracleReport oracle_solve_main(const FiniteMonoid &m, const WeightFunction &mu, int starts,
                               std::uint64_t seed, const OracleOptions &opts) {
  const int n = m.size();
  if (n > kOracleMaxCarrier)
    throw Error(Errc::CarrierTooLarge, "oracle is limited to " +
                                           std::to_string(kOracleMaxCarrier) + " elements");
  if (!(mu.carrier() == Carrier(m)))
    throw Error(Errc::CarrierMismatch, "weight lives on another carrier");
  OracleReport report;
  report.starts = starts;
  report.seed = seed;

  const ComplexMatrix op = main_operator_matrix(m, mu);
  const ComplexMatrix image = orthonormal_range(op);
  const ComplexMatrix null_basis = orthonormal_nullspace(op);
  report.image_dimension = static_cast<int>(image.cols());
  report.nullspace_dimension = static_cast<int>(null_basis.cols());
  if (starts <= 0) return report;

  const ComplexMatrix complement = orthonormal_nullspace(ComplexMatrix(image.adjoint()));
  const RankOneProblem problem(complement.adjoint(), n);
  const auto solver = op.completeOrthogonalDecomposition();
  const auto chars = enumerate_multiplicative(m);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd w(problem.unknowns());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
    if (newton_solve(problem, w, opts) > opts.converge_tolerance) continue;
    ++report.converged;

    auto [g, h] = problem.split(w);
    Eigen::Index p = 0;
    const double hmax = h.cwiseAbs().maxCoeff();
    while (std::abs(h(p)) < (1.0 - 1e-6) * hmax) ++p;
    const Complex scale = h(p);
    h /= scale;
    g *= scale;
    ComplexVector outer(n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) outer(x * n + y) = g(x) * h(y);
    // Minimum-norm solution is orthogonal to the nullspace.
    ComplexVector f = solver.solve(outer);

    OracleSolution sol{f, g, h};
    Slots slots;
    slots.f = ScalarFunction::dense(m, f);
    slots.g = ScalarFunction::dense(m, g);
    slots.h = ScalarFunction::dense(m, h);
    sol.residual = max_residual(EquationId::Main, slots, mu, Scope::all());
    if (!(sol.residual < opts.soundness_tolerance)) continue;

    const bool duplicate = std::any_of(report.found.begin(), report.found.end(), [&](auto &o) {
      const double d = std::max({(o.f - sol.f).cwiseAbs().maxCoeff(),
                                 (o.g - sol.g).cwiseAbs().maxCoeff(),
                                 (o.h - sol.h).cwiseAbs().maxCoeff()});
      return d < opts.dedup_tolerance;
    });
    if (duplicate) continue;

    const Fit fit = classify(sol, chars, mu, null_basis);
    sol.fit_error = fit.error;
    sol.classified = fit.error < opts.classify_tolerance;
    sol.tag = sol.classified ? "main/DISTINCT" : "UNCLASSIFIED";
    if (sol.classified) {
      sol.chi_index = fit.chi;
      sol.c = fit.c;
      sol.c1 = fit.c1;
      sol.c2 = fit.c2;
    }
    report.found.push_back(std::move(sol));
  }

  auto key = [](const OracleSolution &s) {
    std::vector<double> k{s.residual};
    for (const ComplexVector *v : {&s.h, &s.g, &s.f})
      for (Eigen::Index i = 0; i < v->size(); ++i) {
        k.push_back((*v)(i).real());
        k.push_back((*v)(i).imag());
      }
    return k;
  };
  std::stable_sort(report.found.begin(), report.found.end(),
                   [&](auto &a, auto &b) { return key(a) < key(b); });
  return report;
}

// ---------------------------------------------------------------------------
// Structural properties

bool StructureReport::all_pass() const {
  return std::all_of(clauses.begin(), clauses.end(), [](auto &c) { return c.pass; });
}

const ClauseResult *StructureReport::find(const std::string &name) const {
  for (const auto &c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

template <typename F>
ClauseResult scan_points(const std::string &name, const std::vector<Point> &points,
                         double tol, F &&violation) {
  ClauseResult r{name};
  for (const Point &x : points) {
    const double v = violation(x);
    if (v > r.max_violation) {
      r.max_violation = v;
      r.witness_x = x;
    }
  }
  r.pass = r.max_violation < tol;
  return r;
}

template <typename F>
ClauseResult scan_pairs(const std::string &name, const std::vector<Point> &points, double tol,
                        F &&violation) {
  ClauseResult r{name};
  for (const Point &x : points)
    for (const Point &y : points) {
      const double v = violation(x, y);
      if (v > r.max_violation) {
        r.max_violation = v;
        r.witness_x = x;
        r.witness_y = y;
      }
    }
  r.pass = r.max_violation < tol;
  return r;
}

}  // namespace

StructureReport verify_main_structure(const Slots &slots, const WeightFunction &mu,
                              const VerifyOptions &opts) {
  for (const char *name : {"f", "g", "h"})
    if (!slots.get(name)) throw Error(Errc::MissingSlot, std::string("slot ") + name);
  const ScalarFunction &g = *slots.g, &h = *slots.h;
  if (!(g.carrier() == mu.carrier()) || !(h.carrier() == mu.carrier()))
    throw Error(Errc::CarrierMismatch, "slots live on another carrier");
  if (g.sup_norm(opts.box) < opts.tolerance || h.sup_norm(opts.box) < opts.tolerance)
    throw Error(Errc::PreconditionViolated, "needs g != 0 and h != 0");

  const Carrier &c = mu.carrier();
  const auto &sigma = mu.sigma();
  const auto points = c.sample(opts.box);
  const double tol = opts.tolerance;
  StructureReport report;

  report.clauses.push_back(scan_points("odd", points, tol, [&](const Point &x) {
    const Point sx = sigma(x);
    return std::abs(h(sx) + mu(sx) * h(x));
  }));
  report.clauses.push_back(scan_pairs("central", points, tol, [&](const Point &x, const Point &y) {
    return std::abs(h(c.multiply(x, y)) - h(c.multiply(y, x)));
  }));

  // From the law at x = x0: l(y) = mu(y) h(x0 sigma(y)) / h(x0) is a companion
  // whenever any companion exists.
  Point x0 = points.front();
  double hmax = -1.0;
  for (const Point &x : points)
    if (std::abs(h(x)) > hmax) {
      hmax = std::abs(h(x));
      x0 = x;
    }
  Slots law;
  law.k = h;
  law.l = h.left_translate(x0).compose(sigma) * mu.mu() * (Complex{1.0, 0.0} / h(x0));
  const Scope scope = c.is_finite() ? Scope::all() : Scope::sample_box(opts.box);
  {
    const ResidualScan scan = scan_residual(EquationId::MuSineSubtraction, law, mu, scope);
    report.clauses.push_back({"sine_subtraction", scan.max < tol, scan.max, scan.x, scan.y});
  }

  const Complex ge = g(c.identity());
  report.g_at_identity_zero = std::abs(ge) < tol;
  if (report.g_at_identity_zero) {
    const Complex b = g(x0) / h(x0);
    report.b = b;
    ClauseResult r = scan_points("g_equals_bh", points, tol,
                                 [&](const Point &x) { return std::abs(g(x) - b * h(x)); });
    if (std::abs(b) < tol) r.pass = false;
    report.clauses.push_back(r);
  } else {
    Slots comp;
    comp.k = h;
    comp.l = g * (Complex{1.0, 0.0} / ge);
    const ResidualScan scan = scan_residual(EquationId::MuSineSubtraction, comp, mu, scope);
    report.clauses.push_back({"companion_g", scan.max < tol, scan.max, scan.x, scan.y});
  }
  return report;
}

StructureReport verify_main_structure(const SolutionTriple &t, const VerifyOptions &opts) {
  if (t.equation != EquationId::Main)
    throw Error(Errc::PreconditionViolated, "structure checks apply to MAIN solutions");
  return verify_main_structure(t.slots, t.weight, opts);
}

}  // namespace mfe
