#include "mfe/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace mfe::cli {

using nlohmann::json;

SyntaxError::SyntaxError(int line, int column, const std::string &what)
    : Error(Errc::SyntaxError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  int column;
};

struct Line {
  int number;
  std::vector<Token> tokens;
};

// Non-empty lines with comments stripped.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.tokens.push_back({std::string(raw.substr(i, j - i)), static_cast<int>(i) + 1});
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

std::optional<long long> to_integer(const std::string &s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> to_double(const std::string &s) {
  if (s.empty()) return std::nullopt;
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

long long expect_integer(const Line &line, std::size_t i, const char *what) {
  if (i >= line.tokens.size()) {
    const int col = line.tokens.empty() ? 1
                                        : line.tokens.back().column +
                                              static_cast<int>(line.tokens.back().text.size());
    throw SyntaxError(line.number, col, std::string("expected ") + what);
  }
  auto v = to_integer(line.tokens[i].text);
  if (!v)
    throw SyntaxError(line.number, line.tokens[i].column,
                      std::string("expected ") + what + ", got '" + line.tokens[i].text + "'");
  return *v;
}

void expect_end(const Line &line, std::size_t count) {
  if (line.tokens.size() > count)
    throw SyntaxError(line.number, line.tokens[count].column,
                      "unexpected '" + line.tokens[count].text + "'");
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = s.find(sep, pos);
    out.emplace_back(s.substr(pos, end == std::string_view::npos ? s.size() - pos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Carrier files

CarrierFile parse_carrier_file(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw SyntaxError(1, 1, "empty carrier file");
  const Line &head = lines.front();
  const std::string &kind = head.tokens[0].text;
  if (kind != "finite" && kind != "lattice")
    throw SyntaxError(head.number, head.tokens[0].column,
                      "expected 'finite' or 'lattice', got '" + kind + "'");
  const long long size = expect_integer(head, 1, kind == "finite" ? "element count" : "rank");
  expect_end(head, 2);
  if (size < 1 || size > 4096)
    throw SyntaxError(head.number, head.tokens[1].column, "size out of range");

  if (kind == "lattice") {
    if (lines.size() > 1)
      throw SyntaxError(lines[1].number, lines[1].tokens[0].column,
                        "lattice carriers take no further lines");
    return {LatticeGroup(static_cast<int>(size)), {}};
  }

  const int n = static_cast<int>(size);
  std::vector<std::vector<Index>> table;
  std::optional<Index> identity;
  std::vector<std::string> names;
  std::optional<std::vector<Index>> generators;
  bool have_names = false;

  auto element = [&](const Line &line, std::size_t i) -> Index {
    const Token &t = line.tokens[i];
    if (auto v = to_integer(t.text)) return static_cast<Index>(*v);
    auto it = std::find(names.begin(), names.end(), t.text);
    if (it == names.end())
      throw SyntaxError(line.number, t.column, "unknown element '" + t.text + "'");
    return static_cast<Index>(it - names.begin());
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line &line = lines[li];
    const Token &first = line.tokens[0];
    auto once = [&](bool seen) {
      if (seen) throw SyntaxError(line.number, first.column, "duplicate '" + first.text + "'");
    };
    if (first.text == "identity") {
      once(identity.has_value());
      if (line.tokens.size() < 2) expect_integer(line, 1, "identity element");
      identity = element(line, 1);
      expect_end(line, 2);
    } else if (first.text == "names") {
      once(have_names);
      if (line.tokens.size() != static_cast<std::size_t>(n) + 1)
        throw SyntaxError(line.number, first.column,
                          "expected " + std::to_string(n) + " names");
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        if (std::find(names.begin(), names.end(), line.tokens[i].text) != names.end())
          throw SyntaxError(line.number, line.tokens[i].column, "duplicate name");
        names.push_back(line.tokens[i].text);
      }
      have_names = true;
    } else if (first.text == "generators") {
      once(generators.has_value());
      generators.emplace();
      for (std::size_t i = 1; i < line.tokens.size(); ++i) generators->push_back(element(line, i));
    } else {
      if (static_cast<int>(table.size()) == n)
        throw SyntaxError(line.number, first.column, "more than " + std::to_string(n) + " rows");
      std::vector<Index> row;
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        row.push_back(static_cast<Index>(expect_integer(line, i, "table entry")));
      expect_end(line, n);
      table.push_back(std::move(row));
    }
  }
  const int after = lines.back().number + 1;
  if (static_cast<int>(table.size()) < n)
    throw SyntaxError(after, 1, "expected " + std::to_string(n) + " table rows, got " +
                                    std::to_string(table.size()));
  if (!identity) throw SyntaxError(after, 1, "missing 'identity' line");
  return {make_finite_monoid(table, *identity, generators.value_or(std::vector<Index>{})),
          names};
}

Carrier parse_carrier(std::string_view text) { return parse_carrier_file(text).carrier; }

std::string render_carrier(const CarrierFile &file) {
  std::ostringstream os;
  const Carrier &c = file.carrier;
  if (!c.is_finite()) {
    os << "lattice " << c.lattice().rank() << "\n";
    return os.str();
  }
  const FiniteMonoid &m = c.finite();
  os << "finite " << m.size() << "\n";
  if (!file.names.empty()) {
    os << "names";
    for (const auto &n : file.names) os << ' ' << n;
    os << "\n";
  }
  for (int x = 0; x < m.size(); ++x) {
    for (int y = 0; y < m.size(); ++y) os << (y ? " " : "") << m.mul(x, y);
    os << "\n";
  }
  os << "identity " << m.identity() << "\n";
  if (!m.generators().empty()) {
    os << "generators";
    for (Index g : m.generators()) os << ' ' << g;
    os << "\n";
  }
  return os.str();
}

std::string render_carrier(const Carrier &c) { return render_carrier(CarrierFile{c, {}}); }

Slots parse_values(std::string_view text, const FiniteMonoid &m) {
  const int n = m.size();
  std::map<std::string, std::vector<std::optional<Complex>>> seen;
  for (const Line &line : tokenize(text)) {
    const Token &slot = line.tokens[0];
    if (slot.text.size() != 1 || std::string_view("fghkl").find(slot.text[0]) == std::string_view::npos)
      throw SyntaxError(line.number, slot.column, "unknown slot '" + slot.text + "'");
    const long long index = expect_integer(line, 1, "element index");
    if (index < 0 || index >= n)
      throw SyntaxError(line.number, line.tokens[1].column, "element index out of range");
    double parts[2];
    for (std::size_t i = 2; i < 4; ++i) {
      if (i >= line.tokens.size())
        throw SyntaxError(line.number, line.tokens.back().column, "expected real and imaginary parts");
      auto v = to_double(line.tokens[i].text);
      if (!v) throw SyntaxError(line.number, line.tokens[i].column, "expected a number");
      parts[i - 2] = *v;
    }
    expect_end(line, 4);
    auto &values = seen[slot.text];
    values.resize(n);
    if (values[index])
      throw SyntaxError(line.number, slot.column, "duplicate value for " + slot.text);
    values[index] = Complex{parts[0], parts[1]};
  }
  Slots slots;
  for (auto &[name, values] : seen) {
    ComplexVector v(n);
    for (int x = 0; x < n; ++x) {
      if (!values[x])
        throw Error(Errc::MissingSlot, "slot " + name + " has no value at " + std::to_string(x));
      v(x) = *values[x];
    }
    slots.get(name) = ScalarFunction::dense(m, std::move(v));
  }
  return slots;
}

// ---------------------------------------------------------------------------
// Family sweep

const std::vector<Complex> &sweep_constants() {
  static const std::vector<Complex> k{{1.0, 0.0}, {-0.5, 0.25}, {0.75, -2.0}};
  return k;
}

std::vector<ScalarFunction> sweep_thetas(const WeightFunction &mu) {
  const Carrier &c = mu.carrier();
  std::vector<ScalarFunction> out{ScalarFunction::zero(c)};
  if (!c.is_finite()) return out;
  const NullspaceBasis nb = nullspace_basis(c.finite(), mu);
  if (nb.dimension == 0) return out;
  out.push_back(nb.basis[0]);
  ScalarFunction mix = ScalarFunction::zero(c);
  const auto &k = sweep_constants();
  for (int j = 0; j < nb.dimension; ++j) mix += nb.basis[j] * (k[(j + 1) % k.size()] * double(j + 1));
  out.push_back(mix);
  return out;
}

namespace {

class Sweeper {
 public:
  Sweeper(const WeightFunction &mu, const SweepOptions &opts) : mu_(mu), opts_(opts) {}

  template <typename Build>
  void attempt(SweepRow row, Build &&build) {
    if (opts_.equation && *opts_.equation != row.equation) return;
    try {
      SolutionTriple t = build(opts_.verify);
      row.ok = true;
      row.max_residual = t.max_residual;
      row.degenerate = t.degenerate;
      for (const auto &w : t.warnings) row.message += (row.message.empty() ? "" : "; ") + w;
      row.triple = std::move(t);
    } catch (const Error &e) {
      row.ok = false;
      row.message = e.what();
      row.max_residual = std::numeric_limits<double>::quiet_NaN();
      if (e.code() == Errc::ResidualTooLarge) {
        VerifyOptions loose = opts_.verify;
        loose.tolerance = std::numeric_limits<double>::infinity();
        try {
          row.max_residual = build(loose).max_residual;
        } catch (const Error &) {
        }
      }
    }
    rows_.push_back(std::move(row));
  }

  std::vector<SweepRow> take() { return std::move(rows_); }

 private:
  const WeightFunction &mu_;
  const SweepOptions &opts_;
  std::vector<SweepRow> rows_;
};

SweepRow make_row(const char *family, const char *kase, EquationId eq, int chi,
                  std::vector<std::pair<std::string, Complex>> constants, int theta = -1) {
  SweepRow r;
  r.family = family;
  r.case_label = kase;
  r.equation = eq;
  r.chi_index = chi;
  r.constants = std::move(constants);
  r.theta_index = theta;
  return r;
}

}  // namespace

std::vector<SweepRow> sweep_families(const WeightFunction &mu, const SweepOptions &opts) {
  const Carrier &c = mu.carrier();
  const bool finite = c.is_finite();
  std::vector<MultiplicativeFunction> chars;
  if (finite) {
    chars = enumerate_multiplicative(c.finite());
  } else {
    if (!opts.chi) throw Error(Errc::InvalidParams, "lattice sweeps need a character");
    chars.push_back(*opts.chi);
  }
  // Lattice EQUAL cases need a nonzero sigma-odd A; finite carriers only have 0.
  std::optional<AdditiveFunction> odd_a;
  if (finite) {
    odd_a = AdditiveFunction::zero(c);
  } else if (opts.additive) {
    if (opts.additive->is_sigma_odd(mu.sigma())) odd_a = *opts.additive;
  } else {
    const AdditiveSpace space = additive_functions(c, {}, &mu.sigma());
    if (space.dimension > 0) odd_a = AdditiveFunction::lattice(c.lattice(), space.basis.col(0));
  }
  const bool squares_ok =
      !finite || c.finite().is_group() || is_generated_by_squares(c.finite());
  const std::vector<ScalarFunction> thetas = sweep_thetas(mu);
  const auto &K = sweep_constants();
  const int nk = static_cast<int>(K.size());
  const int nt = static_cast<int>(thetas.size());
  Sweeper s(mu, opts);

  auto params_for = [&](int i) {
    FamilyParams p;
    p.chi = chars[i];
    return p;
  };
  const bool weight_free = mu.sigma().is_identity() &&
                           mu.mu().equals(MultiplicativeFunction::one(c));

  // Sine addition carries the trivial weight; run it once per carrier.
  if (weight_free) {
    for (std::size_t i = 0; i < chars.size(); ++i) {
      std::vector<std::pair<int, MultiplicativeFunction>> partners;
      if (finite) {
        for (std::size_t j = i + 1; j < chars.size(); ++j) partners.emplace_back(int(j), chars[j]);
      } else {
        const ComplexVector inv = chars[i].bases().cwiseInverse();
        auto other = MultiplicativeFunction::lattice(c.lattice(), inv);
        if (!other.equals(chars[i])) partners.emplace_back(-1, other);
      }
      for (const auto &[j, chi2] : partners)
        for (const Complex &k : K) {
          SweepRow row = make_row("sine_addition", "DISTINCT_CHARS", EquationId::SineAddition,
                                  int(i), {{"c", k}});
          row.chi2_index = j;
          s.attempt(std::move(row), [&, i, k, chi2 = chi2](const VerifyOptions &o) {
            FamilyParams p = params_for(int(i));
            p.chi2 = chi2;
            p.c = k;
            return sine_addition_family(SineAdditionCase::DistinctChars, p, o);
          });
        }
      if (squares_ok) {
        s.attempt(make_row("sine_addition", "EQUAL_CHARS", EquationId::SineAddition, int(i), {}),
                  [&, i](const VerifyOptions &o) {
                    FamilyParams p = params_for(int(i));
                    if (!finite)
                      p.A = opts.additive
                                ? *opts.additive
                                : AdditiveFunction::lattice(
                                      c.lattice(), ComplexVector::Unit(c.lattice().rank(), 0));
                    return sine_addition_family(SineAdditionCase::EqualChars, p, o);
                  });
      }
    }
  }

  for (int j = 0; j < nk; ++j) {
    s.attempt(make_row("wilson", "ZERO", EquationId::Wilson, -1, {{"g_scale", K[j]}}),
              [&, j](const VerifyOptions &o) {
                FamilyParams p;
                if (finite) {
                  ComplexVector g(c.finite().size());
                  for (Eigen::Index x = 0; x < g.size(); ++x) g(x) = K[j] * double(x + 1);
                  p.arbitrary_g = ScalarFunction::dense(c.finite(), g);
                } else {
                  p.arbitrary_g = ScalarFunction::constant(c, K[j]);
                }
                return wilson_family(WilsonCase::Zero, mu, p, o);
              });
  }

  for (int i = 0; i < static_cast<int>(chars.size()); ++i) {
    const Branch br = sigma_branch(chars[i], mu);
    const bool equal_ok = br == Branch::Equal && squares_ok;
    const bool equal_nontrivial = equal_ok && odd_a && (finite || !odd_a->is_zero());

    if (br == Branch::Distinct) {
      for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nk; ++b)
          s.attempt(make_row("mu_sine_subtraction", "DISTINCT", EquationId::MuSineSubtraction, i,
                             {{"c1", K[a]}, {"c2", K[b]}}),
                    [&, i, a, b](const VerifyOptions &o) {
                      FamilyParams p = params_for(i);
                      p.c1 = K[a];
                      p.c2 = K[b];
                      return mu_sine_subtraction_family(MuSineCase::Distinct, mu, p, o);
                    });
    } else if (equal_nontrivial) {
      for (int a = 0; a < nk; ++a)
        s.attempt(make_row("mu_sine_subtraction", "EQUAL", EquationId::MuSineSubtraction, i,
                           {{"c1", K[a]}}),
                  [&, i, a](const VerifyOptions &o) {
                    FamilyParams p = params_for(i);
                    p.c1 = K[a];
                    p.A = odd_a;
                    return mu_sine_subtraction_family(MuSineCase::Equal, mu, p, o);
                  });
    }

    for (int a = 0; a < nk; ++a)
      s.attempt(make_row("wilson", "EVEN_SCALED", EquationId::Wilson, i, {{"alpha", K[a]}}),
                [&, i, a](const VerifyOptions &o) {
                  FamilyParams p = params_for(i);
                  p.alpha = K[a];
                  return wilson_family(WilsonCase::EvenScaled, mu, p, o);
                });
    if (wilson_third_condition(chars[i], mu)) {
      for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nk; ++b)
          s.attempt(make_row("wilson", "THIRD", EquationId::Wilson, i,
                             {{"c", K[a]}, {"alpha", K[b]}}),
                    [&, i, a, b](const VerifyOptions &o) {
                      FamilyParams p = params_for(i);
                      p.c = K[a];
                      p.alpha = K[b];
                      return wilson_family(WilsonCase::Third, mu, p, o);
                    });
    }
    if (equal_ok && odd_a) {
      for (int a = 0; a < nk; ++a)
        s.attempt(make_row("wilson", "ADDITIVE", EquationId::Wilson, i, {{"alpha", K[a]}}),
                  [&, i, a](const VerifyOptions &o) {
                    FamilyParams p = params_for(i);
                    p.alpha = K[a];
                    p.A = odd_a;
                    return wilson_family(WilsonCase::Additive, mu, p, o);
                  });
    }

    for (int t = 0; t < nt; ++t) {
      if (br == Branch::Distinct) {
        for (int a = 0; a < nk; ++a)
          for (int b = 0; b < nk; ++b)
            for (int d = 0; d < nk; ++d)
              s.attempt(make_row("main", "DISTINCT", EquationId::Main, i,
                                 {{"c", K[a]}, {"c1", K[b]}, {"c2", K[d]}}, t),
                        [&, i, a, b, d, t](const VerifyOptions &o) {
                          FamilyParams p = params_for(i);
                          p.c = K[a];
                          p.c1 = K[b];
                          p.c2 = K[d];
                          p.theta = thetas[t];
                          return main_family(MainCase::Distinct, mu, p, o);
                        });
        for (int a = 0; a < nk; ++a)
          for (int b = 0; b < nk; ++b)
            s.attempt(make_row("application", "A", EquationId::Application, i,
                               {{"alpha", K[a]}, {"c2", K[b]}}, t),
                      [&, i, a, b, t](const VerifyOptions &o) {
                        FamilyParams p = params_for(i);
                        p.alpha = K[a];
                        p.c2 = K[b];
                        p.theta = thetas[t];
                        return application_family(ApplicationCase::A, mu, p, o);
                      });
      } else if (equal_ok && odd_a) {
        if (equal_nontrivial)
          for (int a = 0; a < nk; ++a)
            for (int b = 0; b < nk; ++b)
              s.attempt(make_row("main", "EQUAL", EquationId::Main, i,
                                 {{"c", K[a]}, {"c2", K[b]}}, t),
                        [&, i, a, b, t](const VerifyOptions &o) {
                          FamilyParams p = params_for(i);
                          p.c = K[a];
                          p.c2 = K[b];
                          p.A = odd_a;
                          p.theta = thetas[t];
                          return main_family(MainCase::Equal, mu, p, o);
                        });
        for (int a = 0; a < nk; ++a)
          for (int b = 0; b < nk; ++b)
            s.attempt(make_row("application", "B", EquationId::Application, i,
                               {{"alpha", K[a]}, {"kappa", K[b]}}, t),
                      [&, i, a, b, t](const VerifyOptions &o) {
                        FamilyParams p = params_for(i);
                        p.alpha = K[a];
                        p.kappa = K[b];
                        p.A = odd_a;
                        p.theta = thetas[t];
                        return application_family(ApplicationCase::B, mu, p, o);
                      });
      }
    }
  }
  return s.take();
}

// ---------------------------------------------------------------------------
// Formatting

Complex parse_complex(std::string_view text) {
  const std::string s(text);
  auto fail = [&]() -> Complex {
    throw Error(Errc::InvalidParams, "not a complex number: '" + s + "'");
  };
  auto number = [&](const std::string &part, double empty_value) {
    if (part.empty() || part == "+") return empty_value;
    if (part == "-") return -empty_value;
    auto v = to_double(part);
    if (!v) fail();
    return *v;
  };
  if (s.empty()) return fail();
  if (auto colon = s.find(':'); colon != std::string::npos) {
    auto re = to_double(s.substr(0, colon)), im = to_double(s.substr(colon + 1));
    if (!re || !im) return fail();
    return {*re, *im};
  }
  if (s.back() != 'i') {
    auto v = to_double(s);
    if (!v) return fail();
    return {*v, 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;)
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  if (split_at == std::string::npos) return {0.0, number(body, 1.0)};
  auto re = to_double(body.substr(0, split_at));
  if (!re) return fail();
  return {*re, number(body.substr(split_at), 1.0)};
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

std::string fmt(Complex z) {
  const double re = round12(z.real()), im = round12(z.imag());
  if (im == 0.0) return fmt(re);
  if (re == 0.0) return fmt(im) + "i";
  return fmt(re) + (im < 0 ? "-" : "+") + fmt(std::abs(im)) + "i";
}

json to_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

json to_json(Complex z) { return json::array({to_json(z.real()), to_json(z.imag())}); }

json to_json(const ExactValue &v) {
  json out = {{"value", to_json(v.to_complex())}};
  if (!v.is_zero()) out["rotation"] = v.turn().str();
  return out;
}

json to_json(const ComplexVector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const MultiplicativeFunction &chi) {
  if (chi.carrier().is_finite()) {
    json out = json::array();
    for (const auto &v : chi.exact_values()) out.push_back(to_json(v));
    return out;
  }
  return {{"bases", to_json(chi.bases())}};
}

json to_json(const Point &p) {
  if (std::holds_alternative<Index>(p)) return std::get<Index>(p);
  json out = json::array();
  const auto &v = std::get<LatticePoint>(p);
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string value_list(const MultiplicativeFunction &chi) {
  if (!chi.carrier().is_finite()) return chi.str();
  std::string s = "[";
  for (std::size_t i = 0; i < chi.exact_values().size(); ++i)
    s += (i ? " " : "") + chi.exact_values()[i].str();
  return s + "]";
}

std::string value_list(const ComplexVector &v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v(i));
  return s + "]";
}

std::string perm_list(const InvolutiveAutomorphism &sigma) {
  if (!sigma.carrier().is_finite()) return sigma.str();
  std::string s = "[";
  for (std::size_t i = 0; i < sigma.perm().size(); ++i)
    s += (i ? " " : "") + std::to_string(sigma.perm()[i]);
  return s + "]";
}

json sigma_json(const InvolutiveAutomorphism &sigma) {
  if (sigma.carrier().is_finite()) return sigma.perm();
  json rows = json::array();
  for (Eigen::Index r = 0; r < sigma.matrix().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < sigma.matrix().cols(); ++c) row.push_back(sigma.matrix()(r, c));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Command plumbing

struct Config {
  std::string command, carrier_path, values_path, json_path;
  std::string sigma, mu, chi, additive, equation;
  int box = kDefaultBox;
  int starts = 200;
  std::uint64_t seed = 42;
  double tolerance = kDefaultTolerance;
};

struct Weighting {
  int sigma_index = -1, mu_index = -1;
  WeightFunction weight;
};

int parse_index(const std::string &s, const char *what) {
  auto v = to_integer(s);
  if (!v || *v < 0 || *v > std::numeric_limits<int>::max())
    throw Error(Errc::InvalidParams, std::string(what) + " must be a non-negative index");
  return static_cast<int>(*v);
}

ComplexVector parse_complex_list(const std::string &s, int expected, const char *what) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != expected)
    throw Error(Errc::InvalidParams, std::string(what) + " needs " + std::to_string(expected) +
                                         " comma-separated values");
  ComplexVector v(expected);
  for (int i = 0; i < expected; ++i) v(i) = parse_complex(parts[i]);
  return v;
}

Eigen::MatrixXi parse_matrix(const std::string &s, int rank) {
  const auto rows = split(s, ';');
  if (static_cast<int>(rows.size()) != rank)
    throw Error(Errc::InvalidParams, "--sigma needs " + std::to_string(rank) + " rows");
  Eigen::MatrixXi m(rank, rank);
  for (int r = 0; r < rank; ++r) {
    const auto cols = split(rows[r], ',');
    if (static_cast<int>(cols.size()) != rank)
      throw Error(Errc::InvalidParams, "--sigma needs " + std::to_string(rank) + " columns");
    for (int c = 0; c < rank; ++c) {
      auto v = to_integer(cols[c]);
      if (!v) throw Error(Errc::InvalidParams, "--sigma entries must be integers");
      m(r, c) = static_cast<int>(*v);
    }
  }
  return m;
}

std::vector<Weighting> select_weights(const Carrier &c, const Config &cfg) {
  std::vector<Weighting> out;
  if (!c.is_finite()) {
    const LatticeGroup &g = c.lattice();
    const auto sigma = cfg.sigma.empty() ? InvolutiveAutomorphism::identity(c)
                                         : InvolutiveAutomorphism::lattice(
                                               g, parse_matrix(cfg.sigma, g.rank()));
    const auto mu = cfg.mu.empty() ? MultiplicativeFunction::one(c)
                                   : MultiplicativeFunction::lattice(
                                         g, parse_complex_list(cfg.mu, g.rank(), "--mu"));
    out.push_back({-1, -1, WeightFunction(mu, sigma)});
    return out;
  }
  const FiniteMonoid &m = c.finite();
  const auto sigmas = enumerate_involutive_automorphisms(m);
  std::vector<int> sigma_ids;
  if (cfg.sigma.empty()) {
    for (int i = 0; i < static_cast<int>(sigmas.size()); ++i) sigma_ids.push_back(i);
  } else {
    const int i = parse_index(cfg.sigma, "--sigma");
    if (i >= static_cast<int>(sigmas.size()))
      throw Error(Errc::InvalidParams, "--sigma " + cfg.sigma + " out of range (" +
                                           std::to_string(sigmas.size()) + " involutions)");
    sigma_ids.push_back(i);
  }
  for (int si : sigma_ids) {
    const auto mus = enumerate_admissible_mu(m, sigmas[si]);
    if (cfg.mu.empty()) {
      for (int j = 0; j < static_cast<int>(mus.size()); ++j) out.push_back({si, j, mus[j]});
    } else {
      const int j = parse_index(cfg.mu, "--mu");
      if (j >= static_cast<int>(mus.size()))
        throw Error(Errc::InvalidParams, "--mu " + cfg.mu + " out of range for sigma " +
                                             std::to_string(si) + " (" +
                                             std::to_string(mus.size()) + " admissible)");
      out.push_back({si, j, mus[j]});
    }
  }
  return out;
}

json weight_json(const Weighting &w) {
  json out;
  out["sigma"] = sigma_json(w.weight.sigma());
  out["mu"] = to_json(w.weight.mu());
  if (w.sigma_index >= 0) out["sigma_index"] = w.sigma_index;
  if (w.mu_index >= 0) out["mu_index"] = w.mu_index;
  return out;
}

void print_weight(std::ostream &out, const Weighting &w) {
  out << "sigma";
  if (w.sigma_index >= 0) out << '[' << w.sigma_index << ']';
  out << " = " << perm_list(w.weight.sigma()) << "  mu";
  if (w.mu_index >= 0) out << '[' << w.mu_index << ']';
  out << " = " << value_list(w.weight.mu()) << "\n";
}

const FiniteMonoid &require_finite(const Carrier &c, const std::string &command) {
  if (!c.is_finite())
    throw Error(Errc::InvalidParams, "'" + command + "' needs a finite carrier");
  return c.finite();
}

// Each command fills `report` and returns its exit code.

int cmd_enumerate(const CarrierFile &cf, const Config &cfg, std::ostream &out, json &report) {
  const Carrier &c = cf.carrier;
  json inv;
  if (!c.is_finite()) {
    const AdditiveSpace space = additive_functions(c);
    out << "lattice of rank " << c.lattice().rank() << ": characters are prod z_i^{x_i} with "
        << "nonzero bases z; additive functions have dimension " << space.dimension << "\n";
    inv["additive_dimension"] = space.dimension;
    report["inventory"] = inv;
    return 0;
  }
  const FiniteMonoid &m = c.finite();
  const auto chars = enumerate_multiplicative(m);
  const auto sigmas = enumerate_involutive_automorphisms(m);
  out << "characters: " << chars.size() << "\n";
  json cj = json::array();
  for (std::size_t i = 0; i < chars.size(); ++i) {
    out << "  chi[" << i << "] = " << value_list(chars[i]) << "\n";
    cj.push_back(to_json(chars[i]));
  }
  out << "involutive automorphisms: " << sigmas.size() << "\n";
  json sj = json::array();
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    const auto mus = enumerate_admissible_mu(m, sigmas[s]);
    out << "  sigma[" << s << "] = " << perm_list(sigmas[s]) << "  admissible mu: " << mus.size()
        << "\n";
    json mj = json::array();
    for (std::size_t j = 0; j < mus.size(); ++j) {
      out << "    mu[" << j << "] = " << value_list(mus[j].mu()) << "\n";
      mj.push_back(to_json(mus[j].mu()));
    }
    sj.push_back({{"sigma", sigma_json(sigmas[s])}, {"admissible_mu", mj}, {"mu_count", mus.size()}});
  }
  const AdditiveSpace space = additive_functions(c);
  const int solved = additive_dimension_by_linear_solve(m);
  out << "additive functions: dimension " << space.dimension << " (linear solve: " << solved
      << ")\n";
  inv["characters"] = cj;
  inv["character_count"] = chars.size();
  inv["involutions"] = sj;
  inv["involution_count"] = sigmas.size();
  inv["additive_dimension"] = space.dimension;
  inv["additive_dimension_linear_solve"] = solved;
  inv["generated_by_squares"] = is_generated_by_squares(m);
  report["inventory"] = inv;
  (void)cfg;
  return 0;
}

int cmd_families(const CarrierFile &cf, const Config &cfg, std::ostream &out, json &report) {
  const Carrier &c = cf.carrier;
  SweepOptions opts;
  opts.verify = {cfg.tolerance, cfg.box};
  if (!cfg.equation.empty()) opts.equation = parse_equation(cfg.equation);
  if (!c.is_finite()) {
    const LatticeGroup &g = c.lattice();
    if (cfg.chi.empty()) throw Error(Errc::InvalidParams, "lattice families need --chi");
    opts.chi = MultiplicativeFunction::lattice(g, parse_complex_list(cfg.chi, g.rank(), "--chi"));
    if (!cfg.additive.empty())
      opts.additive =
          AdditiveFunction::lattice(g, parse_complex_list(cfg.additive, g.rank(), "--additive"));
  }
  int failures = 0, total = 0;
  json blocks = json::array();
  for (const Weighting &w : select_weights(c, cfg)) {
    print_weight(out, w);
    json rows = json::array();
    for (const SweepRow &r : sweep_families(w.weight, opts)) {
      ++total;
      if (!r.ok) ++failures;
      out << "  " << std::left << std::setw(32) << (r.family + "/" + r.case_label);
      std::string params;
      if (r.chi_index >= 0) params += "chi=" + std::to_string(r.chi_index);
      if (r.chi2_index >= 0) params += " chi2=" + std::to_string(r.chi2_index);
      for (const auto &[name, v] : r.constants) params += " " + name + "=" + fmt(v);
      if (r.theta_index >= 0) params += " theta=" + std::to_string(r.theta_index);
      out << std::setw(44) << params << " residual " << fmt(r.max_residual)
          << (r.ok ? (r.degenerate ? "  ok (degenerate)" : "  ok") : "  FAIL") << "\n";
      if (!r.ok) out << "    " << r.message << "\n";
      json row;
      row["family"] = r.family;
      row["case"] = r.case_label;
      row["equation"] = equation_name(r.equation);
      if (r.chi_index >= 0) row["chi"] = r.chi_index;
      if (r.chi2_index >= 0) row["chi2"] = r.chi2_index;
      json constants = json::object();
      for (const auto &[name, v] : r.constants) constants[name] = to_json(v);
      row["constants"] = constants;
      if (r.theta_index >= 0) row["theta"] = r.theta_index;
      row["max_residual"] = to_json(r.max_residual);
      row["ok"] = r.ok;
      row["degenerate"] = r.degenerate;
      if (!r.message.empty()) row["message"] = r.message;
      rows.push_back(row);
    }
    json block = weight_json(w);
    block["families"] = rows;
    blocks.push_back(block);
  }
  out << total << " triples, " << failures << " above tolerance " << fmt(cfg.tolerance) << "\n";
  report["weights"] = blocks;
  report["triples"] = total;
  report["failures"] = failures;
  return failures ? 3 : 0;
}

int cmd_verify(const CarrierFile &cf, const Config &cfg, std::ostream &out, json &report) {
  const FiniteMonoid &m = require_finite(cf.carrier, "verify");
  if (cfg.values_path.empty()) throw std::invalid_argument("verify needs --values <path>");
  const Slots slots = parse_values(read_file(cfg.values_path), m);
  const EquationId eq =
      cfg.equation.empty() ? EquationId::Main
                           : *parse_equation(cfg.equation);  // validated by the option check
  Config one = cfg;
  if (one.sigma.empty()) one.sigma = "0";
  if (one.mu.empty()) one.mu = "0";
  const Weighting w = select_weights(cf.carrier, one).front();
  print_weight(out, w);

  const ResidualScan scan = scan_residual(eq, slots, w.weight, Scope::all());
  const bool residual_ok = scan.max < cfg.tolerance;
  out << equation_name(eq) << " max residual " << fmt(scan.max) << " at (x, y) = ("
      << point_str(scan.x) << ", " << point_str(scan.y) << ")" << (residual_ok ? "  ok" : "  FAIL")
      << "\n";
  json r = weight_json(w);
  r["equation"] = equation_name(eq);
  r["max_residual"] = to_json(scan.max);
  r["witness"] = json::array({to_json(scan.x), to_json(scan.y)});
  r["residual_ok"] = residual_ok;
  bool structure_ok = true;

  const VerifyOptions vo{cfg.tolerance, cfg.box};
  if (eq == EquationId::Main && slots.g->sup_norm() >= cfg.tolerance &&
      slots.h->sup_norm() >= cfg.tolerance) {
    const StructureReport sr = verify_main_structure(slots, w.weight, vo);
    json clauses = json::array();
    for (const ClauseResult &cl : sr.clauses) {
      out << "  " << std::left << std::setw(18) << cl.name << (cl.pass ? "pass" : "FAIL")
          << "  max violation " << fmt(cl.max_violation);
      json cj = {{"name", cl.name}, {"pass", cl.pass}, {"max_violation", to_json(cl.max_violation)}};
      if (!cl.pass && cl.witness_x) {
        out << "  witness x = " << point_str(*cl.witness_x);
        cj["witness_x"] = to_json(*cl.witness_x);
        if (cl.witness_y) {
          out << ", y = " << point_str(*cl.witness_y);
          cj["witness_y"] = to_json(*cl.witness_y);
        }
      }
      out << "\n";
      clauses.push_back(cj);
    }
    if (sr.b) {
      out << "  b = " << fmt(*sr.b) << "\n";
      r["b"] = to_json(*sr.b);
    }
    structure_ok = sr.all_pass();
    r["structure"] = clauses;
  }
  report["verify"] = r;
  return residual_ok && structure_ok ? 0 : 3;
}

int cmd_nullspace(const CarrierFile &cf, const Config &cfg, std::ostream &out, json &report) {
  const FiniteMonoid &m = require_finite(cf.carrier, "nullspace");
  json blocks = json::array();
  for (const Weighting &w : select_weights(cf.carrier, cfg)) {
    print_weight(out, w);
    const NullspaceBasis nb = nullspace_basis(m, w.weight);
    out << "  dimension " << nb.dimension << (nb.exact ? " (exact)" : " (float)") << "\n";
    json basis = json::array();
    for (const ScalarFunction &theta : nb.basis) {
      out << "    " << value_list(theta.values()) << "\n";
      basis.push_back(to_json(theta.values()));
    }
    json block = weight_json(w);
    block["dimension"] = nb.dimension;
    block["exact"] = nb.exact;
    block["basis"] = basis;
    blocks.push_back(block);
  }
  report["weights"] = blocks;
  return 0;
}

int cmd_oracle(const CarrierFile &cf, const Config &cfg, std::ostream &out, json &report) {
  const FiniteMonoid &m = require_finite(cf.carrier, "oracle");
  if (cfg.starts < 0) throw Error(Errc::InvalidParams, "--starts must be non-negative");
  json blocks = json::array();
  std::size_t unclassified = 0;
  for (const Weighting &w : select_weights(cf.carrier, cfg)) {
    print_weight(out, w);
    const OracleReport r = oracle_solve_main(m, w.weight, cfg.starts, cfg.seed);
    unclassified += r.unclassified();
    out << "  starts " << r.starts << ", converged " << r.converged << ", distinct solutions "
        << r.found.size() << ", unclassified " << r.unclassified() << ", nullspace dimension "
        << r.nullspace_dimension << "\n";
    json found = json::array();
    for (const OracleSolution &s : r.found) {
      out << "    " << std::left << std::setw(14) << s.tag << " residual " << fmt(s.residual);
      if (s.classified)
        out << "  chi=" << s.chi_index << " c=" << fmt(s.c) << " c1=" << fmt(s.c1)
            << " c2=" << fmt(s.c2);
      out << "\n      h = " << value_list(s.h) << "\n";
      json sj = {{"tag", s.tag},
                 {"residual", to_json(s.residual)},
                 {"fit_error", to_json(s.fit_error)},
                 {"f", to_json(s.f)},
                 {"g", to_json(s.g)},
                 {"h", to_json(s.h)}};
      if (s.classified) {
        sj["chi"] = s.chi_index;
        sj["c"] = to_json(s.c);
        sj["c1"] = to_json(s.c1);
        sj["c2"] = to_json(s.c2);
      }
      found.push_back(sj);
    }
    json block = weight_json(w);
    block["found"] = found;
    block["starts"] = r.starts;
    block["converged"] = r.converged;
    block["unclassified"] = r.unclassified();
    block["image_dimension"] = r.image_dimension;
    block["nullspace_dimension"] = r.nullspace_dimension;
    blocks.push_back(block);
  }
  report["weights"] = blocks;
  report["unclassified"] = unclassified;
  return unclassified ? 3 : 0;
}

json carrier_json(const CarrierFile &cf) {
  const Carrier &c = cf.carrier;
  if (!c.is_finite()) return {{"kind", "lattice"}, {"rank", c.lattice().rank()}};
  json out = {{"kind", "finite"},
              {"size", c.finite().size()},
              {"identity", c.finite().identity()},
              {"is_group", c.finite().is_group()}};
  if (!cf.names.empty()) out["names"] = cf.names;
  return out;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Config cfg;
  CLI::App app{"Constructs and verifies solutions of mu-twisted functional equations on "
               "finite monoids and integer lattices.",
               "mfe"};
  const std::vector<std::string> commands{"enumerate", "families", "verify", "nullspace",
                                          "oracle"};
  app.add_option("command", cfg.command, "enumerate | families | verify | nullspace | oracle")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("carrier", cfg.carrier_path, "carrier file")->required();
  app.add_option("--values", cfg.values_path, "triple values file (verify)");
  app.add_option("--sigma", cfg.sigma,
                 "involution: index into the enumeration (finite) or integer matrix "
                 "'a,b;c,d' (lattice)");
  app.add_option("--mu", cfg.mu,
                 "weight: index into the admissible list (finite) or comma-separated bases "
                 "(lattice)");
  app.add_option("--chi", cfg.chi, "character bases, comma-separated (lattice families)");
  app.add_option("--additive", cfg.additive, "additive coefficients a (lattice families)");
  app.add_option("--equation", cfg.equation, "restrict to one equation")
      ->check(CLI::IsMember({"SINE_ADDITION", "MU_SINE_SUBTRACTION", "WILSON", "MAIN",
                             "APPLICATION"}));
  app.add_option("--box", cfg.box, "lattice sample box [-B, B]^d")->check(CLI::Range(0, 50));
  app.add_option("--starts", cfg.starts, "oracle random starts");
  app.add_option("--seed", cfg.seed, "oracle seed");
  app.add_option("--json", cfg.json_path, "write the JSON report here");
  app.add_option("--tolerance", cfg.tolerance, "residual tolerance")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  std::string text;
  try {
    text = read_file(cfg.carrier_path);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  json report;
  report["command"] = cfg.command;
  report["args"] = args;
  report["seed"] = cfg.seed;
  report["tolerance"] = to_json(cfg.tolerance);
  int code = 0;
  try {
    const CarrierFile cf = parse_carrier_file(text);
    report["carrier"] = carrier_json(cf);
    if (cfg.command == "enumerate") code = cmd_enumerate(cf, cfg, out, report);
    if (cfg.command == "families") code = cmd_families(cf, cfg, out, report);
    if (cfg.command == "verify") code = cmd_verify(cf, cfg, out, report);
    if (cfg.command == "nullspace") code = cmd_nullspace(cf, cfg, out, report);
    if (cfg.command == "oracle") code = cmd_oracle(cf, cfg, out, report);
  } catch (const NotAssociative &e) {
    const auto w = e.witness();
    err << "error: " << e.what() << " (x, y, z) = (" << w[0] << ", " << w[1] << ", " << w[2]
        << ")\n";
    return 2;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::ResidualTooLarge ? 3 : 2;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  report["exit_code"] = code;

  if (!cfg.json_path.empty()) {
    std::ofstream js(cfg.json_path, std::ios::binary);
    if (!js) {
      err << "error: cannot write " << cfg.json_path << "\n";
      return 1;
    }
    js << report.dump(2) << "\n";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "wall time " << std::fixed << std::setprecision(3) << seconds << " s\n";
  return code;
}

}  // namespace mfe::cli
