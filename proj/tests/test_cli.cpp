#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "mfe/cli.hpp"

using namespace mfe;
using namespace mfe::cli;

namespace {

const std::string kData = MFE_SOURCE_DIR "/data/";
const std::string kTestData = MFE_SOURCE_DIR "/tests/data/";

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("mfe_test_" + name)).string();
}

}  // namespace

TEST_CASE("carrier grammar") {
  const Carrier t = parse_carrier("finite 1\n0\nidentity 0");
  REQUIRE(t.is_finite());
  CHECK(t.finite() == trivial_monoid());
  const Carrier l = parse_carrier("lattice 2");
  REQUIRE_FALSE(l.is_finite());
  CHECK(l.lattice().rank() == 2);
  const CarrierFile f = parse_carrier_file(
      "# comment\nfinite 2  # size\nnames one zero\n0 1\n1 1\nidentity one\ngenerators zero\n");
  CHECK(f.carrier.finite() == zero_one_monoid());
  CHECK(f.names == std::vector<std::string>{"one", "zero"});
  CHECK(f.carrier.finite().generators() == std::vector<Index>{1});
}

TEST_CASE("carrier files in the corpus match the built-in carriers") {
  const std::vector<std::pair<std::string, FiniteMonoid>> files{
      {"trivial", trivial_monoid()},   {"z2", cyclic_group(2)},
      {"z3", cyclic_group(3)},         {"z4", cyclic_group(4)},
      {"z6", cyclic_group(6)},         {"klein4", klein_four_group()},
      {"s3", symmetric_group_s3()},    {"zero_one", zero_one_monoid()}};
  for (const auto &[name, m] : files) {
    CAPTURE(name);
    const CarrierFile cf = parse_carrier_file(slurp(kData + name + ".carrier"));
    CHECK(cf.carrier.finite() == m);
  }
  CHECK(parse_carrier(slurp(kData + "lattice1.carrier")).lattice().rank() == 1);
}

TEST_CASE("render and parse round-trip") {
  std::vector<CarrierFile> files;
  for (const auto &[name, m] : testing::corpus()) files.push_back({m, {}});
  files.push_back({LatticeGroup(1), {}});
  files.push_back({LatticeGroup(3), {}});
  files.push_back({make_finite_monoid({{0, 1}, {1, 0}}, 0, {1}), {"e", "a"}});
  for (const char *name : {"s3", "z6", "zero_one"})
    files.push_back(parse_carrier_file(slurp(kData + name + ".carrier")));
  for (const auto &f : files) {
    const std::string text = render_carrier(f);
    const CarrierFile back = parse_carrier_file(text);
    CHECK(back.carrier == f.carrier);
    CHECK(back.names == f.names);
    if (f.carrier.is_finite())
      CHECK(back.carrier.finite().generators() == f.carrier.finite().generators());
    CHECK(render_carrier(back) == text);
  }
}

TEST_CASE("syntax errors carry a location") {
  auto where = [](const std::string &text) -> std::pair<int, int> {
    try {
      parse_carrier(text);
    } catch (const SyntaxError &e) {
      CHECK(e.code() == Errc::SyntaxError);
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(where("") == std::pair{1, 1});
  CHECK(where("group 3") == std::pair{1, 1});
  CHECK(where("finite x") == std::pair{1, 8});
  CHECK(where("finite 2\n0 1\n1 x\nidentity 0") == std::pair{3, 3});
  CHECK(where("finite 2\n0 1\n1 0") == std::pair{4, 1});
  CHECK(where("finite 2\n0 1\n1 0 1\nidentity 0") == std::pair{3, 5});
  CHECK(where("finite 2\n0 1\n1 0\n1 0\nidentity 0") == std::pair{4, 1});
  CHECK(where("lattice 2\n0 1") == std::pair{2, 1});
  CHECK(where("finite 2\nnames a\n0 1\n1 0\nidentity 0") == std::pair{2, 1});
  CHECK(where("finite 2\n0 1\n1 0\nidentity q") == std::pair{4, 10});
}

TEST_CASE("semantic carrier errors come from validation") {
  try {
    parse_carrier(slurp(kTestData + "non_associative.carrier"));
    FAIL("accepted");
  } catch (const NotAssociative &) {
  }
  try {
    parse_carrier("finite 2\n1 0\n0 0\nidentity 0");
    FAIL("accepted");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::NoIdentity);
  }
}

TEST_CASE("values files") {
  const auto m = cyclic_group(4);
  const Slots s = parse_values(slurp(kTestData + "z4_main_distinct.values"), m);
  REQUIRE(s.h);
  CHECK((*s.h)(Point{1}) == Complex(0, 1));
  CHECK_FALSE(s.k);
  CHECK_THROWS_AS(parse_values("f 0 1 0\n", m), Error);
  CHECK_THROWS_AS(parse_values("q 0 1 0\n", m), SyntaxError);
  CHECK_THROWS_AS(parse_values("f 7 1 0\n", m), SyntaxError);
  CHECK_THROWS_AS(parse_values("f 0 1\n", m), SyntaxError);
  CHECK_THROWS_AS(parse_values("f 0 1 0\nf 0 1 0\n", m), SyntaxError);
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("2") == Complex(2, 0));
  CHECK(parse_complex("-0.5:0.25") == Complex(-0.5, 0.25));
  CHECK(parse_complex("1+2i") == Complex(1, 2));
  CHECK(parse_complex("1e-3-2.5i") == Complex(1e-3, -2.5));
  CHECK(parse_complex("-i") == Complex(0, -1));
  CHECK(parse_complex("3i") == Complex(0, 3));
  CHECK(parse_complex("1e+2") == Complex(100, 0));
  CHECK_THROWS_AS(parse_complex("abc"), Error);
  CHECK_THROWS_AS(parse_complex(""), Error);
  CHECK(round12(0.1 + 0.2) == 0.3);
  CHECK(std::signbit(round12(-0.0)) == false);
}

TEST_CASE("sweep covers every family and stays within tolerance") {
  std::set<std::string> seen;
  for (const auto &[name, m] : testing::corpus())
    for (const auto &sigma : enumerate_involutive_automorphisms(m))
      for (const auto &w : enumerate_admissible_mu(m, sigma))
        for (const SweepRow &r : sweep_families(w, {})) {
          CAPTURE(name);
          CAPTURE(r.message);
          CHECK(r.ok);
          seen.insert(r.family + "/" + r.case_label);
        }
  for (const char *tag :
       {"sine_addition/DISTINCT_CHARS", "sine_addition/EQUAL_CHARS", "mu_sine_subtraction/DISTINCT",
        "mu_sine_subtraction/EQUAL", "wilson/ZERO", "wilson/EVEN_SCALED", "wilson/THIRD",
        "wilson/ADDITIVE", "main/DISTINCT", "main/EQUAL", "application/A", "application/B"})
    CHECK(seen.count(tag));
}

TEST_CASE("lattice sweep") {
  SweepOptions opts;
  opts.chi = testing::z1_char(2);
  std::set<std::string> seen;
  for (double mu : {1.0, 4.0})
    for (const SweepRow &r : sweep_families(testing::z1_weight(mu), opts)) {
      CAPTURE(r.message);
      CHECK(r.ok);
      CHECK_FALSE(r.degenerate);
      seen.insert(r.family + "/" + r.case_label);
    }
  CHECK(seen.count("main/EQUAL"));
  CHECK(seen.count("application/B"));
  CHECK(seen.count("main/DISTINCT"));
  CHECK_THROWS_AS(sweep_families(testing::z1_weight(1), {}), Error);
}

TEST_CASE("enumerate command") {
  const std::string json_path = temp_path("enumerate.json");
  const Run r = run_cli({"enumerate", kData + "z4.carrier", "--json", json_path});
  CHECK(r.code == 0);
  CHECK(r.out.find("characters: 4") != std::string::npos);
  CHECK(r.out.find("involutive automorphisms: 2") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(json_path));
  CHECK(j["inventory"]["character_count"] == 4);
  CHECK(j["inventory"]["involution_count"] == 2);
  CHECK(j["inventory"]["involutions"][1]["mu_count"] == 4);
  CHECK(j["inventory"]["characters"][1][1]["rotation"] == "1/4");
  CHECK(j["inventory"]["characters"][1][1]["value"] == nlohmann::json::array({0.0, 1.0}));
  CHECK(run_cli({"enumerate", kData + "lattice2.carrier"}).code == 0);
}

TEST_CASE("families command") {
  const Run r = run_cli({"families", kData + "z4.carrier", "--equation", "MAIN", "--sigma", "1",
                         "--mu", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("main/DISTINCT") != std::string::npos);
  CHECK(r.out.find("wilson") == std::string::npos);
  const Run l = run_cli({"families", kData + "lattice1.carrier", "--sigma", "-1", "--mu", "4",
                         "--chi", "2", "--additive", "1"});
  CHECK(l.code == 0);
  CHECK(l.out.find("main/EQUAL") != std::string::npos);
  CHECK(run_cli({"families", kData + "lattice1.carrier"}).code == 2);
}

TEST_CASE("verify command") {
  const Run good = run_cli({"verify", kData + "z4.carrier", "--sigma", "1", "--values",
                            kTestData + "z4_main_distinct.values"});
  CHECK(good.code == 0);
  const Run bad = run_cli({"verify", kData + "z4.carrier", "--sigma", "1", "--values",
                           kTestData + "z4_main_corrupted.values"});
  CHECK(bad.code == 3);
  CHECK(bad.out.find("odd               FAIL") != std::string::npos);
  CHECK(bad.out.find("witness x = 1") != std::string::npos);
  CHECK(bad.out.find("at (x, y) = (") != std::string::npos);
}

TEST_CASE("nullspace and oracle commands") {
  const Run n = run_cli({"nullspace", kData + "z4.carrier", "--sigma", "1", "--mu", "0"});
  CHECK(n.code == 0);
  CHECK(n.out.find("dimension 2") != std::string::npos);
  const Run o = run_cli({"oracle", kData + "z4.carrier", "--sigma", "1", "--mu", "0",
                         "--starts", "20", "--seed", "42"});
  CHECK(o.code == 0);
  CHECK(o.out.find("unclassified 0") != std::string::npos);
  CHECK(run_cli({"oracle", kData + "lattice1.carrier"}).code == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const std::string cmd : {"oracle", "families", "nullspace", "enumerate"}) {
    const std::string a = temp_path("a.json"), b = temp_path("b.json");
    std::vector<std::string> args{cmd, kData + "s3.carrier", "--starts", "25", "--seed", "7",
                                  "--json"};
    auto one = args, two = args;
    one.push_back(a);
    two.push_back(b);
    CHECK(run_cli(one).code == 0);
    CHECK(run_cli(two).code == 0);
    std::string ja = slurp(a), jb = slurp(b);
    // The echoed arguments differ only in the output path.
    const auto strip = [](std::string s, const std::string &path) {
      return s.replace(s.find(path), path.size(), "");
    };
    CHECK_FALSE(ja.empty());
    CHECK(strip(ja, a) == strip(jb, b));
    const auto j = nlohmann::json::parse(ja);
    CHECK(j["seed"] == 7);
    CHECK_FALSE(j.contains("wall_time"));
  }
}

TEST_CASE("exit codes for usage and validation errors") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"explode", kData + "z4.carrier"}).code == 1);
  CHECK(run_cli({"enumerate", kData + "z4.carrier", "--bogus"}).code == 1);
  CHECK(run_cli({"enumerate", kData + "missing.carrier"}).code == 1);
  CHECK(run_cli({"verify", kData + "z4.carrier"}).code == 1);
  CHECK(run_cli({"enumerate", kTestData + "non_associative.carrier"}).code == 2);
  const Run syn = run_cli({"enumerate", kTestData + "bad_syntax.carrier"});
  CHECK(syn.code == 2);
  CHECK(syn.err.find("line 3, column 3") != std::string::npos);
  CHECK(run_cli({"families", kData + "z4.carrier", "--sigma", "9"}).code == 2);
  CHECK(run_cli({"families", kData + "z4.carrier", "--equation", "NOPE"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}
