#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jetcalc/cli.hpp"

using namespace jetcalc;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

json parse_out(const CliResult& r) { return json::parse(r.out); }
json parse_err(const CliResult& r) { return json::parse(r.err); }

}  // namespace

TEST_CASE("jet --order double on the worked map") {
  CliResult r = run({"jet", "--order", "double", "--p", "1", "--m", "2", "--map",
                     "u1*w1; u1 + w1^2"});
  REQUIRE(r.code == 0);
  json v = parse_out(r);
  CHECK(v["p"] == 1);
  CHECK(v["m"] == 2);
  CHECK(v["C"] == json::parse("[[[1.0]],[[0.0]]]"));
  CHECK(v["Y"] == json::parse("[[0.0],[1.0]]"));
  CHECK(v["X"] == json::parse("[[0.0],[0.0]]"));
}

TEST_CASE("jet --order 1 on the zero map") {
  CliResult r = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "0"});
  REQUIRE(r.code == 0);
  json v = parse_out(r);
  CHECK(v["x"] == json::parse("[0.0]"));
  CHECK(v["X"] == json::parse("[[0.0]]"));
}

TEST_CASE("jet --order 2") {
  CliResult r = run({"jet", "--order", "2", "--p", "1", "--m", "1", "--map", "u1^2 + 3*w1"});
  REQUIRE(r.code == 0);
  json v = parse_out(r);
  CHECK(v["A"] == json::parse("[[0.0,3.0]]"));
  CHECK(v["B"] == json::parse("[[[2.0,0.0],[0.0,0.0]]]"));
}

TEST_CASE("jet with a fiber map builds a VBJet") {
  CliResult r = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--k", "1",
                     "--map", "sin(u1)", "--fiber-map", "exp(u1)"});
  REQUIRE(r.code == 0);
  json v = parse_out(r);
  CHECK(v["y"] == json::parse("[1.0]"));
  CHECK(v["F"] == json::parse("[[1.0]]"));
  CHECK(v["G"] == json::parse("[[1.0]]"));
}

TEST_CASE("malformed map exits 2 with a parse error object") {
  CliResult r = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "u1 +"});
  CHECK(r.code == 2);
  json e = parse_err(r);
  CHECK(e["error"]["kind"] == "parse");
  CHECK(e["error"].contains("position"));
  CHECK(r.out.empty());
}

TEST_CASE("domain error exits 3") {
  CliResult r = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "log(u1)"});
  CHECK(r.code == 3);
  json e = parse_err(r);
  CHECK(e["error"]["kind"] == "domain");
  CHECK(e["error"]["operator"] == "log");
}

TEST_CASE("apply --op ell swaps X and Y") {
  CliResult jet = run({"jet", "--order", "double", "--p", "1", "--m", "2", "--map",
                       "u1*w1; u1 + w1^2"});
  REQUIRE(jet.code == 0);
  CliResult r = run({"apply", "--op", "ell"}, jet.out);
  REQUIRE(r.code == 0);
  json v = parse_out(r);
  CHECK(v["X"] == json::parse("[[0.0],[1.0]]"));
  CHECK(v["Y"] == json::parse("[[0.0],[0.0]]"));
  CHECK(v["C"] == json::parse("[[[1.0]],[[0.0]]]"));
}

TEST_CASE("apply --op flip twice returns the input byte for byte") {
  CliResult jet = run({"jet", "--order", "2", "--p", "2", "--m", "2", "--map",
                       "u1*w2 + u2^2; sin(u1) - w1*w2"});
  REQUIRE(jet.code == 0);
  CliResult once = run({"apply", "--op", "flip"}, jet.out);
  REQUIRE(once.code == 0);
  CliResult twice = run({"apply", "--op", "flip"}, once.out);
  REQUIRE(twice.code == 0);
  CHECK(twice.out == jet.out);
  CHECK(parse_out(once) != parse_out(jet));
}

TEST_CASE("apply --op lambda on a Jet1 payload exits 4") {
  CliResult jet = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "u1"});
  CliResult r = run({"apply", "--op", "lambda"}, jet.out);
  CHECK(r.code == 4);
  CHECK(parse_err(r)["error"]["kind"] == "shape");
}

TEST_CASE("apply --op lambda drops the pure blocks") {
  CliResult jet = run({"jet", "--order", "2", "--p", "1", "--m", "1", "--map",
                       "u1^2 + u1*w1 + 5*w1^2"});
  REQUIRE(jet.code == 0);
  CliResult r = run({"apply", "--op", "lambda"}, jet.out);
  REQUIRE(r.code == 0);
  json v = parse_out(r);
  CHECK(v["C"] == json::parse("[[[1.0]]]"));
}

TEST_CASE("apply --op prolong dispatches on the payload type") {
  SUBCASE("Jet1") {
    CliResult jet = run({"jet", "--order", "1", "--p", "1", "--m", "2", "--map", "u1; u1^2"});
    CliResult r = run({"apply", "--op", "prolong", "--with", "x1 + x2; x1*x2"}, jet.out);
    REQUIRE(r.code == 0);
    json v = parse_out(r);
    CHECK(v["m"] == 2);
    CHECK(v["X"] == json::parse("[[1.0],[0.0]]"));
  }
  SUBCASE("Jet2") {
    CliResult jet = run({"jet", "--order", "2", "--p", "1", "--m", "1", "--map", "u1 + w1"});
    CliResult r = run({"apply", "--op", "prolong", "--with", "x1^2"}, jet.out);
    REQUIRE(r.code == 0);
    CHECK(parse_out(r)["B"] == json::parse("[[[2.0,2.0],[2.0,2.0]]]"));
  }
  SUBCASE("DoubleJet") {
    CliResult jet = run({"jet", "--order", "double", "--p", "1", "--m", "1", "--map",
                         "u1 + w1"});
    CliResult r = run({"apply", "--op", "prolong", "--with", "x1^2"}, jet.out);
    REQUIRE(r.code == 0);
    CHECK(parse_out(r)["C"] == json::parse("[[[2.0]]]"));
  }
  SUBCASE("missing --with is a usage error") {
    CliResult jet = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "u1"});
    CliResult r = run({"apply", "--op", "prolong"}, jet.out);
    CHECK(r.code == 64);
  }
  SUBCASE("prolongation outside the chart domain exits 3") {
    CliResult jet = run({"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "u1 - 2"});
    CliResult r = run({"apply", "--op", "prolong", "--with", "sqrt(x1)"}, jet.out);
    CHECK(r.code == 3);
  }
}

TEST_CASE("apply rejects broken payloads with exit 4") {
  CliResult r = run({"apply", "--op", "ell"}, "this is not json");
  CHECK(r.code == 4);
  json e = parse_err(r);
  CHECK(e["error"]["kind"] == "shape");
  CliResult r2 = run({"apply", "--op", "ell"}, R"({"p":1,"m":1,"x":[0]})");
  CHECK(r2.code == 4);
}

TEST_CASE("verify runs the suite and exits 0 when green") {
  CliResult r = run({"verify", "--seed", "42", "--trials", "5"});
  REQUIRE(r.code == 0);
  json reports = parse_out(r);
  CHECK(reports.is_array());
  CHECK(reports.size() >= 19);
  for (const auto& rep : reports) {
    CHECK(rep["pass"].get<bool>());
    CHECK(rep["seed"] == 42);
  }
  // byte-identical across runs
  CliResult again = run({"verify", "--seed", "42", "--trials", "5"});
  CHECK(again.out == r.out);
}

TEST_CASE("verify --laws filters and validates") {
  CliResult r = run({"verify", "--laws", "ell_involution", "--trials", "1"});
  REQUIRE(r.code == 0);
  json reports = parse_out(r);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0]["law"] == "ell_involution");
  CHECK(reports[0]["max_residual"].get<double>() <= 1e-15);
  CliResult bad = run({"verify", "--laws", "nosuchlaw"});
  CHECK(bad.code == 5);
  CHECK(parse_err(bad)["error"]["kind"] == "unknown_law");
}

TEST_CASE("JETCALC_SEED seeds verify unless --seed overrides it") {
  setenv("JETCALC_SEED", "777", 1);
  CliResult env_run = run({"verify", "--laws", "descent", "--trials", "2"});
  REQUIRE(env_run.code == 0);
  CHECK(parse_out(env_run)[0]["seed"] == 777);
  CliResult flag_run = run({"verify", "--laws", "descent", "--trials", "2", "--seed", "5"});
  REQUIRE(flag_run.code == 0);
  CHECK(parse_out(flag_run)[0]["seed"] == 5);
  setenv("JETCALC_SEED", "not-a-number", 1);
  CliResult broken = run({"verify", "--laws", "descent", "--trials", "2"});
  CHECK(broken.code == 64);
  unsetenv("JETCALC_SEED");
}

TEST_CASE("--in and --out use files instead of the streams") {
  std::string in_path = "cli_payload_in.json";
  std::string out_path = "cli_payload_out.json";
  CliResult jet = run({"jet", "--order", "double", "--p", "1", "--m", "1", "--map",
                       "u1*w1", "--out", in_path});
  REQUIRE(jet.code == 0);
  CHECK(jet.out.empty());
  CliResult r = run({"apply", "--op", "ell", "--in", in_path, "--out", out_path});
  REQUIRE(r.code == 0);
  std::ifstream f(out_path);
  REQUIRE(f.good());
  json v = json::parse(f);
  CHECK(v["C"] == json::parse("[[[1.0]]]"));
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
  CliResult missing = run({"apply", "--op", "ell", "--in", "does_not_exist.json"});
  CHECK(missing.code == 4);
}

TEST_CASE("usage errors exit 64 with a JSON error object") {
  CliResult r = run({"jet", "--order", "1", "--p", "1", "--m", "1"});  // no --map
  CHECK(r.code == 64);
  json e = parse_err(r);
  CHECK(e["error"]["kind"] == "usage");
  CliResult unknown = run({"frobnicate"});
  CHECK(unknown.code == 64);
  CliResult bad_order = run({"jet", "--order", "7", "--p", "1", "--m", "1", "--map", "u1"});
  CHECK(bad_order.code == 64);
  CliResult with_misuse = run({"apply", "--op", "ell", "--with", "x1"},
                              R"({"p":1,"m":1,"x":[0],"X":[[0]],"Y":[[0]],"C":[[[0]]]})");
  CHECK(with_misuse.code == 64);
}

TEST_CASE("every error path yields structured JSON, never a bare trace") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"jet", "--order", "1", "--p", "1", "--m", "2", "--map", "u1"},
           {"jet", "--order", "1", "--p", "1", "--m", "1", "--map", "u9"},
           {"apply", "--op", "nosuchop"},
           {"verify", "--laws", "bogus"},
       }) {
    CliResult r = run(args, "{}");
    CAPTURE(args[0]);
    CHECK(r.code != 0);
    json e = parse_err(r);  // throws if stderr is not JSON
    CHECK(e.contains("error"));
    CHECK(e["error"].contains("kind"));
    CHECK(e["error"].contains("message"));
  }
}
