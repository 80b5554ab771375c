#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "jetcalc/expr.hpp"
#include "jetcalc/props.hpp"

using namespace jetcalc;

TEST_CASE("parse and evaluate a two-component map") {
  SmoothMap m = parse("u1*u2; u1 + u2^2", 2, 2);
  CHECK(m.arity_in == 2);
  CHECK(m.arity_out == 2);
  Vec out = eval(m, {2.0, 3.0});
  CHECK(out[0] == 6.0);
  CHECK(out[1] == 11.0);
}

TEST_CASE("single-component map") {
  SmoothMap m = parse("sin(u1)", 1, 1);
  CHECK(eval(m, {0.0})[0] == 0.0);
  CHECK(eval(m, {M_PI / 2})[0] == doctest::Approx(1.0));
}

TEST_CASE("variable index must stay within the arity") {
  CHECK_THROWS_AS(parse("u3", 2, 1), ParseError);
  CHECK_THROWS_AS(parse("x5", 4, 1), ParseError);
  CHECK_NOTHROW(parse("u2", 2, 1));
}

TEST_CASE("w-variables address the second half of an even arity") {
  SmoothMap m = parse("w1 + 2*u1", 2, 1);
  CHECK(eval(m, {1.0, 10.0})[0] == 12.0);
  CHECK_THROWS_AS(parse("w1", 3, 1), ParseError);
  CHECK_THROWS_AS(parse("w2", 2, 1), ParseError);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse("u1 + * u2", 2, 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position == 5);
  }
  CHECK_THROWS_AS(parse("sin(u1", 1, 1), ParseError);
  CHECK_THROWS_AS(parse("(u1))", 1, 1), ParseError);
  CHECK_THROWS_AS(parse("", 1, 1), ParseError);
}

TEST_CASE("unknown identifiers are rejected") {
  CHECK_THROWS_AS(parse("foo(u1)", 1, 1), ParseError);
  CHECK_THROWS_AS(parse("q1", 1, 1), ParseError);
  CHECK_THROWS_AS(parse("u1a", 2, 1), ParseError);
}

TEST_CASE("component count must match the declared output arity") {
  CHECK_THROWS_AS(parse("u1; u1", 1, 1), ParseError);
  CHECK_THROWS_AS(parse("u1", 1, 2), ParseError);
  SmoothMap inferred = parse("u1; u1*u1; 3", 1);
  CHECK(inferred.arity_out == 3);
}

TEST_CASE("caret is right-associative with a constant exponent") {
  SmoothMap m = parse("2^3^2", 1, 1);
  CHECK(eval(m, {0.0})[0] == 512.0);  // 2^(3^2)
  CHECK_THROWS_AS(parse("u1^u1", 1, 1), ParseError);
  CHECK_THROWS_AS(parse("u1^(1+x1)", 1, 1), ParseError);
  SmoothMap folded = parse("u1^(1+1)", 1, 1);
  CHECK(eval(folded, {3.0})[0] == 9.0);
  SmoothMap negexp = parse("u1^-2", 1, 1);
  CHECK(eval(negexp, {2.0})[0] == 0.25);
}

TEST_CASE("unary minus forms the base of a power") {
  // -u1^2 reads ( -u1 )^2
  SmoothMap m = parse("-u1^2", 1, 1);
  CHECK(eval(m, {3.0})[0] == 9.0);
  SmoothMap n = parse("0 - u1^2", 1, 1);
  CHECK(eval(n, {3.0})[0] == -9.0);
  SmoothMap dbl = parse("u1 - -u1", 1, 1);
  CHECK(eval(dbl, {2.0})[0] == 4.0);
}

TEST_CASE("predefined constants and scientific notation") {
  CHECK(eval(parse("pi", 1, 1), {0.0})[0] == M_PI);
  CHECK(eval(parse("e", 1, 1), {0.0})[0] == M_E);
  CHECK(eval(parse("1.5e-3 * x1", 1, 1), {2.0})[0] == 3e-3);
  CHECK(eval(parse("2.5E+1", 1, 1), {0.0})[0] == 25.0);
  // "e" directly after digits is an exponent marker, so "2e" is ill-formed
  CHECK_THROWS_AS(parse("2e", 1, 1), ParseError);
  CHECK(eval(parse("2*e", 1, 1), {0.0})[0] == 2.0 * M_E);
}

TEST_CASE("domain errors identify the offending component") {
  SmoothMap m = parse("x1; log(x1)", 1, 2);
  try {
    eval(m, {-1.0});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.component == 1);
    CHECK(e.op == "log");
  }
  CHECK_THROWS_AS(eval(parse("sqrt(x1)", 1, 1), {-2.0}), DomainError);
  CHECK_THROWS_AS(eval(parse("x1 / x2", 2, 1), {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(eval(parse("x1^0.5", 1, 1), {-1.0}), DomainError);
  CHECK_THROWS_AS(eval(parse("x1^-1", 1, 1), {0.0}), DomainError);
  CHECK_THROWS_AS(eval(parse("exp(x1)", 1, 1), {1000.0}), DomainError);
}

TEST_CASE("evaluation is pure") {
  SmoothMap m = parse("sin(x1)*exp(x2) - x1/tanh(x2 + 3)", 2, 1);
  Vec a = eval(m, {0.3, -0.7});
  Vec b = eval(m, {0.3, -0.7});
  CHECK(a[0] == b[0]);
}

TEST_CASE("pretty-print reparses to the identical tree") {
  const char* sources[] = {
      "u1*u2; u1 + u2^2",
      "sin(u1) - cos(u2)^3",
      "-x1^2 + 1.5e-3/x2",
      "tanh(exp(x1) * pi) + sqrt(x2 + 4)",
      "u1^-2.5; w1/(1 + u1^2)",
  };
  for (const char* src : sources) {
    SmoothMap m = parse(src, 2);
    SmoothMap back = parse(to_string(m), 2, m.arity_out);
    CHECK(structurally_equal(m, back));
  }
}

TEST_CASE("round-trip holds on generated maps") {
  Rng rng(2024);
  SuiteConfig cfg;
  for (int t = 0; t < 60; ++t) {
    int n = rng.integer(1, 4);
    int m = rng.integer(1, 3);
    SmoothMap map = gen::map(rng, n, m, gen::Mode::Full);
    SmoothMap back = parse(to_string(map), n, m);
    CHECK(structurally_equal(map, back));
    // printing is stable, too
    CHECK(to_string(back) == to_string(map));
  }
}

TEST_CASE("syntactic composition substitutes components") {
  SmoothMap g = parse("x1^2", 1, 1);
  SmoothMap h = parse("u1 + u2", 2, 1);
  SmoothMap gh = compose(g, h);
  CHECK(gh.arity_in == 2);
  CHECK(eval(gh, {1.0, 2.0})[0] == 9.0);
  CHECK_THROWS_AS(compose(h, g), ShapeError);
}

TEST_CASE("flip precomposition swaps the argument halves") {
  SmoothMap m = parse("u1 * w1^2; u2 + w2", 4, 2);
  SmoothMap f = precompose_flip(m);
  Vec point{0.3, -1.2, 2.0, 0.5};
  Vec flipped{2.0, 0.5, 0.3, -1.2};
  Vec a = eval(f, point);
  Vec b = eval(m, flipped);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK_THROWS_AS(precompose_flip(parse("x1", 3, 1)), ShapeError);
  // flipping twice restores the tree
  CHECK(structurally_equal(precompose_flip(f), m));
}
