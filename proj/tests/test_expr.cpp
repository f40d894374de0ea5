#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <icc/errors.hpp>
#include <icc/expr.hpp>

using icc::parse;
using icc::Value;

namespace {

Value run(const std::string& src,
          const std::map<std::string, Value>& parents = {},
          const Value& noise = Value(int64_t{0})) {
  return icc::eval(parse(src), parents, noise);
}

int64_t run_int(const std::string& src,
                const std::map<std::string, Value>& parents = {},
                const Value& noise = Value(int64_t{0})) {
  Value v = run(src, parents, noise);
  REQUIRE(v.is_int());
  return v.as_int();
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(run_int("1 + 2 * 3") == 7);
  CHECK(run_int("(1 + 2) * 3") == 9);
  CHECK(run_int("2 - 3 - 4") == -5);     // left associative
  CHECK(run_int("-2 * 3") == -6);        // unary binds tighter than *
  CHECK(run_int("- 2 + 3") == 1);
  CHECK(run_int("7 mod 3") == 1);
  CHECK(run_int("-7 mod 3") == 2);       // floored modulus
  CHECK(run_int("7 mod -3") == -2);
  CHECK(run("1.5 + 1").as_real() == doctest::Approx(2.5));
  CHECK(run_int("2 * 2 + 3 mod 2") == 5);
}

TEST_CASE("division always yields a real") {
  Value v = run("6 / 3");
  CHECK(v.is_real());
  CHECK(v.as_real() == doctest::Approx(2.0));
  CHECK(run("1 / 2").as_real() == doctest::Approx(0.5));
  CHECK_THROWS_AS(run("1 / 0"), icc::DivisionByZero);
  CHECK_THROWS_AS(run("1.0 / 0.0"), icc::DivisionByZero);
  CHECK_THROWS_AS(run("1.5 mod 2"), icc::TypeError);  // mod is integer-only
}

TEST_CASE("comparisons yield zero or one") {
  CHECK(run_int("1 + 1 > 1") == 1);  // comparison binds loosest of the two
  CHECK(run_int("2 < 1") == 0);
  CHECK(run_int("2 <= 2") == 1);
  CHECK(run_int("2 >= 3") == 0);
  CHECK(run_int("1 == 1.0") == 1);  // numeric equality is cross-type
  CHECK(run_int("1 != 2") == 1);
  // Comparisons are non-associative.
  CHECK_THROWS_AS(parse("1 < 2 < 3"), icc::ParseError);
}

TEST_CASE("boolean connectives demand 0/1 operands") {
  CHECK(run_int("1 and 0") == 0);
  CHECK(run_int("1 or 0") == 1);
  CHECK(run_int("not 0") == 1);
  CHECK(run_int("not 0 and 1") == 1);        // not binds tighter than and
  CHECK(run_int("0 and 0 or 1") == 1);       // and binds tighter than or
  CHECK(run_int("1 or 0 xor 1") == 1);       // xor binds tighter than or
  CHECK_THROWS_AS(run("2 and 1"), icc::TypeError);
  CHECK_THROWS_AS(run("1 or 3"), icc::TypeError);
  CHECK_THROWS_AS(run("not 5"), icc::TypeError);
}

TEST_CASE("xor is bitwise on integers") {
  CHECK(run_int("1 xor 0") == 1);
  CHECK(run_int("1 xor 1") == 0);
  CHECK(run_int("6 xor 3") == 5);
  CHECK_THROWS_AS(run("1.5 xor 1"), icc::TypeError);
}

TEST_CASE("symbols") {
  std::map<std::string, Value> parents{{"a", Value(int64_t{3})},
                                       {"b", Value(2.5)}};
  CHECK(run_int("pa.a + 1", parents) == 4);
  CHECK(run("pa.b * 2", parents).as_real() == doctest::Approx(5.0));
  CHECK(run_int("n + 1", {}, Value(int64_t{41})) == 42);
  CHECK_THROWS_AS(run("pa.missing", parents), icc::UnknownSymbol);

  auto symbols = icc::free_symbols(parse("pa.a + n * pa.b"));
  CHECK(symbols == std::set<std::string>{"n", "pa.a", "pa.b"});
}

TEST_CASE("builtins") {
  CHECK(run_int("max(1, 2, 3)") == 3);
  CHECK(run_int("min(4, 2, 9)") == 2);
  CHECK(run_int("abs(-5)") == 5);
  CHECK(run("abs(-1.5)").as_real() == doctest::Approx(1.5));
  CHECK(run_int("floor(1.9)") == 1);
  CHECK(run_int("floor(-1.1)") == -2);
  CHECK(run_int("if(1, 10, 20)") == 10);
  CHECK(run_int("if(0, 10, 20)") == 20);
  // Only the selected branch evaluates.
  CHECK(run_int("if(1, 7, 1 / 0)") == 7);
  CHECK(run_int("if(0, 1 / 0, 7)") == 7);
  CHECK_THROWS_AS(run("if(2, 1, 0)"), icc::TypeError);
  CHECK_THROWS_AS(parse("abs(1, 2)"), icc::ParseError);
  CHECK_THROWS_AS(parse("if(1, 2)"), icc::ParseError);
  CHECK_THROWS_AS(parse("max()"), icc::ParseError);
}

TEST_CASE("labels compare for equality only") {
  std::map<std::string, Value> parents{{"tag", Value("red")}};
  CHECK(run_int("pa.tag == pa.tag", parents) == 1);
  CHECK(run_int("pa.tag == 1", parents) == 0);  // label vs number differ
  CHECK(run_int("pa.tag != 1", parents) == 1);
  CHECK_THROWS_AS(run("pa.tag < pa.tag", parents), icc::TypeError);
  CHECK_THROWS_AS(run("pa.tag + 1", parents), icc::TypeError);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse(""), icc::ParseError);
  CHECK_THROWS_AS(parse("1 +"), icc::ParseError);
  CHECK_THROWS_AS(parse("unknown_name"), icc::ParseError);
  CHECK_THROWS_AS(parse("pa."), icc::ParseError);
  CHECK_THROWS_AS(parse("1 ** 2"), icc::ParseError);
  CHECK_THROWS_AS(parse("(1 + 2"), icc::ParseError);
  try {
    parse("1 +\n* 2");
  } catch (const icc::ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("numeric literals") {
  CHECK(run("1e3").as_real() == doctest::Approx(1000.0));
  CHECK(run("2.5e-1").as_real() == doctest::Approx(0.25));
  CHECK(run_int("007") == 7);
  CHECK(run("0.5").is_real());
  CHECK(run("5").is_int());
}

TEST_CASE("printer round-trips through the parser") {
  const char* sources[] = {
      "1 + 2 * 3",
      "(1 + 2) * 3",
      "2 - 3 - 4",
      "2 - (3 - 4)",
      "-(1 + 2)",
      "not (pa.a == 1) and pa.b > 0 or n == 2",
      "max(n, pa.a, min(pa.b, 3))",
      "if(pa.a >= 2, n + 1, abs(-n)) mod 5",
      "1 xor (2 xor 3)",
      "n / 2 / 3",
      "floor(pa.a / 2) * 2",
  };
  for (const char* src : sources) {
    auto ast = parse(src);
    auto reparsed = parse(icc::print(ast));
    CHECK_MESSAGE(icc::equal(ast, reparsed), "source: ", src,
                  " printed: ", icc::print(ast));
  }
}

TEST_CASE("parent substitution") {
  auto ast = parse("pa.a + pa.b * pa.a");
  auto renamed = icc::substitute_parent(ast, "a", "z");
  CHECK(icc::equal(renamed, parse("pa.z + pa.b * pa.z")));
  CHECK(icc::free_symbols(renamed) ==
        std::set<std::string>{"pa.z", "pa.b"});
}
