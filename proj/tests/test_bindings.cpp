#include <doctest.h>

#include <fstream>
#include <sstream>

#include "csbb/exprlang.hpp"
#include "csbb/json_binding.hpp"
#include "csbb/signature.hpp"
#include "csbb/subprocess.hpp"
#include "csbb/visit.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace csbb;
namespace j = csbb::json;
using support::error_code;

namespace {

Term rodin() { return j::object({j::prop("name", j::string("Rodin")), j::prop("age", j::number(29.0))}); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Wrapper artifacts: any Program or Decl node, or a string "dummy".
bool leaks_context(const Term& t) {
  bool leak = false;
  for (const char* type : {"Program", "Decl"}) {
    if (!visit_collect(t, Pattern::wild(ArgType::adt(type))).empty()) leak = true;
  }
  for_each_subterm(t, [&](const TermPath&, const Term& s) {
    if (s.kind() == Term::Kind::Str && s.str_value() == "dummy") leak = true;
  });
  return leak;
}

}  // namespace

TEST_CASE("parse_json") {
  CHECK(term_equals(j::parse_json("29"), j::number(29.0)));
  CHECK(term_equals(j::parse_json("{name:\"Rodin\",age:29}"), rodin()));
  CHECK(term_equals(j::parse_json("{ _hole:0 }"), j::object({j::prop("_hole", j::number(0.0))})));
  CHECK(term_equals(j::parse_json("{\"name\": \"Rodin\", \"age\": 29}"), rodin()));
  CHECK(term_equals(j::parse_json(" [true, false, null, -1.5e2, \"a\\u00e9\\n\"] "),
                    j::array({j::boolean(true), j::boolean(false), j::null(), j::number(-150.0), j::string("a\xc3\xa9\n")})));
}

TEST_CASE("parse_json reports positions") {
  try {
    j::parse_json("{\n  a: 1,\n  b: }");
    FAIL("expected ParserError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParserError);
    REQUIRE(e.pos());
    CHECK(e.pos()->line == 3);
    CHECK(e.pos()->column == 6);
  }
  CHECK(error_code([] { j::parse_json("1 2"); }) == ErrorCode::ParserError);
  CHECK(error_code([] { j::parse_json(""); }) == ErrorCode::ParserError);
  CHECK(error_code([] { j::parse_json("\"abc"); }) == ErrorCode::ParserError);
}

TEST_CASE("parse_prop") {
  CHECK(term_equals(j::parse_prop("name: \"Rodin\""), j::prop("name", j::string("Rodin"))));
  CHECK(term_equals(j::parse_prop("_hole: 0"), j::prop("_hole", j::number(0.0))));
  CHECK(term_equals(j::parse_prop("a: [true]"), j::prop("a", j::array({j::boolean(true)}))));
  CHECK(error_code([] { j::parse_prop("a: 1, b: 2"); }).has_value());
}

TEST_CASE("hole encoders") {
  CHECK(j::prop_hole(0) == "_hole:0");
  CHECK(j::json_hole(0) == "{_hole:0}");
  CHECK(j::prop_hole(17) == "_hole:17");
}

TEST_CASE("print_json") {
  CHECK(j::print_json(j::number(29.0)) == "29.0");
  CHECK(j::print_json(j::null()) == "null");
  CHECK(j::print_json(rodin()) == "{\"name\":\"Rodin\",\"age\":29.0}");
  CHECK(j::print_json(j::prop("a", j::null())) == "\"a\":null");
  CHECK(error_code([] { j::print_json(j::id("x")); }).has_value());
}

TEST_CASE("print_json round trips through parse_json") {
  gen::Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    Term t = gen::random_json(rng, 3);
    CHECK(term_equals(j::parse_json(j::print_json(t)), t));
  }
}

TEST_CASE("JSON signature") {
  const Signature& sig = *j::signature();
  for (const char* type : {"JSON", "Prop", "Id"}) CHECK(sig.has_type(type));
  CHECK(sig.find("JSON", "number", 1) != nullptr);
  CHECK(sig.find("Prop", "prop", 2) != nullptr);
}

TEST_CASE("ExprLang in-process parser") {
  CHECK(to_string(exprlang::parse("Expr", "1+2")) == "add(intLit(1), intLit(2))");
  CHECK(to_string(exprlang::parse("Stm", "while (x) { }")) == R"(whileStm(varRef("x"), []))");
  CHECK(to_string(exprlang::parse("Stm", "{ a; 1 + b; }")) ==
        R"(block([exprStm(varRef("a")), exprStm(add(intLit(1), varRef("b")))]))");
  Term prog = exprlang::parse("Program", "void f() { x; } void g() { while (1) { y; } }");
  CHECK(prog.children()[0].children().size() == 2);
  CHECK(error_code([] { exprlang::parse("Expr", "1+"); }) == ErrorCode::ParserError);
  CHECK(error_code([] { exprlang::parse("Stm", "x; y;"); }) == ErrorCode::ParserError);
  CHECK(error_code([] { exprlang::parse("JSON", "1"); }) == ErrorCode::NoParser);
}

TEST_CASE("ExprLang errors point into the fragment") {
  try {
    exprlang::parse("Stm", "while (x) {\n  1 + ; }");
    FAIL("expected ParserError");
  } catch (const Error& e) {
    REQUIRE(e.pos());
    CHECK(e.pos()->line == 2);
    CHECK(e.pos()->column == 7);
  }
}

TEST_CASE("ExprLang signature file matches the built-in one") {
  Signature file = parse_signature(slurp(support::data_path("exprlang.sig")));
  CHECK(print_signature(file) == print_signature(*exprlang::signature()));
}

TEST_CASE("ExprLang Stm parsing never leaks the wrapper") {
  auto child = std::make_shared<SubprocessParser>(
      SubprocessConfig{{CSBB_EXPRLANG_PARSER}, {"Program", "Stm", "Expr"}, exprlang::signature()});
  std::vector<std::string> stms = {
      "x;", "1 + dummy;", "while (x) { }", "while (dummy) { y; { z; } }", "{ }", "{ while (1) { 2; } }", "_hole0;",
  };
  for (const auto& s : stms) {
    Term via_child = child->parse("Stm", s);
    CHECK(term_equals(via_child, exprlang::parse("Stm", s)));
    bool mentions_dummy = s.find("dummy") != std::string::npos;
    if (!mentions_dummy) CHECK_FALSE(leaks_context(via_child));
    CHECK(visit_collect(via_child, Pattern::wild(ArgType::adt("Decl"))).empty());
  }
}
