#include <doctest.h>

#include <set>

#include "csbb/error.hpp"
#include "csbb/json_binding.hpp"
#include "csbb/signature.hpp"
#include "csbb/term.hpp"
#include "csbb/term_text.hpp"
#include "csbb/wire.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace csbb;
namespace j = csbb::json;

namespace {

const Signature& json_sig() { return *j::signature(); }

ArgType json_t() { return ArgType::adt("JSON"); }

// Terms that are often ill-typed: random names, arities and element types.
Term junk(gen::Rng& rng, const Signature& sig, int depth) {
  static const std::vector<std::string> names = {"a", "b", "c", "wrap", "pair", "nothing", "just", "x"};
  static const std::vector<std::string> types = {"T", "U", "Maybe", "V"};
  std::size_t pick = gen::below(rng, depth > 0 ? 7 : 4);
  switch (pick) {
    case 0: return Term::integer(static_cast<std::int64_t>(gen::below(rng, 3)));
    case 1: return Term::str("s");
    case 2: return Term::boolean(true);
    case 3: {
      // a declared nullary constructor, or a near miss
      const auto& decls = sig.constructors();
      const auto& d = decls[gen::below(rng, decls.size())];
      if (d.args.empty() || gen::coin(rng, 0.3)) return Term::con(d.name, d.type);
      return Term::con(names[gen::below(rng, names.size())], types[gen::below(rng, types.size())]);
    }
    case 4: {
      std::vector<Term> kids;
      for (std::size_t n = gen::below(rng, 3); n > 0; --n) kids.push_back(junk(rng, sig, depth - 1));
      return Term::list(kids, gen::coin(rng, 0.5) ? ArgType::adt("T") : ArgType::prim(PrimKind::Int));
    }
    default: {
      const auto& decls = sig.constructors();
      const auto& d = decls[gen::below(rng, decls.size())];
      std::size_t arity = gen::coin(rng, 0.8) ? d.args.size() : gen::below(rng, 3);
      std::vector<Term> kids;
      for (std::size_t i = 0; i < arity; ++i) kids.push_back(junk(rng, sig, depth - 1));
      return Term::con(d.name, gen::coin(rng, 0.9) ? d.type : "U", kids);
    }
  }
}

}  // namespace

TEST_CASE("check_term on the JSON signature") {
  CHECK(check_term(json_sig(), j::null(), json_t()).empty());
  auto errs = check_term(json_sig(), Term::con("number", "JSON", {Term::str("x")}), json_t());
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].path == std::vector<std::size_t>{0});
  CHECK(check_term(json_sig(), j::object({j::prop("name", j::string("Rodin"))}), json_t()).empty());
}

TEST_CASE("term_equals") {
  CHECK(term_equals(j::number(29.0), j::number(29.0)));
  CHECK_FALSE(term_equals(j::null(), j::boolean(true)));
  CHECK(term_equals(j::parse_json("{a:1}"), j::parse_json("{a:1}")));
  CHECK_FALSE(term_equals(Term::real(0.0), Term::real(-0.0)));
  CHECK_FALSE(term_equals(Term::list({}, ArgType::adt("JSON")), Term::list({}, ArgType::adt("Prop"))));
}

TEST_CASE("term_equals is an equivalence on random terms") {
  gen::Rng rng(11);
  std::vector<Term> ts;
  for (int i = 0; i < 60; ++i) ts.push_back(gen::random_json(rng, 2));
  for (const auto& a : ts) {
    CHECK(term_equals(a, a));
    for (const auto& b : ts) {
      CHECK(term_equals(a, b) == term_equals(b, a));
      if (!term_equals(a, b)) continue;
      for (const auto& c : ts) {
        if (term_equals(b, c)) CHECK(term_equals(a, c));
      }
    }
  }
}

TEST_CASE("wire encoding examples") {
  CHECK(encode_term(j::null()) == R"({"con":"null","type":"JSON","args":[]})");
  CHECK(encode_term(j::number(29.0)) == R"({"con":"number","type":"JSON","args":[{"real":29.0}]})");
  CHECK(encode_term(Term::list({Term::integer(3)}, ArgType::prim(PrimKind::Int))) ==
        R"({"list":[{"int":3}],"elem":{"prim":"int"}})");
  CHECK(encode_term(Term::nothing()) == R"({"con":"nothing","type":"Maybe","args":[]})");
}

TEST_CASE("wire decoding rejects malformed input") {
  CHECK_THROWS_AS(decode_term("{\"con\":"), Error);
  CHECK_THROWS_AS(decode_term("{\"int\": 1.5}"), Error);
  CHECK_THROWS_AS(decode_term("[]"), Error);
  try {
    decode_term("{\"con\":\"a\"}");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WireStructure);
  }
}

TEST_CASE("wire round trip on 1000 random JSON terms, injective on distinct terms") {
  gen::Rng rng(7);
  std::vector<Term> ts;
  for (int i = 0; i < 1000; ++i) ts.push_back(gen::random_json(rng, 3));
  std::map<std::string, Term> seen;
  for (const auto& t : ts) {
    std::string enc = encode_term(t);
    CHECK(term_equals(decode_term(enc), t));
    CHECK(encode_term(decode_term(enc)) == enc);
    auto [it, inserted] = seen.emplace(enc, t);
    if (!inserted) CHECK(term_equals(it->second, t));
  }
}

TEST_CASE("real rendering is shortest round trip with a decimal point") {
  CHECK(format_real(29.0) == "29.0");
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(-3.75) == "-3.75");
  for (double d : {1e21, 1.5e-7, 123456789.0, 0.3, 5e-324}) {
    CHECK(std::strtod(format_real(d).c_str(), nullptr) == d);
    CHECK(format_real(d).find_first_of(".") != std::string::npos);
  }
}

TEST_CASE("check_term agrees with the brute-force checker") {
  Signature sig = parse_signature(R"(
    data T = a() | wrap(T inner) | pair(T l, U r) | many(list[T] xs) | opt(Maybe[U] m);
    data U = a() | b(int n, str s) | c(bool f, real r);
  )");
  gen::Rng rng(3);
  int well = 0, ill = 0;
  for (int i = 0; i < 5000; ++i) {
    Term t = junk(rng, sig, 4);
    for (const auto& expected : {ArgType::adt("T"), ArgType::adt("U"), ArgType::list(ArgType::adt("T"))}) {
      bool ok = check_term(sig, t, expected).empty();
      CHECK(ok == oracle::well_typed(sig, t, expected));
      (ok ? well : ill)++;
    }
  }
  CHECK(well > 100);
  CHECK(ill > 100);
}

TEST_CASE("check_term handles maybe carriers") {
  Signature sig = parse_signature("data T = opt(Maybe[U] m); data U = u();");
  CHECK(check_term(sig, Term::con("opt", "T", {Term::nothing()}), ArgType::adt("T")).empty());
  CHECK(check_term(sig, Term::con("opt", "T", {Term::just(Term::con("u", "U"))}), ArgType::adt("T")).empty());
  CHECK_FALSE(check_term(sig, Term::con("opt", "T", {Term::con("u", "U")}), ArgType::adt("T")).empty());
  CHECK_FALSE(check_term(sig, Term::con("opt", "T", {Term::just(Term::integer(1))}), ArgType::adt("T")).empty());
}

TEST_CASE("signature invariants") {
  CHECK_THROWS_AS(parse_signature("data T = a(U u);"), Error);
  CHECK_THROWS_AS(parse_signature("data T = a() | a();"), Error);
  CHECK_THROWS_AS(parse_signature("data T = a(Maybe[Maybe[T]] m);"), Error);
  CHECK_THROWS_AS(ArgType::maybe(ArgType::maybe(ArgType::prim(PrimKind::Int))), Error);
  // same name, different types
  CHECK_NOTHROW(parse_signature("data T = a(); data U = a();"));
}

TEST_CASE("signature print/parse round trip") {
  Signature sig = parse_signature(R"(
    module demo
    // comment
    data T = a() | pair(T l, list[U] r);
    data U = b(Maybe[str] s, real x);
  )");
  std::string text = print_signature(sig, "demo");
  Signature again = parse_signature(text);
  CHECK(print_signature(again, "demo") == text);
  CHECK(render_constructor(*sig.find("T", "pair", 2)) == "pair(T l, list[U] r)");
}

TEST_CASE("constructor-call text reads back") {
  gen::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    Term t = gen::random_json(rng, 3);
    CHECK(term_equals(read_term_text(to_string(t), json_sig(), json_t()), t));
    CHECK(term_equals(read_any_term(encode_term(t), json_sig(), json_t()), t));
  }
  CHECK(to_string(j::object({j::prop("age", j::number(29.0))})) == R"(object([prop(id("age"), number(29.0))]))");
  CHECK_THROWS_AS(read_term_text("number(", json_sig(), json_t()), Error);
  CHECK_THROWS_AS(read_any_term("number(\"x\")", json_sig(), json_t()), Error);
}
