#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "csbb/signature.hpp"
#include "csbb/tympanic.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace csbb;
using namespace csbb::tympanic;
using support::error_code;
using FV = ForeignValue;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string squash(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

TympanicSpec fig6() { return parse_tympanic(slurp(support::data_path("fig6.tymp"))); }
ForeignSchema expr_schema() { return parse_schema(slurp(support::data_path("expr.schema.json"))); }

FV lit_int(std::int64_t v) { return FV::object("Lit", {{"getValue", FV::integer(v)}}); }
FV binary(const std::string& op, FV l, FV r) {
  return FV::object("Binary", {{"getOp", FV::enum_constant("Op", op)}, {"getLhs", std::move(l)}, {"getRhs", std::move(r)}});
}

bool has_code(const std::vector<Diagnostic>& ds, ErrorCode c) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == c; });
}

const char* kHeader = "mapping M\nimport expressions\nexport m::M\ntypes Expr => Expr\nconstructors\n";

// Random Expr values built only from constructs Fig. 6 covers.
FV random_expr(gen::Rng& rng, int depth) {
  static const std::vector<std::string> ops = {"PLUS", "TIMES", "MINUS", "SLASH"};
  switch (gen::below(rng, depth > 0 ? 6 : 3)) {
    case 0: return lit_int(static_cast<std::int64_t>(gen::below(rng, 100)) - 50);
    case 1: return FV::object("Lit", {{"getValue", FV::boolean(gen::coin(rng, 0.5))}});
    case 2: return FV::object("Lit", {{"getValue", FV::string(gen::random_string(rng))}});
    case 3: return binary(ops[gen::below(rng, 4)], random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4:
      return FV::object("Cond", {{"getCond", random_expr(rng, depth - 1)},
                                 {"getThen", random_expr(rng, depth - 1)},
                                 {"getElse", gen::coin(rng, 0.5) ? FV::null() : random_expr(rng, depth - 1)}});
    default: {
      std::vector<FV> body;
      for (std::size_t n = gen::below(rng, 4); n > 0; --n) body.push_back(random_expr(rng, depth - 1));
      return FV::object("Block", {{"getBody", FV::array(body)}});
    }
  }
}

}  // namespace

TEST_CASE("parse_tympanic on Fig. 6") {
  TympanicSpec spec = fig6();
  CHECK(spec.name == "ExprAst");
  CHECK(spec.module_name() == "expr::Expr");
  REQUIRE(spec.types.size() == 1);
  REQUIRE(spec.constructors.size() == 4);
  std::vector<std::size_t> counts;
  for (const auto& cm : spec.constructors) counts.push_back(cm.rules.size());
  CHECK(counts == std::vector<std::size_t>{4, 2, 1, 3});
  const FieldSpec& guard = spec.constructors[0].rules[0].fields[0];
  CHECK(guard.skip);
  CHECK(guard.kind == FieldSpec::Kind::Eq);
  CHECK(to_string(*guard.value) == "Op.PLUS");
  CHECK(spec.constructors[3].rules[0].fields[0].kind == FieldSpec::Kind::Cast);
}

TEST_CASE("parse_tympanic forms") {
  TympanicSpec empty = parse_tympanic("mapping M import p export a::B types constructors");
  CHECK(empty.types.empty());
  CHECK(empty.constructors.empty());

  TympanicSpec inl = parse_tympanic(std::string(kHeader) +
                                    "Binary\n  - getOp == Operator.PLUS, getLhs, getRhs: binary(Op op = plus(), lhs, rhs)\n");
  const auto& args = inl.constructors[0].rules[0].constructor.args;
  REQUIRE(args.size() == 3);
  CHECK(args[0].inline_type == std::optional<std::string>("Op"));
  CHECK(to_string(args[0].inline_value) == "plus()");

  TympanicSpec all = parse_tympanic(std::string(kHeader) +
                                    "Cond\n  - getCond?, %getThen != null, (Expr)getElse: c(a, b)\n"
                                    "Block\n  - (Lit[])getBody, %getBody == -3, %getBody == true: b(x)\n");
  const auto& f = all.constructors[0].rules[0].fields;
  CHECK(f[0].kind == FieldSpec::Kind::Optional);
  CHECK(f[1].kind == FieldSpec::Kind::Neq);
  CHECK(f[2].kind == FieldSpec::Kind::Cast);
  const auto& g = all.constructors[1].rules[0].fields;
  CHECK(g[0].kind == FieldSpec::Kind::CastArray);
  CHECK(g[0].target == "Lit");
  CHECK(g[1].value->int_value == -3);
  CHECK(g[2].value->kind == JavaValue::Kind::True);
}

TEST_CASE("parse_tympanic errors") {
  try {
    parse_tympanic("mapping M\nimport p\nexport a::B\ntypes\nconstructors\nBinary\n  - getLhs getRhs: add(l, r)\n");
    FAIL("expected TympanicSyntax");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TympanicSyntax);
    REQUIRE(e.pos());
    CHECK(e.pos()->line == 7);
    CHECK(e.pos()->column == 12);
  }
  CHECK(error_code([] { parse_tympanic("mapping M import p export a::B types constructors Binary"); }) ==
        ErrorCode::TympanicSyntax);
  CHECK(error_code([] { parse_tympanic("mapping M import p export a::B types A => X A => Y constructors"); }) ==
        ErrorCode::DuplicateTypeMapping);
}

TEST_CASE("schema parsing and validation") {
  ForeignSchema s = expr_schema();
  CHECK(s.is_subtype("Binary", "Expr"));
  CHECK(s.is_subtype("Binary", "Object"));
  CHECK_FALSE(s.is_subtype("Expr", "Binary"));
  CHECK(s.find_member("Block", "getBody") != nullptr);
  CHECK(error_code([] { parse_schema(R"({"types":[{"abstract":"A","implements":["B"]},{"abstract":"B","implements":["A"]}]})"); }) ==
        ErrorCode::SchemaError);
  CHECK(error_code([] { parse_schema(R"({"types":[{"concrete":"A","implements":["Nope"]}]})"); }) == ErrorCode::SchemaError);
  CHECK(error_code([] { parse_schema(R"({"types":[{"concrete":"A","members":[{"name":"m","type":"Nope"}]}]})"); }) ==
        ErrorCode::SchemaError);
  CHECK(error_code([] { parse_schema(R"({"types":[{"enum":"E","constants":["A","A"]}]})"); }) == ErrorCode::SchemaError);
}

TEST_CASE("foreign values") {
  ForeignSchema s = expr_schema();
  FV v = parse_foreign_value(slurp(support::data_path("values/add_1_2.json")));
  CHECK(v.tag == "Binary");
  CHECK(v.field("getOp").constant == "PLUS");
  CHECK(v.field("missing").kind == FV::Kind::Null);
  CHECK_NOTHROW(validate_value(s, v));
  CHECK(parse_foreign_value(foreign_value_to_json(v).dump()).field("getLhs").field("getValue").int_value == 1);

  CHECK(error_code([&] { validate_value(s, FV::object("Expr", {})); }) == ErrorCode::ForeignValueError);
  CHECK(error_code([&] { validate_value(s, FV::object("Lit", {{"nope", FV::null()}})); }) == ErrorCode::ForeignValueError);
  CHECK(error_code([&] { validate_value(s, binary("POW", lit_int(1), lit_int(2))); }) == ErrorCode::ForeignValueError);
  CHECK(error_code([&] { validate_value(s, FV::object("Cond", {{"getCond", FV::integer(1)}})); }) ==
        ErrorCode::ForeignValueError);
  CHECK(error_code([] { parse_foreign_value("{\"type\": 3}"); }) == ErrorCode::ForeignValueError);
}

TEST_CASE("Fig. 6 generates Fig. 7") {
  CompiledSpec c = infer_signature(fig6(), expr_schema());
  CHECK(squash(c.module_text) == squash(slurp(support::data_path("fig7.rsc"))));
  CHECK(c.signature.constructors().size() == 10);
  CHECK(render_constructor(*c.signature.find("Expr", "block", 1)) == "block(list[Expr] body)");
  // the module text is itself a valid signature describing the same constructors
  CHECK(print_signature(parse_signature(c.module_text)) == print_signature(c.signature));
}

TEST_CASE("inline enum arguments synthesize a type") {
  CompiledSpec c = infer_signature(parse_tympanic(slurp(support::data_path("inline_enum.tymp"))), expr_schema());
  CHECK(c.signature.has_type("Op"));
  CHECK(render_constructor(*c.signature.find("Op", "plus", 0)) == "plus()");
  CHECK(render_constructor(*c.signature.find("Expr", "binary", 3)) == "binary(Op op, Expr lhs, Expr rhs)");
  CHECK(squash(c.module_text).find("data Op = plus();") != std::string::npos);
}

TEST_CASE("inferred argument types") {
  TympanicSpec spec = parse_tympanic(std::string(kHeader) +
                                     "Cond\n  - (Boolean)getCond, getThen?, %getElse == null: c(b, t)\n"
                                     "Block\n  - (Lit[])getBody: lits(xs)\n"
                                     "Lit\n  - (Double)getValue: real(r)\n  - (String)getValue: text(s)\n");
  CompiledSpec c = infer_signature(spec, expr_schema());
  CHECK(render_constructor(*c.signature.find("Expr", "c", 2)) == "c(bool b, Maybe[Expr] t)");
  CHECK(render_constructor(*c.signature.find("Expr", "lits", 1)) == "lits(list[Expr] xs)");
  CHECK(render_constructor(*c.signature.find("Expr", "real", 1)) == "real(real r)");
  CHECK(render_constructor(*c.signature.find("Expr", "text", 1)) == "text(str s)");
}

TEST_CASE("inference errors") {
  ForeignSchema s = expr_schema();
  auto infer = [&](const std::string& body) { return error_code([&] { infer_signature(parse_tympanic(std::string(kHeader) + body), s); }); };
  CHECK(infer("Binary\n  - getNope: a(x)\n") == ErrorCode::UnknownMember);
  CHECK(infer("Binary\n  - getLhs, getRhs: a(x)\n") == ErrorCode::ArityMismatch);
  CHECK(infer("Binary\n  - getOp: a(x)\n") == ErrorCode::UnmappedForeignType);
  CHECK(infer("Nope\n  - getOp: a(x)\n") == ErrorCode::UnknownForeignType);
  CHECK(infer("Binary\n  - getLhs: a(x)\n  - getRhs: a(x, y)\n") == ErrorCode::ArityMismatch);
}

TEST_CASE("the verbatim Fig. 6 else rule is an arity mismatch") {
  std::string text = slurp(support::data_path("fig6.tymp"));
  auto at = text.find("getElse != null");
  REQUIRE(at != std::string::npos);
  text.insert(at, "%");
  auto diags = check_spec(parse_tympanic(text), expr_schema());
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == ErrorCode::ArityMismatch);
  CHECK(diags[0].pos.line == static_cast<std::size_t>(std::count(text.begin(), text.begin() + at, '\n') + 1));
}

TEST_CASE("check_spec") {
  ForeignSchema s = expr_schema();
  CHECK(check_spec(fig6(), s).empty());
  auto check = [&](const std::string& body) { return check_spec(parse_tympanic(std::string(kHeader) + body), s); };
  auto dup = check("Binary\n  - %getOp == Op.PLUS, getLhs, getRhs: add(l, r)\n  - %getOp == Op.PLUS, getLhs, getRhs: add(l, r)\n");
  CHECK(has_code(dup, ErrorCode::UnreachableRule));
  auto weaker = check("Binary\n  - getLhs, getRhs: add(l, r)\n  - %getOp == Op.PLUS, getLhs, getRhs: add(l, r)\n");
  CHECK(has_code(weaker, ErrorCode::UnreachableRule));
  CHECK(has_code(check("Nope\n  - getLhs: a(x)\n"), ErrorCode::UnknownForeignType));
  CHECK(has_code(check("Binary\n  - %getOp == Op.POW, getLhs, getRhs: add(l, r)\n"), ErrorCode::UnknownMember));
  auto partial = check_spec(parse_tympanic("mapping M import p export m::M types Expr => Expr constructors"), s);
  CHECK(has_code(partial, ErrorCode::UncoveredAbstractType));
  CHECK(to_string(dup[0]).find("UnreachableRule") != std::string::npos);
}

TEST_CASE("marshal suite") {
  Marshaller m(fig6(), expr_schema());
  auto run = [&](const FV& v) { return csbb::to_string(m.marshal(v)); };
  CHECK(run(binary("PLUS", lit_int(1), lit_int(2))) == "add(integer(1), integer(2))");
  CHECK(run(binary("TIMES", lit_int(1), lit_int(2))) == "mul(integer(1), integer(2))");
  CHECK(run(binary("MINUS", lit_int(1), lit_int(2))) == "sub(integer(1), integer(2))");
  CHECK(run(binary("SLASH", lit_int(1), lit_int(2))) == "div(integer(1), integer(2))");
  FV c = FV::object("Lit", {{"getValue", FV::boolean(true)}});
  FV t = FV::object("Lit", {{"getValue", FV::string("yes")}});
  CHECK(run(FV::object("Cond", {{"getCond", c}, {"getThen", t}, {"getElse", FV::null()}})) ==
        R"(ifThen(boolean(true), string("yes")))");
  CHECK(run(FV::object("Cond", {{"getCond", c}, {"getThen", t}, {"getElse", lit_int(0)}})) ==
        R"(ifThenElse(boolean(true), string("yes"), integer(0)))");
  CHECK(run(FV::object("Block", {{"getBody", FV::array({})}})) == "block([])");
  CHECK(run(FV::object("Block", {{"getBody", FV::array({lit_int(7)})}})) == "block([integer(7)])");
  CHECK(run(parse_foreign_value(slurp(support::data_path("values/cond_no_else.json")))) ==
        R"(ifThen(boolean(true), string("yes")))");
  CHECK(error_code([&] { m.marshal(parse_foreign_value(slurp(support::data_path("values/lit_real.json")))); }) ==
        ErrorCode::NoApplicableRule);
}

TEST_CASE("marshal failures") {
  Marshaller m(fig6(), expr_schema());
  CHECK(error_code([&] { m.marshal(binary("PLUS", FV::null(), lit_int(2))); }) == ErrorCode::NullNotOptional);
  CHECK(error_code([&] { m.marshal(lit_int(1).field("getValue")); }) == ErrorCode::CastFailure);
  CHECK(error_code([&] { m.marshal(FV::object("Cond", {{"getCond", FV::null()}, {"getThen", lit_int(1)}})); }) ==
        ErrorCode::NullNotOptional);
  try {
    m.marshal(FV::object("Block", {{"getBody", FV::array({lit_int(1), FV::object("Lit", {{"getValue", FV::real(2.5)}})})}}));
    FAIL("expected NoApplicableRule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoApplicableRule);
    CHECK(e.detail().find("$.getBody[1]") != std::string::npos);
  }
}

TEST_CASE("optional fields and dispatch through supertypes") {
  ForeignSchema s = parse_schema(R"({"types": [
    {"abstract": "Node"},
    {"abstract": "Expr", "implements": ["Node"]},
    {"concrete": "Lit", "implements": ["Expr"], "members": [{"name": "getValue", "type": "Integer"}]},
    {"concrete": "Neg", "implements": ["Expr"], "members": [{"name": "getArg", "type": "Expr"}, {"name": "getNote", "type": "Expr"}]},
    {"concrete": "Special", "implements": ["Neg"], "members": []}
  ]})");
  TympanicSpec spec = parse_tympanic(std::string(kHeader) +
                                     "Lit\n  - getValue: lit(v)\n"
                                     "Neg\n  - getArg, getNote?: neg(a, n)\n");
  Marshaller m(spec, s);
  FV one = FV::object("Lit", {{"getValue", FV::integer(1)}});
  CHECK(csbb::to_string(m.marshal(FV::object("Neg", {{"getArg", one}, {"getNote", FV::null()}}))) ==
        "neg(lit(1), nothing())");
  CHECK(csbb::to_string(m.marshal(FV::object("Neg", {{"getArg", one}, {"getNote", one}}))) ==
        "neg(lit(1), just(lit(1)))");
  // Special has no mapping of its own and inherits Neg's rules
  CHECK(csbb::to_string(m.marshal(FV::object("Special", {{"getArg", one}}))) == "neg(lit(1), nothing())");
}

TEST_CASE("marshalling random covered values agrees with the brute-force oracle") {
  Marshaller m(fig6(), expr_schema());
  oracle::MarshalOracle brute{m.compiled(), m.schema()};
  gen::Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    FV v = random_expr(rng, 4);
    Term t = m.marshal(v);
    CHECK(check_term(m.compiled().signature, t, ArgType::adt("Expr")).empty());
    auto want = brute.run(v, ArgType::adt("Expr"));
    REQUIRE(want);
    CHECK(term_equals(t, *want));

    auto fired = m.select_rule(v);
    REQUIRE(fired);
    const CompiledClass* cc = m.dispatch(v.tag);
    CHECK(m.guards_hold(cc->rules[*fired], v));
    for (std::size_t k = 0; k < *fired; ++k) CHECK_FALSE(m.guards_hold(cc->rules[k], v));
  }
}

TEST_CASE("rule order matters only where guards overlap") {
  ForeignSchema s = expr_schema();
  std::string a = "Lit\n  - (Integer)getValue: integer(v)\n  - %getValue != null: other()\n";
  std::string b = "Lit\n  - %getValue != null: other()\n  - (Integer)getValue: integer(v)\n";
  Marshaller ma(parse_tympanic(std::string(kHeader) + a), s);
  Marshaller mb(parse_tympanic(std::string(kHeader) + b), s);
  FV integer = lit_int(3);
  FV boolean = FV::object("Lit", {{"getValue", FV::boolean(false)}});
  CHECK(csbb::to_string(ma.marshal(boolean)) == csbb::to_string(mb.marshal(boolean)));
  CHECK(csbb::to_string(ma.marshal(integer)) == "integer(3)");
  CHECK(csbb::to_string(mb.marshal(integer)) == "other()");

  // the disjoint Binary rules of Fig. 6 give the same result in any order
  TympanicSpec spec = fig6();
  auto& rules = spec.constructors[0].rules;
  std::reverse(rules.begin(), rules.end());
  Marshaller reversed(spec, s);
  Marshaller original(fig6(), s);
  gen::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    FV v = random_expr(rng, 3);
    CHECK(term_equals(reversed.marshal(v), original.marshal(v)));
  }
}

TEST_CASE("enum literals") {
  JavaValue qualified{JavaValue::Kind::Path, 0, {"Op", "PLUS"}};
  JavaValue bare{JavaValue::Kind::Path, 0, {"PLUS"}};
  JavaValue other{JavaValue::Kind::Path, 0, {"Operator", "PLUS"}};
  JavaValue package{JavaValue::Kind::Path, 0, {"expressions", "Op", "PLUS"}};
  CHECK(enum_literal_matches(qualified, "Op", "PLUS"));
  CHECK(enum_literal_matches(bare, "Op", "PLUS"));
  CHECK(enum_literal_matches(package, "Op", "PLUS"));
  CHECK_FALSE(enum_literal_matches(other, "Op", "PLUS"));
  CHECK_FALSE(enum_literal_matches(qualified, "Op", "TIMES"));
}
