#include "csbb/tympanic.hpp"

namespace csbb::tympanic {

bool enum_literal_matches(const JavaValue& literal, std::string_view enum_name, std::string_view constant) {
  if (literal.kind != JavaValue::Kind::Path || literal.path.empty()) return false;
  const auto& p = literal.path;
  if (p.back() != constant) return false;
  return p.size() == 1 || p[p.size() - 2] == enum_name;
}

namespace {

bool literal_equals(const JavaValue& lit, const ForeignValue& v) {
  using K = ForeignValue::Kind;
  switch (lit.kind) {
    case JavaValue::Kind::Null: return v.kind == K::Null;
    case JavaValue::Kind::True: return v.kind == K::Bool && v.bool_value;
    case JavaValue::Kind::False: return v.kind == K::Bool && !v.bool_value;
    case JavaValue::Kind::Int: return v.kind == K::Int && v.int_value == lit.int_value;
    case JavaValue::Kind::Path: return v.kind == K::Enum && enum_literal_matches(lit, v.tag, v.constant);
  }
  return false;
}

bool instance_of(const ForeignSchema& schema, const ForeignValue& v, const std::string& target) {
  auto rt = v.runtime_type();
  return rt && schema.is_subtype(*rt, target);
}

}  // namespace

bool guard_holds(const ForeignSchema& schema, const FieldSpec& field, const ForeignValue& value) {
  switch (field.kind) {
    case FieldSpec::Kind::Plain:
    case FieldSpec::Kind::Optional: return true;
    case FieldSpec::Kind::Eq: return literal_equals(*field.value, value);
    case FieldSpec::Kind::Neq: return !literal_equals(*field.value, value);
    case FieldSpec::Kind::Cast: return instance_of(schema, value, field.target);
    case FieldSpec::Kind::CastArray:
      if (value.kind != ForeignValue::Kind::Array) return false;
      for (const auto& e : value.elements) {
        if (!instance_of(schema, e, field.target)) return false;
      }
      return true;
  }
  return false;
}

Marshaller::Marshaller(TympanicSpec spec, ForeignSchema schema)
    : schema_(std::move(schema)), compiled_(infer_signature(spec, schema_)) {}

const CompiledClass* Marshaller::dispatch(std::string_view tag) const {
  for (const auto& layer : schema_.ancestors_by_distance(tag)) {
    // Within one distance the earliest mapping in the spec wins.
    for (const auto& cc : compiled_.classes) {
      for (const auto& n : layer) {
        if (cc.foreign_class == n) return &cc;
      }
    }
  }
  return nullptr;
}

bool Marshaller::guards_hold(const CompiledRule& rule, const ForeignValue& v) const {
  for (const auto& f : rule.fields) {
    if (!guard_holds(schema_, f.spec, v.field(f.spec.member))) return false;
  }
  return true;
}

std::optional<std::size_t> Marshaller::select_rule(const ForeignValue& v) const {
  if (v.kind != ForeignValue::Kind::Obj) return std::nullopt;
  const CompiledClass* cc = dispatch(v.tag);
  if (!cc) return std::nullopt;
  for (std::size_t i = 0; i < cc->rules.size(); ++i) {
    if (guards_hold(cc->rules[i], v)) return i;
  }
  return std::nullopt;
}

Term Marshaller::marshal(const ForeignValue& v) const {
  validate_value(schema_, v);
  if (v.kind != ForeignValue::Kind::Obj) {
    throw Error(ErrorCode::CastFailure, "$: the root value must be an object, found " + to_string(v));
  }
  Term t = marshal_object(v, "$");
  const CompiledClass* cc = dispatch(v.tag);
  auto errors = check_term(compiled_.signature, t, ArgType::adt(cc->adt));
  if (!errors.empty()) {
    throw Error(ErrorCode::IllTypedParserOutput,
                "marshalled term is ill-typed at " + format_path(errors[0].path) + ": " + errors[0].message);
  }
  return t;
}

Term Marshaller::marshal_object(const ForeignValue& v, const std::string& path) const {
  const CompiledClass* cc = dispatch(v.tag);
  if (!cc) throw Error(ErrorCode::NoApplicableRule, path + ": no constructor mapping covers " + v.tag);
  const CompiledRule* rule = nullptr;
  for (const auto& r : cc->rules) {
    if (guards_hold(r, v)) {
      rule = &r;
      break;
    }
  }
  if (!rule) {
    throw Error(ErrorCode::NoApplicableRule,
                path + ": no rule of " + cc->foreign_class + " applies to " + v.tag + " " + to_string(v));
  }
  std::vector<Term> args;
  for (const auto& a : rule->args) {
    if (a.constant) {
      args.push_back(*a.constant);
      continue;
    }
    const CompiledField& f = rule->fields[*a.field];
    args.push_back(marshal_at(v.field(f.spec.member), *f.type, path + "." + f.spec.member));
  }
  return Term::con(rule->constructor.name, rule->constructor.type, std::move(args));
}

Term Marshaller::marshal_at(const ForeignValue& v, const ArgType& type, const std::string& path) const {
  using K = ForeignValue::Kind;
  if (type.is_maybe()) {
    if (v.kind == K::Null) return Term::nothing();
    return Term::just(marshal_at(v, type.element(), path));
  }
  if (v.kind == K::Null) throw Error(ErrorCode::NullNotOptional, path + ": null where " + type.to_string() + " is required");
  auto mismatch = [&]() -> Error {
    return Error(ErrorCode::CastFailure, path + ": cannot convert " + to_string(v) + " to " + type.to_string());
  };
  switch (type.kind()) {
    case ArgType::Kind::List: {
      if (v.kind != K::Array) throw mismatch();
      std::vector<Term> elems;
      for (std::size_t i = 0; i < v.elements.size(); ++i) {
        elems.push_back(marshal_at(v.elements[i], type.element(), path + "[" + std::to_string(i) + "]"));
      }
      return Term::list(std::move(elems), type.element());
    }
    case ArgType::Kind::Prim:
      switch (type.prim_kind()) {
        case PrimKind::Int:
          if (v.kind == K::Int) return Term::integer(v.int_value);
          break;
        case PrimKind::Bool:
          if (v.kind == K::Bool) return Term::boolean(v.bool_value);
          break;
        case PrimKind::Str:
          if (v.kind == K::Str) return Term::str(v.str_value);
          break;
        case PrimKind::Real:
          if (v.kind == K::Real) return Term::real(v.real_value);
          break;
      }
      throw mismatch();
    case ArgType::Kind::Adt: {
      if (v.kind != K::Obj) throw mismatch();
      const CompiledClass* cc = dispatch(v.tag);
      if (cc && cc->adt != type.adt_name()) throw mismatch();
      return marshal_object(v, path);
    }
    case ArgType::Kind::Maybe: break;
  }
  throw mismatch();
}

Term marshal(const TympanicSpec& spec, const ForeignSchema& schema, const ForeignValue& v) {
  return Marshaller(spec, schema).marshal(v);
}

}  // namespace csbb::tympanic
