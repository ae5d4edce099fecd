#include <algorithm>
#include <set>

#include "csbb/tympanic.hpp"

namespace csbb::tympanic {

namespace {

std::optional<ArgType> primitive_type(std::string_view foreign) {
  if (foreign == "Integer") return ArgType::prim(PrimKind::Int);
  if (foreign == "Boolean") return ArgType::prim(PrimKind::Bool);
  if (foreign == "String") return ArgType::prim(PrimKind::Str);
  if (foreign == "Double") return ArgType::prim(PrimKind::Real);
  return std::nullopt;
}

struct Failure {
  Diagnostic diag;
};

// Collects diagnostics while compiling; every failure is local to the rule
// (or type mapping) that caused it, so compilation continues past it.
class Compiler {
 public:
  Compiler(const TympanicSpec& spec, const ForeignSchema& schema) : spec_(spec), schema_(schema) {}

  CompiledSpec run() {
    CompiledSpec out;
    out.module_name = spec_.module_name();
    map_types();
    for (const auto& cm : spec_.constructors) {
      try {
        out.classes.push_back(compile_class(cm));
      } catch (const Failure& f) {
        diags_.push_back(f.diag);
      }
    }
    build_signature(out);
    return out;
  }

  std::vector<Diagnostic>& diagnostics() { return diags_; }

  /// ADT for values of foreign class `cls`: the nearest mapped ancestor.
  std::string adt_of_class(const std::string& cls, SourcePos pos) const {
    const ForeignClass* c = schema_.find(cls);
    if (!c) fail(ErrorCode::UnknownForeignType, "unknown foreign type " + cls, pos);
    if (c->kind == ForeignClass::Kind::Enum || c->kind == ForeignClass::Kind::Primitive) {
      fail(ErrorCode::UnmappedForeignType, cls + " cannot map to an ADT", pos);
    }
    for (const auto& layer : schema_.ancestors_by_distance(cls)) {
      std::set<std::string> found;
      for (const auto& n : layer) {
        if (auto it = type_map_.find(n); it != type_map_.end()) found.insert(it->second);
      }
      if (found.size() == 1) return *found.begin();
      if (found.size() > 1) {
        std::string names;
        for (const auto& f : found) names += (names.empty() ? "" : ", ") + f;
        fail(ErrorCode::AmbiguousAdt, cls + " maps to several ADTs at the same distance: " + names, pos);
      }
    }
    fail(ErrorCode::UnmappedForeignType, "no type mapping covers " + cls, pos);
  }

 private:
  [[noreturn]] static void fail(ErrorCode code, std::string msg, SourcePos pos) {
    throw Failure{Diagnostic{code, std::move(msg), pos}};
  }

  void map_types() {
    for (const auto& tm : spec_.types) {
      const ForeignClass* c = schema_.find(tm.foreign_type);
      if (!c) {
        diags_.push_back({ErrorCode::UnknownForeignType, "unknown foreign type " + tm.foreign_type, tm.pos});
        continue;
      }
      if (c->kind == ForeignClass::Kind::Enum || c->kind == ForeignClass::Kind::Primitive) {
        diags_.push_back({ErrorCode::UnmappedForeignType,
                          tm.foreign_type + " is not a class or interface and cannot map to an ADT", tm.pos});
        continue;
      }
      type_map_[tm.foreign_type] = tm.adt;
      add_type(tm.adt);
    }
  }

  void add_type(const std::string& t) {
    if (std::find(types_.begin(), types_.end(), t) == types_.end()) types_.push_back(t);
  }

  ArgType map_foreign(const ForeignTypeRef& t, SourcePos pos) const {
    if (t.kind != ForeignTypeRef::Kind::Named) return ArgType::list(map_foreign(*t.element, pos));
    if (auto p = primitive_type(t.name)) return *p;
    return ArgType::adt(adt_of_class(t.name, pos));
  }

  ArgType cast_type(const std::string& target, SourcePos pos) const {
    if (auto p = primitive_type(target)) return *p;
    return ArgType::adt(adt_of_class(target, pos));
  }

  CompiledClass compile_class(const ClassMapping& cm) {
    if (!schema_.find(cm.foreign_class)) {
      fail(ErrorCode::UnknownForeignType, "unknown foreign class " + cm.foreign_class, cm.pos);
    }
    CompiledClass cc;
    cc.foreign_class = cm.foreign_class;
    cc.adt = adt_of_class(cm.foreign_class, cm.pos);
    for (std::size_t i = 0; i < cm.rules.size(); ++i) {
      try {
        cc.rules.push_back(compile_rule(cm, cc.adt, i));
      } catch (const Failure& f) {
        diags_.push_back(f.diag);
      }
    }
    return cc;
  }

  CompiledRule compile_rule(const ClassMapping& cm, const std::string& adt, std::size_t index) {
    const Rule& rule = cm.rules[index];
    CompiledRule cr;
    cr.foreign_class = cm.foreign_class;
    cr.index = index;
    cr.pos = rule.pos;
    std::vector<std::size_t> positional;  // indices of non-skipped fields
    for (const auto& f : rule.fields) {
      const Member* m = schema_.find_member(cm.foreign_class, f.member);
      if (!m) fail(ErrorCode::UnknownMember, cm.foreign_class + " has no member " + f.member, f.pos);
      if ((f.kind == FieldSpec::Kind::Cast || f.kind == FieldSpec::Kind::CastArray) && !schema_.find(f.target)) {
        fail(ErrorCode::UnknownForeignType, "unknown cast target " + f.target, f.pos);
      }
      if (!f.skip) positional.push_back(cr.fields.size());
      cr.fields.push_back({f, *m, std::nullopt});
    }
    const auto& tmpl = rule.constructor;
    if (positional.size() != tmpl.args.size()) {
      fail(ErrorCode::ArityMismatch,
           "rule has " + std::to_string(positional.size()) + " non-skipped field(s) but " + tmpl.name + " takes " +
               std::to_string(tmpl.args.size()) + " argument(s)",
           rule.pos);
    }
    cr.constructor.name = tmpl.name;
    cr.constructor.type = adt;
    for (std::size_t k = 0; k < tmpl.args.size(); ++k) {
      const TemplateArg& a = tmpl.args[k];
      CompiledField& field = cr.fields[positional[k]];
      if (a.inline_type) {
        auto [type, constant] = inline_constant(a);
        cr.constructor.args.push_back({a.name, type});
        cr.args.push_back({std::nullopt, constant});
        continue;
      }
      field.type = field_type(field);
      cr.constructor.args.push_back({a.name, *field.type});
      cr.args.push_back({positional[k], std::nullopt});
    }
    record(cr.constructor, cr.pos, cm_group(cm));
    return cr;
  }

  ArgType field_type(const CompiledField& f) const {
    const FieldSpec& s = f.spec;
    switch (s.kind) {
      case FieldSpec::Kind::Plain:
      case FieldSpec::Kind::Eq:
      case FieldSpec::Kind::Neq: return map_foreign(f.member.type, s.pos);
      case FieldSpec::Kind::Optional: {
        ArgType inner = map_foreign(f.member.type, s.pos);
        if (inner.is_maybe()) fail(ErrorCode::UnmappedForeignType, "optional of an optional", s.pos);
        return ArgType::maybe(inner);
      }
      case FieldSpec::Kind::Cast: return cast_type(s.target, s.pos);
      case FieldSpec::Kind::CastArray: return ArgType::list(cast_type(s.target, s.pos));
    }
    return ArgType::prim(PrimKind::Int);
  }

  std::pair<ArgType, Term> inline_constant(const TemplateArg& a) {
    const std::string& t = *a.inline_type;
    const RascalValue& v = a.inline_value;
    if (t == "bool" && (v.kind == RascalValue::Kind::True || v.kind == RascalValue::Kind::False)) {
      return {ArgType::prim(PrimKind::Bool), Term::boolean(v.kind == RascalValue::Kind::True)};
    }
    if (t == "int" && v.kind == RascalValue::Kind::Int) {
      return {ArgType::prim(PrimKind::Int), Term::integer(v.int_value)};
    }
    if (v.kind == RascalValue::Kind::Con && v.args.empty() && t != "bool" && t != "int" && t != "str" &&
        t != "real") {
      add_type(t);
      ConstructorDecl decl{v.name, t, {}};
      record(decl, a.pos, "inline:" + t);
      return {ArgType::adt(t), Term::con(v.name, t)};
    }
    fail(ErrorCode::UnsupportedInlineValue,
         "inline argument " + t + " " + a.name + " = " + to_string(v) +
             " is not supported (use a nullary constructor, true/false for bool, or an integer for int)",
         a.pos);
  }

  static std::string cm_group(const ClassMapping& cm) { return "class:" + cm.foreign_class; }

  // Registers a constructor under its rendering group. Identical redeclarations
  // are merged; conflicting ones are reported.
  void record(const ConstructorDecl& decl, SourcePos pos, const std::string& group) {
    for (const auto& [g, d] : decls_) {
      if (d.type != decl.type || d.name != decl.name) continue;
      bool same = d.args.size() == decl.args.size();
      for (std::size_t i = 0; same && i < d.args.size(); ++i) {
        same = d.args[i].name == decl.args[i].name && d.args[i].type == decl.args[i].type;
      }
      if (same) return;
      fail(ErrorCode::InvalidSignature,
           "constructor " + decl.type + "." + decl.name + " is declared with different arguments: " +
               render_constructor(d) + " and " + render_constructor(decl),
           pos);
    }
    decls_.emplace_back(group, decl);
  }

  void build_signature(CompiledSpec& out) {
    std::vector<ConstructorDecl> ctors;
    for (const auto& [g, d] : decls_) ctors.push_back(d);
    try {
      out.signature = Signature(types_, ctors);
    } catch (const Error& e) {
      diags_.push_back({ErrorCode::InvalidSignature, e.detail(), SourcePos{}});
    }
    std::string text = "module " + out.module_name + "\n";
    for (const auto& t : types_) {
      // Constructors of one type, grouped by origin, groups in first-seen order.
      std::vector<std::pair<std::string, std::vector<const ConstructorDecl*>>> groups;
      for (const auto& [g, d] : decls_) {
        if (d.type != t) continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& e) { return e.first == g; });
        if (it == groups.end()) {
          groups.push_back({g, {}});
          it = groups.end() - 1;
        }
        it->second.push_back(&d);
      }
      text += "\ndata " + t;
      auto line = [](const std::vector<const ConstructorDecl*>& ds) {
        std::string s;
        for (std::size_t i = 0; i < ds.size(); ++i) s += (i ? " | " : "") + render_constructor(*ds[i]);
        return s;
      };
      if (groups.empty()) {
        text += ";\n";
      } else if (groups.size() == 1) {
        text += " = " + line(groups[0].second) + ";\n";
      } else {
        for (std::size_t i = 0; i < groups.size(); ++i) {
          text += (i ? "\n  | " : "\n  = ") + line(groups[i].second);
        }
        text += ";\n";
      }
    }
    out.module_text = std::move(text);
  }

  const TympanicSpec& spec_;
  const ForeignSchema& schema_;
  std::map<std::string, std::string> type_map_;
  std::vector<std::string> types_;
  std::vector<std::pair<std::string, ConstructorDecl>> decls_;
  std::vector<Diagnostic> diags_;
};

// Guards that constrain a rule's applicability, in a form comparable
// across rules (the skip marker does not change a guard).
std::set<std::string> guard_set(const Rule& r) {
  std::set<std::string> out;
  for (auto f : r.fields) {
    if (f.kind == FieldSpec::Kind::Plain || f.kind == FieldSpec::Kind::Optional) continue;
    f.skip = false;
    out.insert(to_string(f));
  }
  return out;
}

}  // namespace

std::string to_string(const Diagnostic& d) {
  return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": " + std::string(to_string(d.code)) +
         ": " + d.message;
}

CompiledSpec infer_signature(const TympanicSpec& spec, const ForeignSchema& schema) {
  Compiler c(spec, schema);
  CompiledSpec out = c.run();
  if (!c.diagnostics().empty()) {
    const Diagnostic& d = c.diagnostics().front();
    throw Error(d.code, d.message, d.pos);
  }
  return out;
}

std::vector<Diagnostic> check_spec(const TympanicSpec& spec, const ForeignSchema& schema) {
  Compiler c(spec, schema);
  c.run();
  std::vector<Diagnostic> diags = std::move(c.diagnostics());

  for (const auto& cm : spec.constructors) {
    std::vector<std::set<std::string>> guards;
    for (const auto& r : cm.rules) guards.push_back(guard_set(r));
    for (std::size_t j = 0; j < cm.rules.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        if (std::includes(guards[j].begin(), guards[j].end(), guards[i].begin(), guards[i].end())) {
          diags.push_back({ErrorCode::UnreachableRule,
                           "rule " + std::to_string(j + 1) + " of " + cm.foreign_class +
                               " is shadowed by rule " + std::to_string(i + 1),
                           cm.rules[j].pos});
          break;
        }
      }
    }
    // Enum literals in guards must name a constant of the member's enum.
    if (!schema.find(cm.foreign_class)) continue;
    for (const auto& r : cm.rules) {
      for (const auto& f : r.fields) {
        if (!f.value || f.value->kind != JavaValue::Kind::Path) continue;
        const Member* m = schema.find_member(cm.foreign_class, f.member);
        if (!m) continue;
        const ForeignClass* e =
            m->type.kind == ForeignTypeRef::Kind::Named ? schema.find(m->type.name) : nullptr;
        bool ok = false;
        if (e && e->kind == ForeignClass::Kind::Enum) {
          for (const auto& k : e->constants) ok = ok || enum_literal_matches(*f.value, e->name, k);
        }
        if (!ok) {
          diags.push_back({ErrorCode::UnknownMember,
                           to_string(*f.value) + " is not a constant of " + to_string(m->type), f.pos});
        }
      }
    }
  }

  for (const auto& tm : spec.types) {
    const ForeignClass* t = schema.find(tm.foreign_type);
    if (!t || t->kind != ForeignClass::Kind::Abstract) continue;
    bool covered = false;
    for (const auto& cm : spec.constructors) {
      const ForeignClass* c = schema.find(cm.foreign_class);
      covered = covered || (c && c->kind == ForeignClass::Kind::Concrete && schema.is_subtype(c->name, t->name));
    }
    if (!covered) {
      diags.push_back({ErrorCode::UncoveredAbstractType,
                       "abstract type " + tm.foreign_type + " has no mapped concrete subtype", tm.pos});
    }
  }
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.pos.line, a.pos.column) < std::pair(b.pos.line, b.pos.column);
  });
  return diags;
}

}  // namespace csbb::tympanic
