#include <algorithm>
#include <functional>
#include <set>

#include "csbb/tympanic.hpp"

namespace csbb::tympanic {

namespace {

constexpr std::string_view kObject = "Object";
constexpr std::string_view kPrimitives[] = {"Integer", "Boolean", "String", "Double"};

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }
[[noreturn]] void value_error(const std::string& pointer, const std::string& msg) {
  throw Error(ErrorCode::ForeignValueError, (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

std::string escape_pointer(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

ForeignTypeRef ForeignTypeRef::named(std::string name) {
  ForeignTypeRef t;
  t.kind = Kind::Named;
  t.name = std::move(name);
  return t;
}

ForeignTypeRef ForeignTypeRef::array(ForeignTypeRef element) {
  ForeignTypeRef t;
  t.kind = Kind::Array;
  t.element = std::make_shared<const ForeignTypeRef>(std::move(element));
  return t;
}

ForeignTypeRef ForeignTypeRef::iterable(ForeignTypeRef element) {
  ForeignTypeRef t;
  t.kind = Kind::Iterable;
  t.element = std::make_shared<const ForeignTypeRef>(std::move(element));
  return t;
}

std::string to_string(const ForeignTypeRef& t) {
  switch (t.kind) {
    case ForeignTypeRef::Kind::Named: return t.name;
    case ForeignTypeRef::Kind::Array: return to_string(*t.element) + "[]";
    case ForeignTypeRef::Kind::Iterable: return "Iterable<" + to_string(*t.element) + ">";
  }
  return "";
}

// ---------------------------------------------------------------------------

ForeignSchema::ForeignSchema() : ForeignSchema(std::vector<ForeignClass>{}) {}

ForeignSchema::ForeignSchema(std::vector<ForeignClass> classes) {
  ForeignClass top;
  top.kind = ForeignClass::Kind::Abstract;
  top.name = std::string(kObject);
  classes_.push_back(top);
  for (auto p : kPrimitives) {
    ForeignClass prim;
    prim.kind = ForeignClass::Kind::Primitive;
    prim.name = std::string(p);
    prim.supertypes = {std::string(kObject)};
    classes_.push_back(prim);
  }
  for (auto& c : classes) classes_.push_back(std::move(c));

  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (c.name.empty()) schema_error("type without a name");
    if (!index_.emplace(c.name, i).second) schema_error("type " + c.name + " is declared twice");
  }
  for (const auto& c : classes_) {
    for (const auto& s : c.supertypes) {
      const ForeignClass* sup = find(s);
      if (!sup) schema_error(c.name + " implements unknown type " + s);
      if (sup->kind == ForeignClass::Kind::Enum || (sup->kind == ForeignClass::Kind::Primitive)) {
        schema_error(c.name + " cannot extend " + s);
      }
    }
    std::set<std::string> seen;
    for (const auto& k : c.constants) {
      if (!seen.insert(k).second) schema_error("enum " + c.name + " declares constant " + k + " twice");
    }
    std::set<std::string> members;
    for (const auto& m : c.members) {
      if (!members.insert(m.name).second) schema_error(c.name + " declares member " + m.name + " twice");
      const ForeignTypeRef* t = &m.type;
      while (t->kind != ForeignTypeRef::Kind::Named) t = t->element.get();
      if (!find(t->name)) schema_error(c.name + "." + m.name + " has unknown type " + t->name);
    }
  }
  // Cycle check: depth-first with colours.
  std::vector<int> colour(classes_.size(), 0);
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    colour[i] = 1;
    for (const auto& s : classes_[i].supertypes) {
      std::size_t j = index_.find(s)->second;
      if (colour[j] == 1) schema_error("subtype cycle through " + classes_[i].name + " and " + s);
      if (colour[j] == 0) dfs(j);
    }
    colour[i] = 2;
  };
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (colour[i] == 0) dfs(i);
  }
}

const ForeignClass* ForeignSchema::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &classes_[it->second];
}

std::vector<std::vector<std::string>> ForeignSchema::ancestors_by_distance(std::string_view name) const {
  std::vector<std::vector<std::string>> layers;
  if (!find(name)) return layers;
  std::set<std::string, std::less<>> seen{std::string(name)};
  layers.push_back({std::string(name)});
  while (true) {
    std::vector<std::string> next;
    for (const auto& n : layers.back()) {
      const ForeignClass* c = find(n);
      std::vector<std::string> sups = c->supertypes;
      if (sups.empty() && n != kObject) sups.push_back(std::string(kObject));
      for (const auto& s : sups) {
        if (seen.insert(s).second) next.push_back(s);
      }
    }
    if (next.empty()) break;
    layers.push_back(std::move(next));
  }
  return layers;
}

bool ForeignSchema::is_subtype(std::string_view sub, std::string_view super) const {
  if (super == kObject) return find(sub) != nullptr;
  for (const auto& layer : ancestors_by_distance(sub)) {
    if (std::find(layer.begin(), layer.end(), super) != layer.end()) return true;
  }
  return false;
}

const Member* ForeignSchema::find_member(std::string_view cls, std::string_view member) const {
  for (const auto& layer : ancestors_by_distance(cls)) {
    for (const auto& n : layer) {
      for (const auto& m : find(n)->members) {
        if (m.name == member) return &m;
      }
    }
  }
  return nullptr;
}

namespace {

ForeignTypeRef type_ref_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) return ForeignTypeRef::named(j.get<std::string>());
  if (j.is_object() && j.size() == 1) {
    if (j.contains("array")) return ForeignTypeRef::array(type_ref_from_json(j["array"], where));
    if (j.contains("iterable")) return ForeignTypeRef::iterable(type_ref_from_json(j["iterable"], where));
  }
  schema_error(where + ": a type is a name, {\"array\": T} or {\"iterable\": T}");
}

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) schema_error(where + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

ForeignSchema schema_from_json(const nlohmann::json& doc) {
  const nlohmann::json* types = &doc;
  if (doc.is_object()) {
    if (!doc.contains("types")) schema_error("schema document needs a \"types\" array");
    types = &doc["types"];
  }
  if (!types->is_array()) schema_error("schema types must be an array");
  std::vector<ForeignClass> classes;
  for (std::size_t i = 0; i < types->size(); ++i) {
    const auto& e = (*types)[i];
    std::string where = "types[" + std::to_string(i) + "]";
    if (!e.is_object()) schema_error(where + " must be an object");
    ForeignClass c;
    if (e.contains("abstract")) {
      c.kind = ForeignClass::Kind::Abstract;
      c.name = e["abstract"].is_string() ? e["abstract"].get<std::string>() : "";
    } else if (e.contains("concrete")) {
      c.kind = ForeignClass::Kind::Concrete;
      c.name = e["concrete"].is_string() ? e["concrete"].get<std::string>() : "";
    } else if (e.contains("enum")) {
      c.kind = ForeignClass::Kind::Enum;
      c.name = e["enum"].is_string() ? e["enum"].get<std::string>() : "";
      c.constants = string_list(e.value("constants", nlohmann::json::array()), where + ".constants");
    } else {
      schema_error(where + " needs one of \"abstract\", \"concrete\", \"enum\"");
    }
    if (c.name.empty()) schema_error(where + ": type name must be a non-empty string");
    if (e.contains("implements")) c.supertypes = string_list(e["implements"], where + ".implements");
    if (e.contains("members")) {
      if (c.kind == ForeignClass::Kind::Enum) schema_error(where + ": enums have no members");
      const auto& ms = e["members"];
      if (!ms.is_array()) schema_error(where + ".members must be an array");
      for (std::size_t k = 0; k < ms.size(); ++k) {
        std::string mw = where + ".members[" + std::to_string(k) + "]";
        const auto& m = ms[k];
        if (!m.is_object() || !m.contains("name") || !m["name"].is_string() || !m.contains("type")) {
          schema_error(mw + " needs \"name\" and \"type\"");
        }
        c.members.push_back({m["name"].get<std::string>(), type_ref_from_json(m["type"], mw)});
      }
    }
    classes.push_back(std::move(c));
  }
  return ForeignSchema(std::move(classes));
}

ForeignSchema parse_schema(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(std::string("malformed schema document: ") + e.what());
  }
  return schema_from_json(doc);
}

// ---------------------------------------------------------------------------
// Foreign values

ForeignValue ForeignValue::object(std::string tag, std::vector<std::pair<std::string, ForeignValue>> fields) {
  ForeignValue v;
  v.kind = Kind::Obj;
  v.tag = std::move(tag);
  for (auto& [k, x] : fields) {
    v.field_names.push_back(std::move(k));
    v.field_values.push_back(std::move(x));
  }
  return v;
}

ForeignValue ForeignValue::enum_constant(std::string enum_name, std::string constant) {
  ForeignValue v;
  v.kind = Kind::Enum;
  v.tag = std::move(enum_name);
  v.constant = std::move(constant);
  return v;
}

ForeignValue ForeignValue::integer(std::int64_t x) {
  ForeignValue v;
  v.kind = Kind::Int;
  v.int_value = x;
  return v;
}

ForeignValue ForeignValue::boolean(bool x) {
  ForeignValue v;
  v.kind = Kind::Bool;
  v.bool_value = x;
  return v;
}

ForeignValue ForeignValue::string(std::string x) {
  ForeignValue v;
  v.kind = Kind::Str;
  v.str_value = std::move(x);
  return v;
}

ForeignValue ForeignValue::real(double x) {
  ForeignValue v;
  v.kind = Kind::Real;
  v.real_value = x;
  return v;
}

ForeignValue ForeignValue::array(std::vector<ForeignValue> elements) {
  ForeignValue v;
  v.kind = Kind::Array;
  v.elements = std::move(elements);
  return v;
}

ForeignValue ForeignValue::null() { return ForeignValue{}; }

const ForeignValue& ForeignValue::field(std::string_view name) const {
  static const ForeignValue kNull;
  for (std::size_t i = 0; i < field_names.size(); ++i) {
    if (field_names[i] == name) return field_values[i];
  }
  return kNull;
}

std::optional<std::string> ForeignValue::runtime_type() const {
  switch (kind) {
    case Kind::Obj:
    case Kind::Enum: return tag;
    case Kind::Int: return "Integer";
    case Kind::Bool: return "Boolean";
    case Kind::Str: return "String";
    case Kind::Real: return "Double";
    case Kind::Array:
    case Kind::Null: return std::nullopt;
  }
  return std::nullopt;
}

std::string to_string(const ForeignValue& v) { return foreign_value_to_json(v).dump(); }

ForeignValue foreign_value_from_json(const nlohmann::json& j, const std::string& pointer) {
  if (j.is_null()) return ForeignValue::null();
  if (!j.is_object()) value_error(pointer, "expected an object or null");
  auto only = [&](std::size_t n) {
    if (j.size() != n) value_error(pointer, "unexpected extra keys");
  };
  if (j.contains("type")) {
    only(j.contains("fields") ? 2 : 1);
    if (!j["type"].is_string()) value_error(pointer + "/type", "expected a string");
    std::vector<std::pair<std::string, ForeignValue>> fields;
    if (j.contains("fields")) {
      const auto& fs = j["fields"];
      if (!fs.is_object()) value_error(pointer + "/fields", "expected an object");
      for (const auto& [k, x] : fs.items()) {
        fields.emplace_back(k, foreign_value_from_json(x, pointer + "/fields/" + escape_pointer(k)));
      }
    }
    return ForeignValue::object(j["type"].get<std::string>(), std::move(fields));
  }
  only(1);
  if (j.contains("enum")) {
    if (!j["enum"].is_string()) value_error(pointer + "/enum", "expected \"Enum.CONSTANT\"");
    std::string s = j["enum"].get<std::string>();
    auto dot = s.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) {
      value_error(pointer + "/enum", "expected \"Enum.CONSTANT\"");
    }
    std::string enum_name = s.substr(0, dot);
    if (auto d = enum_name.rfind('.'); d != std::string::npos) enum_name = enum_name.substr(d + 1);
    return ForeignValue::enum_constant(enum_name, s.substr(dot + 1));
  }
  if (j.contains("int")) {
    if (!j["int"].is_number_integer()) value_error(pointer + "/int", "expected an integer");
    return ForeignValue::integer(j["int"].get<std::int64_t>());
  }
  if (j.contains("bool")) {
    if (!j["bool"].is_boolean()) value_error(pointer + "/bool", "expected a boolean");
    return ForeignValue::boolean(j["bool"].get<bool>());
  }
  if (j.contains("str")) {
    if (!j["str"].is_string()) value_error(pointer + "/str", "expected a string");
    return ForeignValue::string(j["str"].get<std::string>());
  }
  if (j.contains("real")) {
    if (!j["real"].is_number()) value_error(pointer + "/real", "expected a number");
    return ForeignValue::real(j["real"].get<double>());
  }
  if (j.contains("array")) {
    if (!j["array"].is_array()) value_error(pointer + "/array", "expected an array");
    std::vector<ForeignValue> elems;
    for (std::size_t i = 0; i < j["array"].size(); ++i) {
      elems.push_back(foreign_value_from_json(j["array"][i], pointer + "/array/" + std::to_string(i)));
    }
    return ForeignValue::array(std::move(elems));
  }
  value_error(pointer, "unknown value form");
}

ForeignValue parse_foreign_value(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ForeignValueError, std::string("malformed value document: ") + e.what());
  }
  return foreign_value_from_json(doc);
}

nlohmann::json foreign_value_to_json(const ForeignValue& v) {
  using K = ForeignValue::Kind;
  switch (v.kind) {
    case K::Null: return nullptr;
    case K::Int: return {{"int", v.int_value}};
    case K::Bool: return {{"bool", v.bool_value}};
    case K::Str: return {{"str", v.str_value}};
    case K::Real: return {{"real", v.real_value}};
    case K::Enum: return {{"enum", v.tag + "." + v.constant}};
    case K::Array: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& e : v.elements) arr.push_back(foreign_value_to_json(e));
      return {{"array", arr}};
    }
    case K::Obj: {
      nlohmann::json fields = nlohmann::json::object();
      for (std::size_t i = 0; i < v.field_names.size(); ++i) {
        fields[v.field_names[i]] = foreign_value_to_json(v.field_values[i]);
      }
      return {{"type", v.tag}, {"fields", fields}};
    }
  }
  return nullptr;
}

namespace {

void validate_at(const ForeignSchema& schema, const ForeignValue& v, const ForeignTypeRef* expected,
                 const std::string& path) {
  using K = ForeignValue::Kind;
  // Every member type is a reference type, so null is always admissible.
  if (v.kind == K::Null) return;
  if (v.kind == K::Array) {
    if (expected && expected->kind == ForeignTypeRef::Kind::Named && expected->name != kObject) {
      throw Error(ErrorCode::ForeignValueError, path + ": array where " + to_string(*expected) + " is expected");
    }
    const ForeignTypeRef* elem = expected && expected->kind != ForeignTypeRef::Kind::Named ? expected->element.get()
                                                                                           : nullptr;
    for (std::size_t i = 0; i < v.elements.size(); ++i) {
      validate_at(schema, v.elements[i], elem, path + "[" + std::to_string(i) + "]");
    }
    return;
  }
  std::string rt = *v.runtime_type();
  const ForeignClass* cls = schema.find(rt);
  if (!cls) throw Error(ErrorCode::ForeignValueError, path + ": unknown type " + rt);
  if (v.kind == K::Obj && cls->kind != ForeignClass::Kind::Concrete) {
    throw Error(ErrorCode::ForeignValueError, path + ": " + rt + " is not a concrete class");
  }
  if (v.kind == K::Enum) {
    if (cls->kind != ForeignClass::Kind::Enum) {
      throw Error(ErrorCode::ForeignValueError, path + ": " + rt + " is not an enum");
    }
    if (std::find(cls->constants.begin(), cls->constants.end(), v.constant) == cls->constants.end()) {
      throw Error(ErrorCode::ForeignValueError, path + ": enum " + rt + " has no constant " + v.constant);
    }
  }
  if (expected) {
    if (expected->kind != ForeignTypeRef::Kind::Named) {
      throw Error(ErrorCode::ForeignValueError, path + ": " + rt + " where " + to_string(*expected) + " is expected");
    }
    if (!schema.is_subtype(rt, expected->name)) {
      throw Error(ErrorCode::ForeignValueError, path + ": " + rt + " is not a " + expected->name);
    }
  }
  if (v.kind == K::Obj) {
    for (std::size_t i = 0; i < v.field_names.size(); ++i) {
      const Member* m = schema.find_member(rt, v.field_names[i]);
      if (!m) throw Error(ErrorCode::ForeignValueError, path + ": " + rt + " has no member " + v.field_names[i]);
      validate_at(schema, v.field_values[i], &m->type, path + "." + v.field_names[i]);
    }
  }
}

}  // namespace

void validate_value(const ForeignSchema& schema, const ForeignValue& v) { validate_at(schema, v, nullptr, "$"); }

}  // namespace csbb::tympanic
