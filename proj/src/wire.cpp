#include "csbb/wire.hpp"

#include <cmath>

#include "csbb/error.hpp"

namespace csbb {

namespace {

void write_string(std::string_view s, std::string& out) {
  try {
    out += nlohmann::json(std::string(s)).dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::WireStructure, std::string("string is not valid UTF-8: ") + e.what());
  }
}

void write_argtype(const ArgType& t, std::string& out) {
  switch (t.kind()) {
    case ArgType::Kind::Adt:
      out += "{\"adt\":";
      write_string(t.adt_name(), out);
      break;
    case ArgType::Kind::List:
      out += "{\"list\":";
      write_argtype(t.element(), out);
      break;
    case ArgType::Kind::Maybe:
      out += "{\"maybe\":";
      write_argtype(t.element(), out);
      break;
    case ArgType::Kind::Prim:
      out += "{\"prim\":\"";
      out += to_string(t.prim_kind());
      out += '"';
      break;
  }
  out += '}';
}

void write_term(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Con:
      out += "{\"con\":";
      write_string(t.name(), out);
      out += ",\"type\":";
      write_string(t.type(), out);
      out += ",\"args\":[";
      break;
    case Term::Kind::Int:
      out += "{\"int\":" + std::to_string(t.int_value()) + "}";
      return;
    case Term::Kind::Real:
      if (!std::isfinite(t.real_value())) {
        throw Error(ErrorCode::WireStructure, "non-finite real has no wire form");
      }
      out += "{\"real\":" + format_real(t.real_value()) + "}";
      return;
    case Term::Kind::Bool:
      out += t.bool_value() ? "{\"bool\":true}" : "{\"bool\":false}";
      return;
    case Term::Kind::Str:
      out += "{\"str\":";
      write_string(t.str_value(), out);
      out += '}';
      return;
    case Term::Kind::List:
      out += "{\"list\":[";
      break;
  }
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    if (i) out += ',';
    write_term(t.children()[i], out);
  }
  out += ']';
  if (t.is_list()) {
    out += ",\"elem\":";
    write_argtype(t.element_type(), out);
  }
  out += '}';
}

[[noreturn]] void structure_error(const std::string& pointer, const std::string& msg) {
  throw Error(ErrorCode::WireStructure, "at '" + (pointer.empty() ? std::string("/") : pointer) + "': " + msg);
}

const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& pointer) {
  auto it = j.find(key);
  if (it == j.end()) structure_error(pointer, std::string("missing key \"") + key + "\"");
  return *it;
}

void expect_keys(const nlohmann::json& j, std::size_t n, const std::string& pointer) {
  if (j.size() != n) structure_error(pointer, "unexpected number of keys");
}

nlohmann::json parse_json_text(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorCode::WireSyntax, e.what(), position_of(text, offset));
  }
}

}  // namespace

std::string encode_term(const Term& t) {
  std::string out;
  write_term(t, out);
  return out;
}

std::string encode_argtype(const ArgType& t) {
  std::string out;
  write_argtype(t, out);
  return out;
}

ArgType argtype_from_json(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_object() || j.size() != 1) structure_error(pointer, "argtype must be a one-key object");
  const auto it = j.begin();
  const std::string key = it.key();
  const nlohmann::json& value = it.value();
  std::string sub = pointer + "/" + key;
  if (key == "adt") {
    if (!value.is_string()) structure_error(sub, "expected string");
    return ArgType::adt(value.get<std::string>());
  }
  if (key == "list") return ArgType::list(argtype_from_json(value, sub));
  if (key == "maybe") {
    ArgType inner = argtype_from_json(value, sub);
    if (inner.is_maybe()) structure_error(sub, "maybe of maybe");
    return ArgType::maybe(std::move(inner));
  }
  if (key == "prim") {
    if (!value.is_string()) structure_error(sub, "expected string");
    auto s = value.get<std::string>();
    if (s == "int") return ArgType::prim(PrimKind::Int);
    if (s == "real") return ArgType::prim(PrimKind::Real);
    if (s == "bool") return ArgType::prim(PrimKind::Bool);
    if (s == "str") return ArgType::prim(PrimKind::Str);
    structure_error(sub, "unknown primitive " + s);
  }
  structure_error(pointer, "unknown argtype key \"" + key + "\"");
}

Term term_from_json(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_object()) structure_error(pointer, "term must be an object");
  auto children = [&](const nlohmann::json& arr, const std::string& sub) {
    if (!arr.is_array()) structure_error(sub, "expected array");
    std::vector<Term> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(term_from_json(arr[i], sub + "/" + std::to_string(i)));
    return out;
  };
  if (j.contains("con")) {
    expect_keys(j, 3, pointer);
    const auto& name = field(j, "con", pointer);
    const auto& type = field(j, "type", pointer);
    if (!name.is_string()) structure_error(pointer + "/con", "expected string");
    if (!type.is_string()) structure_error(pointer + "/type", "expected string");
    return Term::con(name.get<std::string>(), type.get<std::string>(),
                     children(field(j, "args", pointer), pointer + "/args"));
  }
  if (j.contains("list")) {
    expect_keys(j, 2, pointer);
    auto elems = children(j["list"], pointer + "/list");
    return Term::list(std::move(elems), argtype_from_json(field(j, "elem", pointer), pointer + "/elem"));
  }
  expect_keys(j, 1, pointer);
  const auto it = j.begin();
  const std::string key = it.key();
  const nlohmann::json& value = it.value();
  std::string sub = pointer + "/" + key;
  if (key == "int") {
    if (value.is_number_integer()) {
      if (value.is_number_unsigned() && value.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        structure_error(sub, "integer out of range");
      }
      return Term::integer(value.get<std::int64_t>());
    }
    structure_error(sub, "expected integer");
  }
  if (key == "real") {
    if (!value.is_number()) structure_error(sub, "expected number");
    return Term::real(value.get<double>());
  }
  if (key == "bool") {
    if (!value.is_boolean()) structure_error(sub, "expected boolean");
    return Term::boolean(value.get<bool>());
  }
  if (key == "str") {
    if (!value.is_string()) structure_error(sub, "expected string");
    return Term::str(value.get<std::string>());
  }
  structure_error(pointer, "unknown term key \"" + key + "\"");
}

Term decode_term(std::string_view text) { return term_from_json(parse_json_text(text)); }

ArgType decode_argtype(std::string_view text) { return argtype_from_json(parse_json_text(text)); }

}  // namespace csbb
