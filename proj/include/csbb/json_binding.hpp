#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "csbb/registry.hpp"
#include "csbb/signature.hpp"
#include "csbb/term.hpp"

namespace csbb::json {

/// data JSON = boolean(bool b) | number(real n) | string(str s)
///           | array(list[JSON] elts) | null() | object(list[Prop] props);
/// data Prop = prop(Id name, JSON val);
/// data Id = id(str name);
const std::shared_ptr<const Signature>& signature();

/// Standard JSON plus unquoted identifier keys (`{name:"Rodin"}`). Every
/// number becomes a `real`; properties keep source order. Throws ParserError
/// with a line/column.
Term parse_json(std::string_view text);

/// `parse("{" + text + "}").props[0]`
Term parse_prop(std::string_view text);

/// `{_hole:i}`
std::string json_hole(std::size_t index);
/// `_hole:i`
std::string prop_hole(std::size_t index);

/// Canonical rendering of a JSON or Prop term: quoted keys, no whitespace,
/// reals with a fractional part. Throws IllTypedInput.
std::string print_json(const Term& t);

/// Adds JSON and Prop (parsers and hole encoders) to `builder`.
void register_binding(ParserRegistry::Builder& builder);

// Term helpers for the JSON signature.
Term boolean(bool b);
Term number(double n);
Term string(std::string s);
Term array(std::vector<Term> elts);
Term null();
Term object(std::vector<Term> props);
Term prop(std::string name, Term value);
Term id(std::string name);

}  // namespace csbb::json
