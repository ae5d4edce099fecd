#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "csbb/term.hpp"

namespace csbb {

/// Canonical single-line wire text for a term:
///   {"con":"number","type":"JSON","args":[{"real":29.0}]}
/// Keys appear in grammar order, no insignificant whitespace, reals always
/// carry a fractional part. Throws WireStructure for non-finite reals.
std::string encode_term(const Term& t);
std::string encode_argtype(const ArgType& t);

/// Inverse of encode_term. Lexical errors report a line/column; structural
/// errors name the offending JSON pointer.
Term decode_term(std::string_view text);
ArgType decode_argtype(std::string_view text);

/// Decoding from an already parsed JSON value (used by the subprocess
/// protocol where the term is embedded in a response object).
Term term_from_json(const nlohmann::json& j, const std::string& pointer = "");
ArgType argtype_from_json(const nlohmann::json& j, const std::string& pointer = "");

}  // namespace csbb
