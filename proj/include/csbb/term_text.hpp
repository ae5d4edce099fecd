#pragma once

#include <string_view>

#include "csbb/signature.hpp"
#include "csbb/term.hpp"

namespace csbb {

/// Reads the constructor-call form produced by `to_string(Term)` back into a
/// term. Type names are not part of that form, so reading is directed by the
/// signature and the expected type. Throws TermSyntax.
Term read_term_text(std::string_view text, const Signature& sig, const ArgType& expected);

/// Accepts either the wire form (text starting with `{`) or the
/// constructor-call form; the result is type-checked against `expected`.
Term read_any_term(std::string_view text, const Signature& sig, const ArgType& expected);

}  // namespace csbb
