#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "csbb/signature.hpp"
#include "csbb/term.hpp"

// ExprLang: a tiny statement/expression language whose parser only accepts
// whole programs. Fragments of other categories are parsed by embedding them
// in a dummy function and projecting their image back out.
//
//   program := decl*
//   decl    := "void" ident "(" ")" "{" stm* "}"
//   stm     := "while" "(" expr ")" "{" stm* "}" | "{" stm* "}" | expr ";"
//   expr    := term ("+" term)*
//   term    := int | ident | "(" expr ")"
namespace csbb::exprlang {

inline constexpr std::string_view kSignatureText = R"(module exprlang

data Program = program(list[Decl] decls);
data Decl = function(str name, Stm body);
data Stm = exprStm(Expr expr) | whileStm(Expr cond, list[Stm] body) | block(list[Stm] stmts);
data Expr = intLit(int val) | varRef(str name) | add(Expr lhs, Expr rhs);
)";

const std::shared_ptr<const Signature>& signature();

/// The only real entry point. Throws ParserError with a line/column.
Term parse_program(std::string_view text);

/// `void dummy() { <text> }`, projected to the single statement.
Term parse_stm(std::string_view text);

/// `void dummy() { <text>; }`, projected to the expression.
Term parse_expr(std::string_view text);

/// Dispatches on "Program", "Stm" or "Expr". Throws NoParser otherwise.
Term parse(std::string_view nonterminal, std::string_view text);

}  // namespace csbb::exprlang
