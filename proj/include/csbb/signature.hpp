#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "csbb/term.hpp"

namespace csbb {

struct ArgSpec {
  std::string name;
  ArgType type;
};

struct ConstructorDecl {
  std::string name;
  std::string type;
  std::vector<ArgSpec> args;
};

/// An abstract grammar: type names plus constructors over them. Validated on
/// construction and immutable afterwards.
class Signature {
 public:
  Signature() = default;
  /// Throws InvalidSignature when an invariant is violated.
  Signature(std::vector<std::string> types, std::vector<ConstructorDecl> constructors);

  const std::vector<std::string>& types() const noexcept { return types_; }
  const std::vector<ConstructorDecl>& constructors() const noexcept { return constructors_; }

  bool has_type(std::string_view type) const;
  const ConstructorDecl* find(std::string_view type, std::string_view name, std::size_t arity) const;
  std::vector<const ConstructorDecl*> constructors_of(std::string_view type) const;

  /// Union of two signatures; throws InvalidSignature on conflicting declarations.
  Signature merged_with(const Signature& other) const;

 private:
  std::vector<std::string> types_;
  std::vector<ConstructorDecl> constructors_;
};

/// Parses `data T = c(A a, ...) | ...;` declarations, optionally preceded by
/// `module a::b`. Argument types: ADT names, `int`, `real`, `bool`, `str`,
/// `list[T]`, `Maybe[T]`. `//` starts a line comment. Throws SignatureSyntax.
Signature parse_signature(std::string_view text);

/// `add(Expr lhs, Expr rhs)`
std::string render_constructor(const ConstructorDecl& decl);

/// Module text with one `data` declaration per type in declaration order.
std::string print_signature(const Signature& sig, std::string_view module_name = {});

struct TypeError {
  std::vector<std::size_t> path;
  std::string message;
};

std::string format_path(const std::vector<std::size_t>& path);

/// All type errors of `t` at `expected`; empty iff well-typed.
std::vector<TypeError> check_term(const Signature& sig, const Term& t, const ArgType& expected);

}  // namespace csbb
