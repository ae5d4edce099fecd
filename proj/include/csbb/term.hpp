#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csbb {

enum class PrimKind : std::uint8_t { Int, Real, Bool, Str };

std::string_view to_string(PrimKind kind);

/// The type of a constructor argument: an ADT name, a list or maybe of
/// another ArgType, or a primitive. Immutable; copies share structure.
class ArgType {
 public:
  enum class Kind : std::uint8_t { Adt, List, Maybe, Prim };

  static ArgType adt(std::string name);
  static ArgType list(ArgType element);
  /// Throws InvalidSignature for maybe(maybe(_)).
  static ArgType maybe(ArgType element);
  static ArgType prim(PrimKind kind);

  Kind kind() const noexcept { return kind_; }
  bool is_adt() const noexcept { return kind_ == Kind::Adt; }
  bool is_list() const noexcept { return kind_ == Kind::List; }
  bool is_maybe() const noexcept { return kind_ == Kind::Maybe; }
  bool is_prim() const noexcept { return kind_ == Kind::Prim; }

  /// Valid for Adt.
  const std::string& adt_name() const noexcept { return name_; }
  /// Valid for Prim.
  PrimKind prim_kind() const noexcept { return prim_; }
  /// Valid for List and Maybe.
  const ArgType& element() const noexcept { return *element_; }

  /// Surface rendering: `JSON`, `list[JSON]`, `Maybe[Expr]`, `real`.
  std::string to_string() const;

  friend bool operator==(const ArgType& a, const ArgType& b);

 private:
  ArgType() = default;

  Kind kind_ = Kind::Prim;
  PrimKind prim_ = PrimKind::Int;
  std::string name_;
  std::shared_ptr<const ArgType> element_;
};

/// Name of the synthetic carrier type for maybe values.
inline constexpr std::string_view kMaybeType = "Maybe";

/// Generic immutable syntax tree: constructor application, primitive, or a
/// list carrying its element type. Copies are cheap and share subtrees.
class Term {
 public:
  enum class Kind : std::uint8_t { Con, Int, Real, Bool, Str, List };

  static Term con(std::string name, std::string type, std::vector<Term> args = {});
  static Term integer(std::int64_t value);
  static Term real(double value);
  static Term boolean(bool value);
  static Term str(std::string value);
  static Term list(std::vector<Term> elements, ArgType element_type);

  static Term nothing();
  static Term just(Term value);

  Kind kind() const noexcept;
  bool is_con() const noexcept { return kind() == Kind::Con; }
  bool is_list() const noexcept { return kind() == Kind::List; }
  bool is_prim() const noexcept { return !is_con() && !is_list(); }

  /// Constructor name (Con) or string payload (Str).
  const std::string& name() const noexcept;
  const std::string& str_value() const noexcept { return name(); }
  /// Owning type (Con).
  const std::string& type() const noexcept;
  /// Constructor arguments (Con) or elements (List).
  const std::vector<Term>& children() const noexcept;
  /// Element type (List).
  const ArgType& element_type() const;

  std::int64_t int_value() const noexcept;
  double real_value() const noexcept;
  bool bool_value() const noexcept;

  bool same_node(const Term& other) const noexcept { return rep_ == other.rep_; }

 private:
  struct Rep;
  explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

/// Structural identity. Reals compare by bit pattern, so the relation is an
/// equivalence (NaN equals itself, 0.0 differs from -0.0).
bool term_equals(const Term& a, const Term& b);

inline bool operator==(const Term& a, const Term& b) { return term_equals(a, b); }

/// The type a term carries on its own; absent for `nothing()` whose element
/// type is not recoverable.
std::optional<ArgType> type_of(const Term& t);

/// Shallow check that the root of `t` inhabits `type` (children of lists and
/// maybe carriers are checked one level deep).
bool term_has_type(const Term& t, const ArgType& type);

/// Shortest round-trip decimal rendering of `value`, always containing a
/// decimal point (`29.0`, `0.1`, `1.0e+21`). Non-finite values render as
/// `nan`, `inf`, `-inf`.
std::string format_real(double value);

/// Constructor-call rendering: `object([prop(id("name"), string("Rodin"))])`.
std::string to_string(const Term& t);

/// Quoted, escaped string literal as used by the pretty form.
std::string quote_string(std::string_view s);

}  // namespace csbb
