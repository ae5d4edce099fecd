#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csbb/signature.hpp"
#include "csbb/term.hpp"

namespace csbb {

/// A term-shaped structure extended with typed variables, sequence
/// variables and wildcards. Sequence variables and sequence wildcards are
/// only meaningful as direct elements of a list pattern.
class Pattern {
 public:
  enum class Kind : std::uint8_t { Con, Lit, Var, SeqVar, Wild, SeqWild, List };

  static Pattern con(std::string name, std::string type, std::vector<Pattern> args);
  static Pattern lit(Term term);
  static Pattern var(std::string name, ArgType type);
  static Pattern seq_var(std::string name, ArgType element_type);
  static Pattern wild(ArgType type);
  static Pattern seq_wild(ArgType element_type);
  static Pattern list(std::vector<Pattern> elements, ArgType element_type);

  Kind kind() const noexcept;
  /// Constructor name (Con) or variable name (Var, SeqVar).
  const std::string& name() const noexcept;
  /// Owning type (Con).
  const std::string& type() const noexcept;
  /// Declared type (Var, Wild), element type (SeqVar, SeqWild, List).
  const ArgType& arg_type() const;
  const Term& term() const;
  const std::vector<Pattern>& children() const noexcept;

  bool is_sequence() const noexcept { return kind() == Kind::SeqVar || kind() == Kind::SeqWild; }

 private:
  struct Rep;
  explicit Pattern(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

bool pattern_equals(const Pattern& a, const Pattern& b);
inline bool operator==(const Pattern& a, const Pattern& b) { return pattern_equals(a, b); }

/// `object([*_, prop(id("name"), _), *_])`, variables as `<JSON x>` / `<Prop* x>`.
std::string to_string(const Pattern& p);

/// The type of terms the pattern can match; absent for sequence nodes and
/// literals whose type is not recoverable.
std::optional<ArgType> pattern_type(const Pattern& p);

/// Mirrors check_term, with variables and wildcards typed at their declared
/// type. Also reports sequence nodes outside a list.
std::vector<TypeError> check_pattern(const Signature& sig, const Pattern& p, const ArgType& expected);

using Binding = std::variant<Term, std::vector<Term>>;
/// Variable name to bound term (plain variables) or term sequence
/// (sequence variables). `_` is never recorded.
using Env = std::map<std::string, Binding>;

bool binding_equals(const Binding& a, const Binding& b);
bool env_equals(const Env& a, const Env& b);
std::string to_string(const Binding& b);

/// Calls `yield` for every env under which `p` instantiates to `t`, in a
/// fixed order: left to right, sequence variables bound shortest first.
/// Stops early when `yield` returns false. Repeated variables must bind
/// structurally equal values. Throws PatternTypeMismatch when the root types
/// of `p` and `t` disagree.
void match_each(const Pattern& p, const Term& t, const std::function<bool(const Env&)>& yield);

std::vector<Env> match(const Pattern& p, const Term& t);
std::optional<Env> match_first(const Pattern& p, const Term& t);

/// Splices bindings into `p`. Throws UnboundVariable, TypeMismatch or
/// WildcardInInstantiate.
Term instantiate(const Pattern& p, const Env& env);

/// Every variable name in `p` (plain and sequence), in left-to-right order of
/// first occurrence, with its kind.
std::vector<std::pair<std::string, bool>> pattern_variables(const Pattern& p);

}  // namespace csbb
