#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csbb/error.hpp"
#include "csbb/signature.hpp"
#include "csbb/term.hpp"

// Declarative mapping from a foreign, class-based AST to an algebraic
// signature, plus an interpreter that marshals foreign values into terms.
namespace csbb::tympanic {

// ---------------------------------------------------------------------------
// Mapping specifications

/// Guard literal: `null`, `true`, `false`, an integer or a dotted path such
/// as `Op.PLUS`.
struct JavaValue {
  enum class Kind : std::uint8_t { Null, True, False, Int, Path };
  Kind kind = Kind::Null;
  std::int64_t int_value = 0;
  std::vector<std::string> path;
};
std::string to_string(const JavaValue& v);
bool operator==(const JavaValue& a, const JavaValue& b);

struct FieldSpec {
  enum class Kind : std::uint8_t {
    Plain,      // getLhs
    Eq,         // getOp == Op.PLUS
    Neq,        // getElse != null
    Optional,   // getElse?
    Cast,       // (Integer)getValue
    CastArray,  // (Expr[])getBody
  };
  Kind kind = Kind::Plain;
  bool skip = false;  // `%`: evaluated as a guard, contributes no argument
  std::string member;
  std::string target;              // Cast, CastArray
  std::optional<JavaValue> value;  // Eq, Neq
  SourcePos pos;
};
std::string to_string(const FieldSpec& f);

/// Right-hand side of an inline argument: `true`, `false`, an integer or a
/// constructor application.
struct RascalValue {
  enum class Kind : std::uint8_t { True, False, Int, Con };
  Kind kind = Kind::Con;
  std::int64_t int_value = 0;
  std::string name;
  std::vector<RascalValue> args;
};
std::string to_string(const RascalValue& v);

/// `lhs` (positional) or `Op op = plus()` (inline).
struct TemplateArg {
  std::string name;
  std::optional<std::string> inline_type;
  RascalValue inline_value;
  SourcePos pos;
};

struct ConstructorTemplate {
  std::string name;
  std::vector<TemplateArg> args;
  SourcePos pos;
};

struct Rule {
  std::vector<FieldSpec> fields;
  ConstructorTemplate constructor;
  SourcePos pos;
};

struct ClassMapping {
  std::string foreign_class;
  std::vector<Rule> rules;
  SourcePos pos;
};

struct TypeMapping {
  std::string foreign_type;
  std::string adt;
  SourcePos pos;
};

struct TympanicSpec {
  std::string name;
  std::vector<std::vector<std::string>> imports;
  std::vector<std::string> export_path;
  std::vector<TypeMapping> types;
  std::vector<ClassMapping> constructors;

  /// `expr::Expr`
  std::string module_name() const;
};

/// Parses the mapping language:
///   mapping Id ("import" {Id "."}+)* "export" {Id "::"}+
///   "types" (Id "=>" Id)* "constructors" (Id Match+)*
///   Match = "-" {["%"] Field ","}* ":" Id "(" {Arg ","}* ")"
/// `#` starts a line comment. Throws TympanicSyntax (with a position) or
/// DuplicateTypeMapping.
TympanicSpec parse_tympanic(std::string_view text);

// ---------------------------------------------------------------------------
// Foreign schemas

/// `Expr`, `Expr[]` (array) or `Iterable<Expr>`.
struct ForeignTypeRef {
  enum class Kind : std::uint8_t { Named, Array, Iterable };
  Kind kind = Kind::Named;
  std::string name;
  std::shared_ptr<const ForeignTypeRef> element;

  static ForeignTypeRef named(std::string name);
  static ForeignTypeRef array(ForeignTypeRef element);
  static ForeignTypeRef iterable(ForeignTypeRef element);
};
std::string to_string(const ForeignTypeRef& t);

struct Member {
  std::string name;
  ForeignTypeRef type;
};

struct ForeignClass {
  enum class Kind : std::uint8_t { Abstract, Concrete, Enum, Primitive };
  Kind kind = Kind::Concrete;
  std::string name;
  std::vector<std::string> supertypes;
  std::vector<Member> members;
  std::vector<std::string> constants;  // Enum
};

/// The foreign parser's type hierarchy. `Object` (top) and the primitives
/// `Integer`, `Boolean`, `String`, `Double` are always present.
class ForeignSchema {
 public:
  ForeignSchema();
  /// Throws SchemaError on unknown supertypes or member types, cycles,
  /// duplicate names or duplicate enum constants.
  explicit ForeignSchema(std::vector<ForeignClass> classes);

  const std::vector<ForeignClass>& classes() const noexcept { return classes_; }
  const ForeignClass* find(std::string_view name) const;
  /// Reflexive and transitive; every type is a subtype of `Object`.
  bool is_subtype(std::string_view sub, std::string_view super) const;
  /// `name` and its supertypes grouped by distance (self at index 0).
  std::vector<std::vector<std::string>> ancestors_by_distance(std::string_view name) const;
  /// Declared on `cls` or inherited from a supertype (nearest first).
  const Member* find_member(std::string_view cls, std::string_view member) const;

 private:
  std::vector<ForeignClass> classes_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// {"types": [{"abstract": N, "implements": [...]},
///            {"concrete": N, "implements": [...], "members": [{"name": m, "type": T}]},
///            {"enum": N, "constants": [...]}]}
/// where T is a name, {"array": T} or {"iterable": T}. A bare array of type
/// entries is accepted too. Throws SchemaError.
ForeignSchema parse_schema(std::string_view text);
ForeignSchema schema_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Foreign values

struct ForeignValue {
  enum class Kind : std::uint8_t { Obj, Enum, Int, Bool, Str, Real, Array, Null };
  Kind kind = Kind::Null;
  std::string tag;       // Obj: class name; Enum: enum name
  std::string constant;  // Enum
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string str_value;
  double real_value = 0;
  std::vector<ForeignValue> elements;  // Array
  std::vector<std::string> field_names;
  std::vector<ForeignValue> field_values;

  static ForeignValue object(std::string tag, std::vector<std::pair<std::string, ForeignValue>> fields);
  static ForeignValue enum_constant(std::string enum_name, std::string constant);
  static ForeignValue integer(std::int64_t v);
  static ForeignValue boolean(bool v);
  static ForeignValue string(std::string v);
  static ForeignValue real(double v);
  static ForeignValue array(std::vector<ForeignValue> elements);
  static ForeignValue null();

  /// Member value of an object; a missing member reads as null.
  const ForeignValue& field(std::string_view name) const;
  /// Class name for objects and enums, the primitive type name for
  /// primitives, absent for arrays and null.
  std::optional<std::string> runtime_type() const;
};
std::string to_string(const ForeignValue& v);

/// {"type": tag, "fields": {...}}, {"enum": "Op.PLUS"}, {"int": n},
/// {"bool": b}, {"str": s}, {"real": x}, {"array": [...]}, null.
/// Throws ForeignValueError naming a JSON pointer.
ForeignValue parse_foreign_value(std::string_view text);
ForeignValue foreign_value_from_json(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::json foreign_value_to_json(const ForeignValue& v);

/// Checks that object tags are concrete classes, enum constants exist and
/// members hold values of their declared types (null is allowed wherever a
/// reference is expected). Throws ForeignValueError.
void validate_value(const ForeignSchema& schema, const ForeignValue& v);

// ---------------------------------------------------------------------------
// Compilation: signature inference

struct CompiledField {
  FieldSpec spec;
  Member member;
  /// Target type of the argument built from this field; absent for skipped
  /// fields and fields consumed by inline arguments.
  std::optional<ArgType> type;
};

struct CompiledArg {
  /// Index into CompiledRule::fields, or absent for inline constants.
  std::optional<std::size_t> field;
  std::optional<Term> constant;
};

struct CompiledRule {
  std::string foreign_class;
  std::size_t index = 0;  // position within its class mapping
  std::vector<CompiledField> fields;
  ConstructorDecl constructor;
  std::vector<CompiledArg> args;
  SourcePos pos;
};

struct CompiledClass {
  std::string foreign_class;
  std::string adt;
  std::vector<CompiledRule> rules;
};

struct CompiledSpec {
  Signature signature;
  std::string module_name;
  /// Fig.-style module text: one `data` declaration per type, constructors
  /// from one class mapping on one line.
  std::string module_text;
  std::vector<CompiledClass> classes;
};

/// Infers the signature and module text. Throws UnknownForeignType,
/// UnknownMember, UnmappedForeignType, ArityMismatch, AmbiguousAdt,
/// UnsupportedInlineValue or InvalidSignature.
CompiledSpec infer_signature(const TympanicSpec& spec, const ForeignSchema& schema);

struct Diagnostic {
  ErrorCode code;
  std::string message;
  SourcePos pos;
};
std::string to_string(const Diagnostic& d);

/// Static validation: everything infer_signature rejects plus unreachable
/// rules, unknown enum constants in guards and abstract mapped types that
/// no constructor mapping covers.
std::vector<Diagnostic> check_spec(const TympanicSpec& spec, const ForeignSchema& schema);

// ---------------------------------------------------------------------------
// Marshalling

class Marshaller {
 public:
  /// Compiles `spec`; throws as infer_signature.
  Marshaller(TympanicSpec spec, ForeignSchema schema);

  const CompiledSpec& compiled() const noexcept { return compiled_; }
  const ForeignSchema& schema() const noexcept { return schema_; }

  /// The mapping consulted for objects of class `tag`: the nearest mapped
  /// ancestor-or-self. Null when none applies.
  const CompiledClass* dispatch(std::string_view tag) const;
  /// Whether every guard of `rule` holds for the object `v`.
  bool guards_hold(const CompiledRule& rule, const ForeignValue& v) const;
  /// Index of the first applicable rule of the dispatched class.
  std::optional<std::size_t> select_rule(const ForeignValue& v) const;

  /// Marshals an object at the ADT of its class. Throws ForeignValueError,
  /// NoApplicableRule, NullNotOptional or CastFailure.
  Term marshal(const ForeignValue& v) const;

 private:
  Term marshal_at(const ForeignValue& v, const ArgType& type, const std::string& path) const;
  Term marshal_object(const ForeignValue& v, const std::string& path) const;

  ForeignSchema schema_;
  CompiledSpec compiled_;
};

/// Convenience: compile and marshal one value.
Term marshal(const TympanicSpec& spec, const ForeignSchema& schema, const ForeignValue& v);

/// `Op.PLUS`, `expressions.Op.PLUS` and `PLUS` all denote constant PLUS of
/// enum Op: the last segment names the constant and the segment before it,
/// when present, names the enum.
bool enum_literal_matches(const JavaValue& literal, std::string_view enum_name, std::string_view constant);

/// Whether a value satisfies one field guard (Plain and Optional always hold).
bool guard_holds(const ForeignSchema& schema, const FieldSpec& field, const ForeignValue& member_value);

}  // namespace csbb::tympanic
