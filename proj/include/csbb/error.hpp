#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csbb {

enum class ErrorCode {
  // term-core
  InvalidSignature,
  SignatureSyntax,
  WireSyntax,
  WireStructure,
  TermSyntax,
  // pattern-engine
  PatternTypeMismatch,
  UnboundVariable,
  TypeMismatch,
  WildcardInInstantiate,
  IllTypedRule,
  // concretely
  UnterminatedHole,
  EmptyHoleType,
  MalformedHole,
  HoleTypeConflict,
  NoHoleEncoder,
  NoParser,
  EncoderImageUnparseable,
  NonInjectiveEncoder,
  HoleNotFound,
  HoleCaptured,
  StarHoleNotInList,
  HolesNotAllowed,
  ParserError,
  IllTypedParserOutput,
  ChildSpawnError,
  ProtocolError,
  ConfigError,
  // bindings
  WrappedParseNotObject,
  IllTypedInput,
  // tympanic
  TympanicSyntax,
  DuplicateTypeMapping,
  SchemaError,
  ForeignValueError,
  UnknownForeignType,
  UnmappedForeignType,
  UnknownMember,
  ArityMismatch,
  UnsupportedInlineValue,
  AmbiguousAdt,
  NoApplicableRule,
  NullNotOptional,
  CastFailure,
  // check_spec diagnostics only
  UnreachableRule,
  UncoveredAbstractType,
};

std::string_view to_string(ErrorCode code);

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// The single exception type thrown by the library. `code` identifies the
/// failure; `hole` and `pos` are filled in where the failure has one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, SourcePos pos);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourcePos>& pos() const noexcept { return pos_; }
  const std::optional<std::size_t>& hole() const noexcept { return hole_; }
  /// The message without the code and position prefix.
  const std::string& detail() const noexcept { return detail_; }

  static Error at_hole(ErrorCode code, std::size_t index, const std::string& message);

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<SourcePos> pos_;
  std::optional<std::size_t> hole_;
};

/// Line/column of byte `offset` in `text` (both 1-based).
SourcePos position_of(std::string_view text, std::size_t offset);

}  // namespace csbb
