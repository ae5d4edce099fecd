#include "csbb/error.hpp"

namespace csbb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::SignatureSyntax: return "SignatureSyntax";
    case ErrorCode::WireSyntax: return "WireSyntax";
    case ErrorCode::WireStructure: return "WireStructure";
    case ErrorCode::TermSyntax: return "TermSyntax";
    case ErrorCode::PatternTypeMismatch: return "PatternTypeMismatch";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::WildcardInInstantiate: return "WildcardInInstantiate";
    case ErrorCode::IllTypedRule: return "IllTypedRule";
    case ErrorCode::UnterminatedHole: return "UnterminatedHole";
    case ErrorCode::EmptyHoleType: return "EmptyHoleType";
    case ErrorCode::MalformedHole: return "MalformedHole";
    case ErrorCode::HoleTypeConflict: return "HoleTypeConflict";
    case ErrorCode::NoHoleEncoder: return "NoHoleEncoder";
    case ErrorCode::NoParser: return "NoParser";
    case ErrorCode::EncoderImageUnparseable: return "EncoderImageUnparseable";
    case ErrorCode::NonInjectiveEncoder: return "NonInjectiveEncoder";
    case ErrorCode::HoleNotFound: return "HoleNotFound";
    case ErrorCode::HoleCaptured: return "HoleCaptured";
    case ErrorCode::StarHoleNotInList: return "StarHoleNotInList";
    case ErrorCode::HolesNotAllowed: return "HolesNotAllowed";
    case ErrorCode::ParserError: return "ParserError";
    case ErrorCode::IllTypedParserOutput: return "IllTypedParserOutput";
    case ErrorCode::ChildSpawnError: return "ChildSpawnError";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::WrappedParseNotObject: return "WrappedParseNotObject";
    case ErrorCode::IllTypedInput: return "IllTypedInput";
    case ErrorCode::TympanicSyntax: return "TympanicSyntax";
    case ErrorCode::DuplicateTypeMapping: return "DuplicateTypeMapping";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ForeignValueError: return "ForeignValueError";
    case ErrorCode::UnknownForeignType: return "UnknownForeignType";
    case ErrorCode::UnmappedForeignType: return "UnmappedForeignType";
    case ErrorCode::UnknownMember: return "UnknownMember";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnsupportedInlineValue: return "UnsupportedInlineValue";
    case ErrorCode::AmbiguousAdt: return "AmbiguousAdt";
    case ErrorCode::NoApplicableRule: return "NoApplicableRule";
    case ErrorCode::NullNotOptional: return "NullNotOptional";
    case ErrorCode::CastFailure: return "CastFailure";
    case ErrorCode::UnreachableRule: return "UnreachableRule";
    case ErrorCode::UncoveredAbstractType: return "UncoveredAbstractType";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

Error::Error(ErrorCode code, const std::string& message, SourcePos pos)
    : std::runtime_error(std::string(to_string(code)) + " at " + std::to_string(pos.line) + ":" +
                         std::to_string(pos.column) + ": " + message),
      code_(code),
      detail_(message),
      pos_(pos) {}

Error Error::at_hole(ErrorCode code, std::size_t index, const std::string& message) {
  Error e(code, "hole " + std::to_string(index) + ": " + message);
  e.detail_ = message;
  e.hole_ = index;
  return e;
}

SourcePos position_of(std::string_view text, std::size_t offset) {
  SourcePos pos;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

}  // namespace csbb
