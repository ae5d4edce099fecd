#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "csbb/pattern.hpp"
#include "csbb/registry.hpp"
#include "csbb/term.hpp"

namespace csbb {

struct TextChunk {
  std::string text;
};

/// `<Type name>` (star = false) or `<Type* name>` (star = true). For star
/// holes `type` is the element type.
struct Hole {
  std::size_t index = 0;
  std::string name;
  std::string type;
  bool star = false;
};

using FragmentPart = std::variant<TextChunk, Hole>;

/// A concrete fragment split into literal text and typed holes.
struct ConcretePattern {
  std::string nonterminal;
  std::vector<FragmentPart> parts;

  std::vector<Hole> holes() const;
};

/// Splits `text` at `<Type name>` / `<Type* name>` holes. `\<` stands for a
/// literal `<`; `_` is the anonymous name. Throws UnterminatedHole,
/// EmptyHoleType, MalformedHole or HoleTypeConflict.
ConcretePattern split_fragment(std::string nonterminal, std::string_view text);

struct HoleEntry {
  Hole hole;
  std::string encoded;  // hole_type(index)
  Term image;           // parse_type(hole_type(index))
};

/// Indexed by hole index.
using HoleTable = std::vector<HoleEntry>;

struct LoweredFragment {
  std::vector<std::string> leaves;  // chunks with holes replaced by encodings
  std::string flattened;
  HoleTable holes;
};

/// Replaces every hole by its encoder output and parses each encoding to
/// its expected image. Throws NoHoleEncoder, EncoderImageUnparseable or
/// NonInjectiveEncoder.
LoweredFragment lower(const ConcretePattern& cp, const ParserRegistry& reg);

enum class CaptureMode {
  /// An image occurring more than once raises HoleCaptured.
  Strict,
  /// Every occurrence becomes the hole's variable (non-linear match).
  Lenient,
};

/// Replaces each subterm equal to a hole's image by that hole's variable.
/// Images of star holes must be direct list elements and become sequence
/// variables. Hole-free subtrees become literals. Throws HoleNotFound,
/// HoleCaptured or StarHoleNotInList.
Pattern lift(const Term& t, const HoleTable& holes, CaptureMode mode = CaptureMode::Strict);

/// split, lower, parse with the black box, lift.
Pattern to_pattern(std::string_view nonterminal, std::string_view text, const ParserRegistry& reg,
                   CaptureMode mode = CaptureMode::Strict);

/// Parses hole-free concrete text. Throws HolesNotAllowed or ParserError.
Term parse_term(std::string_view nonterminal, std::string_view text, const ParserRegistry& reg);

}  // namespace csbb
