#include "csbb/concretely.hpp"

#include <cctype>
#include <map>

#include "csbb/error.hpp"

namespace csbb {

std::vector<Hole> ConcretePattern::holes() const {
  std::vector<Hole> out;
  for (const auto& part : parts) {
    if (const auto* h = std::get_if<Hole>(&part)) out.push_back(*h);
  }
  return out;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

Hole parse_hole_body(std::string_view body, std::size_t index, SourcePos pos) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  };
  auto ident = [&] {
    std::size_t start = i;
    if (i < body.size() && ident_start(body[i])) {
      while (i < body.size() && ident_char(body[i])) ++i;
    }
    return std::string(body.substr(start, i - start));
  };
  Hole h;
  h.index = index;
  skip();
  h.type = ident();
  if (h.type.empty()) throw Error(ErrorCode::EmptyHoleType, "hole without a type", pos);
  std::size_t after_type = i;
  skip();
  if (i < body.size() && body[i] == '*') {
    h.star = true;
    ++i;
  }
  skip();
  if (i == after_type) throw Error(ErrorCode::MalformedHole, "expected whitespace before hole name", pos);
  h.name = ident();
  if (h.name.empty()) throw Error(ErrorCode::MalformedHole, "hole without a name", pos);
  skip();
  if (i != body.size()) throw Error(ErrorCode::MalformedHole, "unexpected text in hole", pos);
  return h;
}

}  // namespace

ConcretePattern split_fragment(std::string nonterminal, std::string_view text) {
  ConcretePattern cp;
  cp.nonterminal = std::move(nonterminal);
  std::string chunk;
  std::map<std::string, std::pair<std::string, bool>> seen;
  std::size_t index = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\' && i + 1 < text.size() && text[i + 1] == '<') {
      chunk += '<';
      i += 2;
      continue;
    }
    if (c != '<') {
      chunk += c;
      ++i;
      continue;
    }
    SourcePos pos = position_of(text, i);
    auto close = text.find('>', i + 1);
    if (close == std::string_view::npos) throw Error(ErrorCode::UnterminatedHole, "missing '>'", pos);
    Hole h = parse_hole_body(text.substr(i + 1, close - i - 1), index, pos);
    if (h.name != "_") {
      auto [it, fresh] = seen.emplace(h.name, std::make_pair(h.type, h.star));
      if (!fresh && (it->second.first != h.type || it->second.second != h.star)) {
        throw Error(ErrorCode::HoleTypeConflict, "variable " + h.name + " used with different types", pos);
      }
    }
    if (!chunk.empty()) cp.parts.emplace_back(TextChunk{std::move(chunk)});
    chunk.clear();
    cp.parts.emplace_back(std::move(h));
    ++index;
    i = close + 1;
  }
  if (!chunk.empty()) cp.parts.emplace_back(TextChunk{std::move(chunk)});
  return cp;
}

LoweredFragment lower(const ConcretePattern& cp, const ParserRegistry& reg) {
  LoweredFragment out;
  for (const auto& part : cp.parts) {
    if (const auto* chunk = std::get_if<TextChunk>(&part)) {
      out.leaves.push_back(chunk->text);
      continue;
    }
    const Hole& h = std::get<Hole>(part);
    if (!reg.has_hole_encoder(h.type)) {
      throw Error::at_hole(ErrorCode::NoHoleEncoder, h.index, "no hole encoder for " + h.type);
    }
    std::string encoded = reg.encode_hole(h.type, h.index);
    Term image = [&] {
      try {
        return reg.parse(h.type, encoded);
      } catch (const Error& e) {
        throw Error::at_hole(ErrorCode::EncoderImageUnparseable, h.index,
                             "encoding \"" + encoded + "\" of " + h.type + " does not parse: " + e.what());
      }
    }();
    for (const auto& prev : out.holes) {
      if (term_equals(prev.image, image)) {
        throw Error::at_hole(ErrorCode::NonInjectiveEncoder, h.index,
                             "same image as hole " + std::to_string(prev.hole.index));
      }
    }
    out.leaves.push_back(encoded);
    out.holes.push_back({h, std::move(encoded), std::move(image)});
  }
  for (const auto& leaf : out.leaves) out.flattened += leaf;
  return out;
}

namespace {

class Lifter {
 public:
  Lifter(const HoleTable& holes, CaptureMode mode) : holes_(holes), mode_(mode), counts_(holes.size(), 0) {}

  Pattern run(const Term& t) {
    Pattern p = lift(t, false);
    for (std::size_t i = 0; i < holes_.size(); ++i) {
      std::size_t index = holes_[i].hole.index;
      if (counts_[i] == 0) {
        throw Error::at_hole(ErrorCode::HoleNotFound, index,
                             "image of \"" + holes_[i].encoded + "\" does not occur in the parse");
      }
      if (counts_[i] > 1 && mode_ == CaptureMode::Strict) {
        throw Error::at_hole(ErrorCode::HoleCaptured, index,
                             "image of \"" + holes_[i].encoded + "\" occurs " + std::to_string(counts_[i]) +
                                 " times; the fragment contains text that collides with the hole encoding");
      }
    }
    return p;
  }

 private:
  Pattern lift(const Term& t, bool list_element) {
    for (std::size_t i = 0; i < holes_.size(); ++i) {
      if (!term_equals(t, holes_[i].image)) continue;
      const Hole& h = holes_[i].hole;
      ++counts_[i];
      if (h.star) {
        if (!list_element) {
          throw Error::at_hole(ErrorCode::StarHoleNotInList, h.index,
                               "image of <" + h.type + "* " + h.name + "> is not a list element");
        }
        return Pattern::seq_var(h.name, ArgType::adt(h.type));
      }
      return Pattern::var(h.name, ArgType::adt(h.type));
    }
    if (t.is_prim() || t.children().empty()) return Pattern::lit(t);

    std::vector<Pattern> kids;
    kids.reserve(t.children().size());
    bool all_literal = true;
    for (const auto& c : t.children()) {
      kids.push_back(lift(c, t.is_list()));
      all_literal = all_literal && kids.back().kind() == Pattern::Kind::Lit;
    }
    if (all_literal) return Pattern::lit(t);
    if (t.is_list()) return Pattern::list(std::move(kids), t.element_type());
    return Pattern::con(t.name(), t.type(), std::move(kids));
  }

  const HoleTable& holes_;
  CaptureMode mode_;
  std::vector<std::size_t> counts_;
};

}  // namespace

Pattern lift(const Term& t, const HoleTable& holes, CaptureMode mode) { return Lifter(holes, mode).run(t); }

Pattern to_pattern(std::string_view nonterminal, std::string_view text, const ParserRegistry& reg, CaptureMode mode) {
  if (!reg.serves(nonterminal)) throw Error(ErrorCode::NoParser, "no parser for " + std::string(nonterminal));
  ConcretePattern cp = split_fragment(std::string(nonterminal), text);
  LoweredFragment lowered = lower(cp, reg);
  Term parsed = reg.parse(nonterminal, lowered.flattened);
  Pattern p = lift(parsed, lowered.holes, mode);
  auto errors = check_pattern(reg.signature(nonterminal), p, ArgType::adt(std::string(nonterminal)));
  if (!errors.empty()) {
    throw Error(ErrorCode::TypeMismatch, "lifted pattern is ill-typed at " + format_path(errors[0].path) + ": " +
                                             errors[0].message);
  }
  return p;
}

Term parse_term(std::string_view nonterminal, std::string_view text, const ParserRegistry& reg) {
  ConcretePattern cp = split_fragment(std::string(nonterminal), text);
  std::string plain;
  for (const auto& part : cp.parts) {
    if (const auto* h = std::get_if<Hole>(&part)) {
      throw Error::at_hole(ErrorCode::HolesNotAllowed, h->index, "text to parse contains hole <" + h->type + " " +
                                                                    h->name + ">");
    }
    plain += std::get<TextChunk>(part).text;
  }
  return reg.parse(nonterminal, plain);
}

}  // namespace csbb
