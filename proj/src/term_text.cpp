#include "csbb/term_text.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "csbb/error.hpp"
#include "csbb/wire.hpp"

namespace csbb {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class TextReader {
 public:
  TextReader(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Term read_root(const ArgType& expected) {
    Term t = read(expected);
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::TermSyntax, msg, position_of(text_, pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view number_token() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+')) {
      ++pos_;
    }
    if (start == pos_) fail("expected number");
    return text_.substr(start, pos_ - start);
  }

  std::string string_literal() {
    expect('"');
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'u': {
          if (pos_ + 4 > text_.size()) fail("short \\u escape");
          unsigned cp = 0;
          auto r = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, cp, 16);
          if (r.ptr != text_.data() + pos_ + 4) fail("bad \\u escape");
          pos_ += 4;
          append_utf8(out, cp);
          break;
        }
        default: fail("unknown escape");
      }
    }
  }

  Term read(const ArgType& expected) {
    switch (expected.kind()) {
      case ArgType::Kind::Prim: return read_prim(expected.prim_kind());
      case ArgType::Kind::List: {
        expect('[');
        std::vector<Term> elems;
        if (!accept(']')) {
          do {
            elems.push_back(read(expected.element()));
          } while (accept(','));
          expect(']');
        }
        return Term::list(std::move(elems), expected.element());
      }
      case ArgType::Kind::Maybe: {
        std::string name = ident();
        expect('(');
        if (name == "nothing") {
          expect(')');
          return Term::nothing();
        }
        if (name != "just") fail("expected nothing() or just(...)");
        Term inner = read(expected.element());
        expect(')');
        return Term::just(std::move(inner));
      }
      case ArgType::Kind::Adt: {
        std::size_t start = pos_;
        std::string name = ident();
        const ConstructorDecl* decl = nullptr;
        for (const auto* c : sig_.constructors_of(expected.adt_name())) {
          if (c->name == name) decl = c;
        }
        if (!decl) {
          pos_ = start;
          fail("no constructor " + name + " in type " + expected.adt_name());
        }
        expect('(');
        std::vector<Term> args;
        for (std::size_t i = 0; i < decl->args.size(); ++i) {
          if (i) expect(',');
          args.push_back(read(decl->args[i].type));
        }
        expect(')');
        return Term::con(decl->name, decl->type, std::move(args));
      }
    }
    fail("unreachable");
  }

  Term read_prim(PrimKind kind) {
    skip();
    switch (kind) {
      case PrimKind::Str: return Term::str(string_literal());
      case PrimKind::Bool: {
        std::string w = ident();
        if (w == "true") return Term::boolean(true);
        if (w == "false") return Term::boolean(false);
        fail("expected true or false");
      }
      case PrimKind::Int: {
        auto tok = number_token();
        std::int64_t v = 0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) fail("bad integer");
        return Term::integer(v);
      }
      case PrimKind::Real: {
        auto tok = number_token();
        std::string s(tok);
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size()) fail("bad real");
        return Term::real(v);
      }
    }
    fail("unreachable");
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

Term read_term_text(std::string_view text, const Signature& sig, const ArgType& expected) {
  return TextReader(text, sig).read_root(expected);
}

Term read_any_term(std::string_view text, const Signature& sig, const ArgType& expected) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  Term t = (first != std::string_view::npos && text[first] == '{') ? decode_term(text)
                                                                    : read_term_text(text, sig, expected);
  auto errors = check_term(sig, t, expected);
  if (!errors.empty()) {
    throw Error(ErrorCode::TermSyntax, "term is not of type " + expected.to_string() + ": " +
                                           format_path(errors[0].path) + " " + errors[0].message);
  }
  return t;
}

}  // namespace csbb
