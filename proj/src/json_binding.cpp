#include "csbb/json_binding.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "csbb/error.hpp"

namespace csbb::json {

namespace {

constexpr std::string_view kSignatureText = R"(
data JSON
  = boolean(bool b) | number(real n) | string(str s) | array(list[JSON] elts)
  | null() | object(list[Prop] props);
data Prop = prop(Id name, JSON val);
data Id = id(str name);
)";

const ArgType& json_type() {
  static const ArgType t = ArgType::adt("JSON");
  return t;
}

const ArgType& prop_type() {
  static const ArgType t = ArgType::adt("Prop");
  return t;
}

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

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term parse_document() {
    Term v = value();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParserError, msg, position_of(text_, pos_));
  }

  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }
  static bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

  Term value() {
    skip();
    char c = peek();
    if (c == '{') return object_value();
    if (c == '[') return array_value();
    if (c == '"') return string(string_literal());
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return number(number_literal());
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      auto word = text_.substr(start, pos_ - start);
      if (word == "true") return boolean(true);
      if (word == "false") return boolean(false);
      if (word == "null") return null();
      pos_ = start;
      fail("unexpected identifier '" + std::string(word) + "'");
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  Term object_value() {
    expect('{');
    std::vector<Term> props;
    skip();
    if (peek() == '}') {
      ++pos_;
      return object(std::move(props));
    }
    while (true) {
      skip();
      std::string key;
      if (peek() == '"') {
        key = string_literal();
      } else if (ident_start(peek())) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        key = std::string(text_.substr(start, pos_ - start));
      } else {
        fail("expected property name");
      }
      expect(':');
      props.push_back(prop(std::move(key), value()));
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        return object(std::move(props));
      }
      fail("expected ',' or '}'");
    }
  }

  Term array_value() {
    expect('[');
    std::vector<Term> elts;
    skip();
    if (peek() == ']') {
      ++pos_;
      return array(std::move(elts));
    }
    while (true) {
      elts.push_back(value());
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        return array(std::move(elts));
      }
      fail("expected ',' or ']'");
    }
  }

  unsigned hex4() {
    if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
    unsigned v = 0;
    auto r = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, v, 16);
    if (r.ptr != text_.data() + pos_ + 4) fail("invalid \\u escape");
    pos_ += 4;
    return v;
  }

  std::string string_literal() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
      if (c != '\\') {
        out += c;
        ++pos_;
        continue;
      }
      ++pos_;
      if (pos_ >= text_.size()) fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          std::uint32_t cp = hex4();
          if (cp >= 0xD800 && cp < 0xDC00) {
            if (text_.substr(pos_, 2) != "\\u") fail("unpaired surrogate");
            pos_ += 2;
            std::uint32_t lo = hex4();
            if (lo < 0xDC00 || lo >= 0xE000) fail("invalid low surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
          } else if (cp >= 0xDC00 && cp < 0xE000) {
            fail("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default:
          --pos_;
          fail("invalid escape");
      }
    }
  }

  double number_literal() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    if (peek() == '-') ++pos_;
    if (peek() == '0') {
      ++pos_;
    } else if (digits() == 0) {
      fail("expected digit");
    }
    if (peek() == '.') {
      ++pos_;
      if (digits() == 0) fail("expected digit after '.'");
    }
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (digits() == 0) fail("expected exponent digits");
    }
    std::string lexeme(text_.substr(start, pos_ - start));
    return std::strtod(lexeme.c_str(), nullptr);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(const Term& t, std::string& out) {
  if (t.is_con() && t.type() == "Prop" && t.name() == "prop" && t.children().size() == 2) {
    const Term& key = t.children()[0];
    out += quote_string(key.children()[0].str_value());
    out += ':';
    print(t.children()[1], out);
    return;
  }
  const std::string& c = t.name();
  const auto& kids = t.children();
  if (c == "null") {
    out += "null";
  } else if (c == "boolean") {
    out += kids[0].bool_value() ? "true" : "false";
  } else if (c == "number") {
    double v = kids[0].real_value();
    if (!std::isfinite(v)) throw Error(ErrorCode::IllTypedInput, "non-finite number has no JSON form");
    out += format_real(v);
  } else if (c == "string") {
    out += quote_string(kids[0].str_value());
  } else if (c == "array" || c == "object") {
    out += c == "array" ? '[' : '{';
    const auto& elems = kids[0].children();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) out += ',';
      print(elems[i], out);
    }
    out += c == "array" ? ']' : '}';
  }
}

}  // namespace

const std::shared_ptr<const Signature>& signature() {
  static const std::shared_ptr<const Signature> sig = std::make_shared<const Signature>(parse_signature(kSignatureText));
  return sig;
}

Term boolean(bool b) { return Term::con("boolean", "JSON", {Term::boolean(b)}); }
Term number(double n) { return Term::con("number", "JSON", {Term::real(n)}); }
Term string(std::string s) { return Term::con("string", "JSON", {Term::str(std::move(s))}); }
Term array(std::vector<Term> elts) { return Term::con("array", "JSON", {Term::list(std::move(elts), json_type())}); }
Term null() { return Term::con("null", "JSON"); }
Term object(std::vector<Term> props) {
  return Term::con("object", "JSON", {Term::list(std::move(props), prop_type())});
}
Term prop(std::string name, Term value) { return Term::con("prop", "Prop", {id(std::move(name)), std::move(value)}); }
Term id(std::string name) { return Term::con("id", "Id", {Term::str(std::move(name))}); }

Term parse_json(std::string_view text) { return Parser(text).parse_document(); }

Term parse_prop(std::string_view text) {
  std::string wrapped = "{" + std::string(text) + "}";
  Term obj = [&] {
    try {
      return parse_json(wrapped);
    } catch (const Error& e) {
      if (!e.pos()) throw;
      // Report positions relative to the unwrapped text.
      std::size_t line = e.pos()->line;
      std::size_t col = e.pos()->column;
      if (line == 1 && col > 1) --col;
      throw Error(ErrorCode::ParserError, e.detail(), SourcePos{line, col});
    }
  }();
  if (obj.name() != "object") throw Error(ErrorCode::WrappedParseNotObject, "wrapped property did not parse as an object");
  const auto& props = obj.children()[0].children();
  if (props.size() != 1) {
    throw Error(ErrorCode::ParserError, "expected exactly one property, found " + std::to_string(props.size()),
                SourcePos{1, 1});
  }
  return props[0];
}

std::string prop_hole(std::size_t index) { return "_hole:" + std::to_string(index); }
std::string json_hole(std::size_t index) { return "{" + prop_hole(index) + "}"; }

std::string print_json(const Term& t) {
  bool ok = check_term(*signature(), t, json_type()).empty() || check_term(*signature(), t, prop_type()).empty();
  if (!ok) throw Error(ErrorCode::IllTypedInput, "not a JSON or Prop term: " + to_string(t));
  std::string out;
  print(t, out);
  return out;
}

void register_binding(ParserRegistry::Builder& builder) {
  builder.add("JSON", parse_json, signature(), json_hole);
  builder.add("Prop", parse_prop, signature(), prop_hole);
}

}  // namespace csbb::json
