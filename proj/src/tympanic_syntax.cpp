#include <cctype>
#include <charconv>
#include <set>

#include "csbb/tympanic.hpp"

namespace csbb::tympanic {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

enum class Tok { Id, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) { lex(); }

  TympanicSpec parse() {
    TympanicSpec spec;
    keyword("mapping");
    spec.name = ident();
    while (at_id("import")) {
      ++pos_;
      spec.imports.push_back(dotted('.'));
    }
    keyword("export");
    spec.export_path = dotted(':');
    keyword("types");
    std::set<std::string> mapped;
    while (peek().kind == Tok::Id && peek(1).kind == Tok::Sym && peek(1).text == "=>") {
      TypeMapping tm;
      tm.pos = here();
      tm.foreign_type = ident();
      sym("=>");
      tm.adt = ident();
      if (!mapped.insert(tm.foreign_type).second) {
        throw Error(ErrorCode::DuplicateTypeMapping, "foreign type " + tm.foreign_type + " is mapped twice", tm.pos);
      }
      spec.types.push_back(std::move(tm));
    }
    keyword("constructors");
    while (peek().kind == Tok::Id) {
      ClassMapping cm;
      cm.pos = here();
      cm.foreign_class = ident();
      if (!at_sym("-")) fail("expected '-' to start a rule for " + cm.foreign_class);
      while (at_sym("-")) cm.rules.push_back(rule());
      spec.constructors.push_back(std::move(cm));
    }
    if (peek().kind != Tok::End) fail("expected a class name or end of input");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::TympanicSyntax, msg + " (found " + describe(peek()) + ")", here());
  }

  SourcePos here() const { return position_of(text_, peek().offset); }

  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }

  void lex() {
    std::size_t i = 0;
    while (true) {
      while (i < text_.size()) {
        if (std::isspace(static_cast<unsigned char>(text_[i]))) {
          ++i;
        } else if (text_[i] == '#') {
          while (i < text_.size() && text_[i] != '\n') ++i;
        } else {
          break;
        }
      }
      if (i >= text_.size()) break;
      std::size_t start = i;
      char c = text_[i];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        while (i < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_' || text_[i] == '$')) {
          ++i;
        }
        toks_.push_back({Tok::Id, std::string(text_.substr(start, i - start)), start});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        toks_.push_back({Tok::Int, std::string(text_.substr(start, i - start)), start});
        continue;
      }
      static constexpr std::string_view two[] = {"=>", "==", "!=", "::"};
      bool matched = false;
      for (auto s : two) {
        if (text_.substr(i, 2) == s) {
          toks_.push_back({Tok::Sym, std::string(s), start});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("-%?()[],:.=").find(c) != std::string_view::npos) {
        toks_.push_back({Tok::Sym, std::string(1, c), start});
        ++i;
        continue;
      }
      throw Error(ErrorCode::TympanicSyntax, std::string("unexpected character '") + c + "'", position_of(text_, i));
    }
    toks_.push_back({Tok::End, "", text_.size()});
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at_id(std::string_view s) const { return peek().kind == Tok::Id && peek().text == s; }

  void keyword(std::string_view k) {
    if (!at_id(k)) fail("expected '" + std::string(k) + "'");
    ++pos_;
  }

  void sym(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  std::string ident() {
    if (peek().kind != Tok::Id) fail("expected identifier");
    return toks_[pos_++].text;
  }

  // {Id "."}+ for sep '.', {Id "::"}+ for sep ':'
  std::vector<std::string> dotted(char sep) {
    std::vector<std::string> out{ident()};
    std::string_view s = sep == '.' ? "." : "::";
    while (at_sym(s)) {
      ++pos_;
      out.push_back(ident());
    }
    return out;
  }

  std::int64_t integer(bool negative) {
    const Token& t = peek();
    std::int64_t v = 0;
    auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (r.ec != std::errc()) fail("integer out of range");
    ++pos_;
    return negative ? -v : v;
  }

  Rule rule() {
    Rule r;
    r.pos = here();
    sym("-");
    if (!at_sym(":")) {
      r.fields.push_back(field());
      while (at_sym(",")) {
        ++pos_;
        r.fields.push_back(field());
      }
    }
    sym(":");
    r.constructor = constructor();
    return r;
  }

  FieldSpec field() {
    FieldSpec f;
    f.pos = here();
    if (at_sym("%")) {
      f.skip = true;
      ++pos_;
    }
    if (at_sym("(")) {
      ++pos_;
      f.target = ident();
      f.kind = FieldSpec::Kind::Cast;
      if (at_sym("[")) {
        ++pos_;
        sym("]");
        f.kind = FieldSpec::Kind::CastArray;
      }
      sym(")");
      f.member = ident();
      return f;
    }
    f.member = ident();
    if (at_sym("==") || at_sym("!=")) {
      f.kind = peek().text == "==" ? FieldSpec::Kind::Eq : FieldSpec::Kind::Neq;
      ++pos_;
      f.value = java_value();
    } else if (at_sym("?")) {
      ++pos_;
      f.kind = FieldSpec::Kind::Optional;
    }
    return f;
  }

  JavaValue java_value() {
    JavaValue v;
    if (at_sym("-") && peek(1).kind == Tok::Int) {
      ++pos_;
      v.kind = JavaValue::Kind::Int;
      v.int_value = integer(true);
      return v;
    }
    if (peek().kind == Tok::Int) {
      v.kind = JavaValue::Kind::Int;
      v.int_value = integer(false);
      return v;
    }
    if (peek().kind != Tok::Id) fail("expected null, true, false, an integer or a dotted name");
    bool single = !(peek(1).kind == Tok::Sym && peek(1).text == ".");
    if (single && at_id("null")) {
      ++pos_;
      v.kind = JavaValue::Kind::Null;
    } else if (single && at_id("true")) {
      ++pos_;
      v.kind = JavaValue::Kind::True;
    } else if (single && at_id("false")) {
      ++pos_;
      v.kind = JavaValue::Kind::False;
    } else {
      v.kind = JavaValue::Kind::Path;
      v.path = dotted('.');
    }
    return v;
  }

  ConstructorTemplate constructor() {
    ConstructorTemplate c;
    c.pos = here();
    c.name = ident();
    sym("(");
    if (!at_sym(")")) {
      c.args.push_back(arg());
      while (at_sym(",")) {
        ++pos_;
        c.args.push_back(arg());
      }
    }
    sym(")");
    return c;
  }

  TemplateArg arg() {
    TemplateArg a;
    a.pos = here();
    std::string first = ident();
    if (peek().kind == Tok::Id) {
      a.inline_type = std::move(first);
      a.name = ident();
      sym("=");
      a.inline_value = rascal_value();
    } else {
      a.name = std::move(first);
    }
    return a;
  }

  RascalValue rascal_value() {
    RascalValue v;
    if (peek().kind == Tok::Int || (at_sym("-") && peek(1).kind == Tok::Int)) {
      bool neg = at_sym("-");
      if (neg) ++pos_;
      v.kind = RascalValue::Kind::Int;
      v.int_value = integer(neg);
      return v;
    }
    bool call = peek(1).kind == Tok::Sym && peek(1).text == "(";
    if (!call && at_id("true")) {
      ++pos_;
      v.kind = RascalValue::Kind::True;
      return v;
    }
    if (!call && at_id("false")) {
      ++pos_;
      v.kind = RascalValue::Kind::False;
      return v;
    }
    v.kind = RascalValue::Kind::Con;
    v.name = ident();
    sym("(");
    if (!at_sym(")")) {
      v.args.push_back(rascal_value());
      while (at_sym(",")) {
        ++pos_;
        v.args.push_back(rascal_value());
      }
    }
    sym(")");
    return v;
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const JavaValue& v) {
  switch (v.kind) {
    case JavaValue::Kind::Null: return "null";
    case JavaValue::Kind::True: return "true";
    case JavaValue::Kind::False: return "false";
    case JavaValue::Kind::Int: return std::to_string(v.int_value);
    case JavaValue::Kind::Path: return join(v.path, ".");
  }
  return "";
}

bool operator==(const JavaValue& a, const JavaValue& b) {
  return a.kind == b.kind && a.int_value == b.int_value && a.path == b.path;
}

std::string to_string(const FieldSpec& f) {
  std::string out = f.skip ? "%" : "";
  switch (f.kind) {
    case FieldSpec::Kind::Plain: return out + f.member;
    case FieldSpec::Kind::Eq: return out + f.member + " == " + to_string(*f.value);
    case FieldSpec::Kind::Neq: return out + f.member + " != " + to_string(*f.value);
    case FieldSpec::Kind::Optional: return out + f.member + "?";
    case FieldSpec::Kind::Cast: return out + "(" + f.target + ")" + f.member;
    case FieldSpec::Kind::CastArray: return out + "(" + f.target + "[])" + f.member;
  }
  return out;
}

std::string to_string(const RascalValue& v) {
  switch (v.kind) {
    case RascalValue::Kind::True: return "true";
    case RascalValue::Kind::False: return "false";
    case RascalValue::Kind::Int: return std::to_string(v.int_value);
    case RascalValue::Kind::Con: {
      std::string out = v.name + "(";
      for (std::size_t i = 0; i < v.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v.args[i]);
      }
      return out + ")";
    }
  }
  return "";
}

std::string TympanicSpec::module_name() const { return join(export_path, "::"); }

TympanicSpec parse_tympanic(std::string_view text) { return SpecParser(text).parse(); }

}  // namespace csbb::tympanic
