#include "csbb/exprlang.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "csbb/error.hpp"
#include "csbb/registry.hpp"

namespace csbb::exprlang {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { lex(); }

  Term program() {
    std::vector<Term> decls;
    while (peek().kind != Tok::End) decls.push_back(decl());
    return Term::con("program", "Program", {Term::list(std::move(decls), ArgType::adt("Decl"))});
  }

 private:
  [[noreturn]] void fail_at(std::size_t offset, const std::string& msg) const {
    throw Error(ErrorCode::ParserError, msg, position_of(text_, offset));
  }

  void lex() {
    std::size_t i = 0;
    while (true) {
      while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
      if (i >= text_.size()) break;
      char c = text_[i];
      std::size_t start = i;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) ++i;
        toks_.push_back({Tok::Ident, std::string(text_.substr(start, i - start)), start});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        toks_.push_back({Tok::Int, std::string(text_.substr(start, i - start)), start});
      } else if (std::string_view("(){};+").find(c) != std::string_view::npos) {
        toks_.push_back({Tok::Sym, std::string(1, c), start});
        ++i;
      } else {
        fail_at(i, std::string("unexpected character '") + c + "'");
      }
    }
    toks_.push_back({Tok::End, "", text_.size()});
  }

  const Token& peek() const { return toks_[pos_]; }
  bool at_sym(char c) const { return peek().kind == Tok::Sym && peek().text[0] == c; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  std::string describe(const Token& t) const { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }

  void expect(char c) {
    if (!at_sym(c)) fail_at(peek().offset, std::string("expected '") + c + "' but found " + describe(peek()));
    ++pos_;
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail_at(peek().offset, "expected '" + std::string(w) + "' but found " + describe(peek()));
    ++pos_;
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) {
      fail_at(peek().offset, "expected identifier but found " + describe(peek()));
    }
    return toks_[pos_++].text;
  }

  static bool is_keyword(std::string_view w) { return w == "void" || w == "while"; }

  Term decl() {
    expect_word("void");
    std::string name = ident();
    expect('(');
    expect(')');
    return Term::con("function", "Decl", {Term::str(std::move(name)), block_body()});
  }

  // "{" stm* "}" as a block statement
  Term block_body() { return Term::con("block", "Stm", {stm_list()}); }

  Term stm_list() {
    expect('{');
    std::vector<Term> stms;
    while (!at_sym('}')) {
      if (peek().kind == Tok::End) fail_at(peek().offset, "expected '}' but found end of input");
      stms.push_back(stm());
    }
    expect('}');
    return Term::list(std::move(stms), ArgType::adt("Stm"));
  }

  Term stm() {
    if (at_word("while")) {
      ++pos_;
      expect('(');
      Term cond = expr();
      expect(')');
      Term body = stm_list();
      return Term::con("whileStm", "Stm", {std::move(cond), std::move(body)});
    }
    if (at_sym('{')) return block_body();
    Term e = expr();
    expect(';');
    return Term::con("exprStm", "Stm", {std::move(e)});
  }

  Term expr() {
    Term lhs = term();
    while (at_sym('+')) {
      ++pos_;
      lhs = Term::con("add", "Expr", {std::move(lhs), term()});
    }
    return lhs;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      std::int64_t v = 0;
      auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (r.ec != std::errc()) fail_at(t.offset, "integer literal out of range");
      ++pos_;
      return Term::con("intLit", "Expr", {Term::integer(v)});
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      ++pos_;
      return Term::con("varRef", "Expr", {Term::str(t.text)});
    }
    if (at_sym('(')) {
      ++pos_;
      Term e = expr();
      expect(')');
      return e;
    }
    fail_at(t.offset, "expected expression but found " + describe(t));
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Parses `prefix + text + suffix` as a program and maps error positions that
// fall inside `text` back onto it.
Term parse_in_context(std::string_view text, std::string_view prefix, std::string_view suffix) {
  std::string whole = std::string(prefix) + std::string(text) + std::string(suffix);
  try {
    return parse_program(whole);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParserError || !e.pos()) throw;
    // Translate the reported line/column back to an offset in `whole`.
    std::size_t off = 0;
    for (std::size_t line = 1; off < whole.size() && line < e.pos()->line; ++off) {
      if (whole[off] == '\n') ++line;
    }
    off += e.pos()->column - 1;
    std::size_t inner = off < prefix.size() ? 0 : std::min(off - prefix.size(), text.size());
    throw Error(ErrorCode::ParserError, e.detail(), position_of(text, inner));
  }
}

Term single_statement(const Term& program, std::string_view text) {
  // program(decls) -> decls[0] -> function.body -> block.stmts
  const Term& stmts = project(program, {0, 0, 1, 0});
  if (stmts.children().size() != 1) {
    throw Error(ErrorCode::ParserError,
                "expected exactly one statement, found " + std::to_string(stmts.children().size()),
                position_of(text, stmts.children().empty() ? 0 : text.size()));
  }
  return stmts.children()[0];
}

}  // namespace

const std::shared_ptr<const Signature>& signature() {
  static const std::shared_ptr<const Signature> sig = std::make_shared<const Signature>(parse_signature(kSignatureText));
  return sig;
}

Term parse_program(std::string_view text) { return Parser(text).program(); }

Term parse_stm(std::string_view text) {
  return single_statement(parse_in_context(text, "void dummy() { ", " }"), text);
}

Term parse_expr(std::string_view text) {
  Term s = single_statement(parse_in_context(text, "void dummy() { ", "; }"), text);
  if (s.name() != "exprStm") throw Error(ErrorCode::ParserError, "expected an expression", SourcePos{});
  return s.children()[0];
}

Term parse(std::string_view nonterminal, std::string_view text) {
  if (nonterminal == "Program") return parse_program(text);
  if (nonterminal == "Stm") return parse_stm(text);
  if (nonterminal == "Expr") return parse_expr(text);
  throw Error(ErrorCode::NoParser, "exprlang does not serve " + std::string(nonterminal));
}

}  // namespace csbb::exprlang
