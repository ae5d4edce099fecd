#include "csbb/signature.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "csbb/error.hpp"

namespace csbb {

namespace {

void check_arg_type(const std::vector<std::string>& types, const ArgType& t, const std::string& where) {
  switch (t.kind()) {
    case ArgType::Kind::Adt:
      if (std::find(types.begin(), types.end(), t.adt_name()) == types.end()) {
        throw Error(ErrorCode::InvalidSignature, where + ": unknown type " + t.adt_name());
      }
      return;
    case ArgType::Kind::List:
    case ArgType::Kind::Maybe:
      check_arg_type(types, t.element(), where);
      return;
    case ArgType::Kind::Prim:
      return;
  }
}

}  // namespace

Signature::Signature(std::vector<std::string> types, std::vector<ConstructorDecl> constructors)
    : types_(std::move(types)), constructors_(std::move(constructors)) {
  std::set<std::string> seen;
  for (const auto& t : types_) {
    if (t == kMaybeType) {
      throw Error(ErrorCode::InvalidSignature, "type name Maybe is reserved");
    }
    if (!seen.insert(t).second) {
      throw Error(ErrorCode::InvalidSignature, "duplicate type " + t);
    }
  }
  std::set<std::pair<std::string, std::string>> names;
  for (const auto& c : constructors_) {
    if (!seen.count(c.type)) {
      throw Error(ErrorCode::InvalidSignature, "constructor " + c.name + " owned by undeclared type " + c.type);
    }
    if (!names.insert({c.type, c.name}).second) {
      throw Error(ErrorCode::InvalidSignature, "duplicate constructor " + c.type + "." + c.name);
    }
    for (const auto& a : c.args) check_arg_type(types_, a.type, c.type + "." + c.name);
  }
}

bool Signature::has_type(std::string_view type) const {
  return std::find(types_.begin(), types_.end(), type) != types_.end();
}

const ConstructorDecl* Signature::find(std::string_view type, std::string_view name, std::size_t arity) const {
  for (const auto& c : constructors_) {
    if (c.type == type && c.name == name && c.args.size() == arity) return &c;
  }
  return nullptr;
}

std::vector<const ConstructorDecl*> Signature::constructors_of(std::string_view type) const {
  std::vector<const ConstructorDecl*> out;
  for (const auto& c : constructors_) {
    if (c.type == type) out.push_back(&c);
  }
  return out;
}

Signature Signature::merged_with(const Signature& other) const {
  auto types = types_;
  auto ctors = constructors_;
  for (const auto& t : other.types_) {
    if (!has_type(t)) types.push_back(t);
  }
  for (const auto& c : other.constructors_) {
    const ConstructorDecl* mine = find(c.type, c.name, c.args.size());
    if (mine) {
      bool same = mine->args.size() == c.args.size();
      for (std::size_t i = 0; same && i < c.args.size(); ++i) same = mine->args[i].type == c.args[i].type;
      if (!same) throw Error(ErrorCode::InvalidSignature, "conflicting declarations of " + c.type + "." + c.name);
      continue;
    }
    ctors.push_back(c);
  }
  return Signature(std::move(types), std::move(ctors));
}

// ---------------------------------------------------------------------------
// Surface syntax

namespace {

class SigReader {
 public:
  explicit SigReader(std::string_view text) : text_(text) {}

  Signature read() {
    std::vector<std::string> types;
    std::vector<ConstructorDecl> ctors;
    skip();
    if (peek_word() == "module") {
      word();
      qualified_name();
    }
    while (skip(), pos_ < text_.size()) {
      expect_word("data");
      std::string type = word();
      types.push_back(type);
      expect('=');
      do {
        ConstructorDecl decl;
        decl.type = type;
        decl.name = word();
        expect('(');
        skip();
        if (!accept(')')) {
          do {
            ArgType at = arg_type();
            std::string name = word();
            decl.args.push_back({std::move(name), std::move(at)});
          } while (accept(','));
          expect(')');
        }
        ctors.push_back(std::move(decl));
      } while (accept('|'));
      expect(';');
    }
    try {
      return Signature(std::move(types), std::move(ctors));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidSignature, e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SignatureSyntax, msg, position_of(text_, pos_));
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string_view peek_word() {
    skip();
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  std::string word() {
    auto w = peek_word();
    if (w.empty() || std::isdigit(static_cast<unsigned char>(w[0]))) fail("expected identifier");
    pos_ += w.size();
    return std::string(w);
  }

  void expect_word(std::string_view w) {
    if (peek_word() != w) fail("expected '" + std::string(w) + "'");
    pos_ += w.size();
  }

  void qualified_name() {
    word();
    while (skip(), text_.substr(pos_, 2) == "::") {
      pos_ += 2;
      word();
    }
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

  ArgType arg_type() {
    std::string w = word();
    if (w == "int") return ArgType::prim(PrimKind::Int);
    if (w == "real") return ArgType::prim(PrimKind::Real);
    if (w == "bool") return ArgType::prim(PrimKind::Bool);
    if (w == "str") return ArgType::prim(PrimKind::Str);
    if (w == "list" || w == kMaybeType) {
      expect('[');
      ArgType inner = arg_type();
      expect(']');
      if (w == "list") return ArgType::list(std::move(inner));
      if (inner.is_maybe()) fail("Maybe[Maybe[...]] is not allowed");
      return ArgType::maybe(std::move(inner));
    }
    return ArgType::adt(std::move(w));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Signature parse_signature(std::string_view text) { return SigReader(text).read(); }

std::string render_constructor(const ConstructorDecl& decl) {
  std::string out = decl.name + "(";
  for (std::size_t i = 0; i < decl.args.size(); ++i) {
    if (i) out += ", ";
    out += decl.args[i].type.to_string() + " " + decl.args[i].name;
  }
  return out + ")";
}

std::string print_signature(const Signature& sig, std::string_view module_name) {
  std::string out;
  if (!module_name.empty()) {
    out += "module ";
    out += module_name;
    out += "\n\n";
  }
  for (const auto& type : sig.types()) {
    out += "data " + type + "\n";
    auto ctors = sig.constructors_of(type);
    for (std::size_t i = 0; i < ctors.size(); ++i) {
      out += i == 0 ? "  = " : "  | ";
      out += render_constructor(*ctors[i]);
      out += '\n';
    }
    out += "  ;\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Type checking

std::string format_path(const std::vector<std::size_t>& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(path[i]);
  }
  return out + "]";
}

namespace {

std::string describe(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Con: return "constructor " + t.type() + "." + t.name() + "/" + std::to_string(t.children().size());
    case Term::Kind::Int: return "int";
    case Term::Kind::Real: return "real";
    case Term::Kind::Bool: return "bool";
    case Term::Kind::Str: return "str";
    case Term::Kind::List: return "list[" + t.element_type().to_string() + "]";
  }
  return "?";
}

void check(const Signature& sig, const Term& t, const ArgType& expected, std::vector<std::size_t>& path,
           std::vector<TypeError>& errors) {
  auto mismatch = [&] {
    errors.push_back({path, "expected " + expected.to_string() + ", found " + describe(t)});
  };
  auto check_children = [&](const std::vector<ArgSpec>& specs) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      path.push_back(i);
      check(sig, t.children()[i], specs[i].type, path, errors);
      path.pop_back();
    }
  };
  switch (expected.kind()) {
    case ArgType::Kind::Prim:
      if (!term_has_type(t, expected)) mismatch();
      return;
    case ArgType::Kind::List:
      if (!t.is_list() || !(t.element_type() == expected.element())) {
        mismatch();
        return;
      }
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        path.push_back(i);
        check(sig, t.children()[i], expected.element(), path, errors);
        path.pop_back();
      }
      return;
    case ArgType::Kind::Maybe:
      if (!t.is_con() || t.type() != kMaybeType) {
        mismatch();
      } else if (t.name() == "nothing" && t.children().empty()) {
      } else if (t.name() == "just" && t.children().size() == 1) {
        check_children({{"val", expected.element()}});
      } else {
        mismatch();
      }
      return;
    case ArgType::Kind::Adt: {
      if (!t.is_con() || t.type() != expected.adt_name()) {
        mismatch();
        return;
      }
      const ConstructorDecl* decl = sig.find(t.type(), t.name(), t.children().size());
      if (!decl) {
        errors.push_back({path, "undeclared " + describe(t)});
        return;
      }
      check_children(decl->args);
      return;
    }
  }
}

}  // namespace

std::vector<TypeError> check_term(const Signature& sig, const Term& t, const ArgType& expected) {
  std::vector<TypeError> errors;
  std::vector<std::size_t> path;
  check(sig, t, expected, path, errors);
  return errors;
}

}  // namespace csbb
