#include "csbb/term.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "csbb/error.hpp"

namespace csbb {

std::string_view to_string(PrimKind kind) {
  switch (kind) {
    case PrimKind::Int: return "int";
    case PrimKind::Real: return "real";
    case PrimKind::Bool: return "bool";
    case PrimKind::Str: return "str";
  }
  return "?";
}

ArgType ArgType::adt(std::string name) {
  ArgType t;
  t.kind_ = Kind::Adt;
  t.name_ = std::move(name);
  return t;
}

ArgType ArgType::list(ArgType element) {
  ArgType t;
  t.kind_ = Kind::List;
  t.element_ = std::make_shared<const ArgType>(std::move(element));
  return t;
}

ArgType ArgType::maybe(ArgType element) {
  if (element.is_maybe()) {
    throw Error(ErrorCode::InvalidSignature, "maybe of maybe is not a valid argument type");
  }
  ArgType t;
  t.kind_ = Kind::Maybe;
  t.element_ = std::make_shared<const ArgType>(std::move(element));
  return t;
}

ArgType ArgType::prim(PrimKind kind) {
  ArgType t;
  t.kind_ = Kind::Prim;
  t.prim_ = kind;
  return t;
}

std::string ArgType::to_string() const {
  switch (kind_) {
    case Kind::Adt: return name_;
    case Kind::List: return "list[" + element_->to_string() + "]";
    case Kind::Maybe: return std::string(kMaybeType) + "[" + element_->to_string() + "]";
    case Kind::Prim: return std::string(csbb::to_string(prim_));
  }
  return {};
}

bool operator==(const ArgType& a, const ArgType& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case ArgType::Kind::Adt: return a.name_ == b.name_;
    case ArgType::Kind::Prim: return a.prim_ == b.prim_;
    case ArgType::Kind::List:
    case ArgType::Kind::Maybe: return *a.element_ == *b.element_;
  }
  return false;
}

struct Term::Rep {
  Kind kind = Kind::Con;
  std::string text;
  std::string type;
  std::vector<Term> children;
  std::optional<ArgType> element;
  std::int64_t int_value = 0;
  double real_value = 0.0;
  bool bool_value = false;
};

Term Term::con(std::string name, std::string type, std::vector<Term> args) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Con;
  rep->text = std::move(name);
  rep->type = std::move(type);
  rep->children = std::move(args);
  return Term(std::move(rep));
}

Term Term::integer(std::int64_t value) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Int;
  rep->int_value = value;
  return Term(std::move(rep));
}

Term Term::real(double value) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Real;
  rep->real_value = value;
  return Term(std::move(rep));
}

Term Term::boolean(bool value) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Bool;
  rep->bool_value = value;
  return Term(std::move(rep));
}

Term Term::str(std::string value) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Str;
  rep->text = std::move(value);
  return Term(std::move(rep));
}

Term Term::list(std::vector<Term> elements, ArgType element_type) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::List;
  rep->children = std::move(elements);
  rep->element = std::move(element_type);
  return Term(std::move(rep));
}

Term Term::nothing() { return con("nothing", std::string(kMaybeType)); }
Term Term::just(Term value) { return con("just", std::string(kMaybeType), {std::move(value)}); }

Term::Kind Term::kind() const noexcept { return rep_->kind; }
const std::string& Term::name() const noexcept { return rep_->text; }
const std::string& Term::type() const noexcept { return rep_->type; }
const std::vector<Term>& Term::children() const noexcept { return rep_->children; }
const ArgType& Term::element_type() const { return *rep_->element; }
std::int64_t Term::int_value() const noexcept { return rep_->int_value; }
double Term::real_value() const noexcept { return rep_->real_value; }
bool Term::bool_value() const noexcept { return rep_->bool_value; }

bool term_equals(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Int: return a.int_value() == b.int_value();
    case Term::Kind::Real:
      return std::bit_cast<std::uint64_t>(a.real_value()) ==
             std::bit_cast<std::uint64_t>(b.real_value());
    case Term::Kind::Bool: return a.bool_value() == b.bool_value();
    case Term::Kind::Str: return a.str_value() == b.str_value();
    case Term::Kind::Con:
      if (a.name() != b.name() || a.type() != b.type()) return false;
      break;
    case Term::Kind::List:
      if (!(a.element_type() == b.element_type())) return false;
      break;
  }
  const auto& xs = a.children();
  const auto& ys = b.children();
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!term_equals(xs[i], ys[i])) return false;
  }
  return true;
}

std::optional<ArgType> type_of(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Int: return ArgType::prim(PrimKind::Int);
    case Term::Kind::Real: return ArgType::prim(PrimKind::Real);
    case Term::Kind::Bool: return ArgType::prim(PrimKind::Bool);
    case Term::Kind::Str: return ArgType::prim(PrimKind::Str);
    case Term::Kind::List: return ArgType::list(t.element_type());
    case Term::Kind::Con:
      if (t.type() == kMaybeType) {
        if (t.name() == "just" && t.children().size() == 1) {
          auto inner = type_of(t.children()[0]);
          if (inner && !inner->is_maybe()) return ArgType::maybe(*inner);
        }
        return std::nullopt;
      }
      return ArgType::adt(t.type());
  }
  return std::nullopt;
}

bool term_has_type(const Term& t, const ArgType& type) {
  switch (type.kind()) {
    case ArgType::Kind::Adt:
      return t.is_con() && t.type() == type.adt_name();
    case ArgType::Kind::List:
      return t.is_list() && t.element_type() == type.element();
    case ArgType::Kind::Maybe:
      if (!t.is_con() || t.type() != kMaybeType) return false;
      if (t.name() == "nothing") return t.children().empty();
      return t.name() == "just" && t.children().size() == 1 &&
             term_has_type(t.children()[0], type.element());
    case ArgType::Kind::Prim:
      switch (type.prim_kind()) {
        case PrimKind::Int: return t.kind() == Term::Kind::Int;
        case PrimKind::Real: return t.kind() == Term::Kind::Real;
        case PrimKind::Bool: return t.kind() == Term::Kind::Bool;
        case PrimKind::Str: return t.kind() == Term::Kind::Str;
      }
  }
  return false;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, res.ptr);
  auto exp = s.find_first_of("eE");
  std::string mantissa = s.substr(0, exp);
  if (mantissa.find('.') == std::string::npos) mantissa += ".0";
  return exp == std::string::npos ? mantissa : mantissa + s.substr(exp);
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
  return out;
}

namespace {

void render(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Int: out += std::to_string(t.int_value()); return;
    case Term::Kind::Real: out += format_real(t.real_value()); return;
    case Term::Kind::Bool: out += t.bool_value() ? "true" : "false"; return;
    case Term::Kind::Str: out += quote_string(t.str_value()); return;
    case Term::Kind::List:
      out += '[';
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ", ";
        render(t.children()[i], out);
      }
      out += ']';
      return;
    case Term::Kind::Con:
      out += t.name();
      out += '(';
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ", ";
        render(t.children()[i], out);
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  render(t, out);
  return out;
}

}  // namespace csbb
