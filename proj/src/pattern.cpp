#include "csbb/pattern.hpp"

#include "csbb/error.hpp"

namespace csbb {

struct Pattern::Rep {
  Kind kind = Kind::Lit;
  std::string name;
  std::string type;
  std::optional<ArgType> arg_type;
  std::optional<Term> term;
  std::vector<Pattern> children;
};

Pattern Pattern::con(std::string name, std::string type, std::vector<Pattern> args) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Con;
  rep->name = std::move(name);
  rep->type = std::move(type);
  rep->children = std::move(args);
  return Pattern(std::move(rep));
}

Pattern Pattern::lit(Term term) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Lit;
  rep->term = std::move(term);
  return Pattern(std::move(rep));
}

Pattern Pattern::var(std::string name, ArgType type) {
  if (name == "_") return wild(std::move(type));
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Var;
  rep->name = std::move(name);
  rep->arg_type = std::move(type);
  return Pattern(std::move(rep));
}

Pattern Pattern::seq_var(std::string name, ArgType element_type) {
  if (name == "_") return seq_wild(std::move(element_type));
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::SeqVar;
  rep->name = std::move(name);
  rep->arg_type = std::move(element_type);
  return Pattern(std::move(rep));
}

Pattern Pattern::wild(ArgType type) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Wild;
  rep->name = "_";
  rep->arg_type = std::move(type);
  return Pattern(std::move(rep));
}

Pattern Pattern::seq_wild(ArgType element_type) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::SeqWild;
  rep->name = "_";
  rep->arg_type = std::move(element_type);
  return Pattern(std::move(rep));
}

Pattern Pattern::list(std::vector<Pattern> elements, ArgType element_type) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::List;
  rep->children = std::move(elements);
  rep->arg_type = std::move(element_type);
  return Pattern(std::move(rep));
}

Pattern::Kind Pattern::kind() const noexcept { return rep_->kind; }
const std::string& Pattern::name() const noexcept { return rep_->name; }
const std::string& Pattern::type() const noexcept { return rep_->type; }
const ArgType& Pattern::arg_type() const { return *rep_->arg_type; }
const Term& Pattern::term() const { return *rep_->term; }
const std::vector<Pattern>& Pattern::children() const noexcept { return rep_->children; }

bool pattern_equals(const Pattern& a, const Pattern& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Pattern::Kind::Lit: return term_equals(a.term(), b.term());
    case Pattern::Kind::Var:
    case Pattern::Kind::SeqVar:
      return a.name() == b.name() && a.arg_type() == b.arg_type();
    case Pattern::Kind::Wild:
    case Pattern::Kind::SeqWild: return a.arg_type() == b.arg_type();
    case Pattern::Kind::Con:
      if (a.name() != b.name() || a.type() != b.type()) return false;
      break;
    case Pattern::Kind::List:
      if (!(a.arg_type() == b.arg_type())) return false;
      break;
  }
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!pattern_equals(a.children()[i], b.children()[i])) return false;
  }
  return true;
}

namespace {

void render(const Pattern& p, std::string& out) {
  auto render_children = [&](const char* open, const char* close) {
    out += open;
    for (std::size_t i = 0; i < p.children().size(); ++i) {
      if (i) out += ", ";
      render(p.children()[i], out);
    }
    out += close;
  };
  switch (p.kind()) {
    case Pattern::Kind::Lit: out += to_string(p.term()); return;
    case Pattern::Kind::Var: out += "<" + p.arg_type().to_string() + " " + p.name() + ">"; return;
    case Pattern::Kind::SeqVar: out += "<" + p.arg_type().to_string() + "* " + p.name() + ">"; return;
    case Pattern::Kind::Wild: out += "_"; return;
    case Pattern::Kind::SeqWild: out += "*_"; return;
    case Pattern::Kind::Con:
      out += p.name();
      render_children("(", ")");
      return;
    case Pattern::Kind::List: render_children("[", "]"); return;
  }
}

}  // namespace

std::string to_string(const Pattern& p) {
  std::string out;
  render(p, out);
  return out;
}

std::optional<ArgType> pattern_type(const Pattern& p) {
  switch (p.kind()) {
    case Pattern::Kind::Con:
      if (p.type() == kMaybeType) return std::nullopt;
      return ArgType::adt(p.type());
    case Pattern::Kind::Lit: return type_of(p.term());
    case Pattern::Kind::Var:
    case Pattern::Kind::Wild: return p.arg_type();
    case Pattern::Kind::List: return ArgType::list(p.arg_type());
    case Pattern::Kind::SeqVar:
    case Pattern::Kind::SeqWild: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Type checking

namespace {

void check(const Signature& sig, const Pattern& p, const ArgType& expected, std::vector<std::size_t>& path,
           std::vector<TypeError>& errors) {
  auto error = [&](const std::string& msg) { errors.push_back({path, msg}); };
  switch (p.kind()) {
    case Pattern::Kind::Lit:
      for (auto& e : check_term(sig, p.term(), expected)) {
        auto full = path;
        full.insert(full.end(), e.path.begin(), e.path.end());
        errors.push_back({std::move(full), e.message});
      }
      return;
    case Pattern::Kind::Var:
    case Pattern::Kind::Wild:
      if (!(p.arg_type() == expected)) {
        error("variable of type " + p.arg_type().to_string() + " where " + expected.to_string() + " expected");
      }
      return;
    case Pattern::Kind::SeqVar:
    case Pattern::Kind::SeqWild:
      error("sequence pattern outside a list");
      return;
    case Pattern::Kind::List:
      if (!expected.is_list() || !(expected.element() == p.arg_type())) {
        error("list[" + p.arg_type().to_string() + "] pattern where " + expected.to_string() + " expected");
        return;
      }
      for (std::size_t i = 0; i < p.children().size(); ++i) {
        const Pattern& c = p.children()[i];
        path.push_back(i);
        if (c.is_sequence()) {
          if (!(c.arg_type() == p.arg_type())) {
            error("sequence element type " + c.arg_type().to_string() + " in list[" + p.arg_type().to_string() + "]");
          }
        } else {
          check(sig, c, p.arg_type(), path, errors);
        }
        path.pop_back();
      }
      return;
    case Pattern::Kind::Con: {
      std::vector<ArgType> arg_types;
      if (expected.is_maybe()) {
        if (p.type() != kMaybeType || !((p.name() == "nothing" && p.children().empty()) ||
                                        (p.name() == "just" && p.children().size() == 1))) {
          error("expected " + expected.to_string());
          return;
        }
        if (!p.children().empty()) arg_types.push_back(expected.element());
      } else {
        if (!expected.is_adt() || expected.adt_name() != p.type()) {
          error("constructor of " + p.type() + " where " + expected.to_string() + " expected");
          return;
        }
        const ConstructorDecl* decl = sig.find(p.type(), p.name(), p.children().size());
        if (!decl) {
          error("undeclared constructor " + p.type() + "." + p.name());
          return;
        }
        for (const auto& a : decl->args) arg_types.push_back(a.type);
      }
      for (std::size_t i = 0; i < arg_types.size(); ++i) {
        path.push_back(i);
        check(sig, p.children()[i], arg_types[i], path, errors);
        path.pop_back();
      }
      return;
    }
  }
}

}  // namespace

std::vector<TypeError> check_pattern(const Signature& sig, const Pattern& p, const ArgType& expected) {
  std::vector<TypeError> errors;
  std::vector<std::size_t> path;
  check(sig, p, expected, path, errors);
  return errors;
}

// ---------------------------------------------------------------------------
// Environments

bool binding_equals(const Binding& a, const Binding& b) {
  if (a.index() != b.index()) return false;
  if (a.index() == 0) return term_equals(std::get<Term>(a), std::get<Term>(b));
  const auto& xs = std::get<std::vector<Term>>(a);
  const auto& ys = std::get<std::vector<Term>>(b);
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!term_equals(xs[i], ys[i])) return false;
  }
  return true;
}

bool env_equals(const Env& a, const Env& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !binding_equals(ia->second, ib->second)) return false;
  }
  return true;
}

std::string to_string(const Binding& b) {
  if (b.index() == 0) return to_string(std::get<Term>(b));
  std::string out = "[";
  const auto& xs = std::get<std::vector<Term>>(b);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += to_string(xs[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Matching

namespace {

using Cont = std::function<bool(Env&)>;

class Matcher {
 public:
  // Each function returns false once the consumer asked to stop.
  bool match(const Pattern& p, const Term& t, Env& env, const Cont& k) {
    switch (p.kind()) {
      case Pattern::Kind::Lit:
        return term_equals(p.term(), t) ? k(env) : true;
      case Pattern::Kind::Wild:
        return term_has_type(t, p.arg_type()) ? k(env) : true;
      case Pattern::Kind::Var: {
        if (!term_has_type(t, p.arg_type())) return true;
        auto it = env.find(p.name());
        if (it != env.end()) {
          return binding_equals(it->second, Binding(t)) ? k(env) : true;
        }
        env.emplace(p.name(), t);
        bool go_on = k(env);
        env.erase(p.name());
        return go_on;
      }
      case Pattern::Kind::SeqVar:
      case Pattern::Kind::SeqWild:
        return true;
      case Pattern::Kind::Con:
        if (!t.is_con() || t.name() != p.name() || t.type() != p.type() ||
            t.children().size() != p.children().size()) {
          return true;
        }
        return match_args(p.children(), t.children(), 0, env, k);
      case Pattern::Kind::List:
        if (!t.is_list() || !(t.element_type() == p.arg_type())) return true;
        return match_list(p.children(), 0, t.children(), 0, env, k);
    }
    return true;
  }

 private:
  bool match_args(const std::vector<Pattern>& ps, const std::vector<Term>& ts, std::size_t i, Env& env,
                  const Cont& k) {
    if (i == ps.size()) return k(env);
    return match(ps[i], ts[i], env, [&](Env& e) { return match_args(ps, ts, i + 1, e, k); });
  }

  static std::size_t fixed_after(const std::vector<Pattern>& ps, std::size_t pi) {
    std::size_t n = 0;
    for (std::size_t i = pi; i < ps.size(); ++i) {
      if (!ps[i].is_sequence()) ++n;
    }
    return n;
  }

  bool match_list(const std::vector<Pattern>& ps, std::size_t pi, const std::vector<Term>& ts, std::size_t ti,
                  Env& env, const Cont& k) {
    if (pi == ps.size()) return ti == ts.size() ? k(env) : true;
    const Pattern& p = ps[pi];
    if (!p.is_sequence()) {
      if (ti == ts.size()) return true;
      return match(p, ts[ti], env, [&](Env& e) { return match_list(ps, pi + 1, ts, ti + 1, e, k); });
    }

    std::size_t need = fixed_after(ps, pi + 1);
    if (ts.size() - ti < need) return true;
    std::size_t max_len = ts.size() - ti - need;

    if (p.kind() == Pattern::Kind::SeqVar) {
      auto it = env.find(p.name());
      if (it != env.end()) {
        const auto* bound = std::get_if<std::vector<Term>>(&it->second);
        if (!bound || bound->size() > max_len) return true;
        for (std::size_t i = 0; i < bound->size(); ++i) {
          if (!term_equals((*bound)[i], ts[ti + i])) return true;
        }
        return match_list(ps, pi + 1, ts, ti + bound->size(), env, k);
      }
    }

    for (std::size_t len = 0; len <= max_len; ++len) {
      if (len > 0 && !term_has_type(ts[ti + len - 1], p.arg_type())) break;
      bool go_on;
      if (p.kind() == Pattern::Kind::SeqVar) {
        env.emplace(p.name(), std::vector<Term>(ts.begin() + static_cast<std::ptrdiff_t>(ti),
                                                ts.begin() + static_cast<std::ptrdiff_t>(ti + len)));
        go_on = match_list(ps, pi + 1, ts, ti + len, env, k);
        env.erase(p.name());
      } else {
        go_on = match_list(ps, pi + 1, ts, ti + len, env, k);
      }
      if (!go_on) return false;
    }
    return true;
  }
};

}  // namespace

void match_each(const Pattern& p, const Term& t, const std::function<bool(const Env&)>& yield) {
  if (auto pt = pattern_type(p); pt && !term_has_type(t, *pt)) {
    throw Error(ErrorCode::PatternTypeMismatch,
                "pattern of type " + pt->to_string() + " cannot match " + to_string(t));
  }
  if (p.is_sequence()) {
    throw Error(ErrorCode::PatternTypeMismatch, "sequence pattern outside a list");
  }
  Env env;
  Matcher m;
  m.match(p, t, env, [&](Env& e) { return yield(e); });
}

std::vector<Env> match(const Pattern& p, const Term& t) {
  std::vector<Env> out;
  match_each(p, t, [&](const Env& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

std::optional<Env> match_first(const Pattern& p, const Term& t) {
  std::optional<Env> out;
  match_each(p, t, [&](const Env& e) {
    out = e;
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

const Binding& lookup(const Env& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) throw Error(ErrorCode::UnboundVariable, name);
  return it->second;
}

}  // namespace

Term instantiate(const Pattern& p, const Env& env) {
  switch (p.kind()) {
    case Pattern::Kind::Lit: return p.term();
    case Pattern::Kind::Wild:
    case Pattern::Kind::SeqWild:
      throw Error(ErrorCode::WildcardInInstantiate, "cannot instantiate a wildcard");
    case Pattern::Kind::Var: {
      const Binding& b = lookup(env, p.name());
      const Term* t = std::get_if<Term>(&b);
      if (!t) throw Error(ErrorCode::TypeMismatch, p.name() + " is bound to a sequence");
      if (!term_has_type(*t, p.arg_type())) {
        throw Error(ErrorCode::TypeMismatch, p.name() + " is bound to " + to_string(*t) + ", expected " +
                                                 p.arg_type().to_string());
      }
      return *t;
    }
    case Pattern::Kind::SeqVar:
      throw Error(ErrorCode::TypeMismatch, p.name() + " is a sequence variable outside a list");
    case Pattern::Kind::Con: {
      std::vector<Term> args;
      args.reserve(p.children().size());
      for (const auto& c : p.children()) args.push_back(instantiate(c, env));
      return Term::con(p.name(), p.type(), std::move(args));
    }
    case Pattern::Kind::List: {
      std::vector<Term> elems;
      for (const auto& c : p.children()) {
        if (c.kind() == Pattern::Kind::SeqVar) {
          const Binding& b = lookup(env, c.name());
          const auto* seq = std::get_if<std::vector<Term>>(&b);
          if (!seq) throw Error(ErrorCode::TypeMismatch, c.name() + " is bound to a single term, expected a sequence");
          for (const auto& e : *seq) {
            if (!term_has_type(e, c.arg_type())) {
              throw Error(ErrorCode::TypeMismatch, c.name() + " contains " + to_string(e) + ", expected " +
                                                       c.arg_type().to_string());
            }
            elems.push_back(e);
          }
        } else {
          elems.push_back(instantiate(c, env));
        }
      }
      return Term::list(std::move(elems), p.arg_type());
    }
  }
  throw Error(ErrorCode::TypeMismatch, "unknown pattern kind");
}

std::vector<std::pair<std::string, bool>> pattern_variables(const Pattern& p) {
  std::vector<std::pair<std::string, bool>> out;
  std::function<void(const Pattern&)> walk = [&](const Pattern& q) {
    if (q.kind() == Pattern::Kind::Var || q.kind() == Pattern::Kind::SeqVar) {
      bool seen = false;
      for (const auto& [n, s] : out) seen = seen || n == q.name();
      if (!seen) out.emplace_back(q.name(), q.kind() == Pattern::Kind::SeqVar);
    }
    for (const auto& c : q.children()) walk(c);
  };
  walk(p);
  return out;
}

}  // namespace csbb
