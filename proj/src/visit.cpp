#include "csbb/visit.hpp"

#include "csbb/error.hpp"

namespace csbb {

namespace {

void walk(const Term& t, TermPath& path, const std::function<void(const TermPath&, const Term&)>& fn) {
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    path.push_back(i);
    walk(t.children()[i], path, fn);
    path.pop_back();
  }
  fn(path, t);
}

bool has_wildcard(const Pattern& p) {
  if (p.kind() == Pattern::Kind::Wild || p.kind() == Pattern::Kind::SeqWild) return true;
  for (const auto& c : p.children()) {
    if (has_wildcard(c)) return true;
  }
  return false;
}

}  // namespace

void for_each_subterm(const Term& t, const std::function<void(const TermPath&, const Term&)>& fn) {
  TermPath path;
  walk(t, path, fn);
}

std::vector<VisitHit> visit_collect(const Term& t, const Pattern& p) {
  std::vector<VisitHit> hits;
  auto type = pattern_type(p);
  for_each_subterm(t, [&](const TermPath& path, const Term& sub) {
    if (type ? !term_has_type(sub, *type) : false) return;
    try {
      if (auto env = match_first(p, sub)) hits.push_back({path, std::move(*env)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PatternTypeMismatch) throw;
    }
  });
  return hits;
}

Rewriter::Rewriter(std::vector<RewriteRule> rules) : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& r = rules_[i];
    std::string where = "rule " + std::to_string(i) + ": ";
    if (has_wildcard(r.rhs)) throw Error(ErrorCode::IllTypedRule, where + "right side contains a wildcard");
    auto bound = pattern_variables(r.lhs);
    for (const auto& [name, is_seq] : pattern_variables(r.rhs)) {
      bool ok = false;
      for (const auto& [n, s] : bound) ok = ok || (n == name && s == is_seq);
      if (!ok) throw Error(ErrorCode::IllTypedRule, where + "variable " + name + " is not bound by the left side");
    }
    auto lt = pattern_type(r.lhs);
    auto rt = pattern_type(r.rhs);
    if (!lt || !rt || !(*lt == *rt)) {
      throw Error(ErrorCode::IllTypedRule, where + "left and right sides have different types");
    }
  }
}

Term Rewriter::rewrite_node(const Term& t) const {
  for (const auto& r : rules_) {
    if (!term_has_type(t, *pattern_type(r.lhs))) continue;
    if (auto env = match_first(r.lhs, t)) return instantiate(r.rhs, *env);
  }
  return t;
}

Term Rewriter::apply(const Term& t) const {
  if (rules_.empty()) return t;
  Term node = t;
  if (!t.children().empty()) {
    std::vector<Term> kids;
    kids.reserve(t.children().size());
    bool changed = false;
    for (const auto& c : t.children()) {
      kids.push_back(apply(c));
      changed = changed || !kids.back().same_node(c);
    }
    if (changed) {
      node = t.is_list() ? Term::list(std::move(kids), t.element_type())
                         : Term::con(t.name(), t.type(), std::move(kids));
    }
  }
  return rewrite_node(node);
}

Term visit_rewrite(const Term& t, std::vector<RewriteRule> rules) { return Rewriter(std::move(rules)).apply(t); }

}  // namespace csbb
