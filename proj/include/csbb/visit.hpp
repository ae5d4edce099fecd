#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "csbb/pattern.hpp"
#include "csbb/term.hpp"

namespace csbb {

using TermPath = std::vector<std::size_t>;

/// Bottom-up, left-to-right walk over every subterm (constructor arguments
/// and list elements), the root last.
void for_each_subterm(const Term& t, const std::function<void(const TermPath&, const Term&)>& fn);

struct VisitHit {
  TermPath path;
  Env env;
};

/// Tries `p` against every subterm whose type matches p's, bottom-up and
/// left to right, recording the first env of each successful match.
std::vector<VisitHit> visit_collect(const Term& t, const Pattern& p);

struct RewriteRule {
  Pattern lhs;
  Pattern rhs;
};

/// Single bottom-up rewriting pass. At each node the first rule whose left
/// side matches fires once; rewritten nodes are not revisited.
class Rewriter {
 public:
  /// Throws IllTypedRule when a right side contains wildcards, uses a
  /// variable its left side does not bind, or the two sides disagree on type.
  explicit Rewriter(std::vector<RewriteRule> rules);

  Term apply(const Term& t) const;

 private:
  Term rewrite_node(const Term& t) const;
  std::vector<RewriteRule> rules_;
};

Term visit_rewrite(const Term& t, std::vector<RewriteRule> rules);

}  // namespace csbb
