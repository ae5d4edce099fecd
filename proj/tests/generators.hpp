// Seeded random generators for property tests.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "csbb/json_binding.hpp"
#include "csbb/pattern.hpp"
#include "csbb/term.hpp"

namespace gen {

using csbb::ArgType;
using csbb::Pattern;
using csbb::Term;

using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_string(Rng& rng) {
  static const std::vector<std::string> pool = {"a", "b", "z", " ", "\"", "\\", "\n", "\t", "<", "{", "}", ":", ",", "\xc3\xa9", "\xe2\x82\xac", "0"};
  std::string s;
  for (std::size_t n = below(rng, 6); n > 0; --n) s += pool[below(rng, pool.size())];
  return s;
}

inline double random_number(Rng& rng) {
  static const std::vector<double> pool = {0.0, 1.0, -1.0, 29.0, 0.1, 2.5, -3.75, 1e21, 1.5e-7, 123456789.0, 0.3};
  return pool[below(rng, pool.size())];
}

inline std::string random_key(Rng& rng) {
  static const std::vector<std::string> keys = {"name", "age", "id", "x", "_y", "value", "with space", "na\"me"};
  return keys[below(rng, keys.size())];
}

inline Term random_json(Rng& rng, int depth);

inline Term random_prop(Rng& rng, int depth) { return csbb::json::prop(random_key(rng), random_json(rng, depth)); }

inline Term random_json(Rng& rng, int depth) {
  std::size_t pick = below(rng, depth > 0 ? 6 : 4);
  switch (pick) {
    case 0: return csbb::json::number(random_number(rng));
    case 1: return csbb::json::string(random_string(rng));
    case 2: return csbb::json::boolean(coin(rng, 0.5));
    case 3: return csbb::json::null();
    case 4: {
      std::vector<Term> elems;
      for (std::size_t n = below(rng, 4); n > 0; --n) elems.push_back(random_json(rng, depth - 1));
      return csbb::json::array(elems);
    }
    default: {
      std::vector<Term> props;
      for (std::size_t n = below(rng, 4); n > 0; --n) props.push_back(random_prop(rng, depth - 1));
      return csbb::json::object(props);
    }
  }
}

/// A JSON object with at most `max_props` properties; about half carry a
/// `name` key.
inline Term random_object(Rng& rng, std::size_t max_props) {
  std::vector<Term> props;
  for (std::size_t n = below(rng, max_props + 1); n > 0; --n) props.push_back(random_prop(rng, 2));
  return csbb::json::object(props);
}

/// Derives a wildcard-free pattern from `t` by replacing random subtrees with
/// typed variables and random list slices with sequence variables. Names are
/// fresh, so the pattern always matches `t`.
class PatternDeriver {
 public:
  explicit PatternDeriver(Rng& rng) : rng_(rng) {}

  Pattern derive(const Term& t) {
    auto type = csbb::type_of(t);
    if (type && coin(rng_, 0.2)) return Pattern::var(fresh(), *type);
    if (t.is_prim()) return Pattern::lit(t);
    if (t.is_con()) {
      std::vector<Pattern> args;
      for (const auto& c : t.children()) args.push_back(derive(c));
      return Pattern::con(t.name(), t.type(), args);
    }
    std::vector<Pattern> elems;
    const auto& kids = t.children();
    std::size_t i = 0;
    while (i <= kids.size()) {
      if (coin(rng_, 0.25)) {
        std::size_t len = below(rng_, kids.size() - i + 1);
        elems.push_back(Pattern::seq_var(fresh(), t.element_type()));
        i += len;
        if (len == 0 && i == kids.size()) break;
        continue;
      }
      if (i == kids.size()) break;
      elems.push_back(derive(kids[i]));
      ++i;
    }
    return Pattern::list(elems, t.element_type());
  }

 private:
  std::string fresh() { return "v" + std::to_string(counter_++); }

  Rng& rng_;
  std::size_t counter_ = 0;
};

}  // namespace gen
