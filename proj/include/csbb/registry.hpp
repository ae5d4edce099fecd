#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csbb/signature.hpp"
#include "csbb/term.hpp"

namespace csbb {

/// Black-box parse entry point for one nonterminal. Throws Error with code
/// ParserError (carrying a position) on syntax errors.
using ParseFunction = std::function<Term(std::string_view)>;
/// Object-language text standing in for hole `index`.
using HoleEncoder = std::function<std::string(std::size_t index)>;

/// Per-nonterminal parse functions and hole encoders. Immutable once built;
/// a hole encoder is only accepted alongside a parser for the same
/// nonterminal.
class ParserRegistry {
 public:
  class Builder {
   public:
    Builder& add(std::string nonterminal, ParseFunction parse, std::shared_ptr<const Signature> signature,
                 std::optional<HoleEncoder> hole = std::nullopt);
    /// Throws ConfigError when a hole encoder lacks a parser.
    Builder& add_hole(std::string nonterminal, HoleEncoder hole);
    ParserRegistry build();

   private:
    friend class ParserRegistry;
    struct Entry {
      ParseFunction parse;
      std::shared_ptr<const Signature> signature;
      std::optional<HoleEncoder> hole;
    };
    std::map<std::string, Entry, std::less<>> entries_;
  };

  ParserRegistry() = default;

  bool serves(std::string_view nonterminal) const;
  bool has_hole_encoder(std::string_view nonterminal) const;
  std::vector<std::string> nonterminals() const;
  const Signature& signature(std::string_view nonterminal) const;

  /// Runs the parser and checks its output at adt(nonterminal). Throws
  /// NoParser, ParserError or IllTypedParserOutput.
  Term parse(std::string_view nonterminal, std::string_view text) const;
  /// Throws NoHoleEncoder.
  std::string encode_hole(std::string_view nonterminal, std::size_t index) const;

 private:
  const Builder::Entry& entry(std::string_view nonterminal) const;
  std::map<std::string, Builder::Entry, std::less<>> entries_;
};

/// Replaces every `{name}` in `tmpl` by `value`.
std::string substitute(std::string_view tmpl, std::string_view name, std::string_view value);

/// Follows child indices (constructor arguments, list elements) from `t`.
/// Throws ParserError when the path does not exist.
Term project(const Term& t, const std::vector<std::size_t>& path);

/// Registry with the built-in JSON binding only (nonterminals JSON, Prop).
ParserRegistry default_registry();

/// Reads a registry configuration document:
///   {"nonterminals": {
///      "JSON": {"builtin": "json"},
///      "Stm":  {"command": ["exprlang-parser"], "signature": "exprlang.sig",
///               "hole": "_hole{id};",
///               "wrap": {"template": "void dummy() { {body} }",
///                        "nonterminal": "Program", "project": [0, 0, 1, 0, 0]}}}}
/// Relative signature paths and command paths containing `/` resolve against
/// the document's directory. Entries with the same command share one child
/// process. Throws ConfigError.
ParserRegistry load_registry_config(const std::filesystem::path& path);
ParserRegistry load_registry_config_text(std::string_view text, const std::filesystem::path& base_dir);

}  // namespace csbb
