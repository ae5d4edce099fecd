#include "csbb/registry.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csbb/error.hpp"
#include "csbb/json_binding.hpp"
#include "csbb/subprocess.hpp"

namespace csbb {

ParserRegistry::Builder& ParserRegistry::Builder::add(std::string nonterminal, ParseFunction parse,
                                                      std::shared_ptr<const Signature> signature,
                                                      std::optional<HoleEncoder> hole) {
  if (!parse) throw Error(ErrorCode::ConfigError, "empty parse function for " + nonterminal);
  if (!signature || !signature->has_type(nonterminal)) {
    throw Error(ErrorCode::ConfigError, "signature does not declare type " + nonterminal);
  }
  entries_[std::move(nonterminal)] = Entry{std::move(parse), std::move(signature), std::move(hole)};
  return *this;
}

ParserRegistry::Builder& ParserRegistry::Builder::add_hole(std::string nonterminal, HoleEncoder hole) {
  auto it = entries_.find(nonterminal);
  if (it == entries_.end()) {
    throw Error(ErrorCode::ConfigError, "hole encoder for " + nonterminal + " requires a parser for " + nonterminal);
  }
  it->second.hole = std::move(hole);
  return *this;
}

ParserRegistry ParserRegistry::Builder::build() {
  ParserRegistry reg;
  reg.entries_ = std::move(entries_);
  entries_.clear();
  return reg;
}

bool ParserRegistry::serves(std::string_view nonterminal) const { return entries_.find(nonterminal) != entries_.end(); }

bool ParserRegistry::has_hole_encoder(std::string_view nonterminal) const {
  auto it = entries_.find(nonterminal);
  return it != entries_.end() && it->second.hole.has_value();
}

std::vector<std::string> ParserRegistry::nonterminals() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

const ParserRegistry::Builder::Entry& ParserRegistry::entry(std::string_view nonterminal) const {
  auto it = entries_.find(nonterminal);
  if (it == entries_.end()) throw Error(ErrorCode::NoParser, "no parser registered for " + std::string(nonterminal));
  return it->second;
}

const Signature& ParserRegistry::signature(std::string_view nonterminal) const {
  return *entry(nonterminal).signature;
}

Term ParserRegistry::parse(std::string_view nonterminal, std::string_view text) const {
  const auto& e = entry(nonterminal);
  Term t = e.parse(text);
  auto errors = check_term(*e.signature, t, ArgType::adt(std::string(nonterminal)));
  if (!errors.empty()) {
    throw Error(ErrorCode::IllTypedParserOutput, "parser output for " + std::string(nonterminal) + " at " +
                                                     format_path(errors[0].path) + ": " + errors[0].message);
  }
  return t;
}

std::string ParserRegistry::encode_hole(std::string_view nonterminal, std::size_t index) const {
  auto it = entries_.find(nonterminal);
  if (it == entries_.end() || !it->second.hole) {
    throw Error::at_hole(ErrorCode::NoHoleEncoder, index, "no hole encoder for " + std::string(nonterminal));
  }
  return (*it->second.hole)(index);
}

std::string substitute(std::string_view tmpl, std::string_view name, std::string_view value) {
  std::string key = "{" + std::string(name) + "}";
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto hit = tmpl.find(key, pos);
    if (hit == std::string_view::npos) break;
    out.append(tmpl.substr(pos, hit - pos));
    out.append(value);
    pos = hit + key.size();
  }
  out.append(tmpl.substr(pos));
  return out;
}

Term project(const Term& t, const std::vector<std::size_t>& path) {
  Term cur = t;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= cur.children().size()) {
      throw Error(ErrorCode::ParserError, "context projection step " + std::to_string(i) + " (child " +
                                              std::to_string(path[i]) + ") does not exist in " + to_string(cur));
    }
    Term next = cur.children()[path[i]];
    cur = next;
  }
  return cur;
}

ParserRegistry default_registry() {
  ParserRegistry::Builder b;
  json::register_binding(b);
  return b.build();
}

// ---------------------------------------------------------------------------
// Configuration documents

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t offset_of(std::string_view text, SourcePos pos) {
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size() && line < pos.line) {
    if (text[i++] == '\n') ++line;
  }
  return i + pos.column - 1;
}

/// Parses `body` by embedding it into `tmpl` at `{body}`, parsing the whole
/// text as `outer`, and projecting along `path`. Error positions are mapped
/// back into `body` where they fall inside it.
ParseFunction wrap_in_context(ParseFunction outer, std::string tmpl, std::vector<std::size_t> path) {
  return [outer = std::move(outer), tmpl = std::move(tmpl), path = std::move(path)](std::string_view body) {
    std::size_t prefix = tmpl.find("{body}");
    std::string text = substitute(tmpl, "body", body);
    Term whole = [&] {
      try {
        return outer(text);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ParserError || !e.pos() || prefix == std::string::npos) throw;
        std::size_t off = offset_of(text, *e.pos());
        if (off < prefix) throw;
        std::size_t inner = std::min(off - prefix, body.size());
        throw Error(ErrorCode::ParserError, e.detail(), position_of(body, inner));
      }
    }();
    return project(whole, path);
  };
}

std::vector<std::size_t> index_path(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, where + ": project must be an array of indices");
  std::vector<std::size_t> out;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw Error(ErrorCode::ConfigError, where + ": project must hold non-negative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

}  // namespace

ParserRegistry load_registry_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("registry config: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nonterminals") || !doc["nonterminals"].is_object()) {
    throw Error(ErrorCode::ConfigError, "registry config needs an object \"nonterminals\"");
  }

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() ? (base_dir / path).lexically_normal() : path;
  };

  struct Pending {
    std::string nonterminal;
    nlohmann::json spec;
  };
  std::map<std::string, std::shared_ptr<SubprocessParser>> children;
  std::map<std::string, std::shared_ptr<const Signature>> signatures;
  std::map<std::string, std::vector<std::string>> served;
  std::vector<Pending> pending;

  // First pass: group nonterminals by command so one child serves them all.
  for (const auto& [nt, spec] : doc["nonterminals"].items()) {
    if (!spec.is_object()) throw Error(ErrorCode::ConfigError, nt + ": entry must be an object");
    if (spec.contains("command")) {
      const auto& cmd = spec["command"];
      if (!cmd.is_array() || cmd.empty()) throw Error(ErrorCode::ConfigError, nt + ": command must be a non-empty array");
      std::string key = cmd.dump();
      std::string request_nt = nt;
      if (spec.contains("wrap")) request_nt = spec["wrap"].value("nonterminal", nt);
      served[key].push_back(request_nt);
    }
    pending.push_back({nt, spec});
  }

  ParserRegistry::Builder builder;
  for (const auto& [nt, spec] : pending) {
    try {
      if (spec.contains("builtin")) {
        if (spec["builtin"] != "json") {
          throw Error(ErrorCode::ConfigError, nt + ": unknown builtin " + spec["builtin"].dump());
        }
        if (nt == "JSON") {
          builder.add("JSON", json::parse_json, json::signature(), json::json_hole);
        } else if (nt == "Prop") {
          builder.add("Prop", json::parse_prop, json::signature(), json::prop_hole);
        } else {
          throw Error(ErrorCode::ConfigError, nt + ": builtin json serves JSON and Prop only");
        }
        if (spec.contains("hole")) {
          std::string tmpl = spec["hole"].get<std::string>();
          builder.add_hole(nt, [tmpl](std::size_t i) { return substitute(tmpl, "id", std::to_string(i)); });
        }
        continue;
      }
      if (!spec.contains("command")) throw Error(ErrorCode::ConfigError, nt + ": needs \"builtin\" or \"command\"");
      if (!spec.contains("signature") || !spec["signature"].is_string()) {
        throw Error(ErrorCode::ConfigError, nt + ": command entries need a \"signature\" path");
      }
      std::string sig_path = resolve(spec["signature"].get<std::string>()).string();
      auto& sig = signatures[sig_path];
      if (!sig) {
        try {
          sig = std::make_shared<const Signature>(parse_signature(read_file(sig_path)));
        } catch (const Error& e) {
          throw Error(ErrorCode::ConfigError, sig_path + ": " + e.what());
        }
      }

      std::string key = spec["command"].dump();
      auto& child = children[key];
      if (!child) {
        std::vector<std::string> argv;
        for (const auto& a : spec["command"]) argv.push_back(a.get<std::string>());
        if (argv[0].find('/') != std::string::npos) argv[0] = resolve(argv[0]).string();
        child = std::make_shared<SubprocessParser>(SubprocessConfig{argv, served[key], sig});
      }

      ParseFunction fn;
      if (spec.contains("wrap")) {
        const auto& w = spec["wrap"];
        if (!w.is_object() || !w.contains("template") || !w["template"].is_string()) {
          throw Error(ErrorCode::ConfigError, nt + ": wrap needs a \"template\" string");
        }
        std::string outer_nt = w.value("nonterminal", nt);
        std::vector<std::size_t> path = w.contains("project") ? index_path(w["project"], nt) : std::vector<std::size_t>{};
        fn = wrap_in_context(subprocess_parser(child, outer_nt), w["template"].get<std::string>(), std::move(path));
      } else {
        fn = subprocess_parser(child, nt);
      }
      std::optional<HoleEncoder> hole;
      if (spec.contains("hole")) {
        if (!spec["hole"].is_string()) throw Error(ErrorCode::ConfigError, nt + ": hole must be a template string");
        std::string tmpl = spec["hole"].get<std::string>();
        hole = [tmpl](std::size_t i) { return substitute(tmpl, "id", std::to_string(i)); };
      }
      builder.add(nt, std::move(fn), sig, std::move(hole));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError, nt + ": " + e.what());
    }
  }
  return builder.build();
}

ParserRegistry load_registry_config(const std::filesystem::path& path) {
  std::string text = read_file(path);
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return load_registry_config_text(text, base);
}

}  // namespace csbb
