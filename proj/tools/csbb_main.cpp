// csbb: match and construct syntax trees with concrete patterns, and compile
// tympanic mappings.
//
// Exit codes:
//   0 success              1 no match
//   2 syntax, parse, pattern or binding error
//   3 configuration error (registry, unknown nonterminal, broken parser child)
//   4 hole captured        5 tympanic diagnostics
//   6 marshalling failure
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "csbb/concretely.hpp"
#include "csbb/error.hpp"
#include "csbb/registry.hpp"
#include "csbb/term_text.hpp"
#include "csbb/tympanic.hpp"
#include "csbb/wire.hpp"

namespace {

using namespace csbb;

struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "csbb: cannot read " << path << "\n";
    throw Exit{2};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::NoParser:
    case ErrorCode::ChildSpawnError:
    case ErrorCode::ProtocolError:
    case ErrorCode::IllTypedParserOutput:
    case ErrorCode::NoHoleEncoder:
    case ErrorCode::EncoderImageUnparseable:
    case ErrorCode::NonInjectiveEncoder: return 3;
    case ErrorCode::HoleCaptured: return 4;
    case ErrorCode::UnknownForeignType:
    case ErrorCode::UnmappedForeignType:
    case ErrorCode::UnknownMember:
    case ErrorCode::ArityMismatch:
    case ErrorCode::UnsupportedInlineValue:
    case ErrorCode::AmbiguousAdt:
    case ErrorCode::InvalidSignature:
    case ErrorCode::UnreachableRule:
    case ErrorCode::UncoveredAbstractType: return 5;
    case ErrorCode::NoApplicableRule:
    case ErrorCode::NullNotOptional:
    case ErrorCode::CastFailure: return 6;
    default: return 2;
  }
}

struct Options {
  std::string config;
  std::string lang;
  std::string text, file;
  std::string pattern, pattern_file;
  std::string input, input_text;
  std::string out = "pretty";
  bool all = false;
  bool lenient = false;
  std::vector<std::string> binds;
  std::string bindings_file;
  std::string spec, schema, value, out_file;
};

ParserRegistry load_registry(const Options& o) {
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("CSBB_CONFIG")) path = env;
  }
  return path.empty() ? default_registry() : load_registry_config(path);
}

std::string render(const Term& t, const std::string& out) { return out == "term" ? encode_term(t) : to_string(t); }

std::string pattern_text(const Options& o) { return o.pattern_file.empty() ? o.pattern : read_file(o.pattern_file); }

// Strips one trailing newline so files written by editors work as fragments.
std::string chomp(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

int cmd_parse(const Options& o) {
  ParserRegistry reg = load_registry(o);
  std::string text = o.file.empty() ? o.text : chomp(read_file(o.file));
  std::cout << render(parse_term(o.lang, text, reg), o.out) << "\n";
  return 0;
}

void print_env(const Env& env) {
  for (const auto& [name, value] : env) std::cout << name << " = " << to_string(value) << "\n";
}

int cmd_match(const Options& o) {
  ParserRegistry reg = load_registry(o);
  Pattern p = to_pattern(o.lang, chomp(pattern_text(o)), reg, o.lenient ? CaptureMode::Lenient : CaptureMode::Strict);
  std::string input = o.input.empty() ? o.input_text : chomp(read_file(o.input));
  Term t = parse_term(o.lang, input, reg);
  if (!o.all) {
    auto env = match_first(p, t);
    if (!env) return 1;
    print_env(*env);
    return 0;
  }
  bool any = false;
  match_each(p, t, [&](const Env& env) {
    if (any) std::cout << "\n";
    any = true;
    print_env(env);
    return true;
  });
  return any ? 0 : 1;
}

// Declared type of every variable in `p` (element type for sequence variables).
void variable_types(const Pattern& p, std::map<std::string, std::pair<ArgType, bool>>& out) {
  switch (p.kind()) {
    case Pattern::Kind::Var:
    case Pattern::Kind::SeqVar:
      out.emplace(p.name(), std::make_pair(p.arg_type(), p.kind() == Pattern::Kind::SeqVar));
      return;
    default:
      for (const auto& c : p.children()) variable_types(c, out);
  }
}

int cmd_construct(const Options& o) {
  ParserRegistry reg = load_registry(o);
  Pattern p = to_pattern(o.lang, chomp(pattern_text(o)), reg);
  std::map<std::string, std::pair<ArgType, bool>> vars;
  variable_types(p, vars);

  std::vector<std::pair<std::string, std::string>> raw;  // name, term text
  if (!o.bindings_file.empty()) {
    std::istringstream in(read_file(o.bindings_file));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) break;  // first env only
      auto eq = line.find(" = ");
      if (eq == std::string::npos) throw Error(ErrorCode::TermSyntax, "binding line without ' = ': " + line);
      raw.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
  }
  for (const auto& b : o.binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::TermSyntax, "--bind expects name=file, got " + b);
    raw.emplace_back(b.substr(0, eq), chomp(read_file(b.substr(eq + 1))));
  }

  Env env;
  for (const auto& [name, text] : raw) {
    auto it = vars.find(name);
    if (it == vars.end()) throw Error(ErrorCode::UnboundVariable, "pattern has no variable " + name);
    const auto& [type, seq] = it->second;
    const Signature& sig = type.is_adt() && reg.serves(type.adt_name()) ? reg.signature(type.adt_name())
                                                                         : reg.signature(o.lang);
    if (seq) {
      env.insert_or_assign(name, read_any_term(text, sig, ArgType::list(type)).children());
    } else {
      env.insert_or_assign(name, read_any_term(text, sig, type));
    }
  }
  std::cout << render(instantiate(p, env), o.out) << "\n";
  return 0;
}

void emit(const Options& o, const std::string& text) {
  if (o.out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out_file, std::ios::binary);
  if (!out) {
    std::cerr << "csbb: cannot write " << o.out_file << "\n";
    throw Exit{2};
  }
  out << text;
}

int cmd_tympanic(const std::string& action, const Options& o) {
  tympanic::TympanicSpec spec = tympanic::parse_tympanic(read_file(o.spec));
  tympanic::ForeignSchema schema = tympanic::parse_schema(read_file(o.schema));
  if (action == "check") {
    auto diags = tympanic::check_spec(spec, schema);
    std::string text;
    for (const auto& d : diags) text += o.spec + ":" + tympanic::to_string(d) + "\n";
    emit(o, text);
    return diags.empty() ? 0 : 5;
  }
  if (action == "gen-adt") {
    emit(o, tympanic::infer_signature(spec, schema).module_text);
    return 0;
  }
  tympanic::Marshaller m(std::move(spec), std::move(schema));
  tympanic::ForeignValue v = tympanic::parse_foreign_value(read_file(o.value));
  emit(o, render(m.marshal(v), o.out) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concrete syntax patterns over black-box parsers"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Registry configuration file (default: $CSBB_CONFIG, else JSON only)");

  auto* parse = app.add_subcommand("parse", "Parse object-language text into a term");
  parse->add_option("--lang", o.lang, "Nonterminal")->required();
  auto* text = parse->add_option("--text", o.text, "Text to parse");
  auto* file = parse->add_option("--file", o.file, "File to parse");
  text->excludes(file);
  parse->add_option("--out", o.out, "Output form")->check(CLI::IsMember({"term", "pretty"}));

  auto add_pattern = [&](CLI::App* cmd) {
    cmd->add_option("--lang", o.lang, "Nonterminal of the pattern")->required();
    auto* p = cmd->add_option("--pattern", o.pattern, "Concrete pattern with <Type name> holes");
    auto* pf = cmd->add_option("--pattern-file", o.pattern_file, "File holding the pattern");
    p->excludes(pf);
  };

  auto* match = app.add_subcommand("match", "Match a concrete pattern against input text");
  add_pattern(match);
  auto* input = match->add_option("--input", o.input, "File holding the subject text");
  auto* input_text = match->add_option("--input-text", o.input_text, "Subject text");
  input->excludes(input_text);
  match->add_flag("--all", o.all, "Print every match, separated by blank lines");
  match->add_flag("--lenient", o.lenient, "Turn captured hole encodings into non-linear matches");

  auto* construct = app.add_subcommand("construct", "Instantiate a concrete pattern");
  add_pattern(construct);
  construct->add_option("--bind", o.binds, "name=file: bind a variable to the term stored in file");
  construct->add_option("--bindings", o.bindings_file, "File in the output format of match");
  construct->add_option("--out", o.out, "Output form")->check(CLI::IsMember({"term", "pretty"}));

  auto* tymp = app.add_subcommand("tympanic", "Compile and run foreign AST mappings");
  tymp->require_subcommand(1);
  std::string action;
  for (const char* name : {"check", "gen-adt", "marshal"}) {
    auto* sub = tymp->add_subcommand(name, name == std::string("check")     ? "Report diagnostics"
                                           : name == std::string("gen-adt") ? "Print the inferred module"
                                                                            : "Marshal a foreign value");
    sub->add_option("--spec", o.spec, "Mapping specification")->required();
    sub->add_option("--schema", o.schema, "Foreign schema")->required();
    sub->add_option("--out", o.out_file, "Write output to this file");
    if (name == std::string("marshal")) {
      sub->add_option("--value", o.value, "Foreign value file")->required();
      sub->add_option("--format", o.out, "Term form")->check(CLI::IsMember({"term", "pretty"}));
    }
    sub->callback([&action, name] { action = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*parse) {
      if (!*text && !*file) throw CLI::RequiredError("--text or --file");
      return cmd_parse(o);
    }
    if (*match) {
      if (o.pattern.empty() && o.pattern_file.empty()) throw CLI::RequiredError("--pattern or --pattern-file");
      if (!*input && !*input_text) throw CLI::RequiredError("--input or --input-text");
      return cmd_match(o);
    }
    if (*construct) {
      if (o.pattern.empty() && o.pattern_file.empty()) throw CLI::RequiredError("--pattern or --pattern-file");
      return cmd_construct(o);
    }
    return cmd_tympanic(action, o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "csbb: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "csbb: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const Exit& e) {
    return e.code;
  }
}
