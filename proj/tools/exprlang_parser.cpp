// Demo black-box parser for ExprLang. Reads one JSON request per line from
// stdin and answers with one JSON response per line on stdout.
#include <iostream>
#include <string>

#include <json.hpp>

#include "csbb/error.hpp"
#include "csbb/exprlang.hpp"
#include "csbb/wire.hpp"

namespace {

nlohmann::json failure(std::size_t line, std::size_t col, const std::string& message) {
  return {{"ok", false}, {"line", line}, {"col", col}, {"message", message}};
}

nlohmann::json handle(const std::string& line) {
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    return failure(0, 0, std::string("malformed request: ") + e.what());
  }
  if (!req.is_object() || !req.contains("nonterminal") || !req["nonterminal"].is_string() || !req.contains("text") ||
      !req["text"].is_string()) {
    return failure(0, 0, "request needs string fields \"nonterminal\" and \"text\"");
  }
  try {
    csbb::Term t = csbb::exprlang::parse(req["nonterminal"].get<std::string>(), req["text"].get<std::string>());
    return {{"ok", true}, {"term", nlohmann::json::parse(csbb::encode_term(t))}};
  } catch (const csbb::Error& e) {
    csbb::SourcePos pos = e.pos().value_or(csbb::SourcePos{});
    return failure(pos.line, pos.column, e.detail());
  }
}

}  // namespace

int main() {
  std::ios::sync_with_stdio(false);
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::cout << handle(line).dump() << '\n' << std::flush;
  }
  return 0;
}
