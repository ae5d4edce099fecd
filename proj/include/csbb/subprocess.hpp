#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "csbb/registry.hpp"
#include "csbb/signature.hpp"
#include "csbb/term.hpp"

namespace csbb {

struct SubprocessConfig {
  std::vector<std::string> argv;
  std::vector<std::string> nonterminals;
  std::shared_ptr<const Signature> signature;
};

/// An out-of-process parser spoken to over its standard streams, one JSON
/// message per line:
///   request   {"nonterminal": "Stm", "text": "while (x) { }"}
///   response  {"ok": true, "term": <wire term>}
///             {"ok": false, "line": 1, "col": 4, "message": "..."}
/// The child is started on first use. Exchanges are serialized; concurrent
/// callers queue on an internal mutex.
class SubprocessParser {
 public:
  explicit SubprocessParser(SubprocessConfig config);
  ~SubprocessParser();

  SubprocessParser(const SubprocessParser&) = delete;
  SubprocessParser& operator=(const SubprocessParser&) = delete;

  const SubprocessConfig& config() const noexcept { return config_; }

  /// Throws ChildSpawnError, ProtocolError, ParserError (child-reported
  /// syntax error) or IllTypedParserOutput.
  Term parse(std::string_view nonterminal, std::string_view text);

 private:
  void spawn();
  void shutdown();
  void write_line(const std::string& line);
  std::string read_line();

  SubprocessConfig config_;
  std::mutex mutex_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// Parse function for one nonterminal served by `parser`.
ParseFunction subprocess_parser(std::shared_ptr<SubprocessParser> parser, std::string nonterminal);

}  // namespace csbb
