#include "csbb/subprocess.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include <json.hpp>

#include "csbb/error.hpp"
#include "csbb/wire.hpp"

extern char** environ;

namespace csbb {

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

SubprocessParser::SubprocessParser(SubprocessConfig config) : config_(std::move(config)) {
  if (config_.argv.empty()) throw Error(ErrorCode::ChildSpawnError, "empty command");
  if (!config_.signature) throw Error(ErrorCode::ConfigError, "subprocess parser needs a signature");
}

SubprocessParser::~SubprocessParser() { shutdown(); }

void SubprocessParser::spawn() {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::ChildSpawnError, std::strerror(errno));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error(ErrorCode::ChildSpawnError, std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<char*> argv;
  for (auto& a : config_.argv) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    throw Error(ErrorCode::ChildSpawnError, "cannot start " + config_.argv[0] + ": " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void SubprocessParser::shutdown() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 100; ++i) {
      if (waitpid(pid_, &status, WNOHANG) != 0) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void SubprocessParser::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::ProtocolError, std::string("writing to parser failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SubprocessParser::read_line() {
  while (true) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::ProtocolError, std::string("reading from parser failed: ") + std::strerror(errno));
    }
    if (n == 0) throw Error(ErrorCode::ProtocolError, "parser closed its output before replying");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Term SubprocessParser::parse(std::string_view nonterminal, std::string_view text) {
  std::lock_guard lock(mutex_);
  if (!config_.nonterminals.empty() &&
      std::find(config_.nonterminals.begin(), config_.nonterminals.end(), nonterminal) == config_.nonterminals.end()) {
    throw Error(ErrorCode::ConfigError, config_.argv[0] + " does not serve " + std::string(nonterminal));
  }
  nlohmann::json request = {{"nonterminal", std::string(nonterminal)}, {"text", std::string(text)}};
  std::string line;
  try {
    if (pid_ < 0) spawn();
    write_line(request.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
    line = read_line();
  } catch (const Error&) {
    shutdown();
    throw;
  }

  nlohmann::json response;
  try {
    response = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    shutdown();
    throw Error(ErrorCode::ProtocolError, std::string("malformed response: ") + e.what());
  }
  if (!response.is_object() || !response.contains("ok") || !response["ok"].is_boolean()) {
    shutdown();
    throw Error(ErrorCode::ProtocolError, "response lacks boolean \"ok\"");
  }
  if (!response["ok"].get<bool>()) {
    SourcePos pos;
    std::string message = "syntax error";
    try {
      pos.line = response.at("line").get<std::size_t>();
      pos.column = response.at("col").get<std::size_t>();
      message = response.at("message").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ProtocolError, std::string("malformed error response: ") + e.what());
    }
    throw Error(ErrorCode::ParserError, message, pos);
  }
  if (!response.contains("term")) throw Error(ErrorCode::ProtocolError, "response lacks \"term\"");
  Term t = [&] {
    try {
      return term_from_json(response["term"], "/term");
    } catch (const Error& e) {
      throw Error(ErrorCode::ProtocolError, e.what());
    }
  }();
  auto errors = check_term(*config_.signature, t, ArgType::adt(std::string(nonterminal)));
  if (!errors.empty()) {
    throw Error(ErrorCode::IllTypedParserOutput,
                "parser output for " + std::string(nonterminal) + " at " + format_path(errors[0].path) + ": " +
                    errors[0].message);
  }
  return t;
}

ParseFunction subprocess_parser(std::shared_ptr<SubprocessParser> parser, std::string nonterminal) {
  return [parser = std::move(parser), nonterminal = std::move(nonterminal)](std::string_view text) {
    return parser->parse(nonterminal, text);
  };
}

}  // namespace csbb
