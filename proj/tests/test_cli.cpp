#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("csbb_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

// Runs the CLI with `args` (already shell-quoted where needed).
Run cli(const std::string& args, const std::string& env = "") {
  fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  std::string cmd = "env -u CSBB_CONFIG " + env + " " + quote(CSBB_CLI) + " " + args + " >" + quote(out) + " 2>" + quote(err);
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(out), read(err)};
}

std::string data(const std::string& name) { return quote(support::data_path(name)); }

}  // namespace

TEST_CASE("cli parse") {
  auto r = cli("parse --lang JSON --text 29");
  CHECK(r.code == 0);
  CHECK(r.out == "number(29.0)\n");
  r = cli("parse --lang JSON --text 29 --out term");
  CHECK(r.out == "{\"con\":\"number\",\"type\":\"JSON\",\"args\":[{\"real\":29.0}]}\n");
  r = cli("parse --lang JSON --file " + data("rodin.json"));
  CHECK(r.out == "object([prop(id(\"name\"), string(\"Rodin\")), prop(id(\"age\"), number(29.0))])\n");
  r = cli("parse --lang JSON --text '[1,'");
  CHECK(r.code == 2);
  CHECK(r.err.find("ParserError") != std::string::npos);
  CHECK(cli("parse --lang Stm --text 'x;'").code == 3);
  CHECK(cli("parse --lang JSON --file /nonexistent/x.json").code == 2);
  CHECK(cli("parse --lang JSON").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("cli construct and match") {
  write("age.term", "number(29.0)\n");
  auto r = cli("construct --lang JSON --pattern '{name:\"Rodin\",age:<JSON age>}' --bind age=" +
                quote((scratch() / "age.term").string()));
  CHECK(r.code == 0);
  CHECK(r.out == "object([prop(id(\"name\"), string(\"Rodin\")), prop(id(\"age\"), number(29.0))])\n");

  r = cli("match --lang JSON --pattern '{<Prop* _>, name: <JSON n>, <Prop* _>}' --input " + data("rodin.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "n = string(\"Rodin\")\n");

  r = cli("match --lang JSON --pattern '{<Prop* _>, name: <JSON n>, <Prop* _>}' --input-text '{age: 1}'");
  CHECK(r.code == 1);
  CHECK(r.out.empty());

  r = cli("match --lang JSON --all --pattern '[<JSON* a>, <JSON* b>]' --input-text '[1]'");
  CHECK(r.code == 0);
  CHECK(r.out == "a = []\nb = [number(1.0)]\n\na = [number(1.0)]\nb = []\n");

  // match output feeds construct
  r = cli("match --lang JSON --pattern '[<JSON x>, <JSON* rest>]' --input-text '[1, 2, 3]'");
  write("env.txt", r.out);
  r = cli("construct --lang JSON --pattern '[<JSON* rest>, <JSON x>]' --bindings " +
           quote((scratch() / "env.txt").string()));
  CHECK(r.code == 0);
  CHECK(r.out == "array([number(2.0), number(3.0), number(1.0)])\n");

  CHECK(cli("construct --lang JSON --pattern '[<JSON x>]'").code == 2);
  CHECK(cli("match --lang JSON --pattern '[<JSON x>, {_hole: 0}]' --input-text '[1, 1]'").code == 4);
  r = cli("match --lang JSON --lenient --pattern '[<JSON x>, {_hole: 0}]' --input-text '[1, 1]'");
  CHECK(r.code == 0);
  CHECK(r.out == "x = number(1.0)\n");
  CHECK(cli("match --lang JSON --lenient --pattern '[<JSON x>, {_hole: 0}]' --input-text '[1, 2]'").code == 1);
}

TEST_CASE("cli with a subprocess registry") {
  std::string config = quote(CSBB_EXPRLANG_CONFIG);
  auto r = cli("--config " + config + " parse --lang Stm --text 'while (x) { y; }'");
  CHECK(r.code == 0);
  CHECK(r.out == "whileStm(varRef(\"x\"), [exprStm(varRef(\"y\"))])\n");

  r = cli("match --lang Stm --pattern 'while (x) { <Stm* body> }' --input-text 'while (x) { 1; y; }'",
           "CSBB_CONFIG=" + config);
  CHECK(r.code == 0);
  CHECK(r.out == "body = [exprStm(intLit(1)), exprStm(varRef(\"y\"))]\n");

  r = cli("--config " + config + " parse --lang Stm --text 'while (x) { y }'");
  CHECK(r.code == 2);
  write("broken.json", "{\"nonterminals\": {\"Stm\": {\"command\": [\"/nonexistent/parser\"], \"signature\": \"" +
                           support::data_path("exprlang.sig") + "\"}}}");
  CHECK(cli("--config " + quote((scratch() / "broken.json").string()) + " parse --lang Stm --text 'x;'").code == 3);
  CHECK(cli("--config /nonexistent/config.json parse --lang JSON --text 1").code == 3);
}

TEST_CASE("cli tympanic") {
  std::string args = "--spec " + data("fig6.tymp") + " --schema " + data("expr.schema.json");
  auto r = cli("tympanic check " + args);
  CHECK(r.code == 0);
  CHECK(r.out.empty());

  fs::path module = scratch() / "Expr.rsc";
  r = cli("tympanic gen-adt " + args + " --out " + quote(module.string()));
  CHECK(r.code == 0);
  CHECK(read(module).rfind("module expr::Expr\n", 0) == 0);

  r = cli("tympanic marshal " + args + " --value " + data("values/add_1_2.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "add(integer(1), integer(2))\n");
  r = cli("tympanic marshal " + args + " --value " + data("values/add_1_2.json") + " --format term");
  CHECK(r.out.rfind("{\"con\":\"add\",\"type\":\"Expr\"", 0) == 0);
  r = cli("tympanic marshal " + args + " --value " + data("values/lit_real.json"));
  CHECK(r.code == 6);
  CHECK(r.err.find("NoApplicableRule") != std::string::npos);

  std::string bad = read(support::data_path("fig6.tymp"));
  bad.insert(bad.find("getElse != null"), "%");
  fs::path spec = write("bad.tymp", bad);
  r = cli("tympanic check --spec " + quote(spec.string()) + " --schema " + data("expr.schema.json"));
  CHECK(r.code == 5);
  CHECK(r.out.find(spec.string() + ":") == 0);
  CHECK(r.out.find("ArityMismatch") != std::string::npos);
  CHECK(cli("tympanic gen-adt --spec " + quote(spec.string()) + " --schema " + data("expr.schema.json")).code == 5);
  CHECK(cli("tympanic check --spec " + data("rodin.json") + " --schema " + data("expr.schema.json")).code == 2);
}
