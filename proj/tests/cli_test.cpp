// End-to-end runs of the installed binary: pinned outputs, exit codes,
// config merging, and output routing.  SCHREIER_CLI_PATH comes from CMake.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SCHREIER_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) res.out += buf;
  const int st = pclose(pipe);
  res.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return res;
}

std::filesystem::path temp_file(const char* name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path, std::ios::trunc);
  f << body;
  return path;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the documented command lines answer byte for byte") {
  struct Pin {
    const char* args;
    const char* expect;
  };
  const Pin pins[] = {
      {R"x(family rank --no-meta --spec "schreier(w)" --set "[]")x",
       "{\n  \"rank\": \"w^(w)\"\n}\n"},
      {R"x(family member --no-meta --spec "schreier(1)" --set "[2,3]")x",
       "{\n  \"member\": true\n}\n"},
      {R"x(family derivative --no-meta --spec "schreier(2)" --set "[]" --rho "w^(2)")x",
       "{\n  \"in_derivative\": true\n}\n"},
      {R"x(norm tsirelson --no-meta --alpha 0 --vec "3:1,4:1,5:1")x",
       "{\n  \"value\": \"3/2\",\n  \"iterations\": 2\n}\n"},
      {R"x(norm tsirelson --no-meta --alpha 1 --vec "3:1,4:1,5:1")x",
       "{\n  \"value\": \"3\",\n  \"iterations\": 1\n}\n"},
      {R"x(norm tsirelson --no-meta --vec "")x",
       "{\n  \"value\": \"0\",\n  \"iterations\": 0\n}\n"},
      {R"x(norm family --no-meta --spec "schreier(1)" --vec "3:1,4:-2,5:1")x",
       "{\n  \"value\": \"2\",\n  \"witness\": [\n    4\n  ]\n}\n"},
      {R"x(index oscillation --no-meta --spec "schreier(2)")x",
       "{\n  \"index\": \"w^(2)\"\n}\n"},
      {R"x(index tree --no-meta --delta "L(schreier(1),2)")x",
       "{\n  \"order\": \"w+1\"\n}\n"},
  };
  for (const Pin& pin : pins) {
    CAPTURE(pin.args);
    const RunResult res = run_cli(pin.args);
    CHECK(res.code == 0);
    CHECK(res.out == pin.expect);
  }

  const auto constant = temp_file("cli_test_const.step", "[0,w^(2)] -> 1/3\n");
  const RunResult lav = run_cli("index lavrentiev --no-meta --fn " +
                                constant.string() + " --c 0 --d 1");
  CHECK(lav.code == 0);
  CHECK(lav.out == "{\n  \"index\": \"1\"\n}\n");

  const auto point = temp_file("cli_test_point.step", "[0,w) -> 0\n[w,w] -> 1\n");
  const RunResult chain = run_cli("index lavrentiev --no-meta --fn " +
                                  point.string() + " --c 1/4 --d 3/4 --chain");
  CHECK(chain.code == 0);
  const json cj = json::parse(chain.out);
  CHECK(cj.at("index") == "2");
  CHECK(cj.at("chain") == json({"[0,w]", "[w,w]", "{}"}));
}

TEST_CASE("identical invocations differ only in meta") {
  const std::string args = R"x(family rank --spec "schreier(w*2)" --set "[3]")x";
  const RunResult bare_a = run_cli(args + " --no-meta");
  const RunResult bare_b = run_cli(args + " --no-meta");
  CHECK(bare_a.out == bare_b.out);

  const RunResult full = run_cli(args);
  json with_meta = json::parse(full.out);
  const json meta = with_meta.at("meta");
  CHECK(meta.at("tool") == "schreier");
  CHECK(meta.at("command") == "family rank");
  const std::string stamp = meta.at("generated").get<std::string>();
  CHECK(stamp.size() == 20);
  CHECK(stamp.back() == 'Z');
  with_meta.erase("meta");
  CHECK(with_meta == json::parse(bare_a.out));
}

TEST_CASE("exit codes separate parse, cap, precondition, and property failures") {
  CHECK(run_cli(R"x(family member --spec "schreier(1)" --set "[2,3]")x").code == 0);

  CHECK(run_cli(R"x(family rank --spec "bogus(w)" --set "[]")x").code == 2);
  CHECK(run_cli(R"x(family derivative --spec "schreier(1)" --rho "wat")x").code == 2);
  CHECK(run_cli(R"x(norm family --spec "schreier(1)" --vec "3:x")x").code == 2);
  CHECK(run_cli(R"x(norm family --vec "3:1")x").code == 2);
  CHECK(run_cli(R"x(family member --frobnicate)x").code == 2);
  CHECK(run_cli(R"x(norm tsirelson --vec "3:1" --engine bogus)x").code == 2);
  CHECK(run_cli("index lavrentiev --fn /no/such/file.step --c 0 --d 1").code == 2);

  CHECK(run_cli(R"x(family restrict --spec "schreier(1)" --max 6 --cap 5)x").code == 3);

  CHECK(run_cli(R"x(family rank --spec "schreier(1)" --set "[1,2,3]")x").code == 4);
  CHECK(run_cli(R"x(index l1tree --spec "singletons" --order 2)x").code == 4);
  const std::string osc =
      R"x(index oscillation --spec "schreier(1)" --set "[2,3]" --lambda 1 --epsilon 1)x";
  CHECK(run_cli(osc).code == 4);
  const auto point = temp_file("cli_test_gap.step", "[0,w) -> 0\n[w,w] -> 1\n");
  CHECK(run_cli("index lavrentiev --fn " + point.string() +
                " --c 3/4 --d 1/4").code == 4);

  const RunResult bad = run_cli(R"x(family check --no-meta --spec "{[];[1];[1,2];[3]}")x");
  CHECK(bad.code == 1);
  const json bj = json::parse(bad.out);
  CHECK(bj.at("adequate") == false);
  CHECK(bj.at("hereditary") == false);

  const RunResult dead =
      run_cli(R"x(norm certify-l1 --no-meta --rows "1,1;1,1" --r 0 --delta 1/2)x");
  CHECK(dead.code == 1);
  const json dj = json::parse(dead.out);
  CHECK(dj.at("hypothesis") == false);
  CHECK(dj.contains("dead_pattern"));

  const RunResult live = run_cli(
      R"x(norm certify-l1 --no-meta --rows "1,1,-1,-1;1,-1,1,-1" --r 0 --delta 1/2)x");
  CHECK(live.code == 0);
  const json lj = json::parse(live.out);
  CHECK(lj.at("hypothesis") == true);
  CHECK(lj.at("conclusion") == true);
  CHECK(lj.at("constant") == "4");
  CHECK(lj.at("sign_patterns_checked") == 4);
}

TEST_CASE("config files merge under explicit flags") {
  const auto ini = temp_file("cli_test_ts.ini",
                             "[norm.tsirelson]\nalpha=1\nvec=\"3:1,4:1,5:1\"\n");
  const RunResult from_cfg =
      run_cli("--config " + ini.string() + " norm tsirelson --no-meta");
  CHECK(from_cfg.code == 0);
  CHECK(json::parse(from_cfg.out).at("value") == "3");

  const RunResult overridden =
      run_cli("--config " + ini.string() + " norm tsirelson --no-meta --alpha 0");
  CHECK(overridden.code == 0);
  CHECK(json::parse(overridden.out).at("value") == "3/2");
}

TEST_CASE("output can be routed to a file") {
  const auto sink = std::filesystem::temp_directory_path() / "cli_test_out.json";
  std::filesystem::remove(sink);
  const RunResult res = run_cli(
      R"x(family rank --no-meta --spec "schreier(w)" --set "[]" --out )x" +
      sink.string());
  CHECK(res.code == 0);
  CHECK(res.out.empty());
  CHECK(slurp(sink) == "{\n  \"rank\": \"w^(w)\"\n}\n");
}

TEST_CASE("bench emits one timing row per engine run") {
  const RunResult res = run_cli(
      "norm bench --no-meta --alpha 0 --min-support 4 --max-support 8 "
      "--step 4 --naive-cap 6");
  CHECK(res.code == 0);
  std::istringstream lines(res.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "support,engine,wall_us,value");
  const char* heads[] = {"4,naive,", "4,memoized,", "8,memoized,"};
  for (const char* head : heads) {
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind(head, 0) == 0);
    const auto us_start = line.find(',', line.find(',') + 1) + 1;
    const auto us_end = line.find(',', us_start);
    const std::string wall = line.substr(us_start, us_end - us_start);
    CHECK(!wall.empty());
    CHECK(wall.find_first_not_of("0123456789") == std::string::npos);
  }
  CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("order trees come back from all three tree inputs") {
  const RunResult wf = run_cli(R"x(index tree --no-meta --wf "1;1 2;1 2 3")x");
  CHECK(wf.code == 0);
  CHECK(json::parse(wf.out) == json({{"order", "3"}}));

  const RunResult boolean =
      run_cli(R"x(index tree --no-meta --boolean "1,2|3,4;5|6" --depth 6)x");
  CHECK(boolean.code == 0);
  const json bj = json::parse(boolean.out);
  CHECK(bj.at("order") == "1");
  CHECK(bj.at("lower_bound_only") == false);
  CHECK(bj.at("overlap_warning") == false);

  CHECK(run_cli("index tree --no-meta").code == 2);
}

TEST_CASE("restrict lists members and l1tree branches stay certified") {
  const RunResult cut =
      run_cli(R"x(family restrict --no-meta --spec "schreier(1)" --max 4)x");
  CHECK(cut.code == 0);
  const json cj = json::parse(cut.out);
  CHECK(cj.at("count") == 8);
  CHECK(cj.at("members") ==
        json({"[]", "[1]", "[2]", "[2,3]", "[2,4]", "[3]", "[3,4]", "[4]"}));

  const RunResult tree =
      run_cli(R"x(index l1tree --no-meta --spec "schreier(1)" --order 1)x");
  CHECK(tree.code == 0);
  const json tj = json::parse(tree.out);
  CHECK(tj.at("order") == "1");
  CHECK(tj.at("gap") == "1/2");
  CHECK(tj.at("branches").size() == 2);
  for (const json& branch : tj.at("branches")) {
    CHECK(branch.at("certificate").at("conclusion") == true);
    CHECK(branch.at("certificate").at("constant") == "4");
  }

  const RunResult rep = run_cli(
      R"x(index consistency --no-meta --spec "schreier(1)" --level 2 --window 6)x");
  CHECK(rep.code == 0);
  const json rj = json::parse(rep.out);
  CHECK(rj.at("all_pass") == true);
  CHECK(rj.at("entries").size() == 3);
}
