#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eqps/cli.hpp"
#include "eqps/error.hpp"
#include "oracles.hpp"

using namespace eqps;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunReport run_args(const std::vector<std::string>& args) {
  const auto req = parse_command_line(args);
  REQUIRE(req.has_value());
  return run(*req);
}

std::string render_args(const std::vector<std::string>& args) {
  const auto req = parse_command_line(args);
  REQUIRE(req.has_value());
  return render_report(run(*req), req->format);
}

/// Exit code the binary would return for these arguments.
int exit_for(const std::vector<std::string>& args) {
  try {
    const auto req = parse_command_line(args);
    return req ? run(*req).exit_code : 0;
  } catch (const std::exception& e) {
    return exit_code_for(e);
  }
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("eqps_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path copy_fixtures(const TempDir& tmp) {
  const fs::path dst = tmp.path / "fixtures";
  fs::copy(oracle::fixture(""), dst, fs::copy_options::recursive);
  return dst;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

const FixtureCheck* find_check(const std::vector<FixtureCheck>& checks, const std::string& name) {
  const auto it = std::find_if(checks.begin(), checks.end(), [&](const FixtureCheck& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

bool has_line(const std::vector<std::string>& lines, const std::string& text) {
  return std::find(lines.begin(), lines.end(), text) != lines.end();
}

const std::string z2 = oracle::fixture("groups/z2.json");
const std::string s3 = oracle::fixture("groups/s3.json");

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("symmetric power of a free Z2 orbit") {
  const auto rep = run_args({"ring", "sympow", "--group", z2, "--class", "[G/e]", "--k", "2"});
  REQUIRE(!rep.lines.empty());
  CHECK(rep.lines.front() == "1 + [G/e]");
  CHECK(rep.exit_code == 0);
}

TEST_CASE("Poincare series of the Z6 example") {
  const auto rep = run_args({"poincare", "--resolution", oracle::fixture("resolutions/z6_x6_a.json"), "--bound",
                             "6,6,6,6,6,6"});
  REQUIRE(!rep.lines.empty());
  CHECK(rep.lines.front() == "(1 - t1^6*t2^6*t3^6*t4^6*t5^6*t6^6)^{-[G/G]_{a1}}");
}

TEST_CASE("expand then factor returns the factors") {
  TempDir tmp;
  const std::string factors = "(1 - t1)^{-[G/H1]_{a1}} * (1 - t2^3)^{-[G/G]_{a1}} * (1 - t1*t2^2)^{2[G/e]}";
  const auto expanded = run_args({"series", "expand", "--group", s3, "--factors", factors, "--bound", "6,6"});
  const fs::path file = tmp.path / "s.json";
  write_file(file, expanded.result.at("series").dump());
  const auto back = run_args({"series", "factor", "--group", s3, "--series", file.string()});
  REQUIRE(!back.lines.empty());
  CHECK(back.lines.front() == factors);
}

TEST_CASE("exit codes") {
  CHECK(exit_for({"ring", "mul", "--group", z2, "--a", "[G/e]", "--b", "[G/e]"}) == 0);
  CHECK(exit_for({"ring", "frobnicate", "--group", z2}) == 2);
  CHECK(exit_for({"ring", "mul", "--group", z2, "--a", "[G/e]"}) == 2);
  CHECK(exit_for({"ring", "mul", "--group", z2, "--a", "[G/H5]", "--b", "1"}) == 2);
  CHECK(exit_for({"ring", "mul", "--group", "/nonexistent/group.json", "--a", "1", "--b", "1"}) == 2);
  CHECK(exit_for({"series", "expand", "--group", z2, "--factors", "(1 - t)^{-[G/e]}", "--bound", "3", "--format",
                  "yaml"}) == 2);
  CHECK(exit_for({"ring", "sympow", "--group", z2, "--class", "[G/e]", "--k", "-1"}) == 1);
  CHECK(exit_for({"ring", "sympow", "--group", z2, "--a", "-[G/e]", "--k", "2"}) == 1);
}

TEST_CASE("errors name the failing module") {
  const auto req = parse_command_line({"ring", "mul", "--group", z2, "--a", "[G/H5]", "--b", "1"});
  REQUIRE(req);
  try {
    run(*req);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("burnside: ", 0) == 0);
  }
}

TEST_CASE("help is not an error") {
  std::string help;
  CHECK_FALSE(parse_command_line({"--help"}, &help).has_value());
  CHECK(help.find("ring") != std::string::npos);
}

TEST_CASE("text and JSON carry the same content") {
  const std::vector<std::string> base = {"zeta", "recover", "--mode", "general", "--resolution",
                                         oracle::fixture("resolutions/z6_x6_a.json"), "--bound", "6,6,6,6,6,6"};
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const std::string text = render_args(base);
  const json j = json::parse(render_args(json_args));
  CHECK(j.at("exit_code") == 0);
  CHECK(j.at("command") == "zeta recover");
  CHECK(!j.contains("timing_ms"));

  // The JSON text block and warnings reproduce the text rendering.
  std::string rebuilt;
  for (const auto& line : j.at("text")) {
    rebuilt += line.get<std::string>() + "\n";
  }
  REQUIRE(!j.at("warnings").empty());
  rebuilt += "warnings:\n";
  for (const auto& w : j.at("warnings")) {
    rebuilt += "  " + w.get<std::string>() + "\n";
  }
  CHECK(text.rfind(rebuilt, 0) == 0);
  CHECK(text.find("warnings:") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"series", "expand", "--group", s3, "--factors",
                                         "(1 - t)^{-[G/H2]_{a1}} * (1 - t^2)^{[G/e]}", "--bound", "8"};
  CHECK(render_args(args) == render_args(args));
  auto timed = args;
  timed.push_back("--timing");
  CHECK(run_args(timed).timing_ms.has_value());
}

TEST_CASE("bundled fixtures parse and match their golden files") {
  for (const auto& c : check_fixture_files(default_fixture_dir())) {
    CHECK_MESSAGE(c.passed, c.name);
  }
  const auto golden = run_golden_cases(default_fixture_dir());
  CHECK(golden.size() >= 20);
  for (const auto& c : golden) {
    CHECK_MESSAGE(c.passed, c.name);
  }
}

TEST_CASE("a corrupted fixture is reported by name") {
  TempDir tmp;
  const fs::path dir = copy_fixtures(tmp);
  write_file(dir / "groups" / "z2.json", "{\"table\": [[0, 1], [1, 0]");
  const auto checks = check_fixture_files(dir.string());
  const auto* c = find_check(checks, "groups/z2.json");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  REQUIRE(!c->detail.empty());
  CHECK(c->detail.front().rfind("parse failure: ", 0) == 0);
  const auto* other = find_check(checks, "groups/z3.json");
  REQUIRE(other != nullptr);
  CHECK(other->passed);
}

TEST_CASE("a perturbed golden file gives a line diff") {
  TempDir tmp;
  const fs::path dir = copy_fixtures(tmp);
  write_file(dir / "golden" / "ring_mul_z2.txt", "[G/G]\nlegend:\n  e = {1} (order 1)\n  G = {1, a} (order 2)\n");
  const auto checks = run_golden_cases(dir.string());
  const auto* c = find_check(checks, "ring_mul_z2");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK(has_line(c->detail, "mismatch against golden/ring_mul_z2.txt:"));
  CHECK(has_line(c->detail, "  - line 1: [G/G]"));
  CHECK(has_line(c->detail, "  + line 1: [G/e]"));
  const auto* untouched = find_check(checks, "ring_sympow_z2");
  REQUIRE(untouched != nullptr);
  CHECK(untouched->passed);
}

}  // TEST_SUITE
