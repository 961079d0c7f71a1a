#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kpq/error.hpp"
#include "kpq/runner.hpp"

using namespace kpq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("kpq_runner_test_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json audit_config() {
  return {{"schema_version", 1},
          {"experiment", "audit"},
          {"instance", "schatten:2"},
          {"seed", 5},
          {"parameters", {{"samples", 30}, {"triple", {{"k", 2}, {"p", 1}, {"q", 1}}}}}};
}

}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse_config(audit_config()));
  auto bad = audit_config();
  bad["parameters"]["sample"] = 3;
  CHECK_THROWS_AS(execute(parse_config(bad)), Error);
  auto extra = audit_config();
  extra["colour"] = "red";
  CHECK_THROWS_AS(parse_config(extra), Error);
  auto noseed = audit_config();
  noseed.erase("seed");
  CHECK_THROWS_AS(execute(parse_config(noseed)), Error);
  auto nover = audit_config();
  nover.erase("schema_version");
  CHECK_THROWS_AS(parse_config(nover), Error);
  CHECK_THROWS_AS(parse_config(nlohmann::json{{"schema_version", 1}, {"experiment", "dance"}}), Error);
  CHECK_NOTHROW(parse_config(nlohmann::json{{"schema_version", 1}, {"experiment", "comb"}}));
}

TEST_CASE("digest") {
  const nlohmann::json a = {{"b", 1}, {"a", 2}};
  const nlohmann::json b = {{"a", 2}, {"b", 1}};
  CHECK(digest(a) == digest(b));
  CHECK(digest(a).size() == 16);
  CHECK(digest(a) != digest(nlohmann::json{{"a", 2}, {"b", 2}}));
  // FNV-1a 64 of {"a":2,"b":1}, computed independently
  CHECK(digest(a) == "f85f5878cbf2dc03");
}

TEST_CASE("run, replay and tamper detection") {
  const auto dir = scratch("audit");
  RunOverrides o;
  o.out = dir.string();
  const auto r = run(audit_config(), o);
  REQUIRE(r.exit_code == exit_pass);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "tables.csv"));
  CHECK_FALSE(fs::exists(fs::path(dir.string() + ".partial")));
  CHECK(r.report.at("verdict") == "PASS");

  const auto ok = replay(dir / "report.json", 3);
  CHECK(ok.exit_code == exit_pass);

  nlohmann::json rep;
  std::ifstream(dir / "report.json") >> rep;
  rep["payload"]["ratios"][0] = rep["payload"]["ratios"][0].get<double>() * (1 + 1e-15) + 1e-300;
  const auto edited = scratch("edited.json");
  std::ofstream(edited) << rep.dump();
  CHECK(replay(edited, 1).exit_code == exit_fail);

  rep["config"].erase("seed");
  std::ofstream(edited) << rep.dump();
  CHECK(replay(edited, 1).exit_code == exit_error);
  CHECK(replay(scratch("missing.json"), 1).exit_code == exit_error);
  fs::remove_all(dir);
  fs::remove(edited);
}

TEST_CASE("seed override and unknown keys") {
  auto cfg = audit_config();
  cfg.erase("seed");
  const auto dir = scratch("seeded");
  RunOverrides o;
  o.out = dir.string();
  CHECK(run(cfg, o).exit_code == exit_error);
  o.seed = 9;
  const auto r = run(cfg, o);
  CHECK(r.exit_code == exit_pass);
  CHECK(r.report.at("config").at("seed") == 9);
  const auto comb = run(nlohmann::json{{"schema_version", 1}, {"experiment", "comb"}, {"parameters", {{"kmax", 60}}}}, o);
  CHECK(comb.exit_code == exit_error);
  CHECK(comb.message.find("kmax") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("execute is independent of jobs") {
  const auto c = parse_config(audit_config());
  CHECK(digest(execute(c, 1).payload) == digest(execute(c, 4).payload));
}

TEST_CASE("instance listing") {
  const auto s = list_instances();
  CHECK(s.find("schatten") != std::string::npos);
  CHECK(s.find("jaffard") != std::string::npos);
}
