#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specanom/cli.hpp"
#include "support.hpp"

using namespace specanom;
using namespace specanom::cli;
using nlohmann::json;
using specanom::test::Gen;

namespace {

RunOptions quiet(int jobs = 1) {
  RunOptions o;
  o.jobs = jobs;
  o.timestamp = false;
  return o;
}

json dirac_config() {
  return json::parse(R"({
    "models": {"d": {"kind": "circle_dirac", "a": 0.25}},
    "tasks": [{"kind": "invariants", "params": {"model": "d",
               "expect": {"eta": 0.5, "det_modulus": 1.4142135623730951, "abs_phase": 0.7853981633974483}}}]
  })");
}

std::string message_of(const json& doc) {
  try {
    (void)parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

// Runs cli::main on the arguments and returns (exit code, stdout, stderr).
struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "specanom");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("specanom_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config parsing") {
  const TaskConfig c = parse_config(dirac_config());
  REQUIRE(c.tasks.size() == 1);
  CHECK(c.tasks[0].kind == "invariants");
  CHECK(c.tasks[0].id == "invariants#0");
  CHECK(c.format == "json");

  CHECK(parse_config(json::parse(R"({"tasks": []})")).tasks.empty());
  CHECK(task_kinds().size() == 10);
}

TEST_CASE("config errors name the offending input") {
  const std::string unknown = message_of(json::parse(R"({"models": {"m": {"kind": "unknown"}}, "tasks": []})"));
  CHECK(unknown.find("kind") != std::string::npos);
  CHECK(unknown.find("m") != std::string::npos);

  CHECK(message_of(json::parse(R"({"tasks": [{"kind": "invariants", "params": {"model": {"kind": "circle_dirac", "a": 0.25},
         "expect": {"eta": "one half"}}}]})")) != "");
  CHECK(message_of(json::parse(R"({"tasks": [{"kind": "invariants", "params": {}}]})")).find("model") !=
        std::string::npos);
  CHECK(message_of(json::parse(R"({"tasks": [], "extra": 1})")).find("extra") != std::string::npos);
  CHECK(message_of(json::parse(R"({"tasks": [{"kind": "flow", "tolerance": -1,
         "params": {"family": {"kind": "dirac_family", "a0": 0.25, "a1": 1.25}}}]})")) != "");
  CHECK(message_of(json::parse(R"({"tasks": [{"kind": "no.such.kind"}]})")).find("no.such.kind") != std::string::npos);
  CHECK(message_of(json::parse(R"({"tasks": [{"kind": "invariants", "params": {"model": "missing"}}]})"))
            .find("missing") != std::string::npos);
  CHECK(message_of(json::parse(R"({"models": {"a": {"kind": "transform", "base": "b", "op": "abs"},
                                               "b": {"kind": "transform", "base": "a", "op": "abs"}}, "tasks": []})")) != "");
  CHECK(message_of(json::parse(R"({"tasks": [{"kind": "gamma_check", "id": "x", "params": {"a": {"kind": "identity"}, "q": {"kind": "circle_modulus"}}},
                                             {"kind": "gamma_check", "id": "x", "params": {"a": {"kind": "identity"}, "q": {"kind": "circle_modulus"}}}]})"))
            .find("duplicate") != std::string::npos);
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
}

TEST_CASE("running tasks") {
  const ReportDocument doc = run(parse_config(dirac_config()), quiet());
  CHECK(doc.pass);
  REQUIRE(doc.tasks.size() == 1);
  const TaskResult& t = doc.tasks[0];
  CHECK(t.entries.size() >= 3);
  CHECK(t.data.at("eta").get<double>() == doctest::Approx(0.5).epsilon(1e-10));

  const TaskConfig c = parse_config(json::parse(R"({"tasks": [
    {"id": "ev", "kind": "eta_variation", "params": {"family": {"kind": "dirac_family", "a0": 0.25, "a1": 1.25}}},
    {"id": "gamma", "kind": "gamma_check", "params": {"a": {"kind": "power", "r": -1}, "q": {"kind": "circle_modulus"}}},
    {"id": "bad", "kind": "phase_difference", "params": {"family": {"kind": "dirac_family", "a0": 0.25, "a1": 1.25}}}
  ]})"));
  const ReportDocument r = run(c, quiet());
  REQUIRE(r.tasks.size() == 3);
  CHECK(r.tasks[0].pass);
  CHECK(std::abs(r.tasks[0].entries.at(0).lhs) < 1e-10);
  CHECK(std::abs(r.tasks[0].entries.at(0).rhs) < 1e-6);
  CHECK(r.tasks[1].pass);
  CHECK(r.tasks[1].data.at("gamma_sign").get<int>() == 1);
  // A failing task is isolated and recorded.
  CHECK_FALSE(r.tasks[2].pass);
  CHECK_FALSE(r.tasks[2].error.empty());
  CHECK_FALSE(r.pass);
}

TEST_CASE("tolerance overrides and scaling") {
  json cfg = dirac_config();
  cfg["tasks"][0]["params"]["expect"] = {{"eta", 0.5001}};
  CHECK_FALSE(run(parse_config(cfg), quiet()).pass);
  cfg["tasks"][0]["tolerance"] = 1e-3;
  CHECK(run(parse_config(cfg), quiet()).pass);

  AnomalyReport outer = AnomalyReport::compare("outer", json::object(), 1.0, 1.0 + 2e-9, 1e-9);
  outer.absorb("inner", AnomalyReport::compare("inner", json::object(), 0.0, 3e-9, 1e-9));
  CHECK_FALSE(outer.pass);
  scale_tolerance(outer, 10.0);
  CHECK(outer.pass);
  CHECK(outer.tolerance == doctest::Approx(1e-8));
  CHECK(outer.details.at("inner").at("tolerance").get<double>() == doctest::Approx(1e-8));
}

TEST_CASE("report emission") {
  ReportDocument empty;
  const json j = json::parse(emit(empty, "json", false));
  CHECK(j.at("tasks").empty());
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("version").get<std::string>() == kToolVersion);
  CHECK_FALSE(j.contains("timestamp"));

  ReportDocument one;
  TaskResult t;
  t.id = "t";
  t.kind = "radul";
  t.pass = true;
  t.entries.push_back(AnomalyReport::compare("radul", json::object(), 1.0, 1.0, 1e-8));
  one.tasks.push_back(t);
  const std::string csv = emit(one, "csv", false);
  CHECK(line_count(csv) == 2);
  CHECK(csv.rfind("task,identity,lhs_re,lhs_im,rhs_re,rhs_im,discrepancy,pass\n", 0) == 0);
  CHECK_THROWS_AS(emit(one, "xml", false), ConfigError);

  const ReportDocument full = run(parse_config(dirac_config()), quiet());
  const std::string text = emit(full, "json", true);
  const ReportDocument back = report_document_from_json(json::parse(text));
  CHECK(emit(back, "json", true) == text);
}

TEST_CASE("determinism across job counts") {
  std::ifstream in(std::getenv("SPECANOM_CATALOG") ? std::getenv("SPECANOM_CATALOG") : "");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const TaskConfig c = parse_config_text(ss.str());
  const std::string serial = emit(run(c, quiet(1)), "json", false);
  const std::string parallel = emit(run(c, quiet(4)), "json", false);
  CHECK(serial == parallel);
  CHECK(json::parse(serial).at("pass").get<bool>());
}

TEST_CASE("command line exit codes") {
  const Invocation list = invoke({"list-models"});
  CHECK(list.code == kExitPass);
  CHECK(json::parse(list.out).at("tasks").size() == 10);

  const std::string catalog = std::getenv("SPECANOM_CATALOG") ? std::getenv("SPECANOM_CATALOG") : "";
  const Invocation ok = invoke({"run", catalog, "--no-timestamp"});
  CHECK(ok.code == kExitPass);
  CHECK_FALSE(json::parse(ok.out).contains("timestamp"));

  const Invocation csv = invoke({"--format", "csv", "run", catalog});
  CHECK(csv.code == kExitPass);
  CHECK(csv.out.rfind("task,identity", 0) == 0);

  json failing = dirac_config();
  failing["tasks"][0]["params"]["expect"] = {{"eta", 0.25}};
  CHECK(invoke({"run", write_temp("fail.json", failing.dump())}).code == kExitFail);

  const Invocation bad = invoke({"run", write_temp("bad.json", R"({"models": {"m": {"kind": "unknown"}}, "tasks": []})")});
  CHECK(bad.code == kExitConfig);
  CHECK(bad.err.find("kind") != std::string::npos);

  CHECK(invoke({"run", "/nonexistent/config.json"}).code == kExitConfig);
  CHECK(invoke({"--no-such-flag", "list-models"}).code == kExitConfig);
  CHECK(invoke({}).code == kExitConfig);

  const std::string out_path = (std::filesystem::temp_directory_path() / "specanom_test_out.json").string();
  const Invocation to_file = invoke({"--output", out_path, "--no-timestamp", "run", catalog});
  CHECK(to_file.code == kExitPass);
  std::ifstream written(out_path);
  json doc;
  written >> doc;
  CHECK(doc.at("pass").get<bool>());
}

TEST_CASE("property: invariants tasks check eta for random offsets") {
  Gen g(61);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = g.uniform(0.02, 0.98);
    json cfg = {{"tasks", {{{"kind", "invariants"},
                            {"params", {{"model", {{"kind", "circle_dirac"}, {"a", a}}}, {"expect", {{"eta", 1.0 - 2.0 * a}}}}}}}}};
    CHECK(run(parse_config(cfg), quiet()).pass);
    cfg["tasks"][0]["params"]["expect"]["eta"] = 1.0 - 2.0 * a + g.uniform(1e-6, 1e-3) * (g.coin() ? 1 : -1);
    CHECK_FALSE(run(parse_config(cfg), quiet()).pass);
  }
}

TEST_CASE("property: reports keep task order for any job count") {
  Gen g(62);
  json tasks = json::array();
  const int n = 12;
  for (int i = 0; i < n; ++i) {
    tasks.push_back({{"id", "t" + std::to_string(i)},
                     {"kind", "flow"},
                     {"params", {{"family", {{"kind", "dirac_family"}, {"a0", 0.25}, {"a1", 0.25 + i}}}, {"expect_sf", i}}}});
  }
  const TaskConfig c = parse_config(json{{"tasks", tasks}});
  for (int trial = 0; trial < 4; ++trial) {
    const ReportDocument doc = run(c, quiet(g.integer(1, 8)));
    REQUIRE(doc.tasks.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(doc.tasks[static_cast<std::size_t>(i)].id == "t" + std::to_string(i));
    CHECK(doc.pass);
  }
}
