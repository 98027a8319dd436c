#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fgeom/suites.hpp"
#include "support.hpp"

using namespace fgeom;
using report::Format;
using report::Json;
using report::Status;
using suites::Range;
using suites::RunConfig;

namespace fs = std::filesystem;

namespace {

RunConfig config(std::uint64_t q, std::uint64_t n, std::uint64_t r, std::string suite) {
  RunConfig c;
  c.q = Range::single(q);
  c.n = Range::single(n);
  c.r = Range::single(r);
  c.suite = std::move(suite);
  return c;
}

const report::CheckRecord& find(const report::Report& rep, const std::string& id) {
  for (const auto& c : rep.checks)
    if (c.id == id) return c;
  throw std::logic_error("no check " + id);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Scratch {
 public:
  Scratch() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("splashctl-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

// Exit status of the tool; stderr is discarded.
int run_tool(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" SPLASHCTL_PATH "' " + args + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(Range, Parse) {
  EXPECT_EQ(Range::parse("7").values(), std::vector<std::uint64_t>{7});
  EXPECT_EQ(Range::parse("2..4").values(), (std::vector<std::uint64_t>{2, 3, 4}));
  EXPECT_TRUE(Range::parse("5..3").empty());
  EXPECT_TRUE(Range::parse("5..3").values().empty());
  EXPECT_EQ(Range::parse("2..4").to_string(), "2..4");
  EXPECT_EQ(Range::parse("3").to_string(), "3");
  for (const char* bad : {"", "x", "2..", "..3", "2...4", "-1", "2..x", "1.5"}) EXPECT_CODE(InvalidConfig, Range::parse(bad));
}

TEST(RunConfig, Validate) {
  EXPECT_EQ(code_of([] { config(2, 3, 3, "all").validate(); }), std::nullopt);
  EXPECT_CODE(InvalidConfig, config(0, 3, 3, "all").validate());
  EXPECT_CODE(InvalidConfig, config(2, 3, 3, "nosuch").validate());
  auto c = config(2, 3, 3, "counting");
  c.workers = 0;
  EXPECT_CODE(InvalidConfig, c.validate());
  c.workers = 1;
  c.budget = 0;
  EXPECT_CODE(InvalidConfig, c.validate());
  for (const auto& name : suites::suite_names()) {
    EXPECT_EQ(code_of([&] { config(2, 3, 3, name).validate(); }), std::nullopt) << name;
  }
}

TEST(Report, EchoExcludesOutputPlumbing) {
  auto a = config(2, 3, 3, "counting");
  auto b = a;
  b.workers = 4;
  b.out = "elsewhere.json";
  EXPECT_EQ(a.echo(), b.echo());
  b.seed = 2;
  EXPECT_NE(a.echo(), b.echo());
}

TEST(Report, JsonRoundTrip) {
  const auto rep = suites::run_suite(config(2, 2, 3, "all"));
  ASSERT_FALSE(rep.checks.empty());
  const auto parsed = report::report_from_json(Json::parse(report::emit(rep, Format::Json)));
  EXPECT_EQ(parsed, rep);
  const auto j = report::to_json(rep);
  EXPECT_EQ(j["schema"], "fgeom-report/1");
  const auto s = rep.summary();
  EXPECT_EQ(j["summary"]["checks"], s.checks);
  EXPECT_EQ(s.checks, s.passed + s.failed + s.skipped);
  EXPECT_EQ(s.checks, rep.checks.size());
}

TEST(Report, CsvHasOneRowPerCheck) {
  const auto rep = suites::run_suite(config(2, 3, 3, "counting"));
  const auto csv = report::emit(rep, Format::Csv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "id,parameters,expected,observed,status,reason,runtime_ms");
  std::size_t rows = 0;
  while (std::getline(in, line)) rows += !line.empty();
  EXPECT_EQ(rows, rep.checks.size());
}

TEST(Report, MalformedInput) {
  EXPECT_CODE(InvalidConfig, report::report_from_json(Json::array()));
  EXPECT_CODE(InvalidConfig, report::report_from_json(Json{{"schema", "other/1"}}));
  auto j = report::to_json(suites::run_suite(config(2, 3, 3, "counting")));
  j["checks"][0]["status"] = "maybe";
  EXPECT_CODE(InvalidConfig, report::report_from_json(j));
  EXPECT_CODE(InvalidConfig, report::status_from_string("passed"));
}

TEST(Report, StatusNames) {
  for (auto s : {Status::Pass, Status::Fail, Status::Skipped}) EXPECT_EQ(report::status_from_string(report::to_string(s)), s);
}

TEST(Suites, CountingValues) {
  const auto rep = suites::run_suite(config(2, 3, 3, "counting"));
  const auto& total = find(rep, "counting/total");
  EXPECT_EQ(total.status, Status::Pass);
  EXPECT_EQ(total.expected, total.observed);
  EXPECT_NE(total.expected.dump().find("126"), std::string::npos);
  const auto& per = find(rep, "counting/per-centre");
  EXPECT_NE(per.observed.dump().find("14"), std::string::npos);
  EXPECT_EQ(total.parameters["q"], 2);
  EXPECT_EQ(total.parameters["n"], 3);
  EXPECT_EQ(total.parameters["r"], 3);
  EXPECT_FALSE(total.runtime_ms);
}

TEST(Suites, SameSplashWitnessIsRecorded) {
  const auto rep = suites::run_suite(config(2, 2, 3, "equivalence"));
  const auto& pair = find(rep, "equivalence/same-splash-pair");
  EXPECT_EQ(pair.status, Status::Pass);
  ASSERT_TRUE(pair.detail.contains("witness"));
  EXPECT_TRUE(pair.detail["witness"].is_object());
  EXPECT_EQ(find(rep, "equivalence/projectivity-replay").status, Status::Pass);
  EXPECT_EQ(find(rep, "equivalence/s-tuple-ambiguity").status, Status::Pass);
}

TEST(Suites, GcdOneSkipsThePairChecks) {
  const auto rep = suites::run_suite(config(2, 3, 3, "equivalence"));
  const auto& pair = find(rep, "equivalence/same-splash-pair");
  EXPECT_EQ(pair.status, Status::Skipped);
  EXPECT_FALSE(pair.reason.empty());
  EXPECT_EQ(find(rep, "equivalence/shared-hyperplane-uniqueness").status, Status::Pass);
}

TEST(Suites, EmptySweep) {
  auto c = config(2, 3, 3, "all");
  c.q = Range::parse("3..2");
  const auto rep = suites::run_suite(c);
  EXPECT_TRUE(rep.checks.empty());
  EXPECT_TRUE(rep.ok());
}

TEST(Suites, Deterministic) {
  auto c = config(2, 3, 3, "all");
  const auto a = report::emit(suites::run_suite(c), Format::Json);
  const auto b = report::emit(suites::run_suite(c), Format::Json);
  EXPECT_EQ(a, b);
  c.workers = 3;
  EXPECT_EQ(report::emit(suites::run_suite(c), Format::Json), a);
  c.seed = 99;
  EXPECT_NE(report::emit(suites::run_suite(c), Format::Json), a);
}

TEST(Suites, TimingsAreOptIn) {
  auto c = config(2, 3, 3, "counting");
  c.timings = true;
  for (const auto& rec : suites::run_suite(c).checks) EXPECT_TRUE(rec.runtime_ms) << rec.id;
}

TEST(Suites, OutOfDomainParametersSkip) {
  const auto rep = suites::run_suite(config(2, 3, 1, "all"));
  ASSERT_FALSE(rep.checks.empty());
  for (const auto& rec : rep.checks) {
    EXPECT_NE(rec.status, Status::Fail) << rec.id;
    if (rec.status == Status::Skipped) {
      EXPECT_FALSE(rec.reason.empty()) << rec.id;
    }
  }
}

TEST(Write, WritesFileAndReportsIoFailure) {
  Scratch tmp;
  const auto rep = suites::run_suite(config(2, 3, 3, "counting"));
  const auto path = tmp / "r.json";
  report::write(rep, Format::Json, path.string());
  EXPECT_EQ(slurp(path), report::emit(rep, Format::Json));
  EXPECT_CODE(IoFailure, report::write(rep, Format::Json, (tmp / "missing" / "r.json").string()));
}

TEST(Tool, ExitCodes) {
  Scratch tmp;
  const auto out = (tmp / "r.json").string();
  EXPECT_EQ(run_tool("--q 2 --n 3 --r 3 --suite counting --out " + out), 0);
  EXPECT_TRUE(fs::exists(out));
  // No witness exists on PG(1, 8), so this check fails honestly.
  EXPECT_EQ(run_tool("--q 2 --n 3 --r 3 --suite club-characterization --out " + out), 1);
  EXPECT_EQ(run_tool("--bogus --out " + out), 2);
  EXPECT_EQ(run_tool("--suite nosuch --out " + out), 2);
  EXPECT_EQ(run_tool("--q 0 --out " + out), 2);
  EXPECT_EQ(run_tool("--q two --out " + out), 2);
  EXPECT_EQ(run_tool("--format xml --out " + out), 2);
  EXPECT_EQ(run_tool("--workers 0 --out " + out), 2);
  EXPECT_EQ(run_tool("--suite counting --out " + (tmp / "no" / "such" / "r.json").string()), 2);
  EXPECT_EQ(run_tool("--q 3..2 --out " + out), 0);
  EXPECT_EQ(run_tool("--version > /dev/null"), 0);
}

TEST(Tool, OutputMatchesLibraryAndWorkerCount) {
  Scratch tmp;
  const auto a = tmp / "a.json";
  const auto b = tmp / "b.json";
  const auto c = tmp / "c.csv";
  ASSERT_EQ(run_tool("--q 2 --n 2 --r 3 --suite equivalence --seed 7 --out " + a.string()), 0);
  ASSERT_EQ(run_tool("--q 2 --n 2 --r 3 --suite equivalence --seed 7 --workers 4 --out " + b.string()), 0);
  ASSERT_EQ(run_tool("--q 2 --n 2 --r 3 --suite equivalence --seed 7 --format csv --out " + c.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  auto cfg = config(2, 2, 3, "equivalence");
  cfg.seed = 7;
  const auto rep = suites::run_suite(cfg);
  cfg.out = a.string();
  EXPECT_EQ(report::report_from_json(Json::parse(slurp(a))).checks, rep.checks);
  EXPECT_EQ(slurp(c), report::emit(rep, Format::Csv));
}

TEST(Tool, EnvironmentSetsOutputBelowTheFlag) {
  Scratch tmp;
  const auto env = tmp / "env.json";
  const auto flag = tmp / "flag.json";
  EXPECT_EQ(run_tool("--suite counting", "FGEOM_REPORT_OUT='" + env.string() + "'"), 0);
  EXPECT_TRUE(fs::exists(env));
  fs::remove(env);
  EXPECT_EQ(run_tool("--suite counting --out " + flag.string(), "FGEOM_REPORT_OUT='" + env.string() + "'"), 0);
  EXPECT_TRUE(fs::exists(flag));
  EXPECT_FALSE(fs::exists(env));
}
