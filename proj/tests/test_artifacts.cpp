#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "dsr/artifacts.hpp"
#include "dsr/pipeline.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;
namespace fs = std::filesystem;

namespace {

nlohmann::json report_for(const Scenario& sc, RunMode mode) {
  RunOptions o;
  o.mode = mode;
  RunOutcome r = run_protocol(sc, o);
  REQUIRE(r.ok);
  return make_report(r.inst, {mode_name(mode), r.plan_source, r.solver_status, {}}, r.rp, r.tl, r.obj, r.verdict);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("plan JSON round trip") {
  for (const auto& f : tiny_fixtures()) {
    Instance in = make_instance(fixture(f), Variant::WCA);
    Plan p = enumerate_optimal(in).plan;
    CHECK(plan_from_json(plan_to_json(p)) == p);
    CHECK(plan_encoding(p) == plan_encoding(plan_from_json(plan_to_json(p))));
  }
}

TEST_CASE("report table") {
  const Scenario& a = fixture(data_dir() / "tiny1.json");
  const Scenario& b = fixture(data_dir() / "tiny" / "t02_ring.json");
  std::vector<std::string> warnings;
  std::string one = report_table({report_for(a, RunMode::Woca)}, {"only"}, warnings);
  CHECK(warnings.empty());
  CHECK(one.find("only") != std::string::npos);

  std::string four = report_table({report_for(a, RunMode::Alg1), report_for(a, RunMode::Woca),
                                   report_for(a, RunMode::MaxCov), report_for(a, RunMode::Wca)},
                                  {"Case 1", "Case 2", "Case 3", "Case 4"}, warnings);
  CHECK(warnings.empty());
  for (const char* c : {"Case 1", "Case 2", "Case 3", "Case 4"}) CHECK(four.find(c) != std::string::npos);

  report_table({report_for(a, RunMode::Woca), report_for(b, RunMode::Woca)}, {"x", "y"}, warnings);
  CHECK(warnings.size() == 1);
}

TEST_CASE("timeline and curve text") {
  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  RunOptions o;
  o.mode = RunMode::Enumerate;
  RunOutcome r = run_protocol(sc, o);
  REQUIRE(r.ok);
  const std::string csv = timeline_csv(r.rp, r.tl, r.inst);
  CHECK(csv.rfind("entity,kind,minute,detail\n", 0) == 0);
  auto curve = restored_curve(r.tl, r.inst);
  const std::string cc = curve_csv(curve);
  CHECK(cc.rfind("minute,kw\n", 0) == 0);
  const std::string svg = curve_svg({{"enum", curve}}, 0, 720, 500);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(hex_hash(0xabcULL).size() == 16);
}

TEST_CASE("command line") {
  const fs::path out = fs::temp_directory_path() / ("dsr_cli_" + std::to_string(::getpid()));
  fs::remove_all(out);
  const std::string exe = std::string("\"") + DSR_ECVDSR + "\"";
  const std::string tiny = (data_dir() / "tiny1.json").string();
  auto run = [](const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); };

  REQUIRE(run(exe + " run " + tiny + " --mode enumerate --out-dir " + (out / "e").string()) == 0);
  for (const char* f : {"model.mps", "plan.json", "timeline.csv", "curve.csv", "report.json", "curve.svg"})
    CHECK(fs::exists(out / "e" / f));
  auto report = nlohmann::json::parse(slurp(out / "e" / "report.json"));
  CHECK(report.contains("obj_sum"));
  CHECK(report["verdict"].dump().find("pass") != std::string::npos);

  CHECK(run(exe + " validate " + tiny + " " + (out / "e" / "plan.json").string()) == 0);
  CHECK(run(exe + " run " + tiny + " --mode woca --out-dir " + (out / "w").string()) == 0);
  CHECK(run(exe + " report " + (out / "e" / "report.json").string() + " " + (out / "w" / "report.json").string()) == 0);
  CHECK(run(exe + " cells " + tiny) == 0);
  CHECK(run(exe + " coverage " + tiny) == 0);
  CHECK(run(exe + " plot " + tiny + " " + (out / "e" / "curve.csv").string() + " --out " + (out / "c.svg").string()) == 0);
  CHECK(fs::exists(out / "c.svg"));

  // errors
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << "{\"name\": 3}";
  CHECK(run(exe + " run " + bad.string() + " --out-dir " + (out / "b").string()) == 2 * 256);
  CHECK(run(exe + " run " + tiny + " --mode nonsense") != 0);
  fs::remove_all(out);
}
