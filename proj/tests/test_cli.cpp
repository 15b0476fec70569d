#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "blochlab/cli.hpp"
#include "blochlab/version.hpp"

using namespace blochlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("blochlab_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("verify commands succeed and write both report files") {
  const fs::path dir = fresh_dir("ok");
  RunConfig cfg;
  cfg.command = "verify-lemma31";
  cfg.gauge = "const";
  cfg.m_max = 12;
  cfg.out = dir.string();
  CHECK(run(cfg) == 0);
  CHECK(fs::exists(dir / "verify-lemma31.json"));
  CHECK(fs::exists(dir / "verify-lemma31.csv"));

  const auto doc = nlohmann::json::parse(slurp(dir / "verify-lemma31.json"));
  CHECK(doc.at("artifact").at("name") == kArtifactName);
  CHECK(doc.at("artifact").at("version") == kArtifactVersion);
  CHECK(doc.at("command") == "verify-lemma31");
  // full config echo
  for (const char* key : {"gauge", "omega2", "measure", "map", "p", "q",
                          "m_min", "m_max", "angles", "K", "seed", "mode",
                          "samples", "out"}) {
    CHECK(doc.at("config").contains(key));
  }
  CHECK(doc.at("report").at("holds") == true);

  const std::string csv = slurp(dir / "verify-lemma31.csv");
  CHECK(csv.rfind("r,theta,ratio,lhs,rhs\n", 0) == 0);
}

TEST_CASE("identical configs give byte-identical reports") {
  const fs::path dir = fresh_dir("det");
  for (const char* command :
       {"verify-lemma31", "verify-reverse", "divergence-demo", "carleson"}) {
    RunConfig cfg;
    cfg.command = command;
    cfg.gauge = "pow:0.5";
    cfg.measure = "power:0";
    cfg.m_max = 10;
    cfg.seed = 777;
    cfg.mode = "mc";
    cfg.samples = 4000;
    cfg.out = dir.string();
    const std::string name = std::string(command);
    const int code1 = run(cfg);
    const std::string json1 = slurp(dir / (name + ".json"));
    const std::string csv1 = slurp(dir / (name + ".csv"));
    const int code2 = run(cfg);
    CHECK(code1 == code2);
    CHECK(json1 == slurp(dir / (name + ".json")));
    CHECK(csv1 == slurp(dir / (name + ".csv")));
  }
}

TEST_CASE("reverse estimate accepts an explicit regularity exponent") {
  const fs::path dir = fresh_dir("eps");
  RunConfig cfg;
  cfg.command = "verify-reverse";
  cfg.gauge = "pow:0.5;eps=0.8";
  cfg.p = 1.0;
  cfg.m_max = 12;
  cfg.out = dir.string();
  CHECK(run(cfg) == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "verify-reverse.json"));
  CHECK(doc.at("report").at("extremal_constant").get<double>() > 0.0);

  cfg.command = "verify-phi-doubling";
  CHECK(run(cfg) == 0);
}

TEST_CASE("violated verification exits with status 2") {
  RunConfig cfg;
  cfg.command = "hyperbolic-audit";
  cfg.map = "scale:1";  // identity
  cfg.gauge = "pow:0.5";
  cfg.omega2 = "const";
  cfg.m_max = 10;
  cfg.out = fresh_dir("violated").string();
  CHECK(run(cfg) == 2);
}

TEST_CASE("usage and precondition errors exit with status 1") {
  const fs::path dir = fresh_dir("err");
  RunConfig cfg;
  cfg.out = dir.string();

  cfg.command = "verify-lemma31";
  cfg.gauge = "pw:0.5";  // parse error
  CHECK(run(cfg) == 1);

  cfg.command = "verify-reverse";
  cfg.gauge = "pow:0.5;eps=0.25";  // hypothesis fails
  CHECK(run(cfg) == 1);

  cfg.command = "carleson";
  cfg.gauge = "const";
  cfg.measure = "";  // missing
  CHECK(run(cfg) == 1);

  cfg.command = "no-such-command";
  CHECK(run(cfg) == 1);

  cfg.command = "verify-reverse";
  cfg.gauge = "const";
  cfg.mode = "turbo";  // unknown mode
  CHECK(run(cfg) == 1);
}

TEST_CASE("gauge-report flags regularity failures via the exit code") {
  const fs::path dir = fresh_dir("gauge");
  RunConfig cfg;
  cfg.command = "gauge-report";
  cfg.m_max = 14;
  cfg.out = dir.string();

  cfg.gauge = "const";
  CHECK(run(cfg) == 0);
  cfg.gauge = "pow:0.5;eps=0.25";
  CHECK(run(cfg) == 2);

  const auto doc = nlohmann::json::parse(slurp(dir / "gauge-report.json"));
  CHECK(doc.at("report").at("regularity").at("all_pass") == false);
  CHECK(doc.at("report").at("integrals").size() == 14);
}

TEST_CASE("extremal-build emits the series record") {
  const fs::path dir = fresh_dir("build");
  RunConfig cfg;
  cfg.command = "extremal-build";
  cfg.gauge = "pow:0.5";
  cfg.K = 6;
  cfg.out = dir.string();
  CHECK(run(cfg) == 0);

  const auto doc = nlohmann::json::parse(slurp(dir / "extremal-build.json"));
  const auto& series = doc.at("report").at("series");
  CHECK(series.at("K") == 6);
  CHECK(series.at("rule") == "2^k");
  CHECK(series.at("coeffs").size() == 7);
  CHECK(series.at("gauge").get<std::string>().rfind("pow:0.5", 0) == 0);
  CHECK(doc.at("report").at("l2_membership").at("kind") == "InL2");

  // CSV rows: r=2^-k, ratio=a_k, lhs=k, rhs=n_k
  std::istringstream csv(slurp(dir / "extremal-build.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "r,theta,ratio,lhs,rhs");
  std::getline(csv, line);
  CHECK(line == "1,,1,0,1");  // k=0: a_0=1, n_0=1
  std::getline(csv, line);
  CHECK(line.rfind("0.5,,0.7071067811865476,1,2", 0) == 0);  // k=1
}

TEST_CASE("gauge-report CSV compares the two integral routes") {
  const fs::path dir = fresh_dir("gauge_csv");
  RunConfig cfg;
  cfg.command = "gauge-report";
  cfg.gauge = "const";
  cfg.m_max = 4;
  cfg.out = dir.string();
  CHECK(run(cfg) == 0);
  std::istringstream csv(slurp(dir / "gauge-report.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);  // x = 0.5: lhs = closed I = ln 2
  std::istringstream row(line);
  std::string field;
  std::getline(row, field, ',');
  CHECK(field == "0.5");
  std::getline(row, field, ',');  // theta empty
  CHECK(field.empty());
  std::getline(row, field, ',');  // ratio close to 1
  CHECK(std::fabs(std::stod(field) - 1.0) < 1e-9);
  std::getline(row, field, ',');  // lhs = ln 2
  CHECK(std::fabs(std::stod(field) - std::log(2.0)) < 1e-12);
}

TEST_CASE("verify-direct and verify-hardy-bloch run end to end") {
  const fs::path dir = fresh_dir("direct");
  RunConfig cfg;
  cfg.command = "verify-direct";
  cfg.gauge = "const";
  cfg.p = 2.0;
  cfg.m_min = 1;
  cfg.m_max = 8;
  cfg.angles = 64;
  cfg.out = dir.string();
  CHECK(run(cfg) == 0);

  cfg.command = "verify-hardy-bloch";
  cfg.m_max = 6;
  CHECK(run(cfg) == 0);
  cfg.p = 1.0;  // below the p >= 2 hypothesis
  CHECK(run(cfg) == 1);
}
