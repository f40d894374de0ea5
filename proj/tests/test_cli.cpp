#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// ICC_CLI_PATH and ICC_MODELS_DIR are injected by the build.

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string out_path = "cli_out_" + std::to_string(counter) + ".txt";
  std::string err_path = "cli_err_" + std::to_string(counter) + ".txt";
  ++counter;
  std::string cmd = std::string(ICC_CLI_PATH) + " " + args + " > " + out_path +
                    " 2> " + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

std::string model(const std::string& name) {
  return std::string(ICC_MODELS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("validate reports success and failure with distinct exit codes") {
  auto ok = run_cli("validate " + model("xor.json"));
  CHECK(ok.exit_code == 0);
  auto parsed = nlohmann::json::parse(ok.out);
  CHECK(parsed.at("valid") == true);

  auto missing = run_cli("validate no_such_file.json");
  CHECK(missing.exit_code == 1);

  std::string bad = "cli_bad_model.json";
  {
    std::ofstream f(bad);
    f << "{ not json";
  }
  auto malformed = run_cli("validate " + bad);
  CHECK(malformed.exit_code == 2);
  CHECK(!malformed.err.empty());
  std::remove(bad.c_str());
}

TEST_CASE("attribution command reproduces the worked examples") {
  auto r = run_cli("icc " + model("xor.json") + " --measure entropy");
  REQUIRE(r.exit_code == 0);
  auto report = nlohmann::json::parse(r.out);
  CHECK(report.at("report_version") == 1);
  CHECK(report.at("measure") == "entropy");
  CHECK(report.at("method") == "exact");
  CHECK(report.at("total").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("scores").at("X").get<double>() == doctest::Approx(0.5));
  CHECK(report.at("scores").at("Y").get<double>() == doctest::Approx(0.5));
  CHECK(report.at("model_hash").get<std::string>().size() == 16);

  auto indep = run_cli("icc " + model("independent-xor.json"));
  REQUIRE(indep.exit_code == 0);
  auto other = nlohmann::json::parse(indep.out);
  CHECK(other.at("scores").at("X").get<double>() == doctest::Approx(0.0));
  CHECK(other.at("scores").at("Y").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("repeated runs are byte-identical") {
  std::string cmd = "icc " + model("train-delay.json") +
                    " --measure variance --method mc --seed 11 "
                    "--samples 500";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  std::string flow = "baseline " + model("xor.json") +
                     " --which shapley-flow --uncertainty entropy";
  CHECK(run_cli(flow).out == run_cli(flow).out);
}

TEST_CASE("sampling honors interventions and formats") {
  auto csv = run_cli("sample " + model("xor.json") +
                     " --count 10 --seed 3 --do X=1 --format csv");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(csv.out.substr(0, 5) == "X,Y\r\n");
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    CHECK(line.substr(0, 2) == "1,");
    ++rows;
  }
  CHECK(rows == 10);

  auto json_batch = run_cli("sample " + model("xor.json") +
                            " --count 5 --seed 3 --format json");
  REQUIRE(json_batch.exit_code == 0);
  auto parsed = nlohmann::json::parse(json_batch.out);
  CHECK(parsed.at("columns").size() == 2);
  CHECK(parsed.at("rows").size() == 5);

  auto conflict = run_cli("sample " + model("xor.json") +
                          " --count 5 --do X=1 --structure-preserving X");
  CHECK(conflict.exit_code != 0);
}

TEST_CASE("baseline commands cover the published examples") {
  auto flow = run_cli("baseline " + model("copy-chain.json") +
                      " --which info-flow --A X2 --B X3 --S X1 --set X1=0");
  REQUIRE(flow.exit_code == 0);
  CHECK(nlohmann::json::parse(flow.out).at("bits").get<double>() ==
        doctest::Approx(0.0));

  auto collider = run_cli("baseline " + model("xor-collider.json") +
                          " --which info-flow --A X2 --B X3 --S X1 "
                          "--do-average");
  REQUIRE(collider.exit_code == 0);
  CHECK(nlohmann::json::parse(collider.out).at("bits").get<double>() ==
        doctest::Approx(1.0));

  auto strength = run_cli("baseline " + model("copy-chain.json") +
                          " --which strength --edge X1:X2");
  REQUIRE(strength.exit_code == 0);
  CHECK(nlohmann::json::parse(strength.out).at("bits").get<double>() ==
        doctest::Approx(1.0));

  auto contrast = run_cli("baseline " + model("copy-chain.json") +
                          " --which causal-shapley --variant uncertainty");
  REQUIRE(contrast.exit_code == 0);
  CHECK(nlohmann::json::parse(contrast.out)
            .at("scores")
            .at("X2")
            .get<double>() > 0.1);

  auto reduction = run_cli("baseline " + model("xor.json") +
                           " --which shapley-flow --uncertainty entropy");
  REQUIRE(reduction.exit_code == 0);
  auto fa = nlohmann::json::parse(reduction.out);
  bool found = false;
  for (const auto& e : fa.at("edge_scores")) {
    if (e.at("tail") == "noise::X" && e.at("head") == "X") {
      CHECK(e.at("score").get<double>() == doctest::Approx(0.5));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("value-metric flow runs from the command line") {
  auto r = run_cli("baseline " + model("diamond.json") +
                   " --which shapley-flow --foreground A=1 --background A=0");
  REQUIRE(r.exit_code == 0);
  auto fa = nlohmann::json::parse(r.out);
  REQUIRE(fa.at("paths").size() == 2);
  for (const auto& p : fa.at("paths"))
    CHECK(p.at("score").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("errors surface as structured diagnostics") {
  auto r = run_cli("icc no_such_model.json");
  CHECK(r.exit_code == 1);
  auto diag = nlohmann::json::parse(r.err);
  CHECK(diag.contains("error"));
}
