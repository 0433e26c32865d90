// Copyright 2026 The falsealarm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fa/subprocess.hpp"
#include "json.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fa::ProcessResult Fa(std::vector<std::string> args) {
  args.insert(args.begin(), FA_BIN);
  return fa::RunProcess(args, std::chrono::seconds(300));
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli normalize and wer") {
  auto r = Fa({"normalize", "Mr. Smith owes 21 dollars."});
  CHECK(r.exit_code == 0);
  CHECK(r.standard_output == "mister smith owes twenty one dollars\n");

  const fs::path dir = fa_test::FreshDir("cli-wer");
  std::ofstream(dir / "ref.txt") << "the cat sat on the mat\n";
  std::ofstream(dir / "hyp.txt") << "The cat sat on mat.\n";
  r = Fa({"wer", (dir / "ref.txt").string(), (dir / "hyp.txt").string(), "--json"});
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.standard_output);
  CHECK(j.at("deletions") == 1);
  CHECK(j.at("reference_length") == 6);

  std::ofstream(dir / "empty.txt") << "\n";
  r = Fa({"wer", (dir / "empty.txt").string(), (dir / "hyp.txt").string()});
  CHECK(r.exit_code != 0);
  CHECK_FALSE(r.standard_error.empty());
  CHECK(Fa({"wer", (dir / "nope.txt").string(), (dir / "hyp.txt").string()}).exit_code != 0);
  CHECK(Fa({"no-such-command"}).exit_code != 0);
  fs::remove_all(dir);
}

TEST_CASE("cli run, resume, report, train-estimator, predict") {
  const fs::path dir = fa_test::FreshDir("cli-run");
  const auto s = fa_test::BuildScenario(dir / "corpus");
  const std::vector<std::string> run_args{"run", "--corpus", s.manifest.string(), "--format", "tsv",
                                          "--engines", s.engines.string(), "--asr-under-test", "sut",
                                          "--out", (dir / "out").string(), "--jobs", "4", "--quiet"};
  auto r = Fa(run_args);
  INFO(r.standard_error);
  REQUIRE(r.exit_code == 0);
  for (const char* f : {"manifest.json", "results.jsonl", "summary.json", "summary.txt"})
    CHECK(fs::exists(dir / "out" / f));
  const json summary = json::parse(Slurp(dir / "out" / "summary.json"));
  CHECK(summary.at("total").at("executed") == 100);
  CHECK(summary.at("total").at("false_alarms") == fa_test::Scenario::kConfirmed);
  const std::string results_before = Slurp(dir / "out" / "results.jsonl");

  // Resuming a finished run adds nothing.
  r = Fa(run_args);
  REQUIRE(r.exit_code == 0);
  CHECK(Slurp(dir / "out" / "results.jsonl") == results_before);

  // Resuming with a different configuration is refused.
  auto changed = run_args;
  changed.insert(changed.end(), {"--min-other-failures", "2"});
  CHECK(Fa(changed).exit_code != 0);

  r = Fa({"report", (dir / "out" / "results.jsonl").string(), "--json"});
  REQUIRE(r.exit_code == 0);
  CHECK(json::parse(r.standard_output).at("total") == summary.at("total"));
  r = Fa({"report", (dir / "out" / "results.jsonl").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.standard_output.find("tts") != std::string::npos);

  // A small labeled dataset the model can separate by one word.
  {
    std::ofstream labeled(dir / "labeled.jsonl");
    for (int i = 0; i < 60; ++i) {
      const int label = i % 2;
      const json row{{"text_id", "t" + std::to_string(i)},
                     {"fa_count", label * 3},
                     {"combos", 4},
                     {"label", label},
                     {"text", std::string(label ? "marker " : "plain ") + "words number " + std::to_string(i % 7)}};
      labeled << row.dump() << "\n";
    }
  }
  r = Fa({"train-estimator", "--labeled", (dir / "labeled.jsonl").string(), "--out", (dir / "model").string(),
          "--epochs", "2", "--embedding-dim", "8", "--hidden-dim", "8"});
  INFO(r.standard_error);
  REQUIRE(r.exit_code == 0);
  for (const char* f : {"model.json", "report.json", "report.txt", "labeled.jsonl"})
    CHECK(fs::exists(dir / "model" / f));
  const json report = json::parse(Slurp(dir / "model" / "report.json"));
  CHECK(report.contains("test"));

  std::ofstream(dir / "texts.txt") << "marker words\nplain words\n";
  r = Fa({"predict", "--model", (dir / "model" / "model.json").string(), "--file", (dir / "texts.txt").string()});
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.standard_output);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    const double p = std::stod(line.substr(0, line.find('\t')));
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
  CHECK(n == 2);
  std::ofstream(dir / "empty.txt").close();
  r = Fa({"predict", "--model", (dir / "model" / "model.json").string(), "--file", (dir / "empty.txt").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.standard_output.empty());
  CHECK(Fa({"predict", "--model", (dir / "missing.json").string(), "x"}).exit_code != 0);

  // Results and training from the scenario itself.
  r = Fa({"train-estimator", "--results", (dir / "out" / "results.jsonl").string(), "--corpus", s.manifest.string(),
          "--format", "tsv", "--out", (dir / "model2").string(), "--epochs", "1", "--embedding-dim", "4",
          "--hidden-dim", "4"});
  INFO(r.standard_error);
  CHECK(r.exit_code == 0);
  CHECK(Fa({"train-estimator", "--out", (dir / "model3").string()}).exit_code != 0);
  fs::remove_all(dir);
}
