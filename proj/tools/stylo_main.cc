// Copyright 2026 The Stylo Authors.
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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stylo/error.h"
#include "stylo/pipeline.h"

namespace {

constexpr const char* kStageHelp[][2] = {
    {"synth", "generate a synthetic corpus with planted archetypes"},
    {"ingest", "read a JSONL corpus given by --input"},
    {"clean", "strip, pseudonymize and length-filter texts"},
    {"split", "split students into train, val and analyze sets"},
    {"pairs", "generate labeled same/different-author text pairs"},
    {"train", "train the siamese similarity network"},
    {"eval", "score the similarity function on every split"},
    {"profile", "build development profiles for the analyze set"},
    {"cluster", "k-means over approximate profiles"},
    {"elbow", "cluster error over a range of k"},
    {"quality", "writing-quality indicators per text and per cluster"},
    {"heatmap", "cross-author similarity by months in school"},
    {"report", "cluster reports and corpus statistics"},
    {"all", "run every stage in order"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stylometric development profiles for student essays"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "stylo_out";
  std::optional<uint64_t> seed;
  std::vector<std::string> overrides;
  std::string input;
  std::string k_range;
  std::optional<size_t> students;

  app.add_option("-c,--config", config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir, "artifact directory")->capture_default_str();
  app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--set", overrides, "override a config field: section.name=value");

  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : kStageHelp) subs.push_back(app.add_subcommand(name, help));
  for (auto* sub : subs) {
    const std::string name = sub->get_name();
    if (name == "ingest" || name == "all") {
      sub->add_option("--input", input, "JSONL corpus (overrides paths.input)");
    }
    if (name == "elbow") {
      sub->add_option("--k", k_range, "k values, e.g. 2..9 or 2,3,5");
    }
    if (name == "synth") {
      sub->add_option("--students", students, "number of students (overrides synth.students)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(stylo::ErrorKind::kUsage);
  }

  try {
    stylo::PipelineConfig config;
    if (!config_path.empty()) config = stylo::PipelineConfig::load(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) {
        throw stylo::UsageError("--set expects section.name=value, got '" + o + "'");
      }
      config.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (seed) config.seed = *seed;
    if (!input.empty()) config.input = input;
    if (students) config.synth_students = *students;

    stylo::Pipeline pipeline(config, out_dir, std::cerr);
    if (!k_range.empty()) pipeline.set_elbow_ks(stylo::parse_k_range(k_range));
    pipeline.run(app.get_subcommands().front()->get_name());
  } catch (const stylo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(stylo::ErrorKind::kData);
  }
  return 0;
}
