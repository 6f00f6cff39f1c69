// Copyright 2026 The tsfp Authors
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

// tsfp: command line front end. One subcommand per pipeline stage.
//
// Exit codes: 0 success, 1 usage / configuration error, 2 data error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsfp/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tsfp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape from polarization for transparent objects"};
  app.require_subcommand(1);

  // render
  std::string spec_path;
  std::string render_out;
  std::optional<std::uint64_t> seed;
  std::vector<double> rotations;
  int jobs = 1;
  auto* render = app.add_subcommand("render", "Render a synthetic sample (or rotation sweep)");
  render->add_option("spec", spec_path, "Scene spec JSON")->required();
  render->add_option("-o,--out", render_out, "Output root directory")->required();
  render->add_option("--seed", seed, "Override the spec's seed");
  render->add_option("--rotations", rotations, "In-plane rotations in degrees")->delimiter(',');
  render->add_option("--jobs", jobs, "Rotations rendered concurrently")->check(CLI::PositiveNumber);

  // features
  std::string sample_dir;
  std::string features_out;
  auto* features = app.add_subcommand("features", "Stokes / DoLP / AoLP from a sample directory");
  features->add_option("sample", sample_dir, "Sample directory with 0/45/90/135.png")->required();
  features->add_option("-o,--out", features_out, "Output directory")->required();

  // prior
  std::string prior_in;
  std::string prior_out;
  double refractive_index = kDefaultRefractiveIndex;
  auto* prior = app.add_subcommand("prior", "Four Fresnel candidate normal maps");
  prior->add_option("features", prior_in, "Features directory")->required();
  prior->add_option("-o,--out", prior_out, "Output directory")->required();
  prior->add_option("--n", refractive_index, "Refractive index (> 1)");

  // confidence
  std::string conf_in;
  std::string conf_out;
  WindowParams window;
  auto* confidence = app.add_subcommand("confidence", "AoLP fault confidence and reliability");
  confidence->add_option("features", conf_in, "Features directory")->required();
  confidence->add_option("-o,--out", conf_out, "Output directory")->required();
  confidence->add_option("--window", window.window, "Neighborhood side K (odd)");
  confidence->add_option("--exponent", window.exponent, "Smoothing exponent m (> 0)");

  // fuse
  std::string fuse_prior;
  std::string fuse_conf;
  std::string fuse_out;
  std::string fuse_gt;
  bool oracle = false;
  FusionConfig fusion;
  auto* fuse_cmd = app.add_subcommand("fuse", "Disambiguate and fuse into one normal map");
  fuse_cmd->add_option("--prior", fuse_prior, "Prior directory")->required();
  fuse_cmd->add_option("--confidence", fuse_conf, "Confidence directory")->required();
  fuse_cmd->add_option("-o,--out", fuse_out, "Output directory")->required();
  fuse_cmd->add_option("--iterations", fusion.smoothing_iterations, "Smoothing iterations");
  fuse_cmd->add_option("--step", fusion.step, "Smoothing step in (0, 1]");
  fuse_cmd->add_option("--floor", fusion.reliability_floor, "Reliability floor in [0, 1)");
  fuse_cmd->add_option("--zenith-split", fusion.zenith_split,
                       "Normalized boundary distance above which the low zenith is used");
  fuse_cmd->add_flag("--oracle-disambiguation", oracle,
                     "Pick the candidate nearest to --gt (test mode)");
  fuse_cmd->add_option("--gt", fuse_gt, "Ground-truth normals for oracle disambiguation");

  // eval
  std::vector<std::string> eval_paths;
  std::vector<std::string> eval_names;
  std::string eval_report;
  auto* eval = app.add_subcommand("eval", "Angular error metrics");
  eval->add_option("maps", eval_paths, "EST GT [EST GT ...] normal map PFMs")->required();
  eval->add_option("--names", eval_names, "Object name per pair")->delimiter(',');
  eval->add_option("--report", eval_report, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*render) {
      SceneSpec spec = io::scene_from_json(io::read_json(spec_path));
      if (seed) spec.seed = *seed;
      if (rotations.empty()) {
        const auto j = io::read_json(spec_path);
        rotations = j.value("rotations_deg", std::vector<double>{0.0});
      }
      for (const auto& dir : pipeline::render_stage(spec, rotations, render_out, jobs)) {
        std::cout << dir.string() << '\n';
      }
    } else if (*features) {
      pipeline::features_stage(sample_dir, features_out);
    } else if (*prior) {
      pipeline::prior_stage(prior_in, prior_out, RefractionIndex{refractive_index});
    } else if (*confidence) {
      pipeline::confidence_stage(conf_in, conf_out, window);
    } else if (*fuse_cmd) {
      std::optional<fs::path> gt;
      if (oracle) {
        fusion.mode = DisambiguationMode::oracle;
        if (fuse_gt.empty()) throw ConfigError("--oracle-disambiguation requires --gt");
        gt = fuse_gt;
      }
      pipeline::fuse_stage(fuse_prior, fuse_conf, fuse_out, fusion, gt);
    } else if (*eval) {
      if (eval_paths.size() % 2 != 0) throw ConfigError("eval expects EST GT pairs");
      std::vector<pipeline::EvalPair> pairs;
      for (std::size_t k = 0; k < eval_paths.size(); k += 2) {
        const std::size_t idx = k / 2;
        std::string name = idx < eval_names.size() ? eval_names[idx]
                                                   : "object" + std::to_string(idx);
        pairs.push_back({name, eval_paths[k], eval_paths[k + 1]});
      }
      std::optional<fs::path> report_path;
      if (!eval_report.empty()) report_path = eval_report;
      const MetricsReport report = pipeline::eval_stage(pairs, report_path);
      std::cout << format_table(report);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
