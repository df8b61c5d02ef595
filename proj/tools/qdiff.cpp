// Copyright 2026 The qdiff Authors
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

// qdiff run --config scenario.json [--output-dir DIR] [--threads N]

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qdiff/error.hpp"
#include "qdiff/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Single-mode diffusion channel: route cross-checks and phase-space output"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  CLI::App* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("--config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", output_dir, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads; 0 runs serially")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qdiff::kExitSchema;
  }

  try {
    std::ifstream in(config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const qdiff::ScenarioConfig cfg = qdiff::parse_config(buf.str());
    const qdiff::EvolutionReport report = qdiff::run_scenario(cfg, threads);
    const std::string dir = output_dir.empty() ? cfg.output_dir : output_dir;
    for (const auto& path : qdiff::write_outputs(report, dir)) std::cout << "wrote " << path << "\n";

    int failed = 0;
    for (const auto& p : report.pairs) {
      if (p.ok) continue;
      ++failed;
      std::cerr << "FAIL trace distance " << qdiff::to_string(p.a) << "/" << qdiff::to_string(p.b)
                << " at tau=" << p.tau << ": " << p.trace_distance << " > " << p.tolerance << "\n";
    }
    for (const auto& c : report.checks) {
      if (c.ok) continue;
      ++failed;
      std::cerr << "FAIL " << c.name;
      if (c.route) std::cerr << " " << qdiff::to_string(*c.route);
      if (c.tau) std::cerr << " at tau=" << *c.tau;
      std::cerr << ": " << c.value << " > " << c.tolerance << "\n";
    }
    // a cell that lost more norm than the library's own truncation guard
    // allows is a cutoff problem first, whatever the cross-checks say
    for (const auto& c : report.cells) {
      if (c.truncation_loss > 1.0 - qdiff::kTruncationThreshold) {
        std::cerr << "error: " << qdiff::to_string(c.route) << " at tau=" << c.tau << " lost " << c.truncation_loss
                  << " of the trace to the cutoff\n";
        return qdiff::kExitTruncation;
      }
    }
    if (failed > 0) return qdiff::kExitTolerance;
    std::cout << "all " << report.pairs.size() + report.checks.size() << " cross-checks passed\n";
    return qdiff::kExitOk;
  } catch (const qdiff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qdiff::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qdiff::kExitNumerical;
  }
}
