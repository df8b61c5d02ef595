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

// Scenario runner behind the `qdiff run` command: config parsing, the
// (route, tau) sweep, cross-checks and the report/CSV writers.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qdiff/error.hpp"
#include "qdiff/fock.hpp"
#include "qdiff/quadrature.hpp"

namespace qdiff {

enum class Route { kraus, closed_form, p_integral, husimi_integral, ode_oracle };
enum class OutputKind { report, pfun_grid, photon_trajectory };

std::string to_string(Route r);
std::string to_string(OutputKind k);

// Displaced thermal input given by its Gaussian P-function.
struct GaussianPInput {
  Complex center;
  double variance = 1.0;
};

// The same Gaussian P-function, but handed to the P-integral route only as
// samples on the scenario grid.
struct SampledPInput {
  Complex center;
  double variance = 1.0;
};

using ScenarioInput = std::variant<Coherent, NumberState, SqueezedVacuum, GaussianPInput, SampledPInput>;

std::string describe(const ScenarioInput& in);
bool route_supports(Route r, const ScenarioInput& in);

struct ScenarioConfig {
  ScenarioInput input = NumberState{0};
  std::vector<double> tau_values;
  int cutoff_dim = 0;                  // resolved
  bool cutoff_auto = true;
  std::vector<int> kraus_max_index;    // resolved, one per tau
  bool kraus_auto = true;
  std::vector<Route> routes;
  ComplexGrid grid;
  std::vector<OutputKind> outputs{OutputKind::report};
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  nlohmann::ordered_json echo;         // the document as parsed
};

// Cutoff and Kraus-order defaults used for "auto".
int auto_cutoff(const ScenarioInput& in, const std::vector<double>& tau_values);
int auto_kraus_order(double tau, int dim);

// Throws SchemaError (message starts with the field path) and
// UnsupportedRouteForInput.
ScenarioConfig parse_config(const std::string& text);

struct RouteCell {
  Route route = Route::kraus;
  double tau = 0.0;
  StateMetrics metrics;
  double truncation_loss = 0.0;                  // 1 - trace
  std::optional<double> completeness_residual;  // kraus
  std::optional<int> sign_resolution;           // squeezed closed form
  std::optional<double> refinement_estimate;    // Gaussian P-integral
  double seconds = 0.0;
};

struct PairCheck {
  double tau = 0.0;
  Route a = Route::kraus;
  Route b = Route::kraus;
  double trace_distance = 0.0;
  double tolerance = 0.0;
  bool ok = true;
};

struct NamedCheck {
  std::string name;
  std::optional<Route> route;
  std::optional<double> tau;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok = true;
};

struct EvolutionReport {
  ScenarioConfig config;
  double input_mean_photon = 0.0;
  std::vector<RouteCell> cells;  // tau-major, routes in config order
  std::vector<PairCheck> pairs;
  std::vector<NamedCheck> checks;
  std::optional<double> semigroup_split;  // first leg of the semigroup check

  bool ok() const;
};

// threads = 0 runs the cells serially; any other value uses that many
// workers. The merge is keyed by (tau, route), so the report is identical
// either way.
EvolutionReport run_scenario(const ScenarioConfig& cfg, int threads = 0);

nlohmann::ordered_json report_to_json(const EvolutionReport& report, bool include_timings = true);

// JSON text with every floating-point number printed to 17 significant digits.
std::string format_json(const nlohmann::ordered_json& j);

// Writes the outputs requested by the config into `dir`; returns the paths.
std::vector<std::string> write_outputs(const EvolutionReport& report, const std::string& dir);

inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitTolerance = 3;
inline constexpr int kExitTruncation = 4;
inline constexpr int kExitNumerical = 5;

int exit_code_for(ErrorCode code);

}  // namespace qdiff
