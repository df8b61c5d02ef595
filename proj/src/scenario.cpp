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

#include "qdiff/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Core>

#include "qdiff/channel.hpp"
#include "qdiff/master_equation.hpp"
#include "qdiff/pfunction.hpp"

namespace qdiff {
namespace {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kOdeStep = 1e-3;
inline constexpr double kExactTolerance = 1e-6;
inline constexpr double kTailLog = 27.6;  // -ln(1e-12)

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      schema(path + "." + key, "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema(path + "." + key, "missing");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema(path, "must be finite");
  return x;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  return v.get<int>();
}

Complex as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {as_number(v, path), 0.0};
  if (v.is_array() && v.size() == 2) return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
  schema(path, "expected a number or [re, im]");
}

Route route_from_string(const std::string& s, const std::string& path) {
  for (Route r : {Route::kraus, Route::closed_form, Route::p_integral, Route::husimi_integral, Route::ode_oracle}) {
    if (to_string(r) == s) return r;
  }
  schema(path, "unknown route '" + s + "'");
}

OutputKind output_from_string(const std::string& s, const std::string& path) {
  for (OutputKind k : {OutputKind::report, OutputKind::pfun_grid, OutputKind::photon_trajectory}) {
    if (to_string(k) == s) return k;
  }
  schema(path, "unknown output '" + s + "'");
}

ScenarioInput parse_input(const json& j) {
  const std::string path = "$.input";
  if (!j.is_object()) schema(path, "expected an object");
  const json& kind_v = require(j, path, "kind");
  if (!kind_v.is_string()) schema(path + ".kind", "expected a string");
  const auto kind = kind_v.get<std::string>();
  if (kind == "coherent") {
    check_keys(j, path, {"kind", "z"});
    return Coherent{as_complex(require(j, path, "z"), path + ".z")};
  }
  if (kind == "number") {
    check_keys(j, path, {"kind", "l"});
    const int l = as_int(require(j, path, "l"), path + ".l");
    if (l < 0) schema(path + ".l", "must be non-negative");
    return NumberState{l};
  }
  if (kind == "squeezed_vacuum") {
    check_keys(j, path, {"kind", "lambda"});
    const double lambda = as_number(require(j, path, "lambda"), path + ".lambda");
    if (std::abs(lambda) > 2.0) schema(path + ".lambda", "|lambda| must not exceed 2");
    return SqueezedVacuum{lambda};
  }
  if (kind == "p_gaussian" || kind == "p_samples") {
    check_keys(j, path, {"kind", "center", "variance"});
    const Complex c = as_complex(require(j, path, "center"), path + ".center");
    const double v = as_number(require(j, path, "variance"), path + ".variance");
    if (!(v > 0.0)) schema(path + ".variance", "must be positive");
    if (kind == "p_gaussian") return GaussianPInput{c, v};
    return SampledPInput{c, v};
  }
  schema(path + ".kind", "unknown input kind '" + kind + "'");
}

ComplexGrid parse_grid(const json& j) {
  const std::string path = "$.grid";
  check_keys(j, path, {"radius", "points_per_axis", "rule"});
  ComplexGrid g;
  if (j.contains("radius")) g.radius = as_number(j.at("radius"), path + ".radius");
  if (j.contains("points_per_axis")) g.points_per_axis = as_int(j.at("points_per_axis"), path + ".points_per_axis");
  if (j.contains("rule")) {
    if (!j.at("rule").is_string()) schema(path + ".rule", "expected a string");
    try {
      g.rule = quadrature_rule_from_string(j.at("rule").get<std::string>());
    } catch (const Error& e) {
      schema(path + ".rule", e.what());
    }
  }
  if (!(g.radius > 0.0)) schema(path + ".radius", "must be positive");
  if (g.points_per_axis < 2) schema(path + ".points_per_axis", "must be at least 2");
  return g;
}

// Mean photon number, the displacement part of it, and the largest
// quadrature variance (vacuum = 1/2) of the input.
struct InputShape {
  double nbar;
  double shift;
  double variance;
};

InputShape shape_of(const ScenarioInput& in) {
  if (const auto* c = std::get_if<Coherent>(&in)) return {std::norm(c->z), std::norm(c->z), 0.5};
  if (const auto* n = std::get_if<NumberState>(&in)) return {double(n->l), double(n->l), 0.5};
  if (const auto* s = std::get_if<SqueezedVacuum>(&in)) {
    const double sh = std::sinh(s->lambda);
    return {sh * sh, 0.0, 0.5 * std::exp(2.0 * std::abs(s->lambda))};
  }
  if (const auto* g = std::get_if<GaussianPInput>(&in)) {
    return {std::norm(g->center) + g->variance, std::norm(g->center), 0.5 + g->variance};
  }
  const auto& s = std::get<SampledPInput>(in);
  return {std::norm(s.center) + s.variance, std::norm(s.center), 0.5 + s.variance};
}

bool has_regular_p(const ScenarioInput& in) {
  return std::holds_alternative<Coherent>(in) || std::holds_alternative<GaussianPInput>(in) ||
         std::holds_alternative<SampledPInput>(in);
}

bool is_quadrature(Route r) { return r == Route::p_integral; }

double route_tolerance(Route r) { return is_quadrature(r) ? kQuadratureTolerance : kExactTolerance; }

double psd_slack(Route r, int dim) { return (is_quadrature(r) ? kQuadraturePsdSlack : kExactPsdSlack) * dim; }

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

DensityMatrix input_state(const ScenarioInput& in, FockCutoff cutoff) {
  if (const auto* g = std::get_if<GaussianPInput>(&in)) {
    return coherent_output(g->center, ChannelTime(g->variance), cutoff).relabeled("input");
  }
  if (const auto* s = std::get_if<SampledPInput>(&in)) {
    return coherent_output(s->center, ChannelTime(s->variance), cutoff).relabeled("input");
  }
  StateSpec spec = std::holds_alternative<Coherent>(in)     ? StateSpec{std::get<Coherent>(in)}
                   : std::holds_alternative<NumberState>(in) ? StateSpec{std::get<NumberState>(in)}
                                                             : StateSpec{std::get<SqueezedVacuum>(in)};
  return density_from_spec(spec, cutoff).relabeled("input");
}

StateSpec as_state_spec(const ScenarioInput& in) {
  if (const auto* c = std::get_if<Coherent>(&in)) return *c;
  if (const auto* n = std::get_if<NumberState>(&in)) return *n;
  return std::get<SqueezedVacuum>(in);
}

DensityMatrix evolve_cell(const ScenarioConfig& cfg, const DensityMatrix& rho0, std::size_t tau_index, Route route,
                          RouteCell& cell) {
  const double tau_value = cfg.tau_values[tau_index];
  const ChannelTime tau(tau_value);
  const FockCutoff cutoff(cfg.cutoff_dim);
  const ScenarioInput& in = cfg.input;

  switch (route) {
    case Route::kraus: {
      const KrausSet ks = build_kraus_set(tau, cfg.kraus_max_index[tau_index], cutoff);
      cell.completeness_residual = ks.completeness_residual();
      return kraus_evolve(rho0, ks);
    }
    case Route::closed_form: {
      if (const auto* c = std::get_if<Coherent>(&in)) return coherent_output(c->z, tau, cutoff);
      if (const auto* n = std::get_if<NumberState>(&in)) return number_output(n->l, tau, cutoff);
      if (const auto* s = std::get_if<SqueezedVacuum>(&in)) {
        SqueezedOutput out = squeezed_output(s->lambda, tau, cutoff);
        cell.sign_resolution = out.sign;
        return out.rho;
      }
      const auto& g = std::get<GaussianPInput>(in);
      // A Gaussian P of variance v is the coherent-state output at time v.
      return coherent_output(g.center, ChannelTime(g.variance + tau_value), cutoff).relabeled("closed_form");
    }
    case Route::p_integral: {
      PFunction p;
      if (const auto* c = std::get_if<Coherent>(&in)) {
        p = DeltaP{c->z, 1.0};
      } else if (const auto* g = std::get_if<GaussianPInput>(&in)) {
        p = normalized_gaussian_p(g->center, g->variance);
      } else {
        const auto& s = std::get<SampledPInput>(in);
        p = sample_p(normalized_gaussian_p(s.center, s.variance), cfg.grid);
      }
      PIntegralOutput out = evolve_via_p_integral(p, tau, cfg.grid, cutoff);
      cell.refinement_estimate = out.refinement_estimate;
      return out.rho;
    }
    case Route::husimi_integral:
      return evolve_via_husimi_integral(rho0, as_state_spec(in), tau, cutoff);
    case Route::ode_oracle: {
      IntegratorConfig ic;
      ic.kappa = 1.0;
      ic.t_final = tau_value;
      ic.dt = kOdeStep;
      return integrate_master_equation(rho0, ic);
    }
  }
  throw Error(ErrorCode::PreconditionViolated, "unknown route");
}

void run_jobs(std::vector<std::function<void()>>& jobs, int threads) {
  std::vector<std::exception_ptr> errors(jobs.size());
  if (threads <= 0) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      try {
        jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), jobs.size());
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
          try {
            jobs[i]();
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  // The first failure in cell order wins, whatever order the workers hit them.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void write_value(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(key).dump() + ": ";
        write_value(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write_value(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? g17(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

json cell_json(const RouteCell& c) {
  json j;
  j["route"] = to_string(c.route);
  j["tau"] = c.tau;
  j["trace"] = c.metrics.trace;
  j["mean_photon"] = c.metrics.mean_photon;
  j["purity"] = c.metrics.purity;
  j["min_eigenvalue"] = c.metrics.min_eigenvalue;
  j["hermiticity_residual"] = c.metrics.hermiticity_residual;
  j["truncation_loss"] = c.truncation_loss;
  if (c.completeness_residual) j["completeness_residual"] = *c.completeness_residual;
  if (c.sign_resolution) {
    j["sign_resolution"] = {{"sign", *c.sign_resolution},
                            {"printed_sign", kPrintedSqueezedSign},
                            {"matches_printed", *c.sign_resolution == kPrintedSqueezedSign}};
  }
  if (c.refinement_estimate) j["refinement_estimate"] = *c.refinement_estimate;
  return j;
}

}  // namespace

std::string to_string(Route r) {
  switch (r) {
    case Route::kraus:
      return "kraus";
    case Route::closed_form:
      return "closed_form";
    case Route::p_integral:
      return "p_integral";
    case Route::husimi_integral:
      return "husimi_integral";
    case Route::ode_oracle:
      return "ode_oracle";
  }
  return "?";
}

std::string to_string(OutputKind k) {
  switch (k) {
    case OutputKind::report:
      return "report";
    case OutputKind::pfun_grid:
      return "pfun_grid";
    case OutputKind::photon_trajectory:
      return "photon_trajectory";
  }
  return "?";
}

std::string describe(const ScenarioInput& in) {
  if (const auto* g = std::get_if<GaussianPInput>(&in)) {
    return "p_gaussian(center=" + g17(g->center.real()) + (g->center.imag() < 0 ? "-" : "+") +
           g17(std::abs(g->center.imag())) + "i, variance=" + g17(g->variance) + ")";
  }
  if (const auto* s = std::get_if<SampledPInput>(&in)) {
    return "p_samples(center=" + g17(s->center.real()) + (s->center.imag() < 0 ? "-" : "+") +
           g17(std::abs(s->center.imag())) + "i, variance=" + g17(s->variance) + ")";
  }
  return describe(as_state_spec(in));
}

bool route_supports(Route r, const ScenarioInput& in) {
  switch (r) {
    case Route::kraus:
    case Route::ode_oracle:
      return true;
    case Route::closed_form:
      return !std::holds_alternative<SampledPInput>(in);
    case Route::p_integral:
      return has_regular_p(in);
    case Route::husimi_integral:
      return std::holds_alternative<Coherent>(in) || std::holds_alternative<NumberState>(in) ||
             std::holds_alternative<SqueezedVacuum>(in);
  }
  return false;
}

int auto_cutoff(const ScenarioInput& in, const std::vector<double>& tau_values) {
  const InputShape s = shape_of(in);
  int dim = 2;
  for (const double tau : tau_values) {
    const int base = static_cast<int>(std::ceil(4.0 * (s.nbar + tau) + 10.0));
    // Photon-number tail of a Gaussian state decays like q^n with
    // q = (V - 1/2)/(V + 1/2) for its largest quadrature variance V.
    const double v = s.variance + tau;
    const double q = (v - 0.5) / (v + 0.5);
    const int tail = q > 0.0 ? static_cast<int>(std::ceil(kTailLog / -std::log(q))) : 0;
    const int shifted = tail + static_cast<int>(std::ceil(4.0 * s.shift)) + 10;
    dim = std::max({dim, base, shifted});
  }
  return dim;
}

int auto_kraus_order(double tau, int dim) {
  if (tau == 0.0) return 1;
  const int m = static_cast<int>(std::ceil(10.0 * tau / (tau + 1.0) * std::sqrt(static_cast<double>(dim)))) + 8;
  return std::min(m, dim - 1);
}

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema("$", std::string("malformed JSON: ") + e.what());
  }
  check_keys(doc, "$",
             {"input", "tau_values", "cutoff_dim", "kraus_max_index", "routes", "grid", "outputs", "output_dir", "seed"});

  ScenarioConfig cfg;
  cfg.echo = doc;
  cfg.input = parse_input(require(doc, "$", "input"));

  const json& taus = require(doc, "$", "tau_values");
  if (!taus.is_array() || taus.empty()) schema("$.tau_values", "expected a non-empty array");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const std::string p = "$.tau_values[" + std::to_string(i) + "]";
    const double t = as_number(taus[i], p);
    if (t < 0.0) schema(p, "must be non-negative");
    if (!cfg.tau_values.empty() && !(t > cfg.tau_values.back())) schema(p, "tau_values must be strictly ascending");
    cfg.tau_values.push_back(t);
  }

  const json& routes = require(doc, "$", "routes");
  if (!routes.is_array() || routes.empty()) schema("$.routes", "expected a non-empty array");
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const std::string p = "$.routes[" + std::to_string(i) + "]";
    if (!routes[i].is_string()) schema(p, "expected a string");
    const Route r = route_from_string(routes[i].get<std::string>(), p);
    if (std::find(cfg.routes.begin(), cfg.routes.end(), r) != cfg.routes.end()) schema(p, "duplicate route");
    cfg.routes.push_back(r);
  }

  if (doc.contains("grid")) cfg.grid = parse_grid(doc.at("grid"));

  if (doc.contains("outputs")) {
    const json& outs = doc.at("outputs");
    if (!outs.is_array()) schema("$.outputs", "expected an array");
    cfg.outputs.clear();
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string p = "$.outputs[" + std::to_string(i) + "]";
      if (!outs[i].is_string()) schema(p, "expected a string");
      const OutputKind k = output_from_string(outs[i].get<std::string>(), p);
      if (k == OutputKind::pfun_grid && !has_regular_p(cfg.input)) {
        schema(p, "pfun_grid needs an input with a regular P-function");
      }
      if (std::find(cfg.outputs.begin(), cfg.outputs.end(), k) == cfg.outputs.end()) cfg.outputs.push_back(k);
    }
  }

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) schema("$.output_dir", "expected a string");
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) schema("$.seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  const json cutoff = doc.contains("cutoff_dim") ? doc.at("cutoff_dim") : json("auto");
  if (cutoff.is_string() && cutoff.get<std::string>() == "auto") {
    cfg.cutoff_auto = true;
    cfg.cutoff_dim = auto_cutoff(cfg.input, cfg.tau_values);
  } else {
    cfg.cutoff_auto = false;
    cfg.cutoff_dim = as_int(cutoff, "$.cutoff_dim");
    if (cfg.cutoff_dim < 2) schema("$.cutoff_dim", "must be at least 2");
  }

  const json kraus = doc.contains("kraus_max_index") ? doc.at("kraus_max_index") : json("auto");
  if (kraus.is_string() && kraus.get<std::string>() == "auto") {
    cfg.kraus_auto = true;
    for (const double t : cfg.tau_values) cfg.kraus_max_index.push_back(auto_kraus_order(t, cfg.cutoff_dim));
  } else {
    cfg.kraus_auto = false;
    const int m = as_int(kraus, "$.kraus_max_index");
    if (m < 1) schema("$.kraus_max_index", "must be at least 1");
    if (m >= cfg.cutoff_dim) schema("$.kraus_max_index", "must be below cutoff_dim");
    cfg.kraus_max_index.assign(cfg.tau_values.size(), m);
  }

  for (std::size_t i = 0; i < cfg.routes.size(); ++i) {
    if (!route_supports(cfg.routes[i], cfg.input)) {
      throw Error(ErrorCode::UnsupportedRouteForInput, "$.routes[" + std::to_string(i) + "]: route " +
                                                           to_string(cfg.routes[i]) + " does not accept input " +
                                                           describe(cfg.input));
    }
  }
  return cfg;
}

bool EvolutionReport::ok() const {
  return std::all_of(pairs.begin(), pairs.end(), [](const PairCheck& p) { return p.ok; }) &&
         std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.ok; });
}

EvolutionReport run_scenario(const ScenarioConfig& cfg, int threads) {
  const FockCutoff cutoff(cfg.cutoff_dim);
  const DensityMatrix rho0 = input_state(cfg.input, cutoff);

  EvolutionReport report;
  report.config = cfg;
  report.input_mean_photon = mean_photon_of(rho0);

  const std::size_t n_routes = cfg.routes.size();
  const std::size_t n_cells = cfg.tau_values.size() * n_routes;
  std::vector<RouteCell> cells(n_cells);
  std::vector<std::optional<DensityMatrix>> states(n_cells);
  std::vector<std::function<void()>> jobs;
  for (std::size_t ti = 0; ti < cfg.tau_values.size(); ++ti) {
    for (std::size_t ri = 0; ri < n_routes; ++ri) {
      const std::size_t idx = ti * n_routes + ri;
      jobs.emplace_back([&, ti, ri, idx] {
        RouteCell& cell = cells[idx];
        cell.route = cfg.routes[ri];
        cell.tau = cfg.tau_values[ti];
        const auto start = std::chrono::steady_clock::now();
        DensityMatrix rho = evolve_cell(cfg, rho0, ti, cell.route, cell);
        cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        cell.metrics = state_metrics(rho);
        cell.truncation_loss = 1.0 - cell.metrics.trace;
        states[idx] = std::move(rho);
      });
    }
  }
  run_jobs(jobs, threads);
  report.cells = cells;

  for (std::size_t ti = 0; ti < cfg.tau_values.size(); ++ti) {
    for (std::size_t a = 0; a < n_routes; ++a) {
      for (std::size_t b = a + 1; b < n_routes; ++b) {
        PairCheck p;
        p.tau = cfg.tau_values[ti];
        p.a = cfg.routes[a];
        p.b = cfg.routes[b];
        p.trace_distance = trace_distance(*states[ti * n_routes + a], *states[ti * n_routes + b]);
        p.tolerance = std::max(route_tolerance(p.a), route_tolerance(p.b));
        p.ok = std::isfinite(p.trace_distance) && p.trace_distance <= p.tolerance;
        report.pairs.push_back(p);
      }
    }
  }

  for (const RouteCell& c : report.cells) {
    const double tol = route_tolerance(c.route);
    const double tr_err = std::abs(c.metrics.trace - 1.0);
    report.checks.push_back({"trace", c.route, c.tau, tr_err, tol, std::isfinite(tr_err) && tr_err <= tol});
    const double neg = -c.metrics.min_eigenvalue;
    const double slack = psd_slack(c.route, cfg.cutoff_dim);
    report.checks.push_back({"positivity", c.route, c.tau, neg, slack, std::isfinite(neg) && neg <= slack});
    const double gain_err = std::abs(c.metrics.mean_photon - (report.input_mean_photon + c.tau));
    report.checks.push_back({"mean_photon_gain", c.route, c.tau, gain_err, tol, std::isfinite(gain_err) && gain_err <= tol});
  }

  // Semigroup spot check: Kraus(tau - s) after Kraus(s) against the first
  // route at the largest tau, with the split drawn from the seed.
  const double tau_max = cfg.tau_values.back();
  if (tau_max > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    const double u = 0.25 + 0.5 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    const double s = u * tau_max;
    const ChannelTime t1(s), t2(tau_max - s);
    const DensityMatrix mid = kraus_evolve(rho0, build_kraus_set(t1, auto_kraus_order(s, cutoff.dim()), cutoff));
    const DensityMatrix end =
        kraus_evolve(mid, build_kraus_set(t2, auto_kraus_order(tau_max - s, cutoff.dim()), cutoff));
    const std::size_t ref = (cfg.tau_values.size() - 1) * n_routes;
    const double d = trace_distance(end, *states[ref]);
    const double tol = route_tolerance(cfg.routes.front());
    NamedCheck c{"semigroup", cfg.routes.front(), tau_max, d, tol, std::isfinite(d) && d <= tol};
    report.checks.push_back(c);
    report.semigroup_split = s;
  }
  return report;
}

json report_to_json(const EvolutionReport& report, bool include_timings) {
  const ScenarioConfig& cfg = report.config;
  json meta;
  meta["tool"] = "qdiff";
  meta["version"] = kVersion;
  meta["libraries"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  meta["config"] = cfg.echo;

  json resolved;
  resolved["input"] = describe(cfg.input);
  resolved["cutoff_dim"] = cfg.cutoff_dim;
  resolved["cutoff_auto"] = cfg.cutoff_auto;
  resolved["kraus_auto"] = cfg.kraus_auto;
  json orders = json::array();
  for (std::size_t i = 0; i < cfg.tau_values.size(); ++i) {
    orders.push_back({{"tau", cfg.tau_values[i]}, {"max_index", cfg.kraus_max_index[i]}});
  }
  resolved["kraus_max_index"] = orders;
  resolved["grid"] = {{"radius", cfg.grid.radius},
                      {"points_per_axis", cfg.grid.points_per_axis},
                      {"rule", to_string(cfg.grid.rule)}};
  resolved["ode_step"] = kOdeStep;
  resolved["seed"] = cfg.seed;
  meta["resolved"] = resolved;

  if (include_timings) {
    json timings = json::array();
    for (const auto& c : report.cells) {
      timings.push_back({{"route", to_string(c.route)}, {"tau", c.tau}, {"seconds", c.seconds}});
    }
    meta["timings"] = timings;
  }

  json j;
  j["metadata"] = meta;
  j["input_mean_photon"] = report.input_mean_photon;
  json cells = json::array();
  for (const auto& c : report.cells) cells.push_back(cell_json(c));
  j["cells"] = cells;

  json pairs = json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"tau", p.tau},
                     {"routes", {to_string(p.a), to_string(p.b)}},
                     {"trace_distance", p.trace_distance},
                     {"tolerance", p.tolerance},
                     {"ok", p.ok}});
  }
  j["pairs"] = pairs;

  json checks = json::array();
  for (const auto& c : report.checks) {
    json cj;
    cj["name"] = c.name;
    if (c.route) cj["route"] = to_string(*c.route);
    if (c.tau) cj["tau"] = *c.tau;
    if (c.name == "semigroup" && report.semigroup_split) cj["split_tau"] = *report.semigroup_split;
    cj["value"] = c.value;
    cj["tolerance"] = c.tolerance;
    cj["ok"] = c.ok;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["ok"] = report.ok();
  return j;
}

std::string format_json(const json& j) {
  std::string out;
  write_value(j, out, 0);
  out += "\n";
  return out;
}

std::vector<std::string> write_outputs(const EvolutionReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  const ScenarioConfig& cfg = report.config;
  fs::create_directories(dir);
  std::vector<std::string> written;

  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::PreconditionViolated, "cannot write " + path);
    written.push_back(path);
    return f;
  };

  for (const OutputKind k : cfg.outputs) {
    if (k == OutputKind::report) {
      auto f = open("report.json");
      f << format_json(report_to_json(report, true));
    } else if (k == OutputKind::photon_trajectory) {
      auto f = open("photon_trajectory.csv");
      f << "tau,route,mean_photon\n";
      for (const auto& c : report.cells) f << g17(c.tau) << ',' << to_string(c.route) << ',' << g17(c.metrics.mean_photon) << '\n';
    } else {
      // P(alpha, tau) of the evolved state on a uniform mesh.
      Complex center;
      double variance0 = 0.0;
      if (const auto* c = std::get_if<Coherent>(&cfg.input)) {
        center = c->z;
      } else if (const auto* g = std::get_if<GaussianPInput>(&cfg.input)) {
        center = g->center;
        variance0 = g->variance;
      } else {
        const auto& s = std::get<SampledPInput>(cfg.input);
        center = s.center;
        variance0 = s.variance;
      }
      const ComplexGrid mesh{cfg.grid.radius, cfg.grid.points_per_axis, QuadratureRule::midpoint};
      const auto nodes = grid_nodes(mesh);
      for (const double tau : cfg.tau_values) {
        const double v = variance0 + tau;
        if (v == 0.0) continue;  // a delta function has no grid values
        const GaussianP p = normalized_gaussian_p(center, v);
        auto f = open("pfun_" + shortest(tau) + ".csv");
        f << "re_alpha,im_alpha,p\n";
        for (const auto& node : nodes) {
          f << g17(node.beta.real()) << ',' << g17(node.beta.imag()) << ',' << g17(p_value(p, node.beta)) << '\n';
        }
      }
    }
  }
  return written;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::UnsupportedRouteForInput:
      return kExitSchema;
    case ErrorCode::TruncationLoss:
    case ErrorCode::NumberExceedsCutoff:
    case ErrorCode::CutoffTooSmall:
      return kExitTruncation;
    default:
      return kExitNumerical;
  }
}

}  // namespace qdiff
