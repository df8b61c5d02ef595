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

// Acceptance run: one PASS/FAIL line per criterion.
//
//   qdiff_acceptance        all criteria
//   qdiff_acceptance 4 7    only the listed ones
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdiff/channel.hpp"
#include "qdiff/master_equation.hpp"
#include "qdiff/phase_space.hpp"
#include "qdiff/scenario.hpp"
#include "qdiff/special.hpp"

using namespace qdiff;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EvolutionReport run(const nlohmann::json& doc) { return run_scenario(parse_config(doc.dump())); }

bool is_quadrature_route(Route r) { return r == Route::p_integral || r == Route::husimi_integral; }

void criterion_1(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const double r12 = completeness_residual(build_kraus_set(ChannelTime(0.25), 12, FockCutoff(32)));
  double previous = INFINITY;
  bool monotone = true;
  for (int m = 2; m <= 24; m += 2) {
    const double r = completeness_residual(build_kraus_set(ChannelTime(0.25), m, FockCutoff(32)));
    monotone = monotone && r < previous;
    previous = r;
  }
  const double secs = seconds_since(t0);
  out.detail << "residual(M=12)=" << r12 << " tol=1e-08 monotone=" << (monotone ? "yes" : "no")
             << " residual(M=24)=" << previous << " time=" << secs << "s";
  out.require(r12 <= 1e-8, "residual above tolerance");
  out.require(monotone, "not monotone in M");
  out.require(secs < 5.0, "runtime");
}

void criterion_2(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> taus{0.0, 0.25, 0.5, 1.0};
  const std::vector<nlohmann::json> inputs{
      {{"kind", "coherent"}, {"z", {1.0, 0.0}}},
      {{"kind", "coherent"}, {"z", {-0.5, 1.0}}},
      {{"kind", "number"}, {"l", 0}},
      {{"kind", "number"}, {"l", 3}},
      {{"kind", "squeezed_vacuum"}, {"lambda", 0.5}},
      {{"kind", "p_gaussian"}, {"center", {0.5, 0.0}}, {"variance", 0.5}},
      {{"kind", "p_samples"}, {"center", {0.5, 0.0}}, {"variance", 0.5}},
  };
  double worst_exact = 0.0, worst_quad = 0.0;
  int cells = 0;
  for (const auto& in : inputs) {
    const std::string kind = in["kind"];
    std::vector<std::string> routes{"kraus", "ode_oracle"};
    if (kind != "p_samples") routes.push_back("closed_form");
    if (kind == "coherent" || kind == "p_gaussian" || kind == "p_samples") routes.push_back("p_integral");
    if (kind == "coherent" || kind == "number" || kind == "squeezed_vacuum") routes.push_back("husimi_integral");
    const EvolutionReport r = run({{"input", in}, {"tau_values", taus}, {"routes", routes}});
    for (const auto& c : r.cells) {
      const double e = std::abs(c.metrics.trace - 1.0);
      double& worst = is_quadrature_route(c.route) ? worst_quad : worst_exact;
      worst = std::max(worst, e);
      ++cells;
    }
  }
  const double secs = seconds_since(t0);
  out.detail << cells << " cells, max|tr-1| exact=" << worst_exact << " (tol 1e-06) quadrature=" << worst_quad
             << " (tol 1e-05) time=" << secs << "s";
  out.require(worst_exact <= 1e-6, "exact routes");
  out.require(worst_quad <= 1e-5, "quadrature routes");
  out.require(secs < 30.0, "runtime");
}

void criterion_3(Outcome& out) {
  const FockCutoff c(64);
  double worst = 0.0;
  for (int l = 0; l <= 3; ++l) {
    const DensityMatrix r0 = density_from_spec(NumberState{l}, c);
    for (double t : {0.1, 0.5, 1.0}) {
      const ChannelTime tau(t);
      const double want = l + t;
      worst = std::max(worst, std::abs(mean_photon_of(number_output(l, tau, c)) - want));
      worst = std::max(worst, std::abs(mean_photon_of(kraus_evolve(r0, build_kraus_set(tau, auto_kraus_order(t, 64), c))) - want));
      worst = std::max(worst, std::abs(mean_photon_of(integrate_master_equation(r0, {1.0, t, 1e-3})) - want));
    }
  }
  out.detail << "max|<n> - (l+tau)| over closed form, kraus, rk4 = " << worst << " (tol 1e-06)";
  out.require(worst <= 1e-6, "mean photon");
}

void criterion_4(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<nlohmann::json> inputs{
      {{"kind", "coherent"}, {"z", 1.0}},  {{"kind", "number"}, {"l", 0}}, {{"kind", "number"}, {"l", 1}},
      {{"kind", "number"}, {"l", 2}},      {{"kind", "number"}, {"l", 3}}, {{"kind", "squeezed_vacuum"}, {"lambda", 0.5}},
  };
  double worst_exact = 0.0, worst_quad = 0.0;
  for (const auto& in : inputs) {
    const EvolutionReport r = run({{"input", in},
                                   {"tau_values", {0.25, 0.5}},
                                   {"routes", {"kraus", "closed_form", "husimi_integral", "ode_oracle"}}});
    for (const auto& p : r.pairs) {
      if (is_quadrature_route(p.a) || is_quadrature_route(p.b)) {
        worst_quad = std::max(worst_quad, p.trace_distance);
      } else {
        worst_exact = std::max(worst_exact, p.trace_distance);
      }
    }
  }
  const double secs = seconds_since(t0);
  out.detail << "max trace distance: non-quadrature pairs=" << worst_exact << " (tol 1e-06), with husimi="
             << worst_quad << " (tol 1e-05) time=" << secs << "s";
  out.require(worst_exact <= 1e-6, "non-quadrature pairs");
  out.require(worst_quad <= 1e-5, "husimi pairs");
  out.require(secs < 120.0, "runtime");
}

void criterion_5(Outcome& out) {
  // Square of half-width 3 around z = 0 with a node at alpha = z.
  const ComplexGrid grid{3.0, 61, QuadratureRule::midpoint};
  const double r1 = diffusion_pde_residual(0.0, {0.5}, grid, 1e-3);
  const double r2 = diffusion_pde_residual(0.0, {0.5}, grid, 5e-4);
  const double ratio = r1 / r2;
  const double analytic = diffusion_pde_residual_analytic(0.0, {0.25, 0.5, 1.0}, grid);
  out.detail << "fd residual(h=1e-3)=" << r1 << " (tol 1e-05) halving ratio=" << ratio
             << " analytic residual=" << analytic << " (tol 1e-12)";
  out.require(r1 <= 1e-5, "finite-difference residual");
  out.require(std::abs(ratio - 4.0) <= 0.2, "second-order decay");
  out.require(analytic <= 1e-12, "analytic residual");
}

void criterion_6(Outcome& out) {
  const FockCutoff c(16);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> radius(0.0, 1.5), angle(0.0, 2.0 * M_PI);
  std::vector<Complex> alphas{0.0, 1.5, Complex{0.0, -1.5}};
  for (int i = 0; i < 10; ++i) alphas.push_back(std::polar(radius(rng), angle(rng)));
  double worst_first = 0.0, worst_comb = 0.0;
  for (const Complex a : alphas) {
    const DerivativeIdentityResiduals r = coherent_derivative_identity_residuals(a, c, 1e-4);
    worst_first = std::max({worst_first, r.creation_left, r.annihilation_right});
    worst_comb = std::max(worst_comb, r.lindblad_combination);
  }
  out.detail << alphas.size() << " points, first-order identities=" << worst_first
             << " combined identity=" << worst_comb << " (tol 1e-06)";
  out.require(worst_first <= 1e-6, "first-order identities");
  out.require(worst_comb <= 1e-6, "combined identity");
}

void criterion_7(Outcome& out) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  auto small = [&](double r) { return std::polar(in(0.1, r), in(0.0, 2.0 * M_PI)); };
  const ComplexGrid grid{9.0, 128, QuadratureRule::gauss_legendre_tensor};

  double worst_moment = 0.0;
  for (int i = 0; i < 10; ++i) {
    GaussianMomentParams p;
    p.n = static_cast<int>(rng() % 4);
    p.m = static_cast<int>(rng() % 4);
    p.zeta = {in(-2.0, -1.0), in(-0.5, 0.5)};
    p.xi = small(0.6);
    p.eta = small(0.6);
    const Complex closed = gaussian_moment_integral(p, IntegralMode::convergent);
    const QuadratureResult q = quadrature_2d(
        [&](Complex b) {
          return std::pow(b, p.n) * std::pow(std::conj(b), p.m) *
                 std::exp(p.zeta * std::norm(b) + p.xi * b + p.eta * std::conj(b));
        },
        grid);
    worst_moment = std::max(worst_moment, std::abs(closed - q.value) / std::abs(q.value));
  }

  double worst_quadratic = 0.0;
  for (int i = 0; i < 10;) {
    GaussianQuadraticParams p;
    p.zeta = {in(-2.0, -1.2), in(-0.5, 0.5)};
    p.f = small(0.3);
    p.g = small(0.3);
    p.xi = small(0.6);
    p.eta = small(0.6);
    if (!quadratic_form_converges(p.zeta, p.f, p.g)) continue;
    const Complex closed = gaussian_quadratic_integral(p, IntegralMode::convergent);
    const QuadratureResult q = quadrature_2d(
        [&](Complex z) {
          const Complex zc = std::conj(z);
          return std::exp(p.zeta * std::norm(z) + p.xi * z + p.eta * zc + p.f * z * z + p.g * zc * zc);
        },
        grid);
    worst_quadratic = std::max(worst_quadratic, std::abs(closed - q.value) / std::abs(q.value));
    ++i;
  }
  out.detail << "max relative error: moment formula=" << worst_moment << " quadratic formula=" << worst_quadratic
             << " (tol 1e-06, 10 draws each)";
  out.require(worst_moment <= 1e-6, "moment formula");
  out.require(worst_quadratic <= 1e-6, "quadratic formula");
}

void criterion_8(Outcome& out) {
  std::vector<Complex> pts;
  const int n = 9;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex x{-2.0 + 4.0 * i / (n - 1), -2.0 + 4.0 * j / (n - 1)};
      if (std::abs(x) <= 2.0) pts.push_back(x);
    }
  }
  double worst = 0.0;
  for (int l = 0; l <= 20; ++l) {
    for (const Complex x : pts) {
      for (const Complex y : pts) {
        const double scale = std::max(1.0, std::abs(laguerre(l, x * y)));
        worst = std::max(worst, laguerre_hermite_identity_residual(l, x, y) / scale);
      }
    }
  }
  out.detail << "max relative residual for l<=20 over " << pts.size() << "x" << pts.size() << " points=" << worst
             << " (tol 1e-09)";
  out.require(worst <= 1e-9, "polynomial identity");
}

void criterion_9(Outcome& out) {
  const Complex z = 1.0;
  const std::vector<double> taus{0.25, 0.5};
  const FockCutoff c(auto_cutoff(Coherent{z}, {1.0}));
  const DensityMatrix r0 = density_from_spec(Coherent{z}, c);
  auto channel = [&](const DensityMatrix& r, double t) {
    return kraus_evolve(r, build_kraus_set(ChannelTime(t), auto_kraus_order(t, c.dim()), c));
  };
  std::vector<std::pair<double, double>> splits{{0.25, 0.25}};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.5);
  for (int i = 0; i < 5; ++i) splits.emplace_back(u(rng), u(rng));
  double worst = 0.0, at_quarter = 0.0;
  for (const auto& [t1, t2] : splits) {
    const DensityMatrix composed = channel(channel(r0, t2), t1);
    const double d = std::max(trace_distance(composed, channel(r0, t1 + t2)),
                              trace_distance(composed, coherent_output(z, ChannelTime(t1 + t2), c)));
    if (t1 == 0.25 && t2 == 0.25) at_quarter = d;
    worst = std::max(worst, d);
  }
  out.detail << "trace distance at (0.25, 0.25)=" << at_quarter << ", worst over " << splits.size()
             << " splits=" << worst << " (tol 1e-06, dim " << c.dim() << ")";
  out.require(worst <= 1e-6, "semigroup");
}

void criterion_10(Outcome& out) {
  int resolved = -2;
  bool unique = true, consistent = true, reported = true;
  double worst = 0.0;
  for (double lambda : {0.25, 0.5, 1.0}) {
    for (double t : {0.25, 0.5}) {
      const FockCutoff c(auto_cutoff(SqueezedVacuum{lambda}, {t}));
      const SqueezedOutput s = squeezed_output(lambda, ChannelTime(t), c);
      const bool plus = std::abs(s.unsigned_trace - 1.0) <= 1e-3;
      const bool minus = std::abs(-s.unsigned_trace - 1.0) <= 1e-3;
      unique = unique && (plus != minus);
      const int sign = plus ? 1 : -1;
      consistent = consistent && sign == s.sign && (resolved == -2 || resolved == sign);
      resolved = sign;
      worst = std::max(worst, std::abs(trace_of(s.rho) - 1.0));

      const EvolutionReport r = run({{"input", {{"kind", "squeezed_vacuum"}, {"lambda", lambda}}},
                                     {"tau_values", {t}},
                                     {"routes", {"closed_form"}}});
      reported = reported && r.cells.size() == 1 && r.cells[0].sign_resolution == s.sign;
    }
  }
  out.detail << "resolved sign=" << (resolved > 0 ? "+1" : "-1") << " (printed " << kPrintedSqueezedSign
             << "), exactly one sign valid=" << (unique ? "yes" : "no") << ", consistent=" << (consistent ? "yes" : "no")
             << ", report agrees=" << (reported ? "yes" : "no") << ", max|tr-1|=" << worst;
  out.require(unique, "sign not unique");
  out.require(consistent, "sign inconsistent");
  out.require(reported, "report mismatch");
}

const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>> kCriteria{
    {1, {"kraus completeness", criterion_1}},
    {2, {"trace conservation", criterion_2}},
    {3, {"mean photon law", criterion_3}},
    {4, {"route agreement", criterion_4}},
    {5, {"classical diffusion equation", criterion_5}},
    {6, {"coherent projector identities", criterion_6}},
    {7, {"gaussian integral formulas", criterion_7}},
    {8, {"laguerre-hermite identity", criterion_8}},
    {9, {"semigroup property", criterion_9}},
    {10, {"squeezed sign resolution", criterion_10}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (!kCriteria.count(n)) {
      std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    for (const auto& [n, _] : kCriteria) selected.push_back(n);
  }

  int failed = 0;
  for (const int n : selected) {
    const auto& [name, fn] = kCriteria.at(n);
    Outcome out;
    try {
      fn(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail << " exception: " << e.what();
    }
    if (!out.ok) ++failed;
    std::printf("%s %2d %s: %s\n", out.ok ? "PASS" : "FAIL", n, name, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
