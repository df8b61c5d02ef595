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

#include "qdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdiff/error.hpp"

namespace qdiff {

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::midpoint ? "midpoint" : "gauss_legendre_tensor";
}

QuadratureRule quadrature_rule_from_string(const std::string& name) {
  if (name == "midpoint") return QuadratureRule::midpoint;
  if (name == "gauss_legendre_tensor") return QuadratureRule::gauss_legendre_tensor;
  throw Error(ErrorCode::SchemaError, "unknown quadrature rule '" + name + "'");
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "Gauss-Legendre needs at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

std::vector<QuadratureNode> grid_nodes(const ComplexGrid& grid) {
  if (!(grid.radius > 0.0) || grid.points_per_axis < 1) {
    throw Error(ErrorCode::PreconditionViolated, "grid needs radius > 0 and at least one point per axis");
  }
  const int n = grid.points_per_axis;
  std::vector<double> x(n);
  std::vector<double> w(n);
  if (grid.rule == QuadratureRule::gauss_legendre_tensor) {
    gauss_legendre(n, x, w);
    for (int i = 0; i < n; ++i) {
      x[i] *= grid.radius;
      w[i] *= grid.radius;
    }
  } else {
    const double h = 2.0 * grid.radius / n;
    for (int i = 0; i < n; ++i) {
      x[i] = -grid.radius + (i + 0.5) * h;
      w[i] = h;
    }
  }
  std::vector<QuadratureNode> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.push_back({Complex{x[i], x[j]}, w[i] * w[j] / std::numbers::pi});
  }
  return out;
}

namespace {

std::vector<Complex> edge_points(const ComplexGrid& grid) {
  const int n = std::max(16, grid.points_per_axis);
  const double r = grid.radius;
  std::vector<Complex> pts;
  pts.reserve(4 * static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const double s = -r + 2.0 * r * i / n;
    pts.emplace_back(s, -r);
    pts.emplace_back(s, r);
    pts.emplace_back(-r, s);
    pts.emplace_back(r, s);
  }
  return pts;
}

void check_decay(double edge_max, double peak, double tolerance) {
  if (edge_max > tolerance * std::max(1.0, peak)) {
    std::ostringstream msg;
    msg << "integrand is " << edge_max << " on the grid boundary (peak " << peak << ")";
    throw Error(ErrorCode::NotDecayed, msg.str());
  }
}

Complex integrate_scalar(const std::function<Complex(Complex)>& f, const ComplexGrid& grid, double* peak) {
  Complex sum{};
  double local_peak = 0.0;
  for (const auto& node : grid_nodes(grid)) {
    const Complex v = f(node.beta);
    local_peak = std::max(local_peak, std::abs(v));
    sum += node.weight * v;
  }
  if (peak != nullptr) *peak = local_peak;
  return sum;
}

ComplexMatrix integrate_matrix(const std::function<ComplexMatrix(Complex)>& f, const ComplexGrid& grid, double* peak) {
  ComplexMatrix sum;
  double local_peak = 0.0;
  for (const auto& node : grid_nodes(grid)) {
    const ComplexMatrix v = f(node.beta);
    if (sum.size() == 0) sum = ComplexMatrix::Zero(v.rows(), v.cols());
    local_peak = std::max(local_peak, v.cwiseAbs2().maxCoeff());
    sum += node.weight * v;
  }
  if (peak != nullptr) *peak = std::sqrt(local_peak);
  return sum;
}

}  // namespace

QuadratureResult quadrature_2d(const std::function<Complex(Complex)>& f, const ComplexGrid& grid,
                               double decay_tolerance) {
  double peak = 0.0;
  const Complex coarse = integrate_scalar(f, grid, &peak);
  double edge_max = 0.0;
  for (const Complex b : edge_points(grid)) edge_max = std::max(edge_max, std::abs(f(b)));
  check_decay(edge_max, peak, decay_tolerance);
  const Complex fine = integrate_scalar(f, grid.refined(), nullptr);
  return {coarse, std::abs(fine - coarse)};
}

MatrixQuadratureResult quadrature_2d_matrix(const std::function<ComplexMatrix(Complex)>& f, const ComplexGrid& grid,
                                            bool estimate_refinement, double decay_tolerance) {
  double peak = 0.0;
  ComplexMatrix coarse = integrate_matrix(f, grid, &peak);
  double edge_max = 0.0;
  // the matrix-valued edge scan is sparser; the integrands here are smooth
  const auto edges = edge_points({grid.radius, 16, grid.rule});
  for (const Complex b : edges) edge_max = std::max(edge_max, std::sqrt(f(b).cwiseAbs2().maxCoeff()));
  check_decay(edge_max, peak, decay_tolerance);
  if (!estimate_refinement) return {std::move(coarse), 0.0};
  const ComplexMatrix fine = integrate_matrix(f, grid.refined(), nullptr);
  const double estimate = (fine - coarse).cwiseAbs().maxCoeff();
  return {std::move(coarse), estimate};
}

}  // namespace qdiff
