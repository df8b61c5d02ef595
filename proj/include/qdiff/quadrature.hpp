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

#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qdiff/fock.hpp"

namespace qdiff {

enum class QuadratureRule { midpoint, gauss_legendre_tensor };

std::string to_string(QuadratureRule rule);
QuadratureRule quadrature_rule_from_string(const std::string& name);

// Tensor-product rule on the square [-radius, radius]^2 of (Re beta, Im beta).
struct ComplexGrid {
  double radius = 6.0;
  int points_per_axis = 64;
  QuadratureRule rule = QuadratureRule::gauss_legendre_tensor;

  // Same square, twice the points per axis.
  ComplexGrid refined() const { return {radius, 2 * points_per_axis, rule}; }
};

struct QuadratureNode {
  Complex beta;
  double weight;  // includes the 1/pi of the measure d^2 beta / pi
};

// Nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

std::vector<QuadratureNode> grid_nodes(const ComplexGrid& grid);

struct QuadratureResult {
  Complex value;
  double refinement_estimate = 0.0;  // |I(2N) - I(N)|
};

inline constexpr double kDefaultDecayTolerance = 1e-12;

// Integral of f(beta) d^2 beta / pi over the grid square, plus the refinement
// estimate from doubling points_per_axis. Throws NotDecayed when |f| on the
// square's edges exceeds decay_tolerance * max(1, peak |f| on the nodes).
QuadratureResult quadrature_2d(const std::function<Complex(Complex)>& f, const ComplexGrid& grid,
                               double decay_tolerance = kDefaultDecayTolerance);

struct MatrixQuadratureResult {
  ComplexMatrix value;
  double refinement_estimate = 0.0;  // max-abs entry of I(2N) - I(N)
};

// Matrix-valued version; the refinement pass is optional because it costs
// four times the base evaluation.
MatrixQuadratureResult quadrature_2d_matrix(const std::function<ComplexMatrix(Complex)>& f, const ComplexGrid& grid,
                                            bool estimate_refinement, double decay_tolerance = kDefaultDecayTolerance);

}  // namespace qdiff
