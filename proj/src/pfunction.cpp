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

#include "qdiff/pfunction.hpp"

#include <cmath>

#include "qdiff/error.hpp"

namespace qdiff {

GaussianP normalized_gaussian_p(Complex center, double variance) {
  if (!(variance > 0.0)) throw Error(ErrorCode::PreconditionViolated, "Gaussian P-function needs variance > 0");
  return {center, variance, 1.0 / variance};
}

double p_value(const GaussianP& p, Complex alpha) {
  return p.normalization * std::exp(-std::norm(alpha - p.center) / p.variance);
}

SampledP sample_p(const GaussianP& p, const ComplexGrid& grid) {
  SampledP out{grid, {}};
  const auto nodes = grid_nodes(grid);
  out.values.reserve(nodes.size());
  for (const auto& node : nodes) out.values.push_back(p_value(p, node.beta));
  return out;
}

}  // namespace qdiff
