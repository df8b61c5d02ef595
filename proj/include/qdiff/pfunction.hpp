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

// Glauber-Sudarshan P-function descriptors, normalized against d^2 alpha / pi.

#pragma once

#include <variant>
#include <vector>

#include "qdiff/fock.hpp"
#include "qdiff/quadrature.hpp"

namespace qdiff {

// weight * pi delta^2(alpha - z): the P-function of weight * |z><z|.
struct DeltaP {
  Complex z;
  double weight = 1.0;
};

// normalization * exp(-|alpha - center|^2 / variance). With normalization
// 1/variance it integrates to one and describes a displaced thermal state with
// mean thermal photon number equal to the variance.
struct GaussianP {
  Complex center;
  double variance = 1.0;
  double normalization = 1.0;
};

GaussianP normalized_gaussian_p(Complex center, double variance);

using PFunctionAnalytic = std::variant<DeltaP, GaussianP>;

// P values at the nodes of `grid`, in grid_nodes() order.
struct SampledP {
  ComplexGrid grid;
  std::vector<double> values;
};

using PFunction = std::variant<DeltaP, GaussianP, SampledP>;

double p_value(const GaussianP& p, Complex alpha);
SampledP sample_p(const GaussianP& p, const ComplexGrid& grid);

}  // namespace qdiff
