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

// Direct integration of the diffusion master equation
//
//   d rho / dt = -kappa (a^dagger a rho - a^dagger rho a - a rho a^dagger + rho a a^dagger)
//
// with a fixed-step classical RK4. This is the ground truth every other route
// is compared against, so it shares nothing with the channel module beyond the
// Fock-space containers.

#pragma once

#include <string>

#include "qdiff/fock.hpp"

namespace qdiff {

enum class IntegratorMethod { rk4 };

struct IntegratorConfig {
  double kappa = 1.0;
  double t_final = 0.0;
  double dt = 1e-3;
  IntegratorMethod method = IntegratorMethod::rk4;
};

// Right-hand side with truncated ladder matrices, so a a^dagger has a zero
// in its last diagonal entry.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, double kappa);

// Throws StepTooLarge when kappa*dt > 0.01 and TruncationLoss when the
// occupation of the top Fock level exceeds 1e-6 at the end of the run.
DensityMatrix integrate_master_equation(const DensityMatrix& rho0, const IntegratorConfig& cfg);

}  // namespace qdiff
