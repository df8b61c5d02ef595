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

#include "qdiff/master_equation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "qdiff/error.hpp"

namespace qdiff {
namespace {

inline constexpr double kMaxKappaDt = 0.01;
inline constexpr double kTopLevelLimit = 1e-6;

// Elementwise form of the four products; sqrt_n[k] = sqrt(k).
void rhs_into(const ComplexMatrix& rho, double kappa, const std::vector<double>& sqrt_n, ComplexMatrix& out) {
  const auto dim = static_cast<int>(rho.rows());
  for (int j = 0; j < dim; ++j) {
    // (A A^dagger)_jj = j+1 except the last level, which has nothing above it.
    const double aad_j = (j + 1 < dim) ? j + 1.0 : 0.0;
    for (int i = 0; i < dim; ++i) {
      Complex v = static_cast<double>(i) * rho(i, j) + aad_j * rho(i, j);
      if (i > 0 && j > 0) v -= sqrt_n[i] * sqrt_n[j] * rho(i - 1, j - 1);
      if (i + 1 < dim && j + 1 < dim) v -= sqrt_n[i + 1] * sqrt_n[j + 1] * rho(i + 1, j + 1);
      out(i, j) = -kappa * v;
    }
  }
}

std::vector<double> sqrt_table(int dim) {
  std::vector<double> s(static_cast<std::size_t>(dim) + 1);
  for (int k = 0; k <= dim; ++k) s[k] = std::sqrt(static_cast<double>(k));
  return s;
}

}  // namespace

DensityMatrix lindblad_rhs(const DensityMatrix& rho, double kappa) {
  ComplexMatrix out(rho.dim(), rho.dim());
  rhs_into(rho.entries(), kappa, sqrt_table(rho.dim()), out);
  return {rho.cutoff(), std::move(out), "lindblad_rhs"};
}

DensityMatrix integrate_master_equation(const DensityMatrix& rho0, const IntegratorConfig& cfg) {
  if (!(cfg.kappa > 0.0) || !(cfg.t_final >= 0.0) || !(cfg.dt > 0.0)) {
    throw Error(ErrorCode::PreconditionViolated, "integrator needs kappa > 0, t_final >= 0, dt > 0");
  }
  if (cfg.kappa * cfg.dt > kMaxKappaDt) {
    std::ostringstream msg;
    msg << "kappa*dt = " << cfg.kappa * cfg.dt << " exceeds " << kMaxKappaDt;
    throw Error(ErrorCode::StepTooLarge, msg.str());
  }
  if (cfg.t_final == 0.0) return rho0.relabeled("ode_oracle");

  // Step count rounds up so the final step lands exactly on t_final.
  const auto steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  const double h = cfg.t_final / static_cast<double>(steps);
  const int dim = rho0.dim();
  const auto sqrt_n = sqrt_table(dim);

  ComplexMatrix rho = rho0.entries();
  ComplexMatrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);
  for (long s = 0; s < steps; ++s) {
    rhs_into(rho, cfg.kappa, sqrt_n, k1);
    stage = rho + (0.5 * h) * k1;
    rhs_into(stage, cfg.kappa, sqrt_n, k2);
    stage = rho + (0.5 * h) * k2;
    rhs_into(stage, cfg.kappa, sqrt_n, k3);
    stage = rho + h * k3;
    rhs_into(stage, cfg.kappa, sqrt_n, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const double top = std::abs(rho(dim - 1, dim - 1));
  if (top > kTopLevelLimit) {
    std::ostringstream msg;
    msg << "top Fock level holds " << top << " after integration";
    throw Error(ErrorCode::TruncationLoss, msg.str());
  }
  return {rho0.cutoff(), std::move(rho), "ode_oracle"};
}

}  // namespace qdiff
