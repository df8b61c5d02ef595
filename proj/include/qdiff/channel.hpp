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

// The single-mode diffusion channel and its solution routes.
//
// All routes depend on time only through tau = kappa t:
//
//   * Kraus sum     rho -> sum_{m,n} M_{m,n} rho M_{m,n}^dagger with
//                   M_{m,n} = sqrt(tau^{m+n} / (m! n! (tau+1)^{m+n+1}))
//                             a^dagger^m (1+tau)^{-a^dagger a} a^n
//   * closed forms  coherent, number and squeezed-vacuum inputs
//   * P-integral    (1/(tau+1)) int d^2a/pi e^{-|a|^2/(tau+1)} P(a)
//                     :exp(-a^dagger a/(tau+1) + (a a^dagger + a* a)/(1+tau)):
//   * Husimi route  the beta-integral over <-beta|rho0|beta> e^{|beta|^2}
//
// The beta-integral of the Husimi route has Gaussian coefficient
// (tau+1)/tau > 0 and does not converge absolutely. It is evaluated only by
// analytic continuation of the closed Gaussian-integral formulas, term by
// term; there is no quadrature fallback.
//
// At tau = 0 every route returns its input unchanged.

#pragma once

#include <optional>
#include <vector>

#include "qdiff/fock.hpp"
#include "qdiff/pfunction.hpp"
#include "qdiff/quadrature.hpp"
#include "qdiff/special.hpp"

namespace qdiff {

class ChannelTime {
 public:
  explicit ChannelTime(double tau);

  double tau() const noexcept { return tau_; }
  bool is_identity() const noexcept { return tau_ == 0.0; }

 private:
  double tau_;
};

// M_{m,n} maps |k> to weights(k) |k - n + m> (zero when that level is
// outside the cutoff), so each operator is stored as one weight per column.
struct KrausBand {
  int m = 0;
  int n = 0;
  Eigen::VectorXd weights;

  ComplexMatrix dense() const;
};

class KrausSet {
 public:
  KrausSet(ChannelTime tau, int max_index, FockCutoff cutoff, std::vector<KrausBand> bands);

  ChannelTime tau() const noexcept { return tau_; }
  int max_index() const noexcept { return max_index_; }
  FockCutoff cutoff() const noexcept { return cutoff_; }
  const std::vector<KrausBand>& bands() const noexcept { return bands_; }
  double completeness_residual() const noexcept { return residual_; }

  // Dense M_{m,n}; throws PreconditionViolated for indices not in the set.
  ComplexMatrix matrix(int m, int n) const;

 private:
  ChannelTime tau_;
  int max_index_;
  FockCutoff cutoff_;
  std::vector<KrausBand> bands_;
  double residual_ = 0.0;
};

ComplexMatrix kraus_operator(int m, int n, ChannelTime tau, FockCutoff cutoff);
KrausSet build_kraus_set(ChannelTime tau, int max_index, FockCutoff cutoff);
DensityMatrix kraus_evolve(const DensityMatrix& rho0, const KrausSet& ks);

// Max deviation of sum M^dagger M from the identity on levels
// 0 .. dim - max_index - 1. M^dagger M is diagonal for every operator in the
// set, so only the diagonal can deviate.
double completeness_residual(const KrausSet& ks);

DensityMatrix coherent_output(Complex z, ChannelTime tau, FockCutoff cutoff);
DensityMatrix number_output(int l, ChannelTime tau, FockCutoff cutoff);

// Sign printed in front of the squeezed-state output formula.
inline constexpr int kPrintedSqueezedSign = -1;

struct SqueezedOutput {
  DensityMatrix rho;
  int sign = 1;             // overall sign chosen by the trace rule
  double unsigned_trace = 0.0;
};

SqueezedOutput squeezed_output(double lambda, ChannelTime tau, FockCutoff cutoff);

struct PIntegralOutput {
  DensityMatrix rho;
  std::optional<double> refinement_estimate;  // absent for delta and sampled inputs
};

inline constexpr double kQuadratureTolerance = 1e-5;

PIntegralOutput evolve_via_p_integral(const PFunction& p, ChannelTime tau, const ComplexGrid& grid,
                                      FockCutoff cutoff);

// The integral runs over the analytic kernel <-beta|rho0|beta> e^{|beta|^2} of
// `spec`, so rho0 must be that state: UnsupportedInput when its trace distance
// to the truncated spec state exceeds 1e-3.
DensityMatrix evolve_via_husimi_integral(const DensityMatrix& rho0, const StateSpec& spec, ChannelTime tau,
                                         FockCutoff cutoff);

}  // namespace qdiff
