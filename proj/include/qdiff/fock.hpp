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

// Truncated Fock-space operator algebra for a single bosonic mode.
//
// Every operator lives on the basis |0>, ..., |dim-1>. The ladder matrices are
// the plain truncations of a and a^dagger, so (A A^dagger - A^dagger A) is the
// identity except for its last diagonal entry, which equals -(dim-1).
//
// Normally ordered Gaussian exponentials are realized through the factorization
//
//   :exp(mu a^dagger + lam a^dagger a + nu a): = e^{mu a^dagger} (1+lam)^{a^dagger a} e^{nu a},
//
// which is exact in the truncated basis because e^{mu A^dagger} is lower
// triangular and never needs levels above the cutoff.

#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Dense>

namespace qdiff {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Minimum acceptable retained probability before a route reports TruncationLoss.
inline constexpr double kTruncationThreshold = 0.999;

// PSD slack per Fock level: exact routes (closed forms, Kraus sums) and
// quadrature routes respectively.
inline constexpr double kExactPsdSlack = 1e-9;
inline constexpr double kQuadraturePsdSlack = 1e-6;

class FockCutoff {
 public:
  explicit FockCutoff(int dim);

  int dim() const noexcept { return dim_; }
  friend bool operator==(FockCutoff a, FockCutoff b) noexcept { return a.dim_ == b.dim_; }

 private:
  int dim_;
};

class DensityMatrix {
 public:
  DensityMatrix(FockCutoff cutoff, ComplexMatrix entries, std::string label = {});

  FockCutoff cutoff() const noexcept { return cutoff_; }
  int dim() const noexcept { return cutoff_.dim(); }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  const std::string& label() const noexcept { return label_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  DensityMatrix relabeled(std::string label) const { return {cutoff_, entries_, std::move(label)}; }

 private:
  FockCutoff cutoff_;
  ComplexMatrix entries_;
  std::string label_;
};

struct Coherent {
  Complex z;
};
struct NumberState {
  int l = 0;
};
struct SqueezedVacuum {
  double lambda = 0.0;
};
using StateSpec = std::variant<Coherent, NumberState, SqueezedVacuum>;

std::string describe(const StateSpec& spec);

// Mean photon number of the untruncated input state.
double nominal_mean_photon(const StateSpec& spec);

struct OrderedKernelParams {
  Complex lam;
  Complex mu;
  Complex nu;
};

ComplexMatrix annihilation_matrix(FockCutoff cutoff);
ComplexMatrix creation_matrix(FockCutoff cutoff);

// Normalized truncated expansion of the state. Throws NumberExceedsCutoff and,
// for coherent/squeezed kinds, TruncationLoss when less than 0.999 of the norm
// survives the cutoff.
ComplexVector state_vector(const StateSpec& spec, FockCutoff cutoff);

// e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n < dim, without renormalization.
// This is the exact compression of |alpha> and is what quadrature routes use.
ComplexVector coherent_amplitudes(Complex alpha, int dim);

DensityMatrix density_from_vector(const ComplexVector& v, std::string label = "pure");
DensityMatrix density_from_spec(const StateSpec& spec, FockCutoff cutoff);

// e^{mu A^dagger} in closed form: entry (i, k) = mu^{i-k} sqrt(i!/k!) / (i-k)!.
// This is the finite Taylor series of the nilpotent generator summed entrywise.
ComplexMatrix raising_exponential(Complex mu, int dim);

// Finite Taylor series exp(X) for a nilpotent X (X^dim = 0).
ComplexMatrix nilpotent_exponential(const ComplexMatrix& x);

// Diagonal (1+lam)^n, with the lam = -1 limit taken as the vacuum projector.
ComplexVector number_power_diagonal(Complex lam, int dim);

// A^dagger^raise diag(d) A^lower: maps |k> to a multiple of |k - lower + raise>.
ComplexMatrix ladder_sandwich(int raise, int lower, const ComplexVector& diag);

// :exp(mu a^dagger + lam a^dagger a + nu a): via e^{mu A^dagger} D e^{nu A}.
ComplexMatrix ordered_gaussian_kernel(const OrderedKernelParams& p, FockCutoff cutoff);

// General normally ordered Gaussian with a polynomial prefactor,
//
//   scale * :P(a^dagger, a) exp(up a^dagger + down a + mixed a^dagger a
//                              + up2 a^dagger^2 + down2 a^2):,
//
// where P = sum c_ij a^dagger^i a^j. Inside the ordering symbol creation
// operators go left and annihilation operators right, so the realization is
// e^{up A^dagger + up2 A^dagger^2} (sum c_ij A^dagger^i (1+mixed)^N A^j)
// e^{down A + down2 A^2}.
struct NormalOrderedGaussian {
  Complex scale{1.0, 0.0};
  Complex up{};
  Complex down{};
  Complex mixed{};
  Complex up2{};
  Complex down2{};
  std::map<std::pair<int, int>, Complex> polynomial{{{0, 0}, Complex{1.0, 0.0}}};

  ComplexMatrix realize(FockCutoff cutoff) const;
};

struct StateMetrics {
  double trace = 0.0;
  double mean_photon = 0.0;
  double purity = 0.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
};

StateMetrics state_metrics(const DensityMatrix& rho);

// Half the trace norm of the (Hermitian part of the) difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

double trace_of(const DensityMatrix& rho);
double mean_photon_of(const DensityMatrix& rho);

}  // namespace qdiff
