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

#include "qdiff/fock.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "test_util.hpp"

using namespace qdiff;
using qdiff::testing::check_close;
using qdiff::testing::max_abs_diff;
using qdiff::testing::throws_code;

TEST_SUITE("fock") {

TEST_CASE("cutoff and density matrix shape") {
  CHECK(throws_code([] { FockCutoff c(1); }, ErrorCode::PreconditionViolated));
  CHECK(FockCutoff(8) == FockCutoff(8));
  CHECK(throws_code([] { DensityMatrix r(FockCutoff(4), ComplexMatrix::Zero(3, 3)); }, ErrorCode::DimensionMismatch));
}

TEST_CASE("ladder matrices") {
  const FockCutoff c(6);
  const ComplexMatrix a = annihilation_matrix(c);
  const ComplexMatrix ad = creation_matrix(c);
  check_close(a(0, 1), 1.0, 0.0);
  check_close(a(3, 4), 2.0, 0.0);
  CHECK(max_abs_diff(ad, a.adjoint()) == 0.0);
  // The truncated commutator is the identity except in the top corner.
  const ComplexMatrix comm = a * ad - ad * a;
  for (int i = 0; i < 5; ++i) check_close(comm(i, i), 1.0, 1e-15);
  check_close(comm(5, 5), -5.0, 1e-15);
  // a^dagger a is diag(0..dim-1).
  const ComplexMatrix n = ad * a;
  for (int i = 0; i < 6; ++i) check_close(n(i, i), double(i), 1e-15);
}

TEST_CASE("coherent state vector") {
  const ComplexVector v = state_vector(Coherent{{1.0, 0.0}}, FockCutoff(16));
  CHECK(std::abs(v.norm() - 1.0) < 1e-15);
  check_close(v(3), 0.24761510494160396, 1e-15);
  // z = 4 keeps 0.4667 of the norm at dim 16.
  CHECK(throws_code([] { state_vector(Coherent{{4.0, 0.0}}, FockCutoff(16)); }, ErrorCode::TruncationLoss));
  CHECK(std::abs(coherent_amplitudes({4.0, 0.0}, 16).squaredNorm() - 0.46674489138772074) < 1e-14);
}

TEST_CASE("number and squeezed vectors") {
  const ComplexVector n = state_vector(NumberState{3}, FockCutoff(8));
  check_close(n(3), 1.0, 0.0);
  CHECK(n.norm() == doctest::Approx(1.0));
  CHECK(throws_code([] { state_vector(NumberState{8}, FockCutoff(8)); }, ErrorCode::NumberExceedsCutoff));

  const ComplexVector s = state_vector(SqueezedVacuum{0.5}, FockCutoff(64));
  check_close(s(2), 0.30771917645837049, 1e-14);
  check_close(s(4), 0.12315081385423962, 1e-14);
  check_close(s(1), 0.0, 0.0);
  CHECK(throws_code([] { state_vector(SqueezedVacuum{1.5}, FockCutoff(8)); }, ErrorCode::TruncationLoss));
}

TEST_CASE("nominal mean photon") {
  CHECK(nominal_mean_photon(Coherent{{1.0, 1.0}}) == doctest::Approx(2.0));
  CHECK(nominal_mean_photon(NumberState{4}) == 4.0);
  CHECK(nominal_mean_photon(SqueezedVacuum{0.5}) == doctest::Approx(std::sinh(0.5) * std::sinh(0.5)));
  const DensityMatrix r = density_from_spec(SqueezedVacuum{0.5}, FockCutoff(64));
  CHECK(mean_photon_of(r) == doctest::Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-12));
}

TEST_CASE("density from vector rejects unnormalized input") {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = 1.1;
  CHECK(throws_code([&] { density_from_vector(v); }, ErrorCode::NotNormalized));
}

TEST_CASE("raising exponential agrees with a dense matrix exponential") {
  const FockCutoff c(12);
  const Complex mu{0.4, -0.3};
  const ComplexMatrix x = mu * creation_matrix(c);
  const ComplexMatrix dense = x.exp();
  CHECK(max_abs_diff(raising_exponential(mu, 12), dense) < 1e-13);
  CHECK(max_abs_diff(nilpotent_exponential(x), dense) < 1e-13);
}

TEST_CASE("number power diagonal") {
  const ComplexVector d = number_power_diagonal({-0.25, 0.0}, 5);
  check_close(d(3), std::pow(0.75, 3), 1e-15);
  const ComplexVector v = number_power_diagonal({-1.0, 0.0}, 5);
  check_close(v(0), 1.0, 0.0);
  check_close(v(1), 0.0, 0.0);
}

TEST_CASE("ordered kernel matches expm products") {
  const FockCutoff c(14);
  const OrderedKernelParams p{{-0.4, 0.1}, {0.3, 0.2}, {-0.1, 0.5}};
  const ComplexMatrix a = annihilation_matrix(c);
  const ComplexMatrix ad = creation_matrix(c);
  ComplexMatrix diag = ComplexMatrix::Zero(14, 14);
  for (int k = 0; k < 14; ++k) diag(k, k) = std::pow(1.0 + p.lam, k);
  const ComplexMatrix want = (p.mu * ad).exp() * diag * (p.nu * a).exp();
  CHECK(max_abs_diff(ordered_gaussian_kernel(p, c), want) < 1e-13);
}

TEST_CASE("normal ordered gaussian realization") {
  const FockCutoff c(16);
  const ComplexMatrix a = annihilation_matrix(c);
  const ComplexMatrix ad = creation_matrix(c);
  NormalOrderedGaussian g;
  g.scale = {0.7, 0.0};
  g.up = {0.2, 0.1};
  g.down = {0.1, -0.3};
  g.mixed = {-0.3, 0.0};
  g.up2 = {0.05, 0.0};
  g.down2 = {0.0, 0.04};
  g.polynomial = {{{0, 0}, 1.0}, {{1, 2}, Complex{0.5, 0.2}}};
  ComplexMatrix d = ComplexMatrix::Zero(16, 16);
  for (int k = 0; k < 16; ++k) d(k, k) = std::pow(1.0 + g.mixed, k);
  const ComplexMatrix middle = d + Complex{0.5, 0.2} * (ad * d * a * a);
  const ComplexMatrix want = g.scale * (g.up * ad + g.up2 * ad * ad).exp() * middle * (g.down * a + g.down2 * a * a).exp();
  CHECK(max_abs_diff(g.realize(c), want) < 1e-13);
}

TEST_CASE("state metrics") {
  // Thermal state with mean 0.5: p_n = (1/1.5)(1/3)^n.
  const int dim = 40;
  ComplexMatrix t = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) t(n, n) = std::pow(1.0 / 3.0, n) / 1.5;
  const StateMetrics m = state_metrics(DensityMatrix(FockCutoff(dim), t));
  CHECK(m.trace == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.mean_photon == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.purity == doctest::Approx(0.5).epsilon(1e-14));  // 1/(2 nbar + 1)
  CHECK(m.hermiticity_residual == 0.0);
  CHECK(m.min_eigenvalue > 0.0);
}

TEST_CASE("trace distance") {
  const FockCutoff c(24);
  const DensityMatrix a = density_from_spec(Coherent{{0.5, 0.0}}, c);
  const DensityMatrix b = density_from_spec(Coherent{{-0.5, 0.0}}, c);
  // Pure states: sqrt(1 - |<a|b>|^2) with |<a|b>|^2 = e^{-|a-b|^2}.
  CHECK(trace_distance(a, b) == doctest::Approx(std::sqrt(1.0 - std::exp(-1.0))).epsilon(1e-12));
  CHECK(trace_distance(a, a) == 0.0);
  CHECK(throws_code([&] { trace_distance(a, density_from_spec(NumberState{0}, FockCutoff(8))); },
                    ErrorCode::DimensionMismatch));
}

}  // TEST_SUITE
