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

// P-representation transforms and the classical diffusion picture.
//
// An initial coherent state |z> evolves to the P-function
//
//   P(alpha, tau) = (1/tau) exp(-|z - alpha|^2 / tau),
//
// which solves dP/dtau = d^2 P / d alpha d alpha*.

#pragma once

#include <variant>
#include <vector>

#include "qdiff/channel.hpp"
#include "qdiff/fock.hpp"
#include "qdiff/pfunction.hpp"
#include "qdiff/quadrature.hpp"

namespace qdiff {

double p_coherent_evolved(Complex alpha, Complex z, ChannelTime tau);

using PInput = std::variant<DeltaP, GaussianP, SampledP>;

// int d^2 alpha/pi P(alpha) |alpha><alpha| with the exact (unrenormalized)
// coherent amplitudes. Delta inputs bypass quadrature. Gaussian inputs throw
// QuadratureNotConverged when the refinement estimate exceeds 1e-5.
DensityMatrix rho_from_p(const PInput& p, FockCutoff cutoff, const ComplexGrid& grid);

// <-beta| rho |beta> with truncated coherent vectors; TruncationLoss when the
// vector at |beta| keeps less than 0.999 of its norm.
Complex husimi_cross_element(const DensityMatrix& rho, Complex beta);

// Boundary-to-peak ratio allowed for the Mehta kernel. The kernel is summed in
// the Fock basis with terms of size ~e^{|beta|^2}, so cancellation rather than
// decay sets the floor well above the generic quadrature threshold.
inline constexpr double kMehtaDecayTolerance = 1e-5;

// e^{|alpha|^2} int d^2beta/pi <-beta|rho|beta> e^{|beta|^2 + beta* alpha - beta alpha*}.
// Only nodes with |beta| <= grid.radius contribute; the radius should be
// picked from the state's kernel decay. Throws NotDecayed when the kernel on the
// circle |beta| = radius is not below kMehtaDecayTolerance times its peak.
Complex p_from_rho_mehta(const DensityMatrix& rho, Complex alpha, const ComplexGrid& grid);
std::vector<Complex> p_from_rho_mehta(const DensityMatrix& rho, const std::vector<Complex>& alphas,
                                      const ComplexGrid& grid);

// Max over tau in tau_list and the grid nodes of |dP/dtau - d^2P/dalpha dalpha*|
// for P = p_coherent_evolved, both sides by central differences of step h.
// StencilOutOfRange when h > 1e-3, h <= 0 or tau - h <= 0.
double diffusion_pde_residual(Complex z, const std::vector<double>& tau_list, const ComplexGrid& grid, double h);

// Same residual with both sides differentiated by hand.
double diffusion_pde_residual_analytic(Complex z, const std::vector<double>& tau_list, const ComplexGrid& grid);

// Residuals of
//   a^dagger Pi = (alpha* + d/dalpha) Pi
//   Pi a        = (alpha + d/dalpha*) Pi
//   a^dagger a Pi - a^dagger Pi a - a Pi a^dagger + Pi a a^dagger = -d^2 Pi / dalpha dalpha*
// for the projector Pi = e^{-alpha alpha*} e^{alpha a^dagger}|0><0|e^{alpha* a}
// with alpha and alpha* varied independently. The last identity is compared on
// levels 0 .. dim-2 only: the truncated a a^dagger has no entry above the top
// level.
struct DerivativeIdentityResiduals {
  double creation_left = 0.0;
  double annihilation_right = 0.0;
  double lindblad_combination = 0.0;
};

DerivativeIdentityResiduals coherent_derivative_identity_residuals(Complex alpha, FockCutoff cutoff, double h);

// The first of the three residuals.
double coherent_derivative_identity_residual(Complex alpha, FockCutoff cutoff, double h);

}  // namespace qdiff
