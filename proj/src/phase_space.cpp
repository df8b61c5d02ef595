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

#include "qdiff/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdiff/error.hpp"

namespace qdiff {
namespace {

inline constexpr int kBoundaryAngles = 64;
inline constexpr double kMaxPdeStep = 1e-3;
inline constexpr double kMaxIdentityStep = 1e-4;
inline constexpr double kMaxIdentityAlpha = 2.0;

// e^{|beta|^2} <-beta|rho|beta> = sum_ij (-beta*)^i rho_ij beta^j / sqrt(i! j!).
// The Gaussian factors of the two coherent vectors cancel exactly, so they are
// never formed.
Complex mehta_kernel(const ComplexMatrix& rho, Complex beta) {
  const auto dim = static_cast<int>(rho.rows());
  ComplexVector right(dim), left(dim);
  right(0) = 1.0;
  left(0) = 1.0;
  const Complex mb = -std::conj(beta);
  for (int k = 1; k < dim; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k));
    right(k) = right(k - 1) * beta * s;
    left(k) = left(k - 1) * mb * s;
  }
  return left.transpose() * rho * right;
}

// e^{-a ab} a^i ab^j / sqrt(i! j!) with a and ab independent.
ComplexMatrix projector(Complex a, Complex ab, int dim) {
  ComplexVector u(dim), v(dim);
  u(0) = 1.0;
  v(0) = 1.0;
  for (int k = 1; k < dim; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k));
    u(k) = u(k - 1) * a * s;
    v(k) = v(k - 1) * ab * s;
  }
  return std::exp(-a * ab) * (u * v.transpose());
}

double p_raw(Complex alpha, Complex z, double tau) { return std::exp(-std::norm(z - alpha) / tau) / tau; }

}  // namespace

double p_coherent_evolved(Complex alpha, Complex z, ChannelTime tau) {
  if (tau.is_identity()) throw Error(ErrorCode::ZeroTime, "the P-function of a coherent state is singular at tau = 0");
  return p_raw(alpha, z, tau.tau());
}

DensityMatrix rho_from_p(const PInput& p, FockCutoff cutoff, const ComplexGrid& grid) {
  const int dim = cutoff.dim();
  if (const auto* d = std::get_if<DeltaP>(&p)) {
    DensityMatrix pure = density_from_spec(Coherent{d->z}, cutoff);
    return {cutoff, d->weight * pure.entries(), "p_representation"};
  }
  if (const auto* g = std::get_if<GaussianP>(&p)) {
    const GaussianP gp = *g;
    auto integrand = [&](Complex alpha) -> ComplexMatrix {
      const ComplexVector v = coherent_amplitudes(alpha, dim);
      return p_value(gp, alpha) * (v * v.adjoint());
    };
    MatrixQuadratureResult q = quadrature_2d_matrix(integrand, grid, true);
    if (q.refinement_estimate > kQuadratureTolerance) {
      std::ostringstream msg;
      msg << "P-representation refinement estimate " << q.refinement_estimate << " exceeds " << kQuadratureTolerance;
      throw Error(ErrorCode::QuadratureNotConverged, msg.str());
    }
    return {cutoff, std::move(q.value), "p_representation"};
  }
  const auto& s = std::get<SampledP>(p);
  const auto nodes = grid_nodes(s.grid);
  if (nodes.size() != s.values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sampled P-function does not match its grid");
  }
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (s.values[i] == 0.0) continue;
    const ComplexVector v = coherent_amplitudes(nodes[i].beta, dim);
    acc += (nodes[i].weight * s.values[i]) * (v * v.adjoint());
  }
  return {cutoff, std::move(acc), "p_representation"};
}

Complex husimi_cross_element(const DensityMatrix& rho, Complex beta) {
  const ComplexVector right = coherent_amplitudes(beta, rho.dim());
  const double kept = right.squaredNorm();
  if (kept < kTruncationThreshold) {
    std::ostringstream msg;
    msg << "coherent vector at |beta| = " << std::abs(beta) << " keeps only " << kept << " of its norm";
    throw Error(ErrorCode::TruncationLoss, msg.str());
  }
  const ComplexVector left = coherent_amplitudes(-beta, rho.dim());
  return left.dot(rho.entries() * right);  // dot conjugates the left operand
}

std::vector<Complex> p_from_rho_mehta(const DensityMatrix& rho, const std::vector<Complex>& alphas,
                                      const ComplexGrid& grid) {
  const ComplexMatrix& m = rho.entries();
  const double r = grid.radius;

  std::vector<QuadratureNode> nodes;
  for (const auto& node : grid_nodes(grid)) {
    if (std::abs(node.beta) <= r) nodes.push_back(node);
  }
  std::vector<Complex> kernel(nodes.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    kernel[i] = mehta_kernel(m, nodes[i].beta);
    peak = std::max(peak, std::abs(kernel[i]));
  }
  double edge = 0.0;
  for (int k = 0; k < kBoundaryAngles; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / kBoundaryAngles;
    edge = std::max(edge, std::abs(mehta_kernel(m, std::polar(r, phi))));
  }
  if (edge > kMehtaDecayTolerance * std::max(1.0, peak)) {
    std::ostringstream msg;
    msg << "Mehta kernel is " << edge << " on |beta| = " << r << " against a peak of " << peak;
    throw Error(ErrorCode::NotDecayed, msg.str());
  }

  std::vector<Complex> out;
  out.reserve(alphas.size());
  for (const Complex alpha : alphas) {
    Complex sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Complex b = nodes[i].beta;
      sum += nodes[i].weight * kernel[i] * std::exp(std::conj(b) * alpha - b * std::conj(alpha));
    }
    out.push_back(std::exp(std::norm(alpha)) * sum);
  }
  return out;
}

Complex p_from_rho_mehta(const DensityMatrix& rho, Complex alpha, const ComplexGrid& grid) {
  return p_from_rho_mehta(rho, std::vector<Complex>{alpha}, grid).front();
}

double diffusion_pde_residual(Complex z, const std::vector<double>& tau_list, const ComplexGrid& grid, double h) {
  if (!(h > 0.0) || h > kMaxPdeStep) {
    std::ostringstream msg;
    msg << "finite-difference step " << h << " outside (0, " << kMaxPdeStep << "]";
    throw Error(ErrorCode::StencilOutOfRange, msg.str());
  }
  for (const double tau : tau_list) {
    if (!(tau - h > 0.0)) {
      std::ostringstream msg;
      msg << "stencil around tau = " << tau << " reaches tau <= 0";
      throw Error(ErrorCode::StencilOutOfRange, msg.str());
    }
  }
  const auto nodes = grid_nodes(grid);
  double worst = 0.0;
  for (const double tau : tau_list) {
    for (const auto& node : nodes) {
      const Complex a = node.beta;
      const double dt = (p_raw(a, z, tau + h) - p_raw(a, z, tau - h)) / (2.0 * h);
      // d^2/da da* = (1/4) Laplacian in (Re a, Im a).
      const double c = p_raw(a, z, tau);
      const double lap = (p_raw(a + h, z, tau) + p_raw(a - h, z, tau) + p_raw(a + Complex{0.0, h}, z, tau) +
                          p_raw(a - Complex{0.0, h}, z, tau) - 4.0 * c) /
                         (h * h);
      worst = std::max(worst, std::abs(dt - 0.25 * lap));
    }
  }
  return worst;
}

double diffusion_pde_residual_analytic(Complex z, const std::vector<double>& tau_list, const ComplexGrid& grid) {
  for (const double tau : tau_list) {
    if (!(tau > 0.0)) throw Error(ErrorCode::ZeroTime, "P-function derivatives need tau > 0");
  }
  const auto nodes = grid_nodes(grid);
  double worst = 0.0;
  for (const double tau : tau_list) {
    for (const auto& node : nodes) {
      const Complex a = node.beta;
      const double p = p_raw(a, z, tau);
      const double r2 = std::norm(z - a);
      // d/dtau of (1/tau) e^{-r2/tau}
      const double dt = p * (-1.0 / tau + r2 / (tau * tau));
      // d/da* gives P (z - a)/tau; d/da of that gives P (z*-a*)(z-a)/tau^2 - P/tau.
      const Complex d_ab = p * (z - a) / tau;
      const Complex d_a_ab = d_ab * (std::conj(z) - std::conj(a)) / tau - p / tau;
      worst = std::max(worst, std::abs(dt - d_a_ab));
    }
  }
  return worst;
}

DerivativeIdentityResiduals coherent_derivative_identity_residuals(Complex alpha, FockCutoff cutoff, double h) {
  if (!(h > 0.0) || h > kMaxIdentityStep) {
    throw Error(ErrorCode::PreconditionViolated, "derivative identity step must lie in (0, 1e-4]");
  }
  if (std::abs(alpha) > kMaxIdentityAlpha) {
    throw Error(ErrorCode::PreconditionViolated, "derivative identities are checked for |alpha| <= 2 only");
  }
  const int dim = cutoff.dim();
  const Complex a = alpha;
  const Complex ab = std::conj(alpha);
  const ComplexMatrix ann = annihilation_matrix(cutoff);
  const ComplexMatrix cre = creation_matrix(cutoff);

  const ComplexMatrix pi = projector(a, ab, dim);
  const ComplexMatrix d_a = (projector(a + h, ab, dim) - projector(a - h, ab, dim)) / (2.0 * h);
  const ComplexMatrix d_ab = (projector(a, ab + h, dim) - projector(a, ab - h, dim)) / (2.0 * h);
  const ComplexMatrix d_a_ab = (projector(a + h, ab + h, dim) - projector(a + h, ab - h, dim) -
                                projector(a - h, ab + h, dim) + projector(a - h, ab - h, dim)) /
                               (4.0 * h * h);

  DerivativeIdentityResiduals out;
  out.creation_left = (cre * pi - (ab * pi + d_a)).cwiseAbs().maxCoeff();
  out.annihilation_right = (pi * ann - (a * pi + d_ab)).cwiseAbs().maxCoeff();

  const ComplexMatrix lhs = cre * ann * pi - cre * pi * ann - ann * pi * cre + pi * ann * cre;
  const int n = dim - 1;
  out.lindblad_combination = (lhs + d_a_ab).topLeftCorner(n, n).cwiseAbs().maxCoeff();
  return out;
}

double coherent_derivative_identity_residual(Complex alpha, FockCutoff cutoff, double h) {
  return coherent_derivative_identity_residuals(alpha, cutoff, h).creation_left;
}

}  // namespace qdiff
