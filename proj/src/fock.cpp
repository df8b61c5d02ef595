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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qdiff/error.hpp"

namespace qdiff {

FockCutoff::FockCutoff(int dim) : dim_(dim) {
  if (dim < 2) {
    throw Error(ErrorCode::PreconditionViolated, "Fock cutoff must keep at least two levels, got " + std::to_string(dim));
  }
}

DensityMatrix::DensityMatrix(FockCutoff cutoff, ComplexMatrix entries, std::string label)
    : cutoff_(cutoff), entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.rows() != cutoff_.dim() || entries_.cols() != cutoff_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix is " + std::to_string(entries_.rows()) + "x" +
                                                  std::to_string(entries_.cols()) + " but cutoff is " +
                                                  std::to_string(cutoff_.dim()));
  }
}

std::string describe(const StateSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          out << "coherent(z=" << s.z.real() << (s.z.imag() < 0 ? "-" : "+") << std::abs(s.z.imag()) << "i)";
        } else if constexpr (std::is_same_v<T, NumberState>) {
          out << "number(l=" << s.l << ")";
        } else {
          out << "squeezed_vacuum(lambda=" << s.lambda << ")";
        }
      },
      spec);
  return out.str();
}

double nominal_mean_photon(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          return std::norm(s.z);
        } else if constexpr (std::is_same_v<T, NumberState>) {
          return static_cast<double>(s.l);
        } else {
          const double sh = std::sinh(s.lambda);
          return sh * sh;
        }
      },
      spec);
}

ComplexMatrix annihilation_matrix(FockCutoff cutoff) {
  const int dim = cutoff.dim();
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix creation_matrix(FockCutoff cutoff) { return annihilation_matrix(cutoff).adjoint(); }

ComplexVector coherent_amplitudes(Complex alpha, int dim) {
  ComplexVector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

namespace {

void require_retained(double norm2, const std::string& what) {
  if (norm2 < kTruncationThreshold) {
    std::ostringstream msg;
    msg << what << " keeps only " << norm2 << " of its norm below the cutoff";
    throw Error(ErrorCode::TruncationLoss, msg.str());
  }
}

}  // namespace

ComplexVector state_vector(const StateSpec& spec, FockCutoff cutoff) {
  const int dim = cutoff.dim();
  return std::visit(
      [&](const auto& s) -> ComplexVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NumberState>) {
          if (s.l < 0 || s.l >= dim) {
            throw Error(ErrorCode::NumberExceedsCutoff,
                        "number state l=" + std::to_string(s.l) + " needs dim > l, dim=" + std::to_string(dim));
          }
          ComplexVector v = ComplexVector::Zero(dim);
          v(s.l) = 1.0;
          return v;
        } else if constexpr (std::is_same_v<T, Coherent>) {
          ComplexVector v = coherent_amplitudes(s.z, dim);
          const double norm2 = v.squaredNorm();
          require_retained(norm2, describe(spec));
          return v / std::sqrt(norm2);
        } else {
          // sqrt(sech lambda) sum_k (tanh(lambda)/2)^k sqrt((2k)!)/k! |2k>
          const double t = std::tanh(s.lambda);
          ComplexVector v = ComplexVector::Zero(dim);
          double amp = std::sqrt(1.0 / std::cosh(s.lambda));
          for (int k = 0; 2 * k < dim; ++k) {
            if (k > 0) {
              // ratio of consecutive amplitudes: (t/2) sqrt((2k)(2k-1)) / k
              amp *= 0.5 * t * std::sqrt(static_cast<double>(2 * k) * (2 * k - 1)) / k;
            }
            v(2 * k) = amp;
          }
          const double norm2 = v.squaredNorm();
          require_retained(norm2, describe(spec));
          return v / std::sqrt(norm2);
        }
      },
      spec);
}

DensityMatrix density_from_vector(const ComplexVector& v, std::string label) {
  const double norm2 = v.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "state vector has squared norm " << norm2;
    throw Error(ErrorCode::NotNormalized, msg.str());
  }
  const auto dim = static_cast<int>(v.size());
  return {FockCutoff(dim), v * v.adjoint(), std::move(label)};
}

DensityMatrix density_from_spec(const StateSpec& spec, FockCutoff cutoff) {
  return density_from_vector(state_vector(spec, cutoff), describe(spec));
}

ComplexMatrix raising_exponential(Complex mu, int dim) {
  // Column k: mu^{i-k} sqrt(i!/k!)/(i-k)! for i >= k, built by the ratio
  // between successive rows.
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    Complex entry{1.0, 0.0};
    e(k, k) = entry;
    for (int i = k + 1; i < dim; ++i) {
      entry *= mu * std::sqrt(static_cast<double>(i)) / static_cast<double>(i - k);
      e(i, k) = entry;
    }
  }
  return e;
}

ComplexMatrix nilpotent_exponential(const ComplexMatrix& x) {
  const auto dim = x.rows();
  ComplexMatrix sum = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix term = ComplexMatrix::Identity(dim, dim);
  for (Eigen::Index k = 1; k < dim; ++k) {
    term = (term * x) / static_cast<double>(k);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    sum += term;
  }
  return sum;
}

ComplexVector number_power_diagonal(Complex lam, int dim) {
  ComplexVector d = ComplexVector::Zero(dim);
  const Complex base = 1.0 + lam;
  d(0) = 1.0;
  if (base == Complex{0.0, 0.0}) return d;
  for (int n = 1; n < dim; ++n) d(n) = d(n - 1) * base;
  return d;
}

ComplexMatrix ladder_sandwich(int raise, int lower, const ComplexVector& diag) {
  const auto dim = static_cast<int>(diag.size());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int k = lower; k < dim; ++k) {
    const int mid = k - lower;
    const int target = mid + raise;
    if (target >= dim) break;
    // A^lower |k> = sqrt(k!/mid!) |mid>, A^dagger^raise |mid> = sqrt(target!/mid!) |target>
    double weight = 1.0;
    for (int r = mid + 1; r <= k; ++r) weight *= std::sqrt(static_cast<double>(r));
    for (int r = mid + 1; r <= target; ++r) weight *= std::sqrt(static_cast<double>(r));
    out(target, k) = weight * diag(mid);
  }
  return out;
}

ComplexMatrix ordered_gaussian_kernel(const OrderedKernelParams& p, FockCutoff cutoff) {
  const int dim = cutoff.dim();
  const ComplexMatrix up = raising_exponential(p.mu, dim);
  const ComplexMatrix down = raising_exponential(p.nu, dim).transpose();
  const ComplexVector d = number_power_diagonal(p.lam, dim);
  return up * d.asDiagonal() * down;
}

ComplexMatrix NormalOrderedGaussian::realize(FockCutoff cutoff) const {
  const int dim = cutoff.dim();
  const ComplexMatrix a = annihilation_matrix(cutoff);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix left = nilpotent_exponential(up * ad + up2 * (ad * ad));
  const ComplexMatrix right = nilpotent_exponential(down * a + down2 * (a * a));
  const ComplexVector d = number_power_diagonal(mixed, dim);

  ComplexMatrix middle = ComplexMatrix::Zero(dim, dim);
  for (const auto& [powers, coeff] : polynomial) {
    if (coeff == Complex{0.0, 0.0}) continue;
    middle += coeff * ladder_sandwich(powers.first, powers.second, d);
  }
  return scale * (left * middle * right);
}

double trace_of(const DensityMatrix& rho) { return rho.entries().trace().real(); }

double mean_photon_of(const DensityMatrix& rho) {
  double sum = 0.0;
  for (int n = 1; n < rho.dim(); ++n) sum += n * rho(n, n).real();
  return sum;
}

StateMetrics state_metrics(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.entries();
  StateMetrics out;
  out.trace = trace_of(rho);
  out.mean_photon = mean_photon_of(rho);
  // Tr(rho^2) = sum_ij rho_ij rho_ji
  out.purity = (m.cwiseProduct(m.transpose())).sum().real();
  out.hermiticity_residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.cutoff() == b.cutoff())) {
    throw Error(ErrorCode::DimensionMismatch,
                "trace distance between dim " + std::to_string(a.dim()) + " and dim " + std::to_string(b.dim()));
  }
  const ComplexMatrix diff = a.entries() - b.entries();
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace qdiff
