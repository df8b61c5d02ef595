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

// Polynomials and complex Gaussian integrals used by the closed-form outputs.
//
// Integrals are over the complex plane with measure d^2 beta / pi. Both
// Gaussian formulas are exposed twice: as a scalar value, and as an expansion
// whose coefficients multiply powers of the linear coefficients (xi, eta).
// The expansion form is what lets the channel substitute operator-valued
// coefficients inside a normal-ordering symbol.

#pragma once

#include <complex>
#include <vector>

namespace qdiff {

using Complex = std::complex<double>;

inline constexpr int kMaxPolynomialDegree = 200;

// L_l(x) = sum_k C(l, k) (-x)^k / k!. Explicit sum up to degree 20, three-term
// recurrence above. Throws DegreeTooLarge for l > 200.
Complex laguerre(int l, Complex x);

// Coefficients of L_l(y) = sum_k c_k y^k, i.e. c_k = C(l, k) (-1)^k / k!.
std::vector<double> laguerre_coefficients(int l);

// H_{m,n}(x, y) = sum_l m! n! (-1)^l / (l! (m-l)! (n-l)!) x^{m-l} y^{n-l}.
Complex hermite2(int m, int n, Complex x, Complex y);

// |L_l(xy) - (-1)^l H_{l,l}(x, y) / l!|
double laguerre_hermite_identity_residual(int l, Complex x, Complex y);

enum class IntegralMode { convergent, analytic_continuation };

// Integral of beta^n beta*^m exp(zeta |beta|^2 + xi beta + eta beta*).
struct GaussianMomentParams {
  int n = 0;
  int m = 0;
  Complex zeta{-1.0, 0.0};
  Complex xi{};
  Complex eta{};
};

// exp(exponent * xi * eta) * sum_k coeff_k xi^{xi_power_k} eta^{eta_power_k}
struct GaussianMomentExpansion {
  struct Term {
    int xi_power = 0;
    int eta_power = 0;
    Complex coeff;
  };
  Complex exponent;
  std::vector<Term> terms;

  Complex evaluate(Complex xi, Complex eta) const;
};

GaussianMomentExpansion gaussian_moment_expansion(int n, int m, Complex zeta, IntegralMode mode);
Complex gaussian_moment_integral(const GaussianMomentParams& p, IntegralMode mode);

// Integral of exp(zeta |z|^2 + xi z + eta z* + f z^2 + g z*^2).
struct GaussianQuadraticParams {
  Complex zeta{-1.0, 0.0};
  Complex xi{};
  Complex eta{};
  Complex f{};
  Complex g{};
};

// Which square root of (zeta^2 - 4 f g) sits in the prefactor.
enum class RootBranch { principal, negated };

// prefactor * exp(xi_eta * xi eta + eta2 * eta^2 + xi2 * xi^2)
struct GaussianQuadraticForm {
  Complex prefactor;
  Complex xi_eta;
  Complex eta2;
  Complex xi2;
  RootBranch branch = RootBranch::principal;

  Complex evaluate(Complex xi, Complex eta) const;
};

// The branch reached by continuing sqrt(zeta^2 - 4fg) from the convergent
// regime, where it equals -zeta sqrt(1 - 4fg/zeta^2).
RootBranch continuation_branch(Complex zeta, Complex f, Complex g);

// True when Re(zeta) < 0 and the real part of zeta|z|^2 + f z^2 + g z*^2 is a
// negative definite quadratic form in (Re z, Im z).
bool quadratic_form_converges(Complex zeta, Complex f, Complex g);

GaussianQuadraticForm gaussian_quadratic_form(Complex zeta, Complex f, Complex g, IntegralMode mode, RootBranch branch);
GaussianQuadraticForm gaussian_quadratic_form(Complex zeta, Complex f, Complex g, IntegralMode mode);

Complex gaussian_quadratic_integral(const GaussianQuadraticParams& p, IntegralMode mode, RootBranch branch);
Complex gaussian_quadratic_integral(const GaussianQuadraticParams& p, IntegralMode mode);

}  // namespace qdiff
