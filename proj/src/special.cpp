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

#include "qdiff/special.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "qdiff/error.hpp"

namespace qdiff {
namespace {

constexpr int kExactDegree = 20;

// Exact for n <= 62 with k <= n; only used below kExactDegree.
std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

void check_degree(int degree, int limit, const char* what) {
  if (degree < 0 || degree > limit) {
    throw Error(ErrorCode::DegreeTooLarge,
                std::string(what) + " degree " + std::to_string(degree) + " outside [0, " + std::to_string(limit) + "]");
  }
}

std::vector<Complex> powers(Complex x, int n) {
  std::vector<Complex> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * x;
  return p;
}

// n! m! / (k! (n-k)! (m-k)!) = C(n,k) C(m,k) k!
double moment_combinatorial(int n, int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / i;
    c *= static_cast<double>(m - k + i) / i;
    c *= i;
  }
  return c;
}

}  // namespace

std::vector<double> laguerre_coefficients(int l) {
  check_degree(l, kMaxPolynomialDegree, "Laguerre");
  std::vector<double> c(static_cast<std::size_t>(l) + 1);
  if (l <= kExactDegree) {
    for (int k = 0; k <= l; ++k) {
      const double magnitude = static_cast<double>(binomial(l, k)) / static_cast<double>(factorial_u64(k));
      c[k] = (k % 2 == 0) ? magnitude : -magnitude;
    }
    return c;
  }
  // C(l,k)/k! by successive ratios: c_{k+1}/c_k = -(l-k) / (k+1)^2
  c[0] = 1.0;
  for (int k = 0; k < l; ++k) c[k + 1] = -c[k] * static_cast<double>(l - k) / ((k + 1.0) * (k + 1.0));
  return c;
}

Complex laguerre(int l, Complex x) {
  check_degree(l, kMaxPolynomialDegree, "Laguerre");
  if (l <= kExactDegree) {
    const auto c = laguerre_coefficients(l);
    const auto xp = powers(x, l);
    Complex sum{};
    for (int k = 0; k <= l; ++k) sum += c[k] * xp[k];
    return sum;
  }
  Complex prev{1.0, 0.0};
  Complex cur = 1.0 - x;
  for (int k = 1; k < l; ++k) {
    const Complex next = ((2.0 * k + 1.0 - x) * cur - static_cast<double>(k) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

Complex hermite2(int m, int n, Complex x, Complex y) {
  check_degree(m, kMaxPolynomialDegree, "Hermite");
  check_degree(n, kMaxPolynomialDegree, "Hermite");
  if (m <= kExactDegree && n <= kExactDegree) {
    const auto xp = powers(x, m);
    const auto yp = powers(y, n);
    Complex sum{};
    for (int l = 0; l <= std::min(m, n); ++l) {
      // each factor is exact; the product can pass 2^64 (m = n = 20, l = 15)
      const double coeff = static_cast<double>(binomial(m, l)) * static_cast<double>(binomial(n, l)) *
                           static_cast<double>(factorial_u64(l));
      const Complex term = coeff * (xp[m - l] * yp[n - l]);
      sum += (l % 2 == 0) ? term : -term;
    }
    return sum;
  }
  // H_{0,j} = y^j, H_{i+1,j} = x H_{i,j} - j H_{i,j-1}
  std::vector<Complex> row = powers(y, n);
  for (int i = 0; i < m; ++i) {
    std::vector<Complex> next(row.size());
    for (int j = 0; j <= n; ++j) next[j] = x * row[j] - (j > 0 ? static_cast<double>(j) * row[j - 1] : Complex{});
    row = std::move(next);
  }
  return row[n];
}

double laguerre_hermite_identity_residual(int l, Complex x, Complex y) {
  check_degree(l, 50, "Laguerre-Hermite identity");
  double inv_factorial = 1.0;
  for (int i = 2; i <= l; ++i) inv_factorial /= i;
  const Complex rhs = ((l % 2 == 0) ? 1.0 : -1.0) * inv_factorial * hermite2(l, l, x, y);
  return std::abs(laguerre(l, x * y) - rhs);
}

Complex GaussianMomentExpansion::evaluate(Complex xi, Complex eta) const {
  Complex sum{};
  for (const auto& t : terms) sum += t.coeff * std::pow(xi, t.xi_power) * std::pow(eta, t.eta_power);
  return std::exp(exponent * xi * eta) * sum;
}

GaussianMomentExpansion gaussian_moment_expansion(int n, int m, Complex zeta, IntegralMode mode) {
  if (n < 0 || m < 0) throw Error(ErrorCode::PreconditionViolated, "moment powers must be non-negative");
  if (mode == IntegralMode::convergent && !(zeta.real() < 0.0)) {
    std::ostringstream msg;
    msg << "Re(zeta) = " << zeta.real() << " >= 0 requires analytic continuation";
    throw Error(ErrorCode::DivergentWithoutContinuation, msg.str());
  }
  if (std::abs(zeta) < 1e-14) throw Error(ErrorCode::SingularDenominator, "zeta vanishes");

  GaussianMomentExpansion out;
  out.exponent = -1.0 / zeta;
  const Complex minus_zeta = -zeta;
  for (int k = 0; k <= std::min(n, m); ++k) {
    GaussianMomentExpansion::Term t;
    t.xi_power = m - k;
    t.eta_power = n - k;
    t.coeff = moment_combinatorial(n, m, k) / std::pow(minus_zeta, m + n - k + 1);
    out.terms.push_back(t);
  }
  return out;
}

Complex gaussian_moment_integral(const GaussianMomentParams& p, IntegralMode mode) {
  return gaussian_moment_expansion(p.n, p.m, p.zeta, mode).evaluate(p.xi, p.eta);
}

Complex GaussianQuadraticForm::evaluate(Complex xi, Complex eta) const {
  return prefactor * std::exp(xi_eta * xi * eta + eta2 * eta * eta + xi2 * xi * xi);
}

RootBranch continuation_branch(Complex zeta, Complex f, Complex g) {
  const Complex root = std::sqrt(zeta * zeta - 4.0 * f * g);
  const Complex reference = -zeta * std::sqrt(1.0 - 4.0 * f * g / (zeta * zeta));
  return std::abs(root - reference) <= std::abs(root + reference) ? RootBranch::principal : RootBranch::negated;
}

bool quadratic_form_converges(Complex zeta, Complex f, Complex g) {
  // Re(zeta|z|^2 + f z^2 + g z*^2) with z = u + iv:
  //   (Re zeta + Re(f+g)) u^2 + (Re zeta - Re(f+g)) v^2 - 2 Im(f-g) u v
  const double a = zeta.real() + (f + g).real();
  const double c = zeta.real() - (f + g).real();
  const double b = -(f - g).imag();
  return zeta.real() < 0.0 && a < 0.0 && a * c - b * b > 0.0;
}

GaussianQuadraticForm gaussian_quadratic_form(Complex zeta, Complex f, Complex g, IntegralMode mode, RootBranch branch) {
  if (mode == IntegralMode::convergent && !quadratic_form_converges(zeta, f, g)) {
    throw Error(ErrorCode::DivergentWithoutContinuation, "quadratic exponent is not negative definite");
  }
  const Complex denom = zeta * zeta - 4.0 * f * g;
  if (std::abs(denom) < 1e-14) throw Error(ErrorCode::SingularDenominator, "zeta^2 - 4fg vanishes");
  Complex root = std::sqrt(denom);
  if (branch == RootBranch::negated) root = -root;

  GaussianQuadraticForm out;
  out.prefactor = 1.0 / root;
  out.xi_eta = -zeta / denom;
  out.eta2 = f / denom;
  out.xi2 = g / denom;
  out.branch = branch;
  return out;
}

GaussianQuadraticForm gaussian_quadratic_form(Complex zeta, Complex f, Complex g, IntegralMode mode) {
  return gaussian_quadratic_form(zeta, f, g, mode, continuation_branch(zeta, f, g));
}

Complex gaussian_quadratic_integral(const GaussianQuadraticParams& p, IntegralMode mode, RootBranch branch) {
  return gaussian_quadratic_form(p.zeta, p.f, p.g, mode, branch).evaluate(p.xi, p.eta);
}

Complex gaussian_quadratic_integral(const GaussianQuadraticParams& p, IntegralMode mode) {
  return gaussian_quadratic_form(p.zeta, p.f, p.g, mode).evaluate(p.xi, p.eta);
}

}  // namespace qdiff
