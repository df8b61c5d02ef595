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

#include "qdiff/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "qdiff/error.hpp"

namespace qdiff {
namespace {

inline constexpr double kTraceSignTolerance = 1e-3;

void require_tau_positive_for(const char* what, int m, int n, double tau) {
  if (tau == 0.0 && (m != 0 || n != 0)) {
    std::ostringstream msg;
    msg << what << ": M_{" << m << "," << n << "} is undefined at tau = 0";
    throw Error(ErrorCode::ZeroTimeNontrivialIndex, msg.str());
  }
}

KrausBand make_band(int m, int n, double tau, int dim) {
  KrausBand band{m, n, Eigen::VectorXd::Zero(dim)};
  if (tau == 0.0) {
    band.weights.setOnes();
    return band;
  }
  const double lt = std::log(tau);
  const double l1 = std::log1p(tau);
  const double log_c =
      0.5 * ((m + n) * lt - std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - (m + n + 1) * l1);
  for (int k = n; k < dim; ++k) {
    const int target = k - n + m;
    if (target >= dim) break;
    // a^n |k> = sqrt(k!/(k-n)!) |k-n>, then (1+tau)^{-(k-n)}, then a^dagger^m.
    const double lf = std::lgamma(k - n + 1.0);
    const double log_w = log_c + 0.5 * (std::lgamma(k + 1.0) - lf) - (k - n) * l1 +
                         0.5 * (std::lgamma(target + 1.0) - lf);
    band.weights(k) = std::exp(log_w);
  }
  return band;
}

double band_residual(const std::vector<KrausBand>& bands, int dim, int max_index) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (const auto& b : bands) diag += b.weights.cwiseAbs2();
  double worst = 0.0;
  for (int k = 0; k < dim - max_index; ++k) worst = std::max(worst, std::abs(diag(k) - 1.0));
  return worst;
}

void require_trace(const ComplexMatrix& rho, const char* what) {
  const double tr = rho.trace().real();
  if (tr < kTruncationThreshold) {
    std::ostringstream msg;
    msg << what << ": only " << tr << " of the trace survives the cutoff";
    throw Error(ErrorCode::TruncationLoss, msg.str());
  }
}

// ---- bivariate polynomials in the commuting symbols x = a^dagger, y = a ----

using Poly = std::map<std::pair<int, int>, Complex>;

struct Linear {
  Complex c, x, y;  // c + x X + y Y
};

// Quadratic polynomial c + x X + y Y + xx X^2 + yy Y^2 + xy XY.
struct Quad {
  Complex c, x, y, xx, yy, xy;

  void add_product(Complex s, const Linear& p, const Linear& q) {
    c += s * p.c * q.c;
    x += s * (p.c * q.x + p.x * q.c);
    y += s * (p.c * q.y + p.y * q.c);
    xx += s * p.x * q.x;
    yy += s * p.y * q.y;
    xy += s * (p.x * q.y + p.y * q.x);
  }
};

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [pa, ca] : a) {
    for (const auto& [pb, cb] : b) out[{pa.first + pb.first, pa.second + pb.second}] += ca * cb;
  }
  return out;
}

Poly power(const Linear& l, int k) {
  Poly base{{{0, 0}, l.c}, {{1, 0}, l.x}, {{0, 1}, l.y}};
  Poly out{{{0, 0}, Complex{1.0, 0.0}}};
  for (int i = 0; i < k; ++i) out = multiply(out, base);
  return out;
}

ComplexMatrix realize_gaussian(Complex scale, const Quad& q, Complex extra_mixed, Poly poly, FockCutoff cutoff) {
  NormalOrderedGaussian g;
  g.scale = scale * std::exp(q.c);
  g.up = q.x;
  g.down = q.y;
  g.mixed = q.xy + extra_mixed;
  g.up2 = q.xx;
  g.down2 = q.yy;
  g.polynomial = std::move(poly);
  return g.realize(cutoff);
}

}  // namespace

ChannelTime::ChannelTime(double tau) : tau_(tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::PreconditionViolated, "tau must be finite and non-negative");
  }
}

ComplexMatrix KrausBand::dense() const {
  const auto dim = static_cast<int>(weights.size());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int k = n; k < dim && k - n + m < dim; ++k) out(k - n + m, k) = weights(k);
  return out;
}

KrausSet::KrausSet(ChannelTime tau, int max_index, FockCutoff cutoff, std::vector<KrausBand> bands)
    : tau_(tau), max_index_(max_index), cutoff_(cutoff), bands_(std::move(bands)) {
  residual_ = band_residual(bands_, cutoff_.dim(), max_index_);
}

ComplexMatrix KrausSet::matrix(int m, int n) const {
  for (const auto& b : bands_) {
    if (b.m == m && b.n == n) return b.dense();
  }
  throw Error(ErrorCode::PreconditionViolated, "Kraus index not in set");
}

ComplexMatrix kraus_operator(int m, int n, ChannelTime tau, FockCutoff cutoff) {
  if (m < 0 || n < 0) throw Error(ErrorCode::PreconditionViolated, "Kraus indices must be non-negative");
  require_tau_positive_for("kraus_operator", m, n, tau.tau());
  return make_band(m, n, tau.tau(), cutoff.dim()).dense();
}

KrausSet build_kraus_set(ChannelTime tau, int max_index, FockCutoff cutoff) {
  if (max_index < 1) throw Error(ErrorCode::PreconditionViolated, "max_index must be >= 1");
  if (cutoff.dim() <= max_index) {
    std::ostringstream msg;
    msg << "cutoff " << cutoff.dim() << " must exceed max_index " << max_index;
    throw Error(ErrorCode::CutoffTooSmall, msg.str());
  }
  std::vector<KrausBand> bands;
  if (tau.is_identity()) {
    bands.push_back(make_band(0, 0, 0.0, cutoff.dim()));
  } else {
    bands.reserve(static_cast<std::size_t>(max_index + 1) * (max_index + 1));
    for (int m = 0; m <= max_index; ++m) {
      for (int n = 0; n <= max_index; ++n) bands.push_back(make_band(m, n, tau.tau(), cutoff.dim()));
    }
  }
  return {tau, max_index, cutoff, std::move(bands)};
}

double completeness_residual(const KrausSet& ks) { return ks.completeness_residual(); }

DensityMatrix kraus_evolve(const DensityMatrix& rho0, const KrausSet& ks) {
  if (!(rho0.cutoff() == ks.cutoff())) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix and Kraus set use different cutoffs");
  }
  if (ks.tau().is_identity()) return rho0.relabeled("kraus");

  const int dim = rho0.dim();
  const ComplexMatrix& rho = rho0.entries();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& b : ks.bands()) {
    // Source levels n .. hi-1 land on m .. m+len-1.
    const int hi = std::min(dim, dim - b.m + b.n);
    const int len = hi - b.n;
    if (len <= 0) continue;
    const Eigen::VectorXd w = b.weights.segment(b.n, len);
    const Eigen::MatrixXd ww = w * w.transpose();
    out.block(b.m, b.m, len, len) += rho.block(b.n, b.n, len, len).cwiseProduct(ww.cast<Complex>());
  }
  return {rho0.cutoff(), std::move(out), "kraus"};
}

DensityMatrix coherent_output(Complex z, ChannelTime tau, FockCutoff cutoff) {
  if (tau.is_identity()) return density_from_spec(Coherent{z}, cutoff).relabeled("closed_form");
  const double t1 = tau.tau() + 1.0;
  OrderedKernelParams p{Complex{-1.0 / t1, 0.0}, z / t1, std::conj(z) / t1};
  ComplexMatrix rho = (std::exp(-std::norm(z) / t1) / t1) * ordered_gaussian_kernel(p, cutoff);
  require_trace(rho, "coherent_output");
  return {cutoff, std::move(rho), "closed_form"};
}

DensityMatrix number_output(int l, ChannelTime tau, FockCutoff cutoff) {
  if (l < 0) throw Error(ErrorCode::PreconditionViolated, "photon number must be non-negative");
  if (l >= cutoff.dim()) {
    std::ostringstream msg;
    msg << "|" << l << "> does not fit in cutoff " << cutoff.dim();
    throw Error(ErrorCode::NumberExceedsCutoff, msg.str());
  }
  if (tau.is_identity()) return density_from_spec(NumberState{l}, cutoff).relabeled("closed_form");

  const double t = tau.tau();
  const double lt = std::log(t);
  const double l1 = std::log1p(t);
  const int dim = cutoff.dim();
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  // Every term is positive, so the log-space sum has no cancellation.
  for (int n = 0; n < dim; ++n) {
    double sum = 0.0;
    for (int k = 0; k <= std::min(l, n); ++k) {
      const double log_term = l * lt - (l + 1) * l1 + std::lgamma(l + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(l - k + 1.0) - std::lgamma(k + 1.0) - k * (lt + l1) +
                              std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0) + (n - k) * (lt - l1);
      sum += std::exp(log_term);
    }
    rho(n, n) = sum;
  }
  require_trace(rho, "number_output");
  return {cutoff, std::move(rho), "closed_form"};
}

SqueezedOutput squeezed_output(double lambda, ChannelTime tau, FockCutoff cutoff) {
  if (!(std::abs(lambda) <= 2.0)) throw Error(ErrorCode::PreconditionViolated, "squeezed_output needs |lambda| <= 2");
  if (tau.is_identity()) {
    DensityMatrix rho = density_from_spec(SqueezedVacuum{lambda}, cutoff).relabeled("closed_form");
    return {rho, 1, 1.0};
  }
  const double t = tau.tau();
  const double th = std::tanh(lambda);
  const double g = (t + 1.0) * (t + 1.0) - t * t * th * th;
  const double lam_k = (t + 1.0) / (g * t) - 1.0 / t;

  NormalOrderedGaussian k;
  k.scale = 1.0 / (std::cosh(lambda) * std::sqrt(g));
  k.mixed = lam_k;
  k.up2 = th / (2.0 * g);
  k.down2 = th / (2.0 * g);
  ComplexMatrix rho = k.realize(cutoff);

  const Complex tr = rho.trace();
  if (std::abs(tr.imag()) > kTraceSignTolerance || std::abs(std::abs(tr.real()) - 1.0) > kTraceSignTolerance) {
    if (std::abs(tr.imag()) <= kTraceSignTolerance && std::abs(tr.real()) < kTruncationThreshold) {
      std::ostringstream msg;
      msg << "squeezed_output: only " << std::abs(tr.real()) << " of the trace survives the cutoff";
      throw Error(ErrorCode::TruncationLoss, msg.str());
    }
    std::ostringstream msg;
    msg << "squeezed_output: trace " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
        << "i is not +-1";
    throw Error(ErrorCode::SignResolutionFailed, msg.str());
  }
  const int sign = tr.real() > 0.0 ? 1 : -1;
  if (sign < 0) rho = -rho;
  return {DensityMatrix{cutoff, std::move(rho), "closed_form"}, sign, tr.real()};
}

PIntegralOutput evolve_via_p_integral(const PFunction& p, ChannelTime tau, const ComplexGrid& grid,
                                      FockCutoff cutoff) {
  if (const auto* d = std::get_if<DeltaP>(&p)) {
    DensityMatrix out = coherent_output(d->z, tau, cutoff);
    return {DensityMatrix{cutoff, d->weight * out.entries(), "p_integral"}, std::nullopt};
  }

  // Each coherent component evolves to
  //   (1/t1) e^{-|a|^2/t1} e^{mu A+} s^N e^{nu A},  t1 = tau + 1, s = tau/t1,
  // with mu = a/t1, nu = a*/t1, whose entries are
  //   sum_i sqrt(C(j,i) C(k,i)) s^i  mu^{j-i} nu^{k-i} / sqrt((j-i)! (k-i)!).
  // The alpha dependence is all in the last factor, so the quadrature only
  // has to produce the weighted moment table and the sum over i runs once.
  const double t1 = tau.tau() + 1.0;
  const double s_ratio = tau.tau() / t1;
  const int dim = cutoff.dim();
  auto scaled_powers = [dim](Complex x) {
    ComplexVector v(dim);
    v(0) = 1.0;
    for (int k = 1; k < dim; ++k) v(k) = v(k - 1) * x / std::sqrt(static_cast<double>(k));
    return v;
  };
  auto moment_term = [&](Complex alpha) -> ComplexMatrix {
    const ComplexVector u = scaled_powers(alpha / t1);
    const ComplexVector v = scaled_powers(std::conj(alpha) / t1);
    return (std::exp(-std::norm(alpha) / t1) / t1) * (u * v.transpose());
  };
  auto assemble = [&](const ComplexMatrix& moments) {
    std::vector<double> lfact(dim + 1, 0.0);
    for (int k = 1; k <= dim; ++k) lfact[k] = lfact[k - 1] + std::log(static_cast<double>(k));
    const double log_s = s_ratio > 0.0 ? std::log(s_ratio) : 0.0;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        Complex acc{};
        const int top = s_ratio > 0.0 ? std::min(j, k) : 0;
        for (int i = 0; i <= top; ++i) {
          const double log_c = 0.5 * (lfact[j] - lfact[i] - lfact[j - i] + lfact[k] - lfact[i] - lfact[k - i]) + i * log_s;
          acc += std::exp(log_c) * moments(j - i, k - i);
        }
        out(j, k) = acc;
      }
    }
    return out;
  };

  if (const auto* g = std::get_if<GaussianP>(&p)) {
    const GaussianP gp = *g;
    auto integrand = [&](Complex alpha) -> ComplexMatrix { return p_value(gp, alpha) * moment_term(alpha); };
    const ComplexMatrix coarse = assemble(quadrature_2d_matrix(integrand, grid, false).value);
    const ComplexMatrix fine = assemble(quadrature_2d_matrix(integrand, grid.refined(), false).value);
    const double estimate = (fine - coarse).cwiseAbs().maxCoeff();
    if (estimate > kQuadratureTolerance) {
      std::ostringstream msg;
      msg << "P-integral refinement estimate " << estimate << " exceeds " << kQuadratureTolerance;
      throw Error(ErrorCode::QuadratureNotConverged, msg.str());
    }
    return {DensityMatrix{cutoff, coarse, "p_integral"}, estimate};
  }

  const auto& sp = std::get<SampledP>(p);
  const auto nodes = grid_nodes(sp.grid);
  if (nodes.size() != sp.values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sampled P-function does not match its grid");
  }
  ComplexMatrix moments = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (sp.values[i] == 0.0) continue;
    moments += (nodes[i].weight * sp.values[i]) * moment_term(nodes[i].beta);
  }
  return {DensityMatrix{cutoff, assemble(moments), "p_integral"}, std::nullopt};
}

DensityMatrix evolve_via_husimi_integral(const DensityMatrix& rho0, const StateSpec& spec, ChannelTime tau,
                                         FockCutoff cutoff) {
  if (!(rho0.cutoff() == cutoff)) {
    throw Error(ErrorCode::DimensionMismatch, "input and output cutoffs differ");
  }
  const DensityMatrix expected = density_from_spec(spec, cutoff);
  if (trace_distance(rho0, expected) > kTraceSignTolerance) {
    throw Error(ErrorCode::UnsupportedInput, "rho0 is not the state " + describe(spec));
  }
  if (tau.is_identity()) return rho0.relabeled("husimi_integral");

  const double t = tau.tau();
  const Complex zeta{(t + 1.0) / t, 0.0};
  const Complex pre{-1.0 / t, 0.0};
  const Complex extra_mixed{-1.0 / t, 0.0};
  const auto mode = IntegralMode::analytic_continuation;

  // beta-integrand: pre * K(beta) * exp(zeta |beta|^2 + (X/t) beta - (Y/t) beta*) * :e^{-XY/t}:
  Linear xi{{}, Complex{1.0 / t, 0.0}, {}};
  Linear eta{{}, {}, Complex{-1.0 / t, 0.0}};

  auto from_moments = [&](int l, Complex k_const) {
    const GaussianMomentExpansion e = gaussian_moment_expansion(l, l, zeta, mode);
    Quad q;
    q.add_product(e.exponent, xi, eta);
    Poly poly;
    for (const auto& term : e.terms) {
      for (const auto& [pw, c] : multiply(power(xi, term.xi_power), power(eta, term.eta_power))) {
        poly[pw] += term.coeff * c;
      }
    }
    return realize_gaussian(pre * k_const, q, extra_mixed, std::move(poly), cutoff);
  };

  ComplexMatrix rho;
  if (const auto* c = std::get_if<Coherent>(&spec)) {
    // K = e^{-|z|^2} e^{z* beta - z beta*}
    xi.c = std::conj(c->z);
    eta.c = -c->z;
    rho = from_moments(0, std::exp(-std::norm(c->z)));
  } else if (const auto* n = std::get_if<NumberState>(&spec)) {
    // K = (-1)^l |beta|^{2l} / l!
    const double sgn = (n->l % 2 == 0) ? 1.0 : -1.0;
    rho = from_moments(n->l, sgn * std::exp(-std::lgamma(n->l + 1.0)));
  } else {
    // K = sech(lambda) e^{(tanh(lambda)/2)(beta^2 + beta*^2)}
    const double lambda = std::get<SqueezedVacuum>(spec).lambda;
    const Complex f{0.5 * std::tanh(lambda), 0.0};
    // Both roots are tried; the trace decides which continuation is physical.
    for (RootBranch branch : {RootBranch::principal, RootBranch::negated}) {
      const GaussianQuadraticForm form = gaussian_quadratic_form(zeta, f, f, mode, branch);
      Quad q;
      q.add_product(form.xi_eta, xi, eta);
      q.add_product(form.eta2, eta, eta);
      q.add_product(form.xi2, xi, xi);
      ComplexMatrix cand = realize_gaussian(pre * (1.0 / std::cosh(lambda)) * form.prefactor, q, extra_mixed,
                                            Poly{{{0, 0}, Complex{1.0, 0.0}}}, cutoff);
      if (cand.trace().real() > 0.0) {
        rho = std::move(cand);
        break;
      }
    }
    if (rho.size() == 0) throw Error(ErrorCode::SignResolutionFailed, "no root branch gives a positive trace");
  }
  require_trace(rho, "evolve_via_husimi_integral");
  return {cutoff, std::move(rho), "husimi_integral"};
}

}  // namespace qdiff
