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

#include <doctest.h>

#include "test_util.hpp"

using namespace qdiff;
using qdiff::testing::check_close;
using qdiff::testing::throws_code;

// Reference values: scipy.linalg.expm of the vectorized generator applied to
// the same initial state (tests/oracle/generate_oracles.py).

TEST_SUITE("oracle") {

TEST_CASE("number state diffuses into the negative-binomial mixture") {
  const DensityMatrix r0 = density_from_spec(NumberState{1}, FockCutoff(24));
  const DensityMatrix r = integrate_master_equation(r0, {1.0, 0.5, 1e-3});
  CHECK(r.label() == "ode_oracle");
  const double want[] = {0.22222222222222232, 0.37037037037037074, 0.22222222222222238, 0.10699588477366262,
                         0.046639231824417038};
  for (int n = 0; n < 5; ++n) check_close(r(n, n), want[n], 1e-10);
  check_close(r(0, 1), 0.0, 0.0);
}

TEST_CASE("coherent and squeezed inputs") {
  const DensityMatrix c0(FockCutoff(20), [] {
    const ComplexVector v = coherent_amplitudes({0.5, 0.0}, 20);
    return ComplexMatrix(v * v.adjoint());
  }());
  const DensityMatrix c = integrate_master_equation(c0, {1.0, 0.5, 1e-3});
  check_close(c(0, 0), 0.56432114992707616, 1e-10);
  check_close(c(2, 1), 0.10345359937640672, 1e-10);

  const DensityMatrix s0 = density_from_spec(SqueezedVacuum{0.5}, FockCutoff(40));
  const DensityMatrix s = integrate_master_equation(s0, {1.0, 0.5, 1e-3});
  check_close(s(0, 0), 0.59835408885509822, 1e-9);
  check_close(s(2, 0), 0.089010659694448699, 1e-9);
  check_close(s(2, 2), 0.093280278432551864, 1e-9);
}

TEST_CASE("kappa only rescales time") {
  const DensityMatrix r0 = density_from_spec(NumberState{2}, FockCutoff(24));
  const DensityMatrix a = integrate_master_equation(r0, {2.0, 0.25, 1e-3});
  const DensityMatrix b = integrate_master_equation(r0, {1.0, 0.5, 1e-3});
  // same number of steps in tau only when kappa = 1, so allow the RK4 error
  CHECK(trace_distance(a, b) < 1e-10);
}

TEST_CASE("rhs is traceless and hermitian away from the cutoff") {
  const DensityMatrix r0 = density_from_spec(Coherent{{0.6, -0.3}}, FockCutoff(30));
  const DensityMatrix d = lindblad_rhs(r0, 1.0);
  CHECK(std::abs(d.entries().trace()) < 1e-14);
  CHECK((d.entries() - d.entries().adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("preconditions") {
  const DensityMatrix r0 = density_from_spec(NumberState{0}, FockCutoff(8));
  CHECK(throws_code([&] { integrate_master_equation(r0, {1.0, 0.5, 0.02}); }, ErrorCode::StepTooLarge));
  CHECK(throws_code([&] { integrate_master_equation(r0, {-1.0, 0.5, 1e-3}); }, ErrorCode::PreconditionViolated));
  const DensityMatrix same = integrate_master_equation(r0, {1.0, 0.0, 1e-3});
  CHECK(trace_distance(same, r0) == 0.0);
  const DensityMatrix c0 = density_from_spec(Coherent{{1.5, 0.0}}, FockCutoff(12));
  CHECK(throws_code([&] { integrate_master_equation(c0, {1.0, 1.0, 1e-3}); }, ErrorCode::TruncationLoss));
}

}  // TEST_SUITE
