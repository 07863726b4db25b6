// Copyright 2026 The bellnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "bellnet/optimize.hpp"

using namespace bellnet;

namespace {

DensityOperator random_two_qubit_state(Rng& rng) {
  Eigen::MatrixXcd g(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = cplx(rng.gaussian(), rng.gaussian());
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(SystemShape({2, 2}), rho);
}

}  // namespace

TEST_CASE("seesaw reaches the known maxima") {
  const SeesawResult epr = maximize_chsh(DensityOperator::from_pure(make_epr()));
  CHECK(std::abs(epr.value - 2.0 * std::sqrt(2.0)) < 1e-6);
  for (const ChshSetting& s : epr.a) CHECK(std::abs(s.axis.norm() - 1.0) < 1e-12);
  for (const ChshSetting& s : epr.b) CHECK(std::abs(s.axis.norm() - 1.0) < 1e-12);

  Eigen::VectorXcd v00 = Eigen::VectorXcd::Zero(4);
  v00(0) = 1.0;
  const DensityOperator product =
      DensityOperator::from_pure(StateVector(SystemShape({2, 2}), v00));
  CHECK(std::abs(maximize_chsh(product).value - 2.0) < 1e-6);

  const DensityOperator werner = make_werner(make_epr(), 0.8);
  CHECK(std::abs(maximize_chsh(werner).value - 2.2627416997969522) < 1e-6);

  CHECK_THROWS_AS(maximize_chsh(werner, 0), std::invalid_argument);
}

TEST_CASE("seesaw agrees with the horodecki criterion on random states") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityOperator rho = random_two_qubit_state(rng);
    const double bound = horodecki_chsh(rho).chsh_max;
    const double got = maximize_chsh(rho).value;
    CHECK(got <= bound + 1e-9);
    CHECK(std::abs(got - bound) < 1e-6);
  }
}

TEST_CASE("visibility threshold bisection") {
  // Linear curve v * 2*sqrt(2): threshold c / (2*sqrt(2)) for each criterion.
  for (double c : {2.0, 2.5, kChainBound}) {
    const VisibilityResult r =
        visibility_threshold([](double v) { return v * 2.0 * std::sqrt(2.0); }, c);
    REQUIRE(r.exceeds);
    CHECK(std::abs(r.threshold - c / (2.0 * std::sqrt(2.0))) < 2e-3);
  }

  // The Werner pair curve crosses the local bound at 1/sqrt(2).
  const VisibilityResult pair = visibility_threshold(pair_visibility_chsh, 2.0);
  REQUIRE(pair.exceeds);
  CHECK(std::abs(pair.threshold - 1.0 / std::sqrt(2.0)) < 1e-3);
  CHECK(std::abs(pair.value_at_one - 2.0 * std::sqrt(2.0)) < 1e-12);

  // Curves that never pass the criterion report no threshold.
  const VisibilityResult flat = visibility_threshold([](double v) { return v; }, 2.0);
  CHECK_FALSE(flat.exceeds);
  CHECK(std::isnan(flat.threshold));

  // Curves already above it at v = 0 report threshold zero.
  const VisibilityResult high = visibility_threshold([](double v) { return v + 3.0; }, 2.0);
  REQUIRE(high.exceeds);
  CHECK(high.threshold == 0.0);

  CHECK_THROWS_AS(visibility_threshold([](double v) { return -v; }, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(visibility_threshold([](double v) { return v; }, 0.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("operator collapse matches the pure-state path") {
  const StateVector ghz = make_ghz(3, kPi / 8);
  const StateVector global = tensor_power(ghz, 2);
  const DensityOperator global_op = DensityOperator::from_pure(global);
  const TestSpec test = tripartite_inflation().tests[4];
  for (int j = 0; j < 4; ++j) {
    const std::vector<BraClause> clauses = {
        {{test.conditioned[0]}, x_basis_ket(0)},
        {{test.conditioned[1]}, x_basis_ket(1)},
        {{test.joint[0], test.joint[1]}, bell_ket(j)}};
    const CollapseResult pure = collapsed_state(global, clauses);
    const OperatorCollapse mixed = detail::collapse_operator(global_op, clauses);
    REQUIRE(pure.defined == mixed.defined);
    if (!pure.defined) continue;
    CHECK(std::abs(pure.probability - mixed.probability) < 1e-12);
    const double from_pure = schmidt_chsh_max(*pure.state).value;
    const double from_mixed = horodecki_chsh(*mixed.op).chsh_max;
    CHECK(std::abs(from_pure - from_mixed) < 1e-9);
  }
}

TEST_CASE("inflation visibility models") {
  // Scaling model: threshold sqrt(criterion / ideal), identical at any theta
  // because the ideal activated maximum is always 2*sqrt(2).
  const double want = std::sqrt(2.5 / (2.0 * std::sqrt(2.0)));
  for (double theta : {kPi / 8, kPi / 4, 3.0 * kPi / 8}) {
    const VisibilityOutcome out = visibility_report("inflation", 2.5, theta);
    REQUIRE(out.primary.exceeds);
    CHECK(std::abs(out.primary.threshold - want) < 1e-4);
    REQUIRE(out.conditional.has_value());
    REQUIRE(out.conditional->exceeds);
  }

  // At the balanced angle the conditioned pair is exactly a Werner state of
  // visibility v^2, so both models give the same threshold.
  const VisibilityOutcome balanced = visibility_report("inflation", 2.5, kPi / 4);
  CHECK(std::abs(balanced.conditional->threshold - balanced.primary.threshold) < 2e-4);

  // Away from it the conditional model needs more visibility.
  const VisibilityOutcome tilted = visibility_report("inflation", 2.5, kPi / 8);
  CHECK(tilted.conditional->threshold > tilted.primary.threshold + 1e-3);
  CHECK(std::abs(tilted.conditional->threshold - 0.9687) < 1e-3);
}

TEST_CASE("visibility reports carry the reference figures") {
  const VisibilityOutcome pair = visibility_report("pair", 2.0);
  CHECK(pair.reference == kPairVisibilityReference);
  CHECK(std::abs(pair.primary.threshold - 0.7071) < 1e-3);

  const VisibilityOutcome chain = visibility_report("chain", kChainBound);
  CHECK(chain.reference == kChainVisibilityReference);
  REQUIRE(chain.primary.exceeds);
  CHECK(std::abs(chain.primary.threshold - kChainBound / kTsirelsonBound) < 2e-3);

  const nlohmann::ordered_json j = pair.to_json();
  CHECK(j["experiment"] == "pair");
  CHECK(j.contains("computed"));
  CHECK(j.contains("reference"));
  CHECK_FALSE(j.contains("theta"));

  const nlohmann::ordered_json ji = visibility_report("inflation", 2.5, kPi / 4).to_json();
  CHECK(ji.contains("theta"));
  CHECK(ji.contains("conditional_model"));

  CHECK_THROWS_AS(visibility_report("ring", 2.0), std::invalid_argument);
}
