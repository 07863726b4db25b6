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

#include "bellnet/states.hpp"
#include "bellnet/swapping.hpp"

using namespace bellnet;

TEST_CASE("collapsed state of simple projections") {
  // <0| on the first EPR qubit leaves |0> with probability 1/2.
  const CollapseResult r0 =
      collapsed_state(make_epr(), {{{0}, Eigen::VectorXcd::Unit(2, 0)}});
  REQUIRE(r0.defined);
  CHECK(std::abs(r0.probability - 0.5) < 1e-12);
  CHECK(std::abs(r0.state->amplitude({0}) - cplx(1, 0)) < 1e-12);

  // <x0| on the last GHZ party leaves cos|00> + sin|11> at probability 1/2.
  const double theta = kPi / 5;
  const CollapseResult r1 =
      collapsed_state(make_ghz(3, theta), {{{2}, x_basis_ket(0)}});
  REQUIRE(r1.defined);
  CHECK(std::abs(r1.probability - 0.5) < 1e-12);
  CHECK(std::abs(r1.state->amplitude({0, 0}) - cplx(std::cos(theta), 0)) < 1e-12);
  CHECK(std::abs(r1.state->amplitude({1, 1}) - cplx(std::sin(theta), 0)) < 1e-12);

  // Orthogonal projection chains are undefined.
  Eigen::VectorXcd v00 = Eigen::VectorXcd::Zero(4);
  v00(0) = 1.0;
  const CollapseResult r2 = collapsed_state(
      StateVector(SystemShape({2, 2}), v00), {{{1}, Eigen::VectorXcd::Unit(2, 1)}});
  CHECK_FALSE(r2.defined);

  // Projecting an axis twice is a usage error.
  CHECK_THROWS_AS(collapsed_state(make_epr(), {{{0}, Eigen::VectorXcd::Unit(2, 0)},
                                               {{0}, Eigen::VectorXcd::Unit(2, 0)}}),
                  std::invalid_argument);
}

TEST_CASE("collapse tracks axis labels across clauses") {
  // GHZ(pi/4) on 4 parties: X-projecting parties 1 and 2 leaves the end pair
  // maximally entangled regardless of the kept outcomes.
  const StateVector ghz = make_ghz(4, kPi / 4);
  for (int m1 = 0; m1 < 2; ++m1) {
    for (int m2 = 0; m2 < 2; ++m2) {
      const CollapseResult r =
          collapsed_state(ghz, {{{1}, x_basis_ket(m1)}, {{2}, x_basis_ket(m2)}});
      REQUIRE(r.defined);
      CHECK(std::abs(r.probability - 0.25) < 1e-12);
      const std::vector<double> sv = schmidt_values(*r.state, {0});
      CHECK(std::abs(sv[0] - std::sqrt(0.5)) < 1e-12);
      CHECK(std::abs(sv[1] - std::sqrt(0.5)) < 1e-12);
    }
  }
}

TEST_CASE("swap enumeration on the ghz source") {
  const InflatedNetwork net = tripartite_inflation();
  const double theta = kPi / 8;
  const StateVector global = tensor_power(make_ghz(3, theta), 2);
  const TestSpec& wbc = net.tests[4];
  const SwapReport rep = enumerate_swaps(net, global, wbc, default_projections(2));
  CHECK(rep.total == 16);
  CHECK(rep.skipped == 0);
  CHECK(rep.epr_count == 8);

  // Phi-type joint outcomes give the partially entangled collapse, psi-type
  // outcomes are maximally entangled at any theta.
  const double phi_chsh = 2.1081851067789197;
  double prob_sum = 0.0;
  for (const SwapOutcome& out : rep.outcomes) {
    REQUIRE(out.defined);
    prob_sum += out.probability;
    if (out.tuple[2] >= 2) {
      CHECK(out.epr);
      CHECK(std::abs(out.probability - 0.03125) < 1e-12);
      CHECK(std::abs(out.chsh - 2.0 * std::sqrt(2.0)) < 1e-9);
    } else {
      CHECK_FALSE(out.epr);
      CHECK(std::abs(out.probability - 0.09375) < 1e-12);
      CHECK(std::abs(out.chsh - phi_chsh) < 1e-9);
    }
  }
  CHECK(std::abs(prob_sum - 1.0) < 1e-12);

  // Every test of the symmetric GHZ source activates the same way.
  for (const TestSpec& test : net.tests)
    CHECK(count_epr_outcomes(net, global, test, default_projections(2)) == 8);

  // At pi/4 all sixteen tuples are EPR-equivalent.
  const StateVector balanced = tensor_power(make_ghz(3, kPi / 4), 2);
  CHECK(count_epr_outcomes(net, balanced, wbc, default_projections(2)) == 16);
}

TEST_CASE("activated pair ordering follows the test roles") {
  const InflatedNetwork net = tripartite_inflation();
  const StateVector global = tensor_power(make_ghz(3, kPi / 8), 2);
  TestSpec flipped = net.tests[4];
  std::swap(flipped.activated[0], flipped.activated[1]);
  const SwapReport a = enumerate_swaps(net, global, net.tests[4], default_projections(2));
  const SwapReport b = enumerate_swaps(net, global, flipped, default_projections(2));
  for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
    CHECK(std::abs(a.outcomes[k].chsh - b.outcomes[k].chsh) < 1e-12);
    CHECK(std::abs(a.outcomes[k].probability - b.outcomes[k].probability) < 1e-12);
  }
}

TEST_CASE("swap enumeration on the w state stays quantum bounded") {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(8);
  const double r = 1.0 / std::sqrt(3.0);
  amp(1) = r;
  amp(2) = r;
  amp(4) = r;
  const StateVector w(SystemShape({2, 2, 2}), amp);
  const InflatedNetwork net = tripartite_inflation();
  const StateVector global = tensor_power(w, 2);
  double prob_sum = 0.0;
  for (const TestSpec& test : net.tests) {
    const SwapReport rep = enumerate_swaps(net, global, test, default_projections(2));
    CHECK(rep.total == 16);
    for (const SwapOutcome& out : rep.outcomes) {
      if (!out.defined) continue;
      CHECK(out.chsh <= 2.0 * std::sqrt(2.0) + 1e-9);
    }
    if (&test == &net.tests[0]) {
      for (const SwapOutcome& out : rep.outcomes) prob_sum += out.probability;
      CHECK(std::abs(prob_sum - 1.0) < 1e-10);
    }
  }
}
