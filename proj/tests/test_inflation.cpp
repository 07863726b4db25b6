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

#include <algorithm>

#include "bellnet/inflation.hpp"
#include "bellnet/states.hpp"
#include "bellnet/swapping.hpp"

using namespace bellnet;

TEST_CASE("tripartite inflation layout") {
  const InflatedNetwork net = tripartite_inflation();
  CHECK(net.copies == 2);
  CHECK(net.n_parties() == 6);
  REQUIRE(net.sources.size() == 2);
  CHECK(net.sources[0].parties == std::vector<int>{0, 1, 2});
  CHECK(net.sources[1].parties == std::vector<int>{3, 4, 5});
  REQUIRE(net.joint_groups.size() == 3);
  for (int p = 0; p < 3; ++p) {
    CHECK(net.joint_groups[static_cast<std::size_t>(p)].members ==
          std::array<int, 2>{p, p + 3});
  }

  REQUIRE(net.tests.size() == 6);
  const std::vector<std::string> names{"W_AB", "W_BA", "W_AC", "W_CA", "W_BC", "W_CB"};
  for (std::size_t k = 0; k < 6; ++k) CHECK(net.tests[k].name == names[k]);

  // Each test uses all six parties exactly once, split by role.
  for (const TestSpec& t : net.tests) {
    std::vector<int> used{t.conditioned[0], t.conditioned[1], t.joint[0],
                          t.joint[1],      t.activated[0],   t.activated[1]};
    std::sort(used.begin(), used.end());
    CHECK(used == std::vector<int>{0, 1, 2, 3, 4, 5});
  }
  const TestSpec& wbc = net.tests[4];
  CHECK(wbc.conditioned == std::array<int, 2>{1, 4});
  CHECK(wbc.joint == std::array<int, 2>{2, 5});
  CHECK(wbc.activated == std::array<int, 2>{0, 3});

  const nlohmann::ordered_json j = net.to_json();
  CHECK(j["copies"] == 2);
  CHECK(j["parties"].size() == 6);
  CHECK(j["parties"][3]["name"] == "Ahat");
  CHECK(j["tests"][4] == "W_BC");
}

TEST_CASE("chain inflation layout") {
  const InflatedNetwork net = chain_inflation(4);
  CHECK(net.copies == 3);
  CHECK(net.parties_per_copy == 4);
  CHECK(net.n_parties() == 12);
  CHECK(net.parties[0].name == "A1_c1");
  CHECK(net.parties[11].name == "A4_c3");
  REQUIRE(net.joint_groups.size() == 2);
  CHECK(net.joint_groups[0].members == std::array<int, 2>{1, 5});
  CHECK(net.joint_groups[1].members == std::array<int, 2>{6, 10});
  CHECK(net.end_parties == std::vector<int>{0, 11});
  CHECK(net.parties[0].settings == 2);
  CHECK(net.parties[11].settings == 2);
  CHECK(net.parties[3].settings == 1);
  CHECK(chain_conditioned_parties(net) == std::vector<int>{2, 3, 4, 7, 8, 9});

  const InflatedNetwork tri = chain_inflation(3);
  CHECK(tri.n_parties() == 6);
  CHECK(tri.joint_groups.size() == 1);
  CHECK(chain_conditioned_parties(tri) == std::vector<int>{2, 3});

  CHECK_THROWS_AS(chain_inflation(2), std::invalid_argument);
}

TEST_CASE("validate rejects malformed networks") {
  InflatedNetwork net = tripartite_inflation();
  net.joint_groups[0].members = {0, 1};  // both in copy 0
  CHECK_THROWS_AS(net.validate(), std::invalid_argument);

  InflatedNetwork net2 = tripartite_inflation();
  net2.tests[0].activated = {2, 2};
  CHECK_THROWS_AS(net2.validate(), std::invalid_argument);

  InflatedNetwork net3 = tripartite_inflation();
  net3.sources[1].parties = {2, 3, 4};  // party 2 claimed twice, 5 orphaned
  CHECK_THROWS_AS(net3.validate(), std::invalid_argument);
}

TEST_CASE("realize quantum produces a normalized no-signalling behavior") {
  const InflatedNetwork net = tripartite_inflation();
  const TestSpec& test = net.tests[4];
  const MeasurementAssignment m = test_assignment(
      test, x_basis_povm(), bell_basis_povm(),
      {projective_from_bloch(0.0, 0.0), projective_from_bloch(kPi / 2, 0.0)},
      {projective_from_bloch(0.0, 0.0), projective_from_bloch(kPi / 2, 0.0)});
  const ConditionalDistribution p = realize_quantum(net, make_ghz(3, kPi / 8), m);
  CHECK(p.n_parties() == 5);
  CHECK(p.settings() == std::vector<int>{1, 1, 1, 2, 2});
  CHECK(p.outcomes() == std::vector<int>{2, 2, 4, 2, 2});
  CHECK_NOTHROW(p.validate());
  CHECK(no_signalling_residual(p) < 1e-10);

  CHECK_THROWS_AS(realize_quantum(net, make_epr(), m), std::invalid_argument);
}

TEST_CASE("born and collapse paths agree on a conditioned branch") {
  const InflatedNetwork net = tripartite_inflation();
  const TestSpec& test = net.tests[4];
  const MeasurementAssignment m = test_assignment(
      test, x_basis_povm(), bell_basis_povm(),
      {projective_from_bloch(0.0, 0.0), projective_from_bloch(kPi / 2, 0.0)},
      {projective_from_bloch(0.0, 0.0), projective_from_bloch(kPi / 2, 0.0)});
  const StateVector ghz = make_ghz(3, kPi / 8);
  const ConditionalDistribution p = realize_quantum(net, ghz, m);

  // P(u=0, uhat=0, j=0) summed over activated outcomes at fixed settings must
  // equal the collapse probability of the same projection chain.
  double prob = 0.0;
  for (int w = 0; w < 2; ++w)
    for (int what = 0; what < 2; ++what) prob += p.p({0, 0, 0, 0, 0}, {0, 0, 0, w, what});

  const StateVector global = tensor_power(ghz, 2);
  std::vector<BraClause> clauses;
  clauses.push_back({{test.conditioned[0]}, x_basis_ket(0)});
  clauses.push_back({{test.conditioned[1]}, x_basis_ket(0)});
  clauses.push_back({{test.joint[0], test.joint[1]}, bell_ket(0)});
  const CollapseResult r = collapsed_state(global, clauses);
  REQUIRE(r.defined);
  CHECK(std::abs(prob - r.probability) < 1e-12);
}
