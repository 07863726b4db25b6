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

#include "bellnet/boxes.hpp"
#include "bellnet/chsh.hpp"
#include "bellnet/measurements.hpp"
#include "bellnet/states.hpp"

using namespace bellnet;

TEST_CASE("correlators and the fixed-sign chsh value") {
  // Deterministic strategy a = x, b = 0 has E(x,y) = (-1)^x, so the fixed
  // sign combination E00 + E01 + E10 - E11 evaluates to 2.
  const ConditionalDistribution p = make_deterministic_box({0, 1}, {0, 0}).dist();
  CHECK(correlator(p, 0, 0) == 1.0);
  CHECK(correlator(p, 1, 0) == -1.0);
  const ChshValue v = chsh_value(p);
  CHECK(v.value == 2.0);
  CHECK(chsh_orbit_max(p) == 2.0);
}

TEST_CASE("orbit maximum is sign-placement invariant") {
  CHECK(chsh_orbit_max({1.0, 1.0, 1.0, -1.0}) == 4.0);
  // Moving the minus corner zeroes the fixed-sign value but not the orbit.
  const std::array<double, 4> rot{1.0, 1.0, -1.0, 1.0};
  CHECK(chsh_orbit_max(rot) == 4.0);
  ConditionalDistribution pr = make_pr_box().dist();
  CHECK(std::abs(chsh_value(pr).value - 4.0) < 1e-12);
  CHECK(std::abs(chsh_orbit_max(pr) - 4.0) < 1e-12);
}

TEST_CASE("schmidt block chsh maximum") {
  const SchmidtChsh epr = schmidt_chsh_max(make_epr());
  CHECK(std::abs(epr.value - 2.0 * std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(epr.block_weight - 1.0) < 1e-12);
  CHECK(std::abs(epr.block_concurrence - 1.0) < 1e-12);

  Eigen::VectorXcd v00 = Eigen::VectorXcd::Zero(4);
  v00(0) = 1.0;
  const SchmidtChsh prod = schmidt_chsh_max(StateVector(SystemShape({2, 2}), v00));
  CHECK(std::abs(prod.value - 2.0) < 1e-12);
  CHECK(std::abs(prod.block_concurrence) < 1e-12);

  // Partially entangled pure qubit pair: 2*sqrt(1 + sin(2 theta)^2).
  const double theta = kPi / 7;
  const StateVector partial = make_ghz(2, theta);
  const double want = 2.0 * std::sqrt(1.0 + std::pow(std::sin(2.0 * theta), 2));
  CHECK(std::abs(schmidt_chsh_max(partial).value - want) < 1e-12);
  CHECK(std::abs(horodecki_chsh(DensityOperator::from_pure(partial)).chsh_max - want) < 1e-12);
}

TEST_CASE("schmidt settings attain the formula under born rule") {
  const auto born_chsh = [](const StateVector& psi) {
    const ConditionalDistribution p = joint_distribution(psi, schmidt_chsh_settings(psi));
    return chsh_orbit_max(p);
  };

  CHECK(std::abs(born_chsh(make_epr()) - 2.0 * std::sqrt(2.0)) < 1e-9);

  const StateVector partial = make_ghz(2, kPi / 5);
  CHECK(std::abs(born_chsh(partial) - schmidt_chsh_max(partial).value) < 1e-9);

  // Rank-2 state of two dimension-4 parties: the top Schmidt block behaves
  // like an embedded qubit pair and the value is exact there too.
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(16);
  amp(0) = 0.8;
  amp(5) = 0.6;
  const StateVector embedded(SystemShape({4, 4}), amp);
  const double want = 2.0 * std::sqrt(1.0 + std::pow(2.0 * 0.8 * 0.6, 2));
  CHECK(std::abs(schmidt_chsh_max(embedded).value - want) < 1e-12);
  CHECK(std::abs(born_chsh(embedded) - want) < 1e-9);

  // Rank-4 state: the construction still attains the two-level block bound.
  Eigen::VectorXcd amp4 = Eigen::VectorXcd::Zero(16);
  amp4(0) = 0.7;
  amp4(5) = 0.5;
  amp4(10) = cplx(0.3, 0.3);
  amp4(15) = 0.28284271247461906;
  const StateVector rank4(SystemShape({4, 4}), amp4);
  CHECK(std::abs(born_chsh(rank4) - schmidt_chsh_max(rank4).value) < 1e-9);
}

TEST_CASE("upsilon report tallies and json key order") {
  UpsilonReport rep;
  rep.experiment = "demo";
  rep.threshold = 2.5;
  rep.params["alpha"] = 1;
  rep.tally(std::nullopt);
  rep.tally(2.8);
  rep.tally(2.5);
  rep.tally(1.0);
  CHECK(rep.total == 4);
  CHECK(rep.above == 1);
  CHECK(rep.at_or_below == 2);
  CHECK(rep.skipped == 1);
  CHECK(rep.max_chsh == 2.8);
  REQUIRE(rep.values.size() == 4);
  CHECK_FALSE(rep.values[0].has_value());

  rep.pass = true;
  const nlohmann::ordered_json j = rep.to_json();
  const std::vector<std::string> want{"experiment", "params",      "threshold",
                                      "total",      "above",       "at_or_below",
                                      "skipped",    "max_chsh",    "values",
                                      "pass"};
  std::vector<std::string> got;
  for (const auto& item : j.items()) got.push_back(item.key());
  CHECK(got == want);
  CHECK(j["values"][0].is_null());
  CHECK(j["values"][1].get<double>() == 2.8);
}
