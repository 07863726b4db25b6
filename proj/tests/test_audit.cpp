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

#include "bellnet/audit.hpp"
#include "bellnet/states.hpp"

using namespace bellnet;

TEST_CASE("qfact audit at the working angle") {
  const UpsilonReport rep = qfact_audit(make_ghz(3, kPi / 8));
  CHECK(rep.experiment == "qfact");
  CHECK(rep.total == 96);
  CHECK(rep.above == 48);
  CHECK(rep.at_or_below == 48);
  CHECK(rep.skipped == 0);
  CHECK(std::abs(rep.max_chsh - kTsirelsonBound) < 1e-9);
  CHECK(rep.params["epr_flagged"] == 48);
  CHECK(rep.params["min_epr_per_test"] == 8);
  CHECK(rep.params["flagged_chsh_dev"].get<double>() <= 1e-6);
  CHECK(rep.pass);
  REQUIRE(rep.values.size() == 96);
}

TEST_CASE("qfact audit at the balanced angle") {
  const UpsilonReport rep = qfact_audit(make_ghz(3, kPi / 4));
  CHECK(rep.above == 96);
  CHECK(rep.params["epr_flagged"] == 96);
  CHECK(rep.pass);
}

TEST_CASE("qfact audit on a product source fails") {
  // Without entanglement nothing activates: the psi-type branches vanish and
  // the phi-type collapses are product states at CHSH 2.
  const UpsilonReport rep = qfact_audit(make_ghz(3, 0.0));
  CHECK(rep.above == 0);
  CHECK(rep.skipped == 48);
  CHECK(rep.at_or_below == 48);
  CHECK_FALSE(rep.pass);

  CHECK_THROWS_AS(qfact_audit(make_triangle_state()), std::invalid_argument);
}

TEST_CASE("triangle audit counts") {
  const UpsilonReport rep = triangle_audit();
  CHECK(rep.experiment == "triangle");
  CHECK(rep.total == 1536);
  CHECK(rep.above == 768);
  CHECK(rep.at_or_below == 0);
  CHECK(rep.skipped == 768);
  CHECK(std::abs(rep.max_chsh - kTsirelsonBound) < 1e-9);
  CHECK(rep.params["box_ceiling"] == 512);
  CHECK(rep.above > rep.params["box_ceiling"].get<int>());
  CHECK(rep.pass);
}

TEST_CASE("cfact audit on sampled biseparable sources") {
  CfactOptions opt;
  opt.samples = 25;
  opt.seed = 7;
  opt.lemma1 = true;
  const UpsilonReport rep = cfact_audit(opt);
  CHECK(rep.experiment == "cfact");
  CHECK(rep.total == 25 * 96);
  CHECK(rep.above == 0);
  CHECK(rep.max_chsh <= 2.0 + 1e-9);
  CHECK(rep.params["max_source_above"] == 0);
  CHECK(rep.params["min_lemma1_ok"].get<int>() >= 64);
  CHECK(rep.params["max_lemma1_p"].get<double>() <= 0.25 + 1e-9);
  CHECK(rep.pass);

  CHECK_THROWS_AS(cfact_audit(CfactOptions{0, 1, false, 2.5}), std::invalid_argument);
}

TEST_CASE("cfact audit is deterministic per seed") {
  CfactOptions opt;
  opt.samples = 5;
  opt.seed = 19;
  const UpsilonReport a = cfact_audit(opt);
  const UpsilonReport b = cfact_audit(opt);
  CHECK(a.to_json() == b.to_json());
  opt.seed = 20;
  const UpsilonReport c = cfact_audit(opt);
  CHECK(a.to_json() != c.to_json());
}

TEST_CASE("quantum chain audit") {
  const UpsilonReport tri = chain_audit_quantum(3, make_ghz(3, kPi / 4));
  CHECK(tri.total == 16);
  CHECK(tri.above == 16);
  CHECK(std::abs(tri.max_chsh - kTsirelsonBound) < 1e-9);
  CHECK(tri.params["epr_flagged"] == 16);
  CHECK(tri.pass);

  // Partially entangled chain: psi-type joint outcomes still activate
  // maximally, phi-type collapses stay below the biseparable ceiling.
  const UpsilonReport part = chain_audit_quantum(3, make_ghz(3, kPi / 8));
  CHECK(part.total == 16);
  CHECK(part.above == 8);
  CHECK(std::abs(part.max_chsh - kTsirelsonBound) < 1e-9);
  CHECK(part.pass);

  const UpsilonReport four = chain_audit_quantum(4, make_ghz(4, kPi / 4));
  CHECK(four.total == 1024);
  CHECK(four.above == 1024);
  CHECK(four.params["n"] == 4);
  CHECK(four.pass);

  CHECK_THROWS_AS(chain_audit_quantum(3, make_ghz(4, kPi / 4)), std::invalid_argument);
}

TEST_CASE("box chain audit stays below the ceiling") {
  const UpsilonReport rep = chain_audit_box(4, 30, 11);
  CHECK(rep.experiment == "chain");
  CHECK(rep.params["mode"] == "box");
  CHECK(rep.total == 30 * 1024);
  CHECK(rep.above == 0);
  CHECK(rep.max_chsh <= kChainBound + 1e-9);
  CHECK(rep.pass);

  const UpsilonReport tri = chain_audit_box(3, 40, 5);
  CHECK(tri.total == 40 * 16);
  CHECK(tri.above == 0);
  CHECK(tri.pass);

  CHECK_THROWS_AS(chain_audit_box(2, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(chain_audit_box(4, 0, 0), std::invalid_argument);
}
