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

// Inflated network descriptions: independent copies of a multipartite source
// wired with cross-copy joint measurements.  Two topologies are provided:
// the 1-order tripartite inflation with its six Bell-type tests, and the
// (n-2)-order chain inflation.

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellnet/distribution.hpp"
#include "bellnet/tensor.hpp"

namespace bellnet {

struct NetworkParty {
  std::string name;
  int copy = 0;    // source copy the party belongs to
  int source = 0;  // == copy: one source per copy
  // 2 for activated end parties of the chain, 1 otherwise; tripartite tests
  // override per TestSpec.
  int settings = 1;
};

struct SourceCopy {
  std::string name;
  std::vector<int> parties;
};

struct JointGroup {
  std::array<int, 2> members = {0, 0};
};

// One Bell-type test W_{U;V} on the tripartite inflation: U, Uhat are
// conditioned with a single setting each, (V, Vhat) is measured jointly, and
// the activated pair (W, What) gets two settings.
struct TestSpec {
  std::string name;
  std::array<int, 2> conditioned = {0, 0};
  std::array<int, 2> joint = {0, 0};
  std::array<int, 2> activated = {0, 0};
};

// Parties are indexed copy-major: party j of copy i has index
// i * parties_per_copy + j, matching the axis order of the global state
// tensor_power(source, copies).
struct InflatedNetwork {
  int copies = 0;
  int parties_per_copy = 0;
  std::vector<NetworkParty> parties;
  std::vector<SourceCopy> sources;
  std::vector<JointGroup> joint_groups;
  std::vector<TestSpec> tests;
  std::vector<int> end_parties;  // chain topology only

  int n_parties() const { return static_cast<int>(parties.size()); }

  void validate() const {
    if (copies < 2) throw std::invalid_argument("InflatedNetwork: need >= 2 copies");
    if (static_cast<int>(sources.size()) != copies)
      throw std::invalid_argument("InflatedNetwork: one source per copy");
    std::vector<int> owner(parties.size(), -1);
    for (std::size_t s = 0; s < sources.size(); ++s)
      for (int p : sources[s].parties) {
        if (p < 0 || p >= n_parties())
          throw std::out_of_range("InflatedNetwork: source party out of range");
        if (owner[static_cast<std::size_t>(p)] != -1)
          throw std::invalid_argument("InflatedNetwork: party in two sources");
        owner[static_cast<std::size_t>(p)] = static_cast<int>(s);
      }
    for (std::size_t p = 0; p < parties.size(); ++p) {
      if (owner[p] == -1) throw std::invalid_argument("InflatedNetwork: orphan party");
      if (owner[p] != parties[p].source)
        throw std::invalid_argument("InflatedNetwork: source bookkeeping mismatch");
    }
    for (const auto& g : joint_groups) {
      for (int p : g.members)
        if (p < 0 || p >= n_parties())
          throw std::out_of_range("InflatedNetwork: joint member out of range");
      if (parties[static_cast<std::size_t>(g.members[0])].copy ==
          parties[static_cast<std::size_t>(g.members[1])].copy)
        throw std::invalid_argument("InflatedNetwork: joint group within one copy");
    }
    for (const auto& t : tests) {
      std::vector<bool> seen(parties.size(), false);
      for (int p : {t.conditioned[0], t.conditioned[1], t.joint[0], t.joint[1], t.activated[0],
                    t.activated[1]}) {
        if (p < 0 || p >= n_parties()) throw std::out_of_range("InflatedNetwork: test party");
        if (seen[static_cast<std::size_t>(p)])
          throw std::invalid_argument("InflatedNetwork: test reuses a party");
        seen[static_cast<std::size_t>(p)] = true;
      }
    }
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["copies"] = copies;
    nlohmann::ordered_json ps = nlohmann::ordered_json::array();
    for (const auto& p : parties)
      ps.push_back({{"name", p.name}, {"copy", p.copy}, {"settings", p.settings}});
    j["parties"] = ps;
    nlohmann::ordered_json ss = nlohmann::ordered_json::array();
    for (const auto& s : sources) ss.push_back({{"name", s.name}, {"parties", s.parties}});
    j["sources"] = ss;
    nlohmann::ordered_json gs = nlohmann::ordered_json::array();
    for (const auto& g : joint_groups) gs.push_back({g.members[0], g.members[1]});
    j["joint_groups"] = gs;
    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    for (const auto& t : tests) ts.push_back(t.name);
    j["tests"] = ts;
    return j;
  }
};

// Two copies of a tripartite source; parties (A, B, C, Ahat, Bhat, Chat) =
// indices 0..5.  Six tests W_{U;V}: U conditioned, (V, Vhat) joint, the
// remaining pair activated.
inline InflatedNetwork tripartite_inflation() {
  InflatedNetwork net;
  net.copies = 2;
  net.parties_per_copy = 3;
  const char* names[6] = {"A", "B", "C", "Ahat", "Bhat", "Chat"};
  for (int i = 0; i < 6; ++i) net.parties.push_back({names[i], i / 3, i / 3, 1});
  net.sources.push_back({"S", {0, 1, 2}});
  net.sources.push_back({"Shat", {3, 4, 5}});
  for (int p = 0; p < 3; ++p) net.joint_groups.push_back({{p, p + 3}});
  auto test = [](const char* name, int u, int v, int w) {
    return TestSpec{name, {u, u + 3}, {v, v + 3}, {w, w + 3}};
  };
  net.tests = {test("W_AB", 0, 1, 2), test("W_BA", 1, 0, 2), test("W_AC", 0, 2, 1),
               test("W_CA", 2, 0, 1), test("W_BC", 1, 2, 0), test("W_CB", 2, 1, 0)};
  net.validate();
  return net;
}

// n-1 copies of an n-party source arranged as a chain: the joint group i
// pairs party i+1 of copy i with party i+1 of copy i+1 (0-based), the chain
// ends A1 of copy 0 and An of the last copy are activated with two settings,
// and every other party is conditioned with one setting.
inline InflatedNetwork chain_inflation(int n) {
  if (n < 3) throw std::invalid_argument("chain_inflation: n must be >= 3");
  InflatedNetwork net;
  net.copies = n - 1;
  net.parties_per_copy = n;
  for (int i = 0; i < n - 1; ++i) {
    SourceCopy src;
    src.name = "S" + std::to_string(i + 1);
    for (int j = 0; j < n; ++j) {
      const int idx = i * n + j;
      net.parties.push_back(
          {"A" + std::to_string(j + 1) + "_c" + std::to_string(i + 1), i, i, 1});
      src.parties.push_back(idx);
    }
    net.sources.push_back(src);
  }
  for (int i = 0; i + 1 < n - 1; ++i)
    net.joint_groups.push_back({{i * n + (i + 1), (i + 1) * n + (i + 1)}});
  net.end_parties = {0, (n - 2) * n + (n - 1)};
  for (int e : net.end_parties) net.parties[static_cast<std::size_t>(e)].settings = 2;
  net.validate();
  return net;
}

// Conditioned single parties of a chain network: everything that is neither
// an end nor a joint-group member, in index order.
inline std::vector<int> chain_conditioned_parties(const InflatedNetwork& net) {
  std::vector<bool> active(static_cast<std::size_t>(net.n_parties()), false);
  for (int e : net.end_parties) active[static_cast<std::size_t>(e)] = true;
  for (const auto& g : net.joint_groups)
    for (int p : g.members) active[static_cast<std::size_t>(p)] = true;
  std::vector<int> cond;
  for (int p = 0; p < net.n_parties(); ++p)
    if (!active[static_cast<std::size_t>(p)]) cond.push_back(p);
  return cond;
}

// Born-rule distribution of the inflated network: the global state is the
// tensor power of the per-copy source, parties indexed copy-major.
inline ConditionalDistribution realize_quantum(const InflatedNetwork& net,
                                               const StateVector& source_state,
                                               const MeasurementAssignment& m) {
  net.validate();
  if (source_state.n_parties() != net.parties_per_copy)
    throw std::invalid_argument("realize_quantum: source party count mismatch");
  return joint_distribution(tensor_power(source_state, net.copies), m);
}

inline ConditionalDistribution realize_quantum(const InflatedNetwork& net,
                                               const DensityOperator& source_state,
                                               const MeasurementAssignment& m) {
  net.validate();
  if (source_state.n_parties() != net.parties_per_copy)
    throw std::invalid_argument("realize_quantum: source party count mismatch");
  return joint_distribution(tensor_power(source_state, net.copies), m);
}

}  // namespace bellnet
