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

// Generalized entanglement swapping: post-selected collapsed states of the
// activated pair under rank-1 projections of the conditioned and joint
// parties, and the EPR-equivalence count over conditioning tuples.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bellnet/chsh.hpp"
#include "bellnet/inflation.hpp"
#include "bellnet/measurements.hpp"
#include "bellnet/states.hpp"
#include "bellnet/tensor.hpp"

namespace bellnet {

inline constexpr double kEprTol = 1e-9;

// One rank-1 projection clause: the listed axes are projected onto |ket>.
struct BraClause {
  std::vector<int> axes;
  Eigen::VectorXcd ket;
};

struct CollapseResult {
  bool defined = false;
  double probability = 0.0;
  std::optional<StateVector> state;  // on the remaining axes, original order
};

// Projects the global state onto the product of the clauses' kets.  The
// returned probability is the squared norm before normalization; the state
// is left on the non-projected axes in their original order.
inline CollapseResult collapsed_state(const StateVector& global,
                                      const std::vector<BraClause>& clauses) {
  Eigen::VectorXcd vec = global.amplitudes();
  std::vector<int> live;  // original axis labels of `vec`
  for (int k = 0; k < global.n_parties(); ++k) live.push_back(k);
  std::vector<int> dims = global.shape().dims();

  for (const auto& clause : clauses) {
    std::vector<int> positions;
    for (int axis : clause.axes) {
      int pos = -1;
      for (std::size_t k = 0; k < live.size(); ++k)
        if (live[k] == axis) pos = static_cast<int>(k);
      if (pos < 0) throw std::invalid_argument("collapsed_state: axis projected twice");
      positions.push_back(pos);
    }
    SystemShape shape(dims);
    vec = contract_bra_on_axes(vec, shape, positions, clause.ket);
    // Drop the projected axes from the bookkeeping.
    std::vector<int> new_live;
    std::vector<int> new_dims;
    for (std::size_t k = 0; k < live.size(); ++k) {
      bool gone = false;
      for (int pos : positions) gone = gone || (static_cast<int>(k) == pos);
      if (!gone) {
        new_live.push_back(live[k]);
        new_dims.push_back(dims[k]);
      }
    }
    live = std::move(new_live);
    dims = std::move(new_dims);
  }

  CollapseResult res;
  res.probability = vec.squaredNorm();
  if (res.probability >= 1e-12) {
    res.defined = true;
    res.state = StateVector(SystemShape(dims), vec / vec.norm());
  }
  return res;
}

// Outcome kets for the conditioned single parties and the joint pair of a
// test.  Defaults: X basis on conditioned parties (per qubit), Bell basis on
// a joint qubit pair, and their pairwise products for dimension-4 parties.
struct TestProjections {
  std::vector<Eigen::VectorXcd> conditioned_kets;
  std::vector<Eigen::VectorXcd> joint_kets;  // on the (V, Vhat) axes side by side
};

inline TestProjections default_projections(int party_dim) {
  TestProjections proj;
  if (party_dim == 2) {
    for (int k = 0; k < 2; ++k) proj.conditioned_kets.push_back(x_basis_ket(k));
    for (int k = 0; k < 4; ++k) proj.joint_kets.push_back(bell_ket(k));
  } else if (party_dim == 4) {
    for (int k = 0; k < 4; ++k) proj.conditioned_kets.push_back(x_pair_ket(k));
    for (int k = 0; k < 16; ++k) proj.joint_kets.push_back(paired_bell_ket(k));
  } else {
    throw std::invalid_argument("default_projections: party dim must be 2 or 4");
  }
  return proj;
}

struct SwapOutcome {
  std::array<int, 3> tuple = {0, 0, 0};  // (u, uhat, joint outcome)
  bool defined = false;
  double probability = 0.0;
  bool epr = false;
  double chsh = 0.0;                 // schmidt_chsh_max of the collapsed state
  std::array<double, 2> schmidt = {0.0, 0.0};
  std::optional<StateVector> state;  // activated pair (W, What)
};

struct SwapReport {
  int epr_count = 0;
  int total = 0;
  int skipped = 0;
  std::vector<SwapOutcome> outcomes;
};

// Enumerates every conditioning tuple (u, uhat, vvhat) of one test on the
// inflated network, collapsing the activated pair each time.  A tuple is
// EPR-flagged when the collapsed state's Schmidt spectrum is maximally
// entangled on a two-dimensional block: both leading coefficients 1/sqrt(2)
// within tolerance and nothing beyond them.
inline SwapReport enumerate_swaps(const InflatedNetwork& net, const StateVector& global,
                                  const TestSpec& test, const TestProjections& proj,
                                  double epr_tol = kEprTol) {
  if (global.n_parties() != net.n_parties())
    throw std::invalid_argument("enumerate_swaps: global state party count mismatch");
  const int n_cond = static_cast<int>(proj.conditioned_kets.size());
  const int n_joint = static_cast<int>(proj.joint_kets.size());
  SwapReport report;
  const double root_half = std::sqrt(0.5);
  for (int u = 0; u < n_cond; ++u) {
    for (int uhat = 0; uhat < n_cond; ++uhat) {
      for (int j = 0; j < n_joint; ++j) {
        SwapOutcome out;
        out.tuple = {u, uhat, j};
        const CollapseResult col = collapsed_state(
            global, {{{test.conditioned[0]}, proj.conditioned_kets[static_cast<std::size_t>(u)]},
                     {{test.conditioned[1]}, proj.conditioned_kets[static_cast<std::size_t>(uhat)]},
                     {{test.joint[0], test.joint[1]}, proj.joint_kets[static_cast<std::size_t>(j)]}});
        out.defined = col.defined;
        out.probability = col.probability;
        if (col.defined) {
          // The remaining axes are exactly the activated pair, in index
          // order; reorder so W comes first.
          StateVector pair = *col.state;
          if (test.activated[0] > test.activated[1]) pair = reorder_subsystems(pair, {1, 0});
          const std::vector<double> sv = schmidt_values(pair, {0});
          out.schmidt = {sv[0], sv.size() > 1 ? sv[1] : 0.0};
          bool epr = std::abs(sv[0] - root_half) <= epr_tol &&
                     sv.size() > 1 && std::abs(sv[1] - root_half) <= epr_tol;
          for (std::size_t k = 2; k < sv.size(); ++k) epr = epr && sv[k] <= epr_tol;
          out.epr = epr;
          out.chsh = schmidt_chsh_max(pair).value;
          out.state = std::move(pair);
          if (out.epr) ++report.epr_count;
        } else {
          ++report.skipped;
        }
        ++report.total;
        report.outcomes.push_back(std::move(out));
      }
    }
  }
  return report;
}

// Counting entry point: EPR-flagged conditioning outcomes of one test.
inline int count_epr_outcomes(const InflatedNetwork& net, const StateVector& global,
                              const TestSpec& test, const TestProjections& proj,
                              double epr_tol = kEprTol) {
  return enumerate_swaps(net, global, test, proj, epr_tol).epr_count;
}

// Measurement assignment realizing one tripartite test through the Born
// engine: unit order (U, Uhat, joint(V,Vhat), W, What), so conditioning
// tuples index units 0..2 and the activated pair sits in units 3, 4.
inline MeasurementAssignment test_assignment(const TestSpec& test, const Povm& conditioned,
                                             const Povm& joint,
                                             const std::vector<Povm>& activated_w,
                                             const std::vector<Povm>& activated_what) {
  MeasurementAssignment m;
  m.units.push_back({{test.conditioned[0]}, {conditioned}});
  m.units.push_back({{test.conditioned[1]}, {conditioned}});
  m.units.push_back({{test.joint[0], test.joint[1]}, {joint}});
  m.units.push_back({{test.activated[0]}, activated_w});
  m.units.push_back({{test.activated[1]}, activated_what});
  return m;
}

}  // namespace bellnet
