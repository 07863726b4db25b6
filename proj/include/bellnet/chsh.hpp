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

// CHSH functionals on bipartite binary distributions and on bipartite pure
// states, plus the audit report structure shared by all experiments.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellnet/distribution.hpp"
#include "bellnet/measurements.hpp"
#include "bellnet/tensor.hpp"

namespace bellnet {

inline constexpr double kLocalBound = 2.0;
inline constexpr double kTsirelsonBound = 2.0 * 1.4142135623730951;  // 2*sqrt(2)
inline constexpr double kNoSignallingBound = 4.0;

namespace detail {

inline void check_chsh_scenario(const ConditionalDistribution& p) {
  if (p.n_parties() != 2 || p.settings() != std::vector<int>{2, 2} ||
      p.outcomes() != std::vector<int>{2, 2})
    throw std::invalid_argument("CHSH: distribution is not a (2,2,2,2) scenario");
}

}  // namespace detail

// E(x, y) = sum_ab (-1)^(a+b) P(ab|xy).
inline double correlator(const ConditionalDistribution& p, int x, int y) {
  detail::check_chsh_scenario(p);
  double e = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) e += (((a + b) % 2 == 0) ? 1.0 : -1.0) * p.p({x, y}, {a, b});
  return e;
}

struct ChshValue {
  double value = 0.0;
  // E(0,0), E(0,1), E(1,0), E(1,1).
  std::array<double, 4> correlators = {0.0, 0.0, 0.0, 0.0};
};

// Fixed sign convention: CHSH = E(0,0) + E(0,1) + E(1,0) - E(1,1).
inline ChshValue chsh_value(const ConditionalDistribution& p) {
  ChshValue v;
  v.correlators = {correlator(p, 0, 0), correlator(p, 0, 1), correlator(p, 1, 0),
                   correlator(p, 1, 1)};
  v.value = v.correlators[0] + v.correlators[1] + v.correlators[2] - v.correlators[3];
  return v;
}

// Largest |CHSH| over the relabeling orbit: the minus sign may sit on any of
// the four correlators, and the overall sign is free.
inline double chsh_orbit_max(const std::array<double, 4>& e) {
  double best = 0.0;
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += (j == k ? -1.0 : 1.0) * e[static_cast<std::size_t>(j)];
    best = std::max(best, std::abs(s));
  }
  return best;
}

inline double chsh_orbit_max(const ConditionalDistribution& p) {
  return chsh_orbit_max(chsh_value(p).correlators);
}

struct SchmidtChsh {
  double value = 0.0;
  // Weight of the top-2 Schmidt block and its internal concurrence.
  double block_weight = 0.0;
  double block_concurrence = 0.0;
};

// Maximal CHSH value reachable on a bipartite pure state with two-outcome
// block observables supported on the top-2 Schmidt subspace (identity on the
// complement).  Exact for Schmidt rank <= 2; a lower bound otherwise.
inline SchmidtChsh schmidt_chsh_max(const StateVector& psi) {
  if (psi.n_parties() != 2) throw std::invalid_argument("schmidt_chsh_max: need two parties");
  const std::vector<double> sv = schmidt_values(psi, {0});
  const double l1 = sv[0];
  const double l2 = sv.size() > 1 ? sv[1] : 0.0;
  SchmidtChsh out;
  out.block_weight = l1 * l1 + l2 * l2;
  out.block_concurrence = out.block_weight > 0.0 ? 2.0 * l1 * l2 / out.block_weight : 0.0;
  out.value = out.block_weight * 2.0 *
                  std::sqrt(1.0 + out.block_concurrence * out.block_concurrence) +
              2.0 * (1.0 - out.block_weight);
  return out;
}

namespace detail {

// +/- projective POVM of a block observable: cos(angle)*Z + sin(angle)*X on
// the two-dimensional span of (u0, u1), identity on the complement (absorbed
// into the + effect).
inline Povm block_observable_povm(const Eigen::VectorXcd& u0, const Eigen::VectorXcd& u1,
                                  double angle) {
  const Eigen::Index d = u0.size();
  const Eigen::MatrixXcd z = u0 * u0.adjoint() - u1 * u1.adjoint();
  const Eigen::MatrixXcd x = u0 * u1.adjoint() + u1 * u0.adjoint();
  const Eigen::MatrixXcd block = std::cos(angle) * z + std::sin(angle) * x;
  const Eigen::MatrixXcd pblock = u0 * u0.adjoint() + u1 * u1.adjoint();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  Povm povm;
  povm.dim = static_cast<int>(d);
  povm.effects = {(pblock + block) / 2.0 + (id - pblock), (pblock - block) / 2.0};
  return povm;
}

}  // namespace detail

// Two-setting block observables for each side of a bipartite pure state.
// Their Born-rule CHSH value equals schmidt_chsh_max for any rank (the
// construction is what the bound describes); for rank <= 2 that value is the
// global optimum.
inline MeasurementAssignment schmidt_chsh_settings(const StateVector& psi) {
  if (psi.n_parties() != 2) throw std::invalid_argument("schmidt_chsh_settings: need two parties");
  const SystemShape& shape = psi.shape();
  const Eigen::Index da = shape.dim(0), db = shape.dim(1);
  Eigen::MatrixXcd m(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) m(i, j) = psi.amplitudes()(i * db + j);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double l1 = svd.singularValues()(0);
  const double l2 = svd.singularValues().size() > 1 ? svd.singularValues()(1) : 0.0;
  const double w = l1 * l1 + l2 * l2;
  const double c2 = w > 0.0 ? 2.0 * l1 * l2 / w : 0.0;
  const double mu = std::atan(c2);
  const Eigen::VectorXcd a0 = svd.matrixU().col(0);
  const Eigen::VectorXcd a1 = svd.matrixU().col(std::min<Eigen::Index>(1, da - 1));
  // psi = sum_k l_k u_k (x) conj(v_k); measuring in the conjugated right
  // basis reproduces the two-qubit correlations of cos|00> + sin|11>.
  const Eigen::VectorXcd b0 = svd.matrixV().col(0).conjugate();
  const Eigen::VectorXcd b1 = svd.matrixV().col(std::min<Eigen::Index>(1, db - 1)).conjugate();
  MeasurementAssignment out;
  out.units.push_back(
      {{0}, {detail::block_observable_povm(a0, a1, 0.0),
             detail::block_observable_povm(a0, a1, kPi / 2.0)}});
  out.units.push_back({{1},
                       {detail::block_observable_povm(b0, b1, mu),
                        detail::block_observable_povm(b0, b1, -mu)}});
  return out;
}

// Audit report: tuple counts against a threshold plus the per-tuple values
// (null for skipped tuples).
struct UpsilonReport {
  std::string experiment;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double threshold = 0.0;
  int total = 0;
  int above = 0;
  int at_or_below = 0;
  int skipped = 0;
  double max_chsh = 0.0;
  std::vector<std::optional<double>> values;
  bool pass = false;

  void tally(std::optional<double> value) {
    ++total;
    values.push_back(value);
    if (!value.has_value()) {
      ++skipped;
      return;
    }
    max_chsh = std::max(max_chsh, *value);
    if (*value > threshold)
      ++above;
    else
      ++at_or_below;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["params"] = params;
    j["threshold"] = threshold;
    j["total"] = total;
    j["above"] = above;
    j["at_or_below"] = at_or_below;
    j["skipped"] = skipped;
    j["max_chsh"] = max_chsh;
    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (const auto& v : values) {
      if (v.has_value())
        vals.push_back(*v);
      else
        vals.push_back(nullptr);
    }
    j["values"] = vals;
    j["pass"] = pass;
    return j;
  }
};

}  // namespace bellnet
