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

// Named state families: EPR pairs, tunable GHZ states, Werner mixtures and
// the triangle network state.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bellnet/tensor.hpp"

namespace bellnet {

// Maximally entangled pair (1/sqrt(d)) sum_i |ii>.
inline StateVector make_epr(int d = 2) {
  if (d < 2) throw std::invalid_argument("make_epr: d must be >= 2");
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  const double c = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) amp(static_cast<Eigen::Index>(i) * d + i) = c;
  return StateVector(SystemShape({d, d}), std::move(amp));
}

// Tunable GHZ state on n parties.  For d = 2 this is
// cos(theta)|0...0> + sin(theta)|1...1>; for d > 2 the weight sin(theta) is
// spread uniformly over |k...k>, k >= 1.
inline StateVector make_ghz(int n, double theta, int d = 2) {
  if (n < 2) throw std::invalid_argument("make_ghz: n must be >= 2");
  if (d < 2) throw std::invalid_argument("make_ghz: d must be >= 2");
  SystemShape shape(std::vector<int>(static_cast<std::size_t>(n), d));
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(shape.total_dim());
  Eigen::Index diag_stride = 0;
  for (int k = 0; k < n; ++k) diag_stride += shape.stride(k);
  amp(0) = std::cos(theta);
  const double tail = std::sin(theta) / std::sqrt(static_cast<double>(d - 1));
  for (int k = 1; k < d; ++k) amp(k * diag_stride) = tail;
  return StateVector(std::move(shape), std::move(amp));
}

// Werner-type mixture (1-v)/D * I + v |phi><phi| of a pure state phi.
inline DensityOperator make_werner(const StateVector& phi, double v) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("make_werner: v must lie in [0, 1]");
  const Eigen::Index d = phi.dim();
  Eigen::MatrixXcd m = v * (phi.amplitudes() * phi.amplitudes().adjoint());
  m += ((1.0 - v) / static_cast<double>(d)) * Eigen::MatrixXcd::Identity(d, d);
  return DensityOperator(phi.shape(), std::move(m));
}

// Triangle network state on parties A, B, C.  Each party holds one qubit
// from each of its two incident edges; edge e carries sum_i c_i |ii> with
// the given (normalized) coefficients.  Edge order: (A1,B2), (B1,C2),
// (C1,A2); party qubit order: A = (A1,A2), B = (B1,B2), C = (C1,C2), so each
// party is one dimension-4 subsystem.
inline StateVector make_triangle_state(const std::vector<std::vector<double>>& edge_coeffs = {
                                           {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}}) {
  if (edge_coeffs.size() != 3) throw std::invalid_argument("make_triangle_state: need 3 edges");
  std::vector<StateVector> edges;
  edges.reserve(3);
  for (const auto& c : edge_coeffs) {
    if (c.size() != 2)
      throw std::invalid_argument("make_triangle_state: edges carry qubit pairs");
    const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1]);
    if (norm < kSchmidtTol) throw std::invalid_argument("make_triangle_state: zero edge state");
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(4);
    amp(0) = c[0] / norm;
    amp(3) = c[1] / norm;
    edges.push_back(StateVector(SystemShape({2, 2}), std::move(amp)));
  }
  // Qubit order after the product: (A1, B2, B1, C2, C1, A2).
  StateVector psi = tensor_product(tensor_product(edges[0], edges[1]), edges[2]);
  // Target order (A1, A2, B1, B2, C1, C2).
  psi = reorder_subsystems(psi, {0, 5, 2, 1, 4, 3});
  return regroup_subsystems(psi, {4, 4, 4});
}

// True iff every bipartition of the parties has Schmidt rank >= 2, i.e. the
// pure state is entangled across all cuts.
inline bool is_genuinely_multipartite_entangled(const StateVector& psi,
                                                double tol = kSchmidtTol) {
  const int n = psi.n_parties();
  if (n < 2) throw std::invalid_argument("is_genuinely_multipartite_entangled: need >= 2 parties");
  // Party 0 is pinned to one side; that enumerates each bipartition once.
  const unsigned long n_subsets = 1ul << (n - 1);
  for (unsigned long mask = 0; mask < n_subsets; ++mask) {
    std::vector<int> side = {0};
    for (int k = 1; k < n; ++k)
      if (mask & (1ul << (k - 1))) side.push_back(k);
    if (static_cast<int>(side.size()) == n) continue;
    if (schmidt_rank(psi, side, tol) < 2) return false;
  }
  return true;
}

}  // namespace bellnet
