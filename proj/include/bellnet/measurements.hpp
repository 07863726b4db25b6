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

// POVMs, qubit bases, Bell-basis joint measurements and the Horodecki
// criterion for the maximal CHSH value of a two-qubit state.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bellnet/tensor.hpp"

namespace bellnet {

inline constexpr double kPsdTol = 1e-10;

inline const Eigen::Matrix2cd& pauli(int k) {
  static const std::array<Eigen::Matrix2cd, 4> sigma = [] {
    std::array<Eigen::Matrix2cd, 4> s;
    const cplx i(0.0, 1.0);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  if (k < 0 || k > 3) throw std::out_of_range("pauli: index out of range");
  return sigma[static_cast<std::size_t>(k)];
}

// n . sigma for a Bloch vector n (need not be normalized on input; it is
// normalized here).
inline Eigen::Matrix2cd bloch_observable(const Eigen::Vector3d& n) {
  const double len = n.norm();
  if (len < 1e-14) throw std::invalid_argument("bloch_observable: zero direction");
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (int k = 0; k < 3; ++k) m += (n(k) / len) * pauli(k + 1);
  return m;
}

// Positive-operator-valued measure on one measured unit (a single party or a
// jointly measured group); `dim` is the unit's total dimension.
struct Povm {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> effects;

  int n_outcomes() const { return static_cast<int>(effects.size()); }

  void validate() const {
    if (dim < 2) throw std::invalid_argument("Povm: dim must be >= 2");
    if (effects.empty()) throw std::invalid_argument("Povm: no effects");
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& e : effects) {
      if (e.rows() != dim || e.cols() != dim)
        throw std::invalid_argument("Povm: effect dimension mismatch");
      if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kPsdTol)
        throw std::invalid_argument("Povm: effect is not Hermitian");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -kPsdTol)
        throw std::invalid_argument("Povm: effect is not positive semidefinite");
      sum += e;
    }
    if ((sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > kPsdTol)
      throw std::invalid_argument("Povm: effects do not sum to identity");
  }
};

// Two-outcome projective qubit measurement along the Bloch direction
// (sin t cos p, sin t sin p, cos t); outcome 0 is the +1 eigenprojector.
inline Povm projective_from_bloch(double theta, double phi) {
  const Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                          std::cos(theta));
  const Eigen::Matrix2cd obs = bloch_observable(n);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return Povm{2, {(id + obs) / 2.0, (id - obs) / 2.0}};
}

inline Povm projective_from_bloch(const Eigen::Vector3d& n) {
  const Eigen::Matrix2cd obs = bloch_observable(n);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return Povm{2, {(id + obs) / 2.0, (id - obs) / 2.0}};
}

// X eigenbasis kets |+>, |-> in outcome order (0, 1).
inline Eigen::VectorXcd x_basis_ket(int outcome) {
  if (outcome < 0 || outcome > 1) throw std::out_of_range("x_basis_ket: outcome out of range");
  Eigen::VectorXcd v(2);
  const double r = 1.0 / std::sqrt(2.0);
  v << r, (outcome == 0 ? r : -r);
  return v;
}

inline Povm x_basis_povm() { return projective_from_bloch(Eigen::Vector3d(1, 0, 0)); }

// Bell kets in the fixed outcome order Phi+, Phi-, Psi+, Psi-.
inline Eigen::VectorXcd bell_ket(int outcome) {
  if (outcome < 0 || outcome > 3) throw std::out_of_range("bell_ket: outcome out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  const double r = 1.0 / std::sqrt(2.0);
  switch (outcome) {
    case 0: v(0) = r; v(3) = r; break;
    case 1: v(0) = r; v(3) = -r; break;
    case 2: v(1) = r; v(2) = r; break;
    default: v(1) = r; v(2) = -r; break;
  }
  return v;
}

// Four-outcome Bell measurement on a pair of qubits.
inline Povm bell_basis_povm() {
  Povm povm;
  povm.dim = 4;
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXcd b = bell_ket(k);
    povm.effects.push_back(b * b.adjoint());
  }
  return povm;
}

// Four-outcome X (x) X measurement on one dimension-4 party holding two
// qubits; outcome 2*s0 + s1 projects the first qubit on |s0> and the second
// on |s1> in the X basis.
inline Eigen::VectorXcd x_pair_ket(int outcome) {
  if (outcome < 0 || outcome > 3) throw std::out_of_range("x_pair_ket: outcome out of range");
  return kron(x_basis_ket(outcome / 2), x_basis_ket(outcome % 2));
}

inline Povm x_pair_povm() {
  Povm povm;
  povm.dim = 4;
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXcd b = x_pair_ket(k);
    povm.effects.push_back(b * b.adjoint());
  }
  return povm;
}

// Sixteen-outcome paired Bell measurement on two dimension-4 parties V and
// Vhat, each holding qubit pair (V1, V2).  Outcome 4*k + l applies Bell
// outcome k to (V1, Vhat1) and Bell outcome l to (V2, Vhat2).  The ket lives
// on the qubit order (V1, V2, Vhat1, Vhat2), i.e. the flat dimension-16
// space of the two parties side by side.
inline Eigen::VectorXcd paired_bell_ket(int outcome) {
  if (outcome < 0 || outcome > 15)
    throw std::out_of_range("paired_bell_ket: outcome out of range");
  const Eigen::VectorXcd onehalf = kron(bell_ket(outcome / 4), bell_ket(outcome % 4));
  // Built on (V1, Vhat1, V2, Vhat2); swap to (V1, V2, Vhat1, Vhat2).
  StateVector tmp(SystemShape({2, 2, 2, 2}), onehalf);
  return reorder_subsystems(tmp, {0, 2, 1, 3}).amplitudes();
}

inline Povm paired_bell_povm() {
  Povm povm;
  povm.dim = 16;
  for (int k = 0; k < 16; ++k) {
    const Eigen::VectorXcd b = paired_bell_ket(k);
    povm.effects.push_back(b * b.adjoint());
  }
  return povm;
}

// Correlation matrix T_ij = tr[rho (sigma_i (x) sigma_j)] of a two-qubit
// state.
inline Eigen::Matrix3d correlation_matrix(const DensityOperator& rho) {
  if (rho.shape().dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("correlation_matrix: state is not two qubits");
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t(i, j) = (rho.matrix() * kron(Eigen::MatrixXcd(pauli(i + 1)),
                                     Eigen::MatrixXcd(pauli(j + 1))))
                    .trace()
                    .real();
  return t;
}

struct HorodeckiResult {
  double chsh_max = 0.0;
  // Optimal observables as Bloch directions: a0, a1 for the first qubit,
  // b0, b1 for the second.
  std::array<Eigen::Vector3d, 2> a;
  std::array<Eigen::Vector3d, 2> b;
};

// Maximal CHSH value 2*sqrt(t1^2 + t2^2) of a two-qubit state over all
// projective settings, together with settings that attain it.
inline HorodeckiResult horodecki_chsh(const DensityOperator& rho) {
  const Eigen::Matrix3d t = correlation_matrix(rho);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double t1 = svd.singularValues()(0);
  const double t2 = svd.singularValues()(1);
  HorodeckiResult res;
  res.chsh_max = 2.0 * std::sqrt(t1 * t1 + t2 * t2);
  // T = U diag(t) V^T and E(a, b) = a^T T b.  With a along the top two left
  // singular directions and b mixing the right ones by angle mu,
  // tan(mu) = t2/t1, the CHSH combination reaches 2*sqrt(t1^2+t2^2).
  const Eigen::Vector3d u1 = svd.matrixU().col(0), u2 = svd.matrixU().col(1);
  const Eigen::Vector3d v1 = svd.matrixV().col(0), v2 = svd.matrixV().col(1);
  const double mu = std::atan2(t2, t1);
  res.a = {u1, u2};
  res.b = {std::cos(mu) * v1 + std::sin(mu) * v2, std::cos(mu) * v1 - std::sin(mu) * v2};
  return res;
}

}  // namespace bellnet
