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
#include "bellnet/tensor.hpp"

using namespace bellnet;

namespace {

StateVector basis_state(const SystemShape& shape, const std::vector<int>& multi) {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(shape.total_dim());
  amp(shape.flat(multi)) = 1.0;
  return StateVector(shape, std::move(amp));
}

}  // namespace

TEST_CASE("system shape strides are left-factor-slow") {
  const SystemShape shape({2, 3, 4});
  CHECK(shape.total_dim() == 24);
  CHECK(shape.stride(0) == 12);
  CHECK(shape.stride(1) == 4);
  CHECK(shape.stride(2) == 1);
  CHECK(shape.flat({1, 2, 3}) == 23);
  CHECK(shape.unflat(23) == std::vector<int>{1, 2, 3});
  for (Eigen::Index i = 0; i < shape.total_dim(); ++i)
    CHECK(shape.flat(shape.unflat(i)) == i);
  CHECK_THROWS_AS(SystemShape({2, 1}), std::invalid_argument);
}

TEST_CASE("kron puts the left factor on the slow index") {
  Eigen::MatrixXcd x(2, 2), id(2, 2);
  x << 0, 1, 1, 0;
  id.setIdentity();
  const Eigen::MatrixXcd xi = kron(x, id);
  // (X ox I)|00> = |10>, so column 0 has its 1 at row 2.
  CHECK(std::abs(xi(2, 0) - 1.0) < 1e-15);
  CHECK(std::abs(xi(0, 2) - 1.0) < 1e-15);

  Eigen::VectorXcd e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const Eigen::VectorXcd v = kron(e0, e1);  // |01> -> flat index 1
  CHECK(std::abs(v(1) - 1.0) < 1e-15);
  CHECK(std::abs(v(0)) < 1e-15);
}

TEST_CASE("state vector enforces normalization") {
  const SystemShape shape({2, 2});
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(4);
  amp(0) = 0.5;
  CHECK_THROWS_AS(StateVector(shape, amp), std::invalid_argument);
  amp(0) = 1.0;
  const StateVector psi(shape, amp);
  CHECK(std::abs(psi.amplitude({0, 0}) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("apply and contract act on the requested axes") {
  const SystemShape shape({2, 2});
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  const StateVector psi00 = basis_state(shape, {0, 0});

  const Eigen::VectorXcd flipped0 = apply_operator_on_axes(psi00.amplitudes(), shape, {0}, x);
  CHECK(std::abs(flipped0(shape.flat({1, 0})) - cplx(1.0, 0.0)) < 1e-15);
  const Eigen::VectorXcd flipped1 = apply_operator_on_axes(psi00.amplitudes(), shape, {1}, x);
  CHECK(std::abs(flipped1(shape.flat({0, 1})) - cplx(1.0, 0.0)) < 1e-15);

  const StateVector epr = make_epr();
  Eigen::VectorXcd bra0(2);
  bra0 << 1, 0;
  const Eigen::VectorXcd rest = contract_bra_on_axes(epr.amplitudes(), shape, {0}, bra0);
  CHECK(std::abs(rest(0) - cplx(std::sqrt(0.5), 0.0)) < 1e-12);
  CHECK(std::abs(rest(1)) < 1e-12);
}

TEST_CASE("operator application on two listed axes follows their order") {
  // Swap-like check: CNOT on (control=1, target=0).
  const SystemShape shape({2, 2});
  Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  const StateVector psi01 = basis_state(shape, {0, 1});
  // Listing axes {1, 0} makes party 1 the control: |01> -> party1=1 fires,
  // flipping party 0: result |11>.
  const Eigen::VectorXcd out = apply_operator_on_axes(psi01.amplitudes(), shape, {1, 0}, cnot);
  CHECK(std::abs(out(shape.flat({1, 1})) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("partial trace keeps axes in original order") {
  const DensityOperator epr = DensityOperator::from_pure(make_epr());
  const DensityOperator reduced = partial_trace(epr, {0});
  CHECK((reduced.matrix() - Eigen::MatrixXcd::Identity(2, 2) / 2.0).norm() < 1e-12);

  const StateVector psi01 = basis_state(SystemShape({2, 2}), {0, 1});
  const DensityOperator keep1 = partial_trace(DensityOperator::from_pure(psi01), {1});
  CHECK(std::abs(keep1.matrix()(1, 1) - cplx(1.0, 0.0)) < 1e-15);

  // StateVector overload agrees with the density-operator path.
  const DensityOperator via_sv = partial_trace(make_ghz(3, kPi / 5), {0, 2});
  const DensityOperator via_do =
      partial_trace(DensityOperator::from_pure(make_ghz(3, kPi / 5)), {0, 2});
  CHECK((via_sv.matrix() - via_do.matrix()).norm() < 1e-12);
}

TEST_CASE("tensor products and powers compose shapes") {
  const StateVector pair = tensor_product(basis_state(SystemShape({2}), {0}),
                                          basis_state(SystemShape({2}), {1}));
  CHECK(pair.shape().dims() == std::vector<int>{2, 2});
  CHECK(std::abs(pair.amplitude({0, 1}) - cplx(1.0, 0.0)) < 1e-15);

  const StateVector two_epr = tensor_power(make_epr(), 2);
  CHECK(two_epr.shape().dims() == std::vector<int>{2, 2, 2, 2});
  CHECK(std::abs(two_epr.amplitude({0, 0, 1, 1}) - cplx(0.5, 0.0)) < 1e-12);

  const DensityOperator rho2 = tensor_power(DensityOperator::from_pure(make_epr()), 2);
  CHECK(rho2.shape().dims() == std::vector<int>{2, 2, 2, 2});
  CHECK(std::abs(rho2.matrix().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("fidelity of pure states") {
  CHECK(std::abs(fidelity(make_epr(), make_epr()) - 1.0) < 1e-12);
  const SystemShape shape({2, 2});
  CHECK(fidelity(basis_state(shape, {0, 1}), basis_state(shape, {1, 0})) < 1e-15);
}

TEST_CASE("reorder and regroup subsystems") {
  const SystemShape shape({2, 2});
  const StateVector psi01 = basis_state(shape, {0, 1});
  // Axis k of the result is axis perm[k] of the input.
  const StateVector swapped = reorder_subsystems(psi01, {1, 0});
  CHECK(std::abs(swapped.amplitude({1, 0}) - cplx(1.0, 0.0)) < 1e-15);

  const StateVector grouped = regroup_subsystems(make_epr(), {4});
  CHECK(grouped.shape().dims() == std::vector<int>{4});
  CHECK(std::abs(grouped.amplitude({0}) - cplx(std::sqrt(0.5), 0.0)) < 1e-12);
  CHECK(std::abs(grouped.amplitude({3}) - cplx(std::sqrt(0.5), 0.0)) < 1e-12);
}

TEST_CASE("schmidt values and rank") {
  const std::vector<double> epr_sv = schmidt_values(make_epr(), {0});
  REQUIRE(epr_sv.size() == 2);
  CHECK(std::abs(epr_sv[0] - std::sqrt(0.5)) < 1e-12);
  CHECK(std::abs(epr_sv[1] - std::sqrt(0.5)) < 1e-12);
  CHECK(schmidt_rank(make_epr(), {0}) == 2);

  const StateVector product = basis_state(SystemShape({2, 2}), {1, 1});
  CHECK(schmidt_rank(product, {0}) == 1);

  const double theta = kPi / 7;
  const std::vector<double> ghz_sv = schmidt_values(make_ghz(3, theta), {0});
  CHECK(std::abs(ghz_sv[0] - std::cos(theta)) < 1e-12);
  CHECK(std::abs(ghz_sv[1] - std::sin(theta)) < 1e-12);
}
