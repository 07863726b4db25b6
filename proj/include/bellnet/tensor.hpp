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

// Dense multipartite tensor states and operators.
//
// Index convention (fixed across the whole library): the global index of a
// multipartite array is built left-factor-slow, i.e. subsystem 0 varies
// slowest.  For dims (d0, d1, ..., d_{n-1}) the stride of axis k is
// prod_{j>k} d_j, so |i0 i1 ... > maps to sum_k i_k * stride_k.  This matches
// the usual Kronecker product with the left factor as the slow index:
// kron(A, B)[i*rows(B)+k, j*cols(B)+l] = A(i,j) * B(k,l).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace bellnet {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kEigTol = 1e-10;
inline constexpr double kProbTol = 1e-10;
inline constexpr double kSchmidtTol = 1e-9;

// Shape of a multipartite system: one local dimension per subsystem.
class SystemShape {
 public:
  SystemShape() = default;

  explicit SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("SystemShape: no subsystems");
    for (int d : dims_) {
      if (d < 2) throw std::invalid_argument("SystemShape: local dimension must be >= 2");
    }
  }

  int n_parties() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& dims() const { return dims_; }

  Eigen::Index total_dim() const {
    Eigen::Index d = 1;
    for (int dk : dims_) d *= dk;
    return d;
  }

  // Stride of axis k under the left-factor-slow layout.
  Eigen::Index stride(int k) const {
    check_axis(k);
    Eigen::Index s = 1;
    for (std::size_t j = static_cast<std::size_t>(k) + 1; j < dims_.size(); ++j) s *= dims_[j];
    return s;
  }

  // Flat index of a multi-index (one entry per axis).
  Eigen::Index flat(const std::vector<int>& multi) const {
    if (multi.size() != dims_.size())
      throw std::invalid_argument("SystemShape::flat: rank mismatch");
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (multi[k] < 0 || multi[k] >= dims_[k])
        throw std::out_of_range("SystemShape::flat: component out of range");
      idx = idx * dims_[k] + multi[k];
    }
    return idx;
  }

  std::vector<int> unflat(Eigen::Index idx) const {
    std::vector<int> multi(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      multi[k] = static_cast<int>(idx % dims_[k]);
      idx /= dims_[k];
    }
    return multi;
  }

  bool operator==(const SystemShape& other) const { return dims_ == other.dims_; }

  void check_axis(int k) const {
    if (k < 0 || k >= n_parties()) throw std::out_of_range("SystemShape: axis out of range");
  }

 private:
  std::vector<int> dims_;
};

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace detail {

inline void check_axes(const SystemShape& shape, const std::vector<int>& axes) {
  std::vector<bool> seen(static_cast<std::size_t>(shape.n_parties()), false);
  if (axes.empty()) throw std::invalid_argument("axes: empty selection");
  for (int a : axes) {
    shape.check_axis(a);
    if (seen[static_cast<std::size_t>(a)]) throw std::invalid_argument("axes: duplicate axis");
    seen[static_cast<std::size_t>(a)] = true;
  }
}

}  // namespace detail

inline std::vector<int> complement_axes(const SystemShape& shape, const std::vector<int>& axes) {
  std::vector<bool> in(static_cast<std::size_t>(shape.n_parties()), false);
  for (int a : axes) {
    shape.check_axis(a);
    in[static_cast<std::size_t>(a)] = true;
  }
  std::vector<int> rest;
  for (int k = 0; k < shape.n_parties(); ++k)
    if (!in[static_cast<std::size_t>(k)]) rest.push_back(k);
  return rest;
}

// Flat offsets of every multi-index over `axes`, enumerated lexicographically
// with the last listed axis fastest.  Empty `axes` yields the single offset 0.
inline std::vector<Eigen::Index> axis_offsets(const SystemShape& shape,
                                              const std::vector<int>& axes) {
  for (int a : axes) shape.check_axis(a);
  Eigen::Index count = 1;
  for (int a : axes) count *= shape.dim(a);
  std::vector<Eigen::Index> strides(axes.size());
  for (std::size_t k = 0; k < axes.size(); ++k) strides[k] = shape.stride(axes[k]);
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(count), 0);
  std::vector<int> counter(axes.size(), 0);
  for (Eigen::Index i = 0; i < count; ++i) {
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < axes.size(); ++k) off += counter[k] * strides[k];
    offsets[static_cast<std::size_t>(i)] = off;
    for (std::size_t k = axes.size(); k-- > 0;) {
      if (++counter[k] < shape.dim(axes[k])) break;
      counter[k] = 0;
    }
  }
  return offsets;
}

// Applies `op` on the listed axes of a raw amplitude vector; the operator
// index runs over the axes in their listed order.
inline Eigen::VectorXcd apply_operator_on_axes(const Eigen::VectorXcd& in,
                                               const SystemShape& shape,
                                               const std::vector<int>& axes,
                                               const Eigen::MatrixXcd& op) {
  detail::check_axes(shape, axes);
  if (in.size() != shape.total_dim())
    throw std::invalid_argument("apply_operator_on_axes: vector/shape mismatch");
  const std::vector<Eigen::Index> sub = axis_offsets(shape, axes);
  const Eigen::Index ds = static_cast<Eigen::Index>(sub.size());
  if (op.rows() != ds || op.cols() != ds)
    throw std::invalid_argument("apply_operator_on_axes: operator dimension mismatch");
  const std::vector<Eigen::Index> rest = axis_offsets(shape, complement_axes(shape, axes));
  Eigen::VectorXcd out(in.size());
  Eigen::VectorXcd v(ds), w(ds);
  for (Eigen::Index r : rest) {
    for (Eigen::Index s = 0; s < ds; ++s) v(s) = in(r + sub[static_cast<std::size_t>(s)]);
    w.noalias() = op * v;
    for (Eigen::Index s = 0; s < ds; ++s) out(r + sub[static_cast<std::size_t>(s)]) = w(s);
  }
  return out;
}

// Contracts <bra| against the listed axes; the result lives on the remaining
// axes in their original order.
inline Eigen::VectorXcd contract_bra_on_axes(const Eigen::VectorXcd& in,
                                             const SystemShape& shape,
                                             const std::vector<int>& axes,
                                             const Eigen::VectorXcd& bra) {
  detail::check_axes(shape, axes);
  if (in.size() != shape.total_dim())
    throw std::invalid_argument("contract_bra_on_axes: vector/shape mismatch");
  const std::vector<Eigen::Index> sub = axis_offsets(shape, axes);
  if (bra.size() != static_cast<Eigen::Index>(sub.size()))
    throw std::invalid_argument("contract_bra_on_axes: bra dimension mismatch");
  const std::vector<Eigen::Index> rest = axis_offsets(shape, complement_axes(shape, axes));
  Eigen::VectorXcd out(static_cast<Eigen::Index>(rest.size()));
  for (std::size_t r = 0; r < rest.size(); ++r) {
    cplx acc(0.0, 0.0);
    for (std::size_t s = 0; s < sub.size(); ++s)
      acc += std::conj(bra(static_cast<Eigen::Index>(s))) * in(rest[r] + sub[s]);
    out(static_cast<Eigen::Index>(r)) = acc;
  }
  return out;
}

// Embeds `op` (acting on the listed axes) into the full space.
inline Eigen::MatrixXcd embed_operator(const SystemShape& shape, const std::vector<int>& axes,
                                       const Eigen::MatrixXcd& op) {
  detail::check_axes(shape, axes);
  const std::vector<Eigen::Index> sub = axis_offsets(shape, axes);
  const Eigen::Index ds = static_cast<Eigen::Index>(sub.size());
  if (op.rows() != ds || op.cols() != ds)
    throw std::invalid_argument("embed_operator: operator dimension mismatch");
  const std::vector<Eigen::Index> rest = axis_offsets(shape, complement_axes(shape, axes));
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(shape.total_dim(), shape.total_dim());
  for (Eigen::Index r : rest)
    for (Eigen::Index i = 0; i < ds; ++i)
      for (Eigen::Index j = 0; j < ds; ++j)
        full(r + sub[static_cast<std::size_t>(i)], r + sub[static_cast<std::size_t>(j)]) = op(i, j);
  return full;
}

// Pure multipartite state.  Construction enforces normalization.
class StateVector {
 public:
  StateVector(SystemShape shape, Eigen::VectorXcd amplitudes)
      : shape_(std::move(shape)), amp_(std::move(amplitudes)) {
    if (amp_.size() != shape_.total_dim())
      throw std::invalid_argument("StateVector: amplitude/shape dimension mismatch");
    if (std::abs(amp_.norm() - 1.0) > kNormTol)
      throw std::invalid_argument("StateVector: amplitudes are not normalized");
  }

  const SystemShape& shape() const { return shape_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::Index dim() const { return amp_.size(); }
  int n_parties() const { return shape_.n_parties(); }

  cplx amplitude(const std::vector<int>& multi) const { return amp_(shape_.flat(multi)); }

 private:
  SystemShape shape_;
  Eigen::VectorXcd amp_;
};

// Mixed multipartite state.  Construction enforces unit trace, hermiticity
// and positive semidefiniteness (within tolerances).
class DensityOperator {
 public:
  DensityOperator(SystemShape shape, Eigen::MatrixXcd matrix)
      : shape_(std::move(shape)), mat_(std::move(matrix)) {
    const Eigen::Index d = shape_.total_dim();
    if (mat_.rows() != d || mat_.cols() != d)
      throw std::invalid_argument("DensityOperator: matrix/shape dimension mismatch");
    if (std::abs(mat_.trace().real() - 1.0) > kProbTol || std::abs(mat_.trace().imag()) > kProbTol)
      throw std::invalid_argument("DensityOperator: trace is not 1");
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
      throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kEigTol)
      throw std::invalid_argument("DensityOperator: matrix is not positive semidefinite");
  }

  static DensityOperator from_pure(const StateVector& psi) {
    return DensityOperator(psi.shape(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  const SystemShape& shape() const { return shape_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  int n_parties() const { return shape_.n_parties(); }

 private:
  SystemShape shape_;
  Eigen::MatrixXcd mat_;
};

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
  std::vector<int> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  return StateVector(SystemShape(dims), kron(a.amplitudes(), b.amplitudes()));
}

inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  return DensityOperator(SystemShape(dims), kron(a.matrix(), b.matrix()));
}

inline StateVector tensor_power(const StateVector& a, int copies) {
  if (copies < 1) throw std::invalid_argument("tensor_power: copies must be >= 1");
  StateVector out = a;
  for (int i = 1; i < copies; ++i) out = tensor_product(out, a);
  return out;
}

inline DensityOperator tensor_power(const DensityOperator& a, int copies) {
  if (copies < 1) throw std::invalid_argument("tensor_power: copies must be >= 1");
  DensityOperator out = a;
  for (int i = 1; i < copies; ++i) out = tensor_product(out, a);
  return out;
}

// Traces out everything but `keep`; kept subsystems stay in their original
// relative order regardless of the order they are listed in.
inline DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep) {
  detail::check_axes(rho.shape(), keep);
  std::sort(keep.begin(), keep.end());
  const SystemShape& shape = rho.shape();
  std::vector<int> kept_dims;
  kept_dims.reserve(keep.size());
  for (int k : keep) kept_dims.push_back(shape.dim(k));
  const std::vector<Eigen::Index> kept_off = axis_offsets(shape, keep);
  const std::vector<Eigen::Index> traced_off = axis_offsets(shape, complement_axes(shape, keep));
  const Eigen::Index dk = static_cast<Eigen::Index>(kept_off.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc(0.0, 0.0);
      for (Eigen::Index t : traced_off)
        acc += rho.matrix()(kept_off[static_cast<std::size_t>(i)] + t,
                            kept_off[static_cast<std::size_t>(j)] + t);
      out(i, j) = acc;
    }
  return DensityOperator(SystemShape(kept_dims), out);
}

inline DensityOperator partial_trace(const StateVector& psi, const std::vector<int>& keep) {
  return partial_trace(DensityOperator::from_pure(psi), keep);
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("fidelity: shape mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// Permutes subsystems: axis k of the result is axis perm[k] of the input.
inline StateVector reorder_subsystems(const StateVector& psi, const std::vector<int>& perm) {
  const SystemShape& shape = psi.shape();
  if (static_cast<int>(perm.size()) != shape.n_parties())
    throw std::invalid_argument("reorder_subsystems: permutation rank mismatch");
  detail::check_axes(shape, perm);
  std::vector<int> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = shape.dim(perm[k]);
  SystemShape new_shape(new_dims);
  Eigen::VectorXcd out(psi.dim());
  std::vector<int> old_multi(perm.size());
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    const std::vector<int> new_multi = new_shape.unflat(i);
    for (std::size_t k = 0; k < perm.size(); ++k)
      old_multi[static_cast<std::size_t>(perm[k])] = new_multi[k];
    out(i) = psi.amplitudes()(shape.flat(old_multi));
  }
  return StateVector(std::move(new_shape), std::move(out));
}

// Reinterprets consecutive subsystems as coarser parties; the flat layout is
// unchanged, so the grouped dimensions must tile the original ones in order.
inline StateVector regroup_subsystems(const StateVector& psi, const std::vector<int>& new_dims) {
  SystemShape new_shape(new_dims);
  if (new_shape.total_dim() != psi.dim())
    throw std::invalid_argument("regroup_subsystems: total dimension mismatch");
  return StateVector(std::move(new_shape), psi.amplitudes());
}

// Schmidt coefficients (descending singular values) across the bipartition
// `side` vs. its complement.
inline std::vector<double> schmidt_values(const StateVector& psi, const std::vector<int>& side) {
  const SystemShape& shape = psi.shape();
  detail::check_axes(shape, side);
  const std::vector<int> rest = complement_axes(shape, side);
  if (rest.empty()) throw std::invalid_argument("schmidt_values: bipartition is trivial");
  const std::vector<Eigen::Index> row_off = axis_offsets(shape, side);
  const std::vector<Eigen::Index> col_off = axis_offsets(shape, rest);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(row_off.size()),
                     static_cast<Eigen::Index>(col_off.size()));
  for (std::size_t r = 0; r < row_off.size(); ++r)
    for (std::size_t c = 0; c < col_off.size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          psi.amplitudes()(row_off[r] + col_off[c]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  std::vector<double> sv(svd.singularValues().data(),
                         svd.singularValues().data() + svd.singularValues().size());
  return sv;
}

inline int schmidt_rank(const StateVector& psi, const std::vector<int>& side,
                        double tol = kSchmidtTol) {
  int rank = 0;
  for (double s : schmidt_values(psi, side))
    if (s > tol) ++rank;
  return rank;
}

}  // namespace bellnet
