// Copyright 2026 The qesn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qesn {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Thrown when a least-squares fit hits singular normal equations at
/// lambda = 0.
class rank_deficient_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a metric is requested on data where it is undefined
/// (e.g. zero target variance).
class undefined_metric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical integrator produces a non-finite state.
class integrator_divergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Basis-index convention, fixed project-wide: qubit 0 is the most
// significant bit of the computational-basis index. For an n-qubit
// register, qubit q owns bit (n-1-q) of the index.

inline std::uint64_t qubit_bit_mask(int qubit, int n_qubits) {
  return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

inline int qubit_bit(std::uint64_t basis_index, int qubit, int n_qubits) {
  return static_cast<int>((basis_index >> (n_qubits - 1 - qubit)) & 1u);
}

/// Parity of the bits selected by `mask`: +1 for even, -1 for odd.
inline double parity_sign(std::uint64_t basis_index, std::uint64_t mask) {
  return (std::popcount(basis_index & mask) & 1) ? -1.0 : 1.0;
}

inline Eigen::Index dim_for_qubits(int n_qubits) {
  return Eigen::Index{1} << n_qubits;
}

inline bool is_unitary(const CMatrix& u, double tol = 1e-12) {
  if (u.rows() != u.cols()) {
    return false;
  }
  const CMatrix gram = u.adjoint() * u;
  return (gram - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::invalid_argument(message);
  }
}

}  // namespace qesn
