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

#include <cmath>

#include "qesn/linalg.hpp"

namespace qesn {

/// Rotation about the X axis:
///   [[cos(a/2), -i sin(a/2)], [-i sin(a/2), cos(a/2)]].
inline Eigen::Matrix2cd rx_gate(double angle) {
  require(std::isfinite(angle), "rx_gate: angle must be finite");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd g;
  g << Complex(c, 0.0), Complex(0.0, -s),  //
      Complex(0.0, -s), Complex(c, 0.0);
  return g;
}

inline Eigen::Matrix2cd x_gate() {
  Eigen::Matrix2cd g;
  g << 0.0, 1.0,  //
      1.0, 0.0;
  return g;
}

/// Embeds a single-qubit gate into the full register: identity on every
/// qubit except `target`.
inline CMatrix embed_single_qubit(const Eigen::Matrix2cd& base, int target,
                                  int n_qubits) {
  require(target >= 0 && target < n_qubits,
          "embed_single_qubit: target out of range");
  const Eigen::Index dim = dim_for_qubits(n_qubits);
  const std::uint64_t tmask = qubit_bit_mask(target, n_qubits);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
    const int b = (col & tmask) ? 1 : 0;
    u(static_cast<Eigen::Index>(col & ~tmask), col) = base(0, b);
    u(static_cast<Eigen::Index>(col | tmask), col) = base(1, b);
  }
  return u;
}

/// Controlled single-qubit gate: applies `base` to `target` when `control`
/// is 1, identity otherwise.
inline CMatrix controlled_gate(const Eigen::Matrix2cd& base, int control,
                               int target, int n_qubits) {
  require(control >= 0 && control < n_qubits,
          "controlled_gate: control out of range");
  require(target >= 0 && target < n_qubits,
          "controlled_gate: target out of range");
  require(control != target, "controlled_gate: control equals target");
  const Eigen::Index dim = dim_for_qubits(n_qubits);
  const std::uint64_t cmask = qubit_bit_mask(control, n_qubits);
  const std::uint64_t tmask = qubit_bit_mask(target, n_qubits);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
    if (!(col & cmask)) {
      u(col, col) = 1.0;
      continue;
    }
    const int b = (col & tmask) ? 1 : 0;
    u(static_cast<Eigen::Index>(col & ~tmask), col) = base(0, b);
    u(static_cast<Eigen::Index>(col | tmask), col) = base(1, b);
  }
  return u;
}

/// Toffoli: flips `target` iff both controls are 1.
inline CMatrix toffoli_gate(int control_a, int control_b, int target,
                            int n_qubits) {
  require(control_a >= 0 && control_a < n_qubits,
          "toffoli_gate: first control out of range");
  require(control_b >= 0 && control_b < n_qubits,
          "toffoli_gate: second control out of range");
  require(target >= 0 && target < n_qubits,
          "toffoli_gate: target out of range");
  require(control_a != control_b && control_a != target && control_b != target,
          "toffoli_gate: indices must be distinct");
  const Eigen::Index dim = dim_for_qubits(n_qubits);
  const std::uint64_t amask = qubit_bit_mask(control_a, n_qubits);
  const std::uint64_t bmask = qubit_bit_mask(control_b, n_qubits);
  const std::uint64_t tmask = qubit_bit_mask(target, n_qubits);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
    const std::uint64_t row =
        ((col & amask) && (col & bmask)) ? (col ^ tmask) : col;
    u(static_cast<Eigen::Index>(row), col) = 1.0;
  }
  return u;
}

// In-place left multiplication by local gates. Columns of `m` are treated
// as statevectors, so these work for both full unitaries (m = 2^n x 2^n)
// and single columns (m = 2^n x 1). This avoids forming the embedded gate.

template <typename Mat>
void left_apply_single_qubit(Mat& m, const Eigen::Matrix2cd& g, int target,
                             int n_qubits) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t tmask = qubit_bit_mask(target, n_qubits);
  const Complex g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & tmask) {
      continue;
    }
    const auto r0 = static_cast<Eigen::Index>(i);
    const auto r1 = static_cast<Eigen::Index>(i | tmask);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a = m(r0, c);
      const Complex b = m(r1, c);
      m(r0, c) = g00 * a + g01 * b;
      m(r1, c) = g10 * a + g11 * b;
    }
  }
}

template <typename Mat>
void left_apply_cx(Mat& m, int control, int target, int n_qubits) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t cmask = qubit_bit_mask(control, n_qubits);
  const std::uint64_t tmask = qubit_bit_mask(target, n_qubits);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & cmask) && !(i & tmask)) {
      m.row(static_cast<Eigen::Index>(i))
          .swap(m.row(static_cast<Eigen::Index>(i | tmask)));
    }
  }
}

template <typename Mat>
void left_apply_ccx(Mat& m, int control_a, int control_b, int target,
                    int n_qubits) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t amask = qubit_bit_mask(control_a, n_qubits);
  const std::uint64_t bmask = qubit_bit_mask(control_b, n_qubits);
  const std::uint64_t tmask = qubit_bit_mask(target, n_qubits);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & amask) && (i & bmask) && !(i & tmask)) {
      m.row(static_cast<Eigen::Index>(i))
          .swap(m.row(static_cast<Eigen::Index>(i | tmask)));
    }
  }
}

}  // namespace qesn
