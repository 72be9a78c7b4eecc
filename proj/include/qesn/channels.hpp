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
#include <vector>

#include "qesn/gates.hpp"
#include "qesn/states.hpp"

namespace qesn {

/// A quantum channel in Kraus form.
struct KrausChannel {
  std::vector<CMatrix> ops;

  /// Trace preservation: sum_k K_k^dag K_k = I.
  bool is_trace_preserving(double tol = 1e-12) const {
    if (ops.empty()) {
      return false;
    }
    CMatrix sum = CMatrix::Zero(ops.front().rows(), ops.front().cols());
    for (const CMatrix& k : ops) {
      sum += k.adjoint() * k;
    }
    return (sum - CMatrix::Identity(sum.rows(), sum.cols()))
               .cwiseAbs()
               .maxCoeff() <= tol;
  }
};

/// Single-qubit amplitude damping with decay rate gamma:
///   K_0 = diag(1, sqrt(1-gamma)),  K_1 = [[0, sqrt(gamma)], [0, 0]].
/// On a diagonal state (p0, p1) this yields (p0 + gamma p1, (1-gamma) p1).
inline KrausChannel damping_kraus(double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "damping_kraus: gamma outside [0, 1]");
  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  CMatrix k1 = CMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel{{k0, k1}};
}

/// Applies a single-qubit channel to one qubit of a register state.
inline DensityMatrix apply_channel(const DensityMatrix& rho,
                                   const KrausChannel& channel, int qubit) {
  require(qubit >= 0 && qubit < rho.n_qubits,
          "apply_channel: qubit out of range");
  DensityMatrix out;
  out.n_qubits = rho.n_qubits;
  out.mat = CMatrix::Zero(rho.mat.rows(), rho.mat.cols());
  for (const CMatrix& k : channel.ops) {
    require(k.rows() == 2 && k.cols() == 2,
            "apply_channel: expected single-qubit Kraus operators");
    const CMatrix embedded =
        embed_single_qubit(Eigen::Matrix2cd(k), qubit, rho.n_qubits);
    out.mat += embedded * rho.mat * embedded.adjoint();
  }
  return out;
}

/// Circuit-level damping of one qubit through a fresh ancilla: extend the
/// register with an ancilla in |0>, apply a controlled rotation of angle
/// theta from the qubit onto the ancilla followed by an ancilla-controlled
/// NOT back onto the qubit, then discard the ancilla. The induced channel
/// is exactly amplitude damping with gamma = sin^2(theta/2).
inline DensityMatrix ancilla_damp(const DensityMatrix& rho, int qubit,
                                  double theta) {
  require(qubit >= 0 && qubit < rho.n_qubits,
          "ancilla_damp: qubit out of range");
  const int n_ext = rho.n_qubits + 1;
  const int ancilla = rho.n_qubits;  // appended as the least significant bit
  const Eigen::Index dim = rho.mat.rows();

  // rho (x) |0><0| without forming a Kronecker product helper.
  CMatrix ext = CMatrix::Zero(2 * dim, 2 * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      ext(2 * i, 2 * j) = rho.mat(i, j);
    }
  }

  const CMatrix crx = controlled_gate(rx_gate(theta), qubit, ancilla, n_ext);
  const CMatrix cnot = controlled_gate(x_gate(), ancilla, qubit, n_ext);
  const CMatrix u = cnot * crx;
  ext = u * ext * u.adjoint();

  DensityMatrix out;
  out.n_qubits = rho.n_qubits;
  out.mat = partial_trace_last_qubit(ext);
  return out;
}

/// Fast-path amplitude damping on a population vector: moves a gamma
/// fraction of each excited-bit population to the relaxed bit.
inline void damp_population(PopulationVector& pop, int qubit, double gamma) {
  require(qubit >= 0 && qubit < pop.n_qubits,
          "damp_population: qubit out of range");
  require(gamma >= 0.0 && gamma <= 1.0, "damp_population: gamma outside [0, 1]");
  const std::uint64_t dim = std::uint64_t{1} << pop.n_qubits;
  const std::uint64_t mask = qubit_bit_mask(qubit, pop.n_qubits);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & mask) {
      continue;
    }
    const auto lo = static_cast<Eigen::Index>(i);
    const auto hi = static_cast<Eigen::Index>(i | mask);
    pop.p(lo) += gamma * pop.p(hi);
    pop.p(hi) *= (1.0 - gamma);
  }
}

}  // namespace qesn
