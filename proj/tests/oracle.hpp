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

// Independent reference constructions for the test suite. Everything here
// builds operators through Kronecker products and projector algebra, a
// deliberately different route from the bit-indexed construction in the
// library, so the two can cross-check each other.

#pragma once

#include <random>
#include <vector>

#include "qesn/reservoir.hpp"
#include "qesn/states.hpp"

namespace oracle {

using qesn::CMatrix;
using qesn::Complex;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Identity (x) ... (x) g (x) ... (x) identity with g at qubit position q
/// (qubit 0 leftmost, matching the most-significant-bit convention).
inline CMatrix embed(const CMatrix& g, int qubit, int n_qubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    out = q == qubit ? kron(out, g)
                     : kron(out, CMatrix::Identity(2, 2));
  }
  return out;
}

inline CMatrix projector(int value) {
  CMatrix p = CMatrix::Zero(2, 2);
  p(value, value) = 1.0;
  return p;
}

inline CMatrix pauli_x() {
  CMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

/// Controlled gate via projector algebra: P0_c (x) I + P1_c (x) U_t.
inline CMatrix controlled(const CMatrix& base, int control, int target,
                          int n_qubits) {
  return embed(projector(0), control, n_qubits) +
         embed(projector(1), control, n_qubits) * embed(base, target, n_qubits);
}

inline CMatrix toffoli(int control_a, int control_b, int target, int n_qubits) {
  const CMatrix both = embed(projector(1), control_a, n_qubits) *
                       embed(projector(1), control_b, n_qubits);
  const Eigen::Index dim = both.rows();
  return CMatrix::Identity(dim, dim) - both +
         both * embed(pauli_x(), target, n_qubits);
}

inline CMatrix rx(double angle) {
  CMatrix g(2, 2);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  g << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
  return g;
}

/// Step-by-step chain multiplication of the encoding circuit from full
/// embedded gate matrices.
inline CMatrix encoding_unitary(const qesn::AnsatzConfig& cfg, double x) {
  const int n = cfg.n_qubits;
  const double angle = cfg.input_scale * x + cfg.input_offset;
  CMatrix u = CMatrix::Identity(qesn::dim_for_qubits(n), qesn::dim_for_qubits(n));
  const auto apply = [&u](const CMatrix& g) { u = g * u; };
  if (n == 1) {
    apply(rx(angle));
    return u;
  }
  if (cfg.family == qesn::AnsatzFamily::CxChain) {
    const int last = cfg.topology == qesn::Topology::Ring ? n - 1 : n - 2;
    for (int i = 0; i <= last; ++i) {
      apply(embed(rx(angle), i, n));
      apply(controlled(pauli_x(), i, (i + 1) % n, n));
    }
  } else {
    const int last = cfg.topology == qesn::Topology::Ring ? n - 2 : n - 3;
    for (int i = 0; i <= last; ++i) {
      apply(embed(rx(angle), i, n));
      apply(toffoli(i, (i + 1) % n, (i + 2) % n, n));
    }
  }
  return u;
}

/// Random probability vector.
inline qesn::PopulationVector random_populations(int n_qubits,
                                                 std::mt19937_64& rng) {
  qesn::PopulationVector out;
  out.n_qubits = n_qubits;
  out.p.resize(qesn::dim_for_qubits(n_qubits));
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.p.size(); ++i) {
    out.p(i) = dist(rng);
  }
  out.p /= out.p.sum();
  return out;
}

/// Random density matrix rho = A A^dag / tr.
inline qesn::DensityMatrix random_density(int n_qubits, std::mt19937_64& rng) {
  const Eigen::Index dim = qesn::dim_for_qubits(n_qubits);
  std::normal_distribution<double> dist(0.0, 1.0);
  CMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(i, j) = Complex(dist(rng), dist(rng));
    }
  }
  qesn::DensityMatrix out;
  out.n_qubits = n_qubits;
  out.mat = a * a.adjoint();
  out.mat /= out.mat.trace();
  return out;
}

/// Random unitary from the QR decomposition of a Gaussian matrix.
inline CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(i, j) = Complex(dist(rng), dist(rng));
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  return q;
}

/// Full density-matrix evolution of one reservoir step: encode, measure
/// every qubit (ensemble over outcomes), read the features, then damp each
/// qubit through the explicit ancilla construction.
struct DensityPipelineResult {
  qesn::DensityMatrix state;
  qesn::RVector features;
};

inline DensityPipelineResult density_pipeline_step(
    const qesn::DensityMatrix& rho, double x, const qesn::ReservoirConfig& cfg) {
  const CMatrix u = encoding_unitary(cfg.ansatz, x);
  qesn::DensityMatrix evolved = qesn::apply_unitary(rho, u);
  const qesn::PopulationVector measured = qesn::dephase(evolved);
  DensityPipelineResult out;
  out.features = qesn::features(measured, cfg.observable_order, cfg.include_bias);
  qesn::DensityMatrix damped = qesn::DensityMatrix::from_populations(measured);
  for (int q = 0; q < cfg.ansatz.n_qubits; ++q) {
    damped = qesn::ancilla_damp(damped, q, cfg.damping_theta);
  }
  out.state = std::move(damped);
  return out;
}

}  // namespace oracle
