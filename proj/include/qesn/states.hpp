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
#include <cstdint>

#include "qesn/linalg.hpp"

namespace qesn {

struct DensityMatrix;

/// Probability vector over the 2^n computational basis states. This is the
/// exact ensemble state of a register whose qubits are measured (and the
/// outcomes discarded) at every step.
struct PopulationVector {
  int n_qubits = 0;
  RVector p;

  static PopulationVector zero_state(int n_qubits) {
    PopulationVector out;
    out.n_qubits = n_qubits;
    out.p = RVector::Zero(dim_for_qubits(n_qubits));
    out.p(0) = 1.0;
    return out;
  }

  static PopulationVector uniform(int n_qubits) {
    PopulationVector out;
    out.n_qubits = n_qubits;
    const Eigen::Index dim = dim_for_qubits(n_qubits);
    out.p = RVector::Constant(dim, 1.0 / static_cast<double>(dim));
    return out;
  }

  /// Checks the probability-vector invariants: entries in [0, 1] and unit
  /// sum, both to 1e-12 slack.
  void validate(double tol = 1e-12) const {
    require(p.size() == dim_for_qubits(n_qubits),
            "PopulationVector: size does not match qubit count");
    require(p.minCoeff() >= -tol && p.maxCoeff() <= 1.0 + tol,
            "PopulationVector: entry outside [0, 1]");
    require(std::abs(p.sum() - 1.0) <= tol,
            "PopulationVector: entries do not sum to 1");
  }

  DensityMatrix to_density() const;
};

/// Full 2^n x 2^n density operator; the validation-mode state
/// representation.
struct DensityMatrix {
  int n_qubits = 0;
  CMatrix mat;

  static DensityMatrix zero_state(int n_qubits) {
    DensityMatrix out;
    out.n_qubits = n_qubits;
    const Eigen::Index dim = dim_for_qubits(n_qubits);
    out.mat = CMatrix::Zero(dim, dim);
    out.mat(0, 0) = 1.0;
    return out;
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    DensityMatrix out;
    out.n_qubits = n_qubits;
    const Eigen::Index dim = dim_for_qubits(n_qubits);
    out.mat = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
    return out;
  }

  static DensityMatrix from_populations(const PopulationVector& pop) {
    DensityMatrix out;
    out.n_qubits = pop.n_qubits;
    out.mat = pop.p.cast<Complex>().asDiagonal();
    return out;
  }

  /// Hermiticity and unit trace to 1e-12; eigenvalues above -1e-10 (positive
  /// semidefinite up to floating-point noise).
  void validate(double tol = 1e-12, double psd_floor = -1e-10) const {
    require(mat.rows() == mat.cols() && mat.rows() == dim_for_qubits(n_qubits),
            "DensityMatrix: dimension does not match qubit count");
    require((mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol,
            "DensityMatrix: not Hermitian");
    require(std::abs(mat.trace().real() - 1.0) <= tol &&
                std::abs(mat.trace().imag()) <= tol,
            "DensityMatrix: trace is not 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat,
                                                  Eigen::EigenvaluesOnly);
    require(solver.eigenvalues().minCoeff() >= psd_floor,
            "DensityMatrix: negative eigenvalue");
  }
};

inline DensityMatrix PopulationVector::to_density() const {
  return DensityMatrix::from_populations(*this);
}

/// Conjugation rho -> U rho U^dag.
inline DensityMatrix apply_unitary(const DensityMatrix& rho, const CMatrix& u) {
  require(u.rows() == u.cols() && u.rows() == rho.mat.rows(),
          "apply_unitary: dimension mismatch");
  DensityMatrix out;
  out.n_qubits = rho.n_qubits;
  out.mat = u * rho.mat * u.adjoint();
  return out;
}

/// Projective measurement of every qubit with the outcomes discarded: the
/// statistical mixture over all outcomes, which is the diagonal of rho.
inline PopulationVector dephase(const DensityMatrix& rho) {
  PopulationVector out;
  out.n_qubits = rho.n_qubits;
  out.p = rho.mat.diagonal().real();
  return out;
}

/// Traces out the last qubit (least significant bit) of an (n+1)-qubit
/// operator.
inline CMatrix partial_trace_last_qubit(const CMatrix& mat) {
  const Eigen::Index dim = mat.rows() / 2;
  CMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      out(i, j) = mat(2 * i, 2 * j) + mat(2 * i + 1, 2 * j + 1);
    }
  }
  return out;
}

/// Trace distance (1/2)||a - b||_1. The difference is Hermitian, so the
/// singular values are the absolute eigenvalues.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.mat.rows() == b.mat.rows(), "trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.mat - b.mat,
                                                Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

/// Diagonal specialisation: (1/2) sum |p_i - q_i|.
inline double trace_distance(const PopulationVector& a,
                             const PopulationVector& b) {
  require(a.p.size() == b.p.size(), "trace_distance: dimension mismatch");
  return 0.5 * (a.p - b.p).cwiseAbs().sum();
}

inline double trace_distance_to_uniform(const PopulationVector& a) {
  const double inv_dim = 1.0 / static_cast<double>(a.p.size());
  return 0.5 * (a.p.array() - inv_dim).abs().sum();
}

}  // namespace qesn
