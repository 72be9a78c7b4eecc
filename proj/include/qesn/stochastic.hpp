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

#include "qesn/states.hpp"

namespace qesn {

/// Column-stochastic transition matrix M_{ji} = |U_{ji}|^2. Z-basis
/// measurement after a unitary acting on a diagonal state gives exactly
/// p'_j = sum_i |U_{ji}|^2 p_i, so this is the lossless fast path for the
/// measured-reservoir evolution.
struct StochasticTransition {
  int n_qubits = 0;
  RMatrix m;

  PopulationVector apply(const PopulationVector& pop) const {
    require(pop.p.size() == m.cols(), "StochasticTransition: dimension mismatch");
    PopulationVector out;
    out.n_qubits = pop.n_qubits;
    out.p = m * pop.p;
    return out;
  }
};

/// Projects a unitary onto its measurement-statistics transition matrix.
/// Column sums of |U|^2 are the squared column norms of U, so a deviation
/// from 1 flags a non-unitary input.
inline StochasticTransition to_stochastic(const CMatrix& u,
                                          double tol = 1e-9) {
  require(u.rows() == u.cols(), "to_stochastic: matrix must be square");
  StochasticTransition out;
  out.n_qubits = 0;
  for (Eigen::Index d = u.rows(); d > 1; d >>= 1) {
    ++out.n_qubits;
  }
  require(dim_for_qubits(out.n_qubits) == u.rows(),
          "to_stochastic: dimension is not a power of two");
  out.m = u.cwiseAbs2();
  const RVector col_sums = out.m.colwise().sum();
  require((col_sums.array() - 1.0).abs().maxCoeff() <= tol,
          "to_stochastic: input is not unitary (column norms deviate from 1)");
  return out;
}

}  // namespace qesn
