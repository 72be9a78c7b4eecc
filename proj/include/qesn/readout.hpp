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

#include "qesn/linalg.hpp"

namespace qesn {

struct ReadoutWeights {
  RVector w;
  double ridge_lambda = 0.0;
};

/// Least-squares readout fit: w = (H^T H + lambda I)^{-1} H^T y, solved by
/// decomposition rather than explicit inversion. lambda = 0 reproduces the
/// pseudoinverse solution when H has full column rank; a rank-deficient H
/// at lambda = 0 raises rank_deficient_error.
inline ReadoutWeights train_readout(const RMatrix& h, const RVector& y,
                                    double lambda) {
  require(h.rows() == y.size(), "train_readout: row count mismatch");
  require(lambda >= 0.0, "train_readout: lambda must be non-negative");
  ReadoutWeights out;
  out.ridge_lambda = lambda;
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<RMatrix> qr(h);
    if (qr.rank() < h.cols()) {
      throw rank_deficient_error(
          "train_readout: normal equations are singular at lambda = 0; "
          "retry with lambda > 0");
    }
    out.w = qr.solve(y);
    return out;
  }
  const RMatrix gram =
      h.transpose() * h + lambda * RMatrix::Identity(h.cols(), h.cols());
  out.w = Eigen::LDLT<RMatrix>(gram).solve(h.transpose() * y);
  return out;
}

/// Row-wise readout: y_t = h_t . w.
inline RVector predict(const RMatrix& h, const ReadoutWeights& weights) {
  require(h.cols() == weights.w.size(), "predict: feature dimension mismatch");
  return h * weights.w;
}

}  // namespace qesn
