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

#include <cstdint>
#include <vector>

#include "qesn/states.hpp"

namespace qesn {

/// Basis-index bit masks for every non-empty qubit subset S with |S| <= k,
/// ordered by subset size, then lexicographically by the sorted index
/// tuple. This ordering is fixed so feature columns are stable across
/// runs and golden files.
inline std::vector<std::uint64_t> correlator_masks(int n_qubits, int order) {
  require(order >= 1 && order <= n_qubits,
          "correlator_masks: order outside [1, n_qubits]");
  std::vector<std::uint64_t> masks;
  std::vector<int> combo;
  for (int size = 1; size <= order; ++size) {
    combo.resize(size);
    for (int i = 0; i < size; ++i) {
      combo[i] = i;
    }
    while (true) {
      std::uint64_t mask = 0;
      for (int q : combo) {
        mask |= qubit_bit_mask(q, n_qubits);
      }
      masks.push_back(mask);
      // next combination in lexicographic order
      int pos = size - 1;
      while (pos >= 0 && combo[pos] == n_qubits - size + pos) {
        --pos;
      }
      if (pos < 0) {
        break;
      }
      ++combo[pos];
      for (int i = pos + 1; i < size; ++i) {
        combo[i] = combo[i - 1] + 1;
      }
    }
  }
  return masks;
}

inline int feature_count(int n_qubits, int order, bool include_bias) {
  int count = 0;
  long long binom = 1;
  for (int size = 1; size <= order; ++size) {
    binom = binom * (n_qubits - size + 1) / size;
    count += static_cast<int>(binom);
  }
  return count + (include_bias ? 1 : 0);
}

/// Computes <Z_S> = sum_j p_j (-1)^popcount(j & mask(S)) for a fixed mask
/// set. Reused across time steps by run_sequence.
class FeatureExtractor {
 public:
  FeatureExtractor(int n_qubits, int order, bool include_bias)
      : masks_(correlator_masks(n_qubits, order)),
        include_bias_(include_bias) {}

  int size() const {
    return static_cast<int>(masks_.size()) + (include_bias_ ? 1 : 0);
  }

  RVector extract(const PopulationVector& pop) const {
    RVector out(size());
    const auto dim = static_cast<std::uint64_t>(pop.p.size());
    for (std::size_t f = 0; f < masks_.size(); ++f) {
      const std::uint64_t mask = masks_[f];
      double acc = 0.0;
      for (std::uint64_t j = 0; j < dim; ++j) {
        acc += pop.p(static_cast<Eigen::Index>(j)) * parity_sign(j, mask);
      }
      out(static_cast<Eigen::Index>(f)) = acc;
    }
    if (include_bias_) {
      out(out.size() - 1) = 1.0;
    }
    return out;
  }

  const std::vector<std::uint64_t>& masks() const { return masks_; }
  bool includes_bias() const { return include_bias_; }

 private:
  std::vector<std::uint64_t> masks_;
  bool include_bias_;
};

/// One-shot correlator extraction: every Z-subset expectation of order up
/// to `order`, with an optional trailing bias entry fixed at 1.0.
inline RVector features(const PopulationVector& pop, int order,
                        bool include_bias) {
  return FeatureExtractor(pop.n_qubits, order, include_bias).extract(pop);
}

}  // namespace qesn
