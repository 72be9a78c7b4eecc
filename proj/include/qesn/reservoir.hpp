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
#include <utility>
#include <vector>

#include "qesn/channels.hpp"
#include "qesn/features.hpp"
#include "qesn/gates.hpp"
#include "qesn/stochastic.hpp"

namespace qesn {

enum class AnsatzFamily { CxChain, CcxChain };
enum class Topology { Ring, OpenChain };

/// Encoding-circuit description. The input value x enters the circuit as a
/// rotation angle a*x + b on each block's qubit.
struct AnsatzConfig {
  AnsatzFamily family = AnsatzFamily::CxChain;
  int n_qubits = 0;
  Topology topology = Topology::Ring;
  double input_scale = M_PI;        // a
  double input_offset = M_PI / 2.0; // b

  void validate() const {
    const int min_qubits = family == AnsatzFamily::CcxChain ? 3 : 2;
    require(n_qubits >= min_qubits,
            "AnsatzConfig: too few qubits for the entangler family");
    require(input_scale != 0.0, "AnsatzConfig: input_scale must be nonzero");
  }

  double encoding_angle(double x) const {
    return input_scale * x + input_offset;
  }
};

struct ReservoirConfig {
  AnsatzConfig ansatz;
  double damping_theta = 0.0;  // in [0, pi]; gamma = sin^2(theta/2)
  int observable_order = 1;    // k: largest Z-correlator subset size
  bool include_bias = true;

  void validate() const {
    ansatz.validate();
    require(damping_theta >= 0.0 && damping_theta <= M_PI,
            "ReservoirConfig: damping_theta outside [0, pi]");
    require(observable_order >= 1 && observable_order <= ansatz.n_qubits,
            "ReservoirConfig: observable_order outside [1, n_qubits]");
  }

  double damping_gamma() const {
    const double s = std::sin(damping_theta / 2.0);
    return s * s;
  }
};

struct ReservoirState {
  PopulationVector p;
  long t = 0;
};

namespace detail {

struct EncodingBlock {
  int rotation_qubit;
  int control_a;   // entangler control (CX and CCX)
  int control_b;   // second control, CCX only (-1 for CX)
  int target;      // entangler target; -1 when the block has no entangler
};

/// Block layout for one ansatz: block i applies R_X on qubit i and then the
/// entangling gate with control i (and i+1 for the Toffoli family), target
/// (i+1) resp. (i+2). Ring topology wraps the indices; the open chain drops
/// blocks whose entangler would overrun the register.
inline std::vector<EncodingBlock> encoding_blocks(const AnsatzConfig& cfg) {
  const int n = cfg.n_qubits;
  std::vector<EncodingBlock> blocks;
  if (n == 1) {
    // Degenerate single-qubit register: rotation only.
    blocks.push_back({0, -1, -1, -1});
    return blocks;
  }
  if (cfg.family == AnsatzFamily::CxChain) {
    const int last = cfg.topology == Topology::Ring ? n - 1 : n - 2;
    for (int i = 0; i <= last; ++i) {
      blocks.push_back({i, i, -1, (i + 1) % n});
    }
  } else {
    const int last = cfg.topology == Topology::Ring ? n - 2 : n - 3;
    for (int i = 0; i <= last; ++i) {
      blocks.push_back({i, i, (i + 1) % n, (i + 2) % n});
    }
  }
  return blocks;
}

/// Left-multiplies the encoding circuit for input x onto `m` (a unitary
/// under construction or a statevector). Blocks apply in increasing order,
/// block 0 acting first on the state.
template <typename Mat>
void left_apply_encoding(Mat& m, const AnsatzConfig& cfg, double x) {
  const double angle = cfg.encoding_angle(x);
  const Eigen::Matrix2cd rot = rx_gate(angle);
  for (const EncodingBlock& blk : encoding_blocks(cfg)) {
    left_apply_single_qubit(m, rot, blk.rotation_qubit, cfg.n_qubits);
    if (blk.target < 0) {
      continue;
    }
    if (blk.control_b < 0) {
      left_apply_cx(m, blk.control_a, blk.target, cfg.n_qubits);
    } else {
      left_apply_ccx(m, blk.control_a, blk.control_b, blk.target,
                     cfg.n_qubits);
    }
  }
}

}  // namespace detail

/// Full encoding unitary U(x) for one input value.
inline CMatrix build_encoding_unitary(const AnsatzConfig& cfg, double x) {
  require(std::isfinite(x), "build_encoding_unitary: input must be finite");
  CMatrix u = CMatrix::Identity(dim_for_qubits(cfg.n_qubits),
                                dim_for_qubits(cfg.n_qubits));
  detail::left_apply_encoding(u, cfg, x);
  return u;
}

/// One reservoir step: encode the input, measure every qubit (keeping the
/// outcome statistics), extract the Z-correlator features from the
/// post-measurement populations, then damp every qubit with
/// gamma = sin^2(theta/2). Features are read before damping.
inline std::pair<ReservoirState, RVector> step(const ReservoirState& state,
                                               double x,
                                               const ReservoirConfig& cfg) {
  const StochasticTransition m =
      to_stochastic(build_encoding_unitary(cfg.ansatz, x));
  PopulationVector measured = m.apply(state.p);
  const RVector feats =
      features(measured, cfg.observable_order, cfg.include_bias);
  const double gamma = cfg.damping_gamma();
  if (gamma > 0.0) {
    for (int q = 0; q < cfg.ansatz.n_qubits; ++q) {
      damp_population(measured, q, gamma);
    }
  }
  return {ReservoirState{std::move(measured), state.t + 1}, feats};
}

/// Drives the reservoir over a whole input sequence. Row t of the result
/// is the feature vector observed at step t. Deterministic.
inline RMatrix run_sequence(const std::vector<double>& inputs,
                            const ReservoirConfig& cfg,
                            const PopulationVector& p0) {
  require(!inputs.empty(), "run_sequence: inputs must be non-empty");
  cfg.validate();
  const FeatureExtractor extractor(cfg.ansatz.n_qubits, cfg.observable_order,
                                   cfg.include_bias);
  RMatrix h(static_cast<Eigen::Index>(inputs.size()), extractor.size());
  PopulationVector p = p0;
  const double gamma = cfg.damping_gamma();
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    const StochasticTransition m =
        to_stochastic(build_encoding_unitary(cfg.ansatz, inputs[t]));
    p = m.apply(p);
    h.row(static_cast<Eigen::Index>(t)) = extractor.extract(p);
    if (gamma > 0.0) {
      for (int q = 0; q < cfg.ansatz.n_qubits; ++q) {
        damp_population(p, q, gamma);
      }
    }
  }
  return h;
}

/// Trace distance to the maximally mixed state after each step
/// (post-damping), for information-retention diagnostics.
inline std::vector<double> diagnostics_trace_distance(
    const ReservoirConfig& cfg, const std::vector<double>& inputs,
    const PopulationVector& p0) {
  require(!inputs.empty(), "diagnostics_trace_distance: inputs must be non-empty");
  cfg.validate();
  std::vector<double> distances;
  distances.reserve(inputs.size());
  PopulationVector p = p0;
  const double gamma = cfg.damping_gamma();
  for (double x : inputs) {
    const StochasticTransition m =
        to_stochastic(build_encoding_unitary(cfg.ansatz, x));
    p = m.apply(p);
    if (gamma > 0.0) {
      for (int q = 0; q < cfg.ansatz.n_qubits; ++q) {
        damp_population(p, q, gamma);
      }
    }
    distances.push_back(trace_distance_to_uniform(p));
  }
  return distances;
}

}  // namespace qesn
