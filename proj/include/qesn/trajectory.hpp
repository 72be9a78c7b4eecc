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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "qesn/features.hpp"
#include "qesn/reservoir.hpp"
#include "qesn/rng.hpp"

namespace qesn {

/// Finite-shot execution plan. When batch emulation is on (batches > 1),
/// shots must split evenly; batches only partition the shot budget.
struct ShotPlan {
  long shots = 50000;
  int batches = 1;
  std::uint64_t seed = 0;

  void validate() const {
    require(shots >= 1, "ShotPlan: shots must be positive");
    require(batches >= 1, "ShotPlan: batches must be positive");
    require(batches == 1 || shots % batches == 0,
            "ShotPlan: shots must divide evenly into batches");
  }
};

/// One Monte-Carlo trajectory of the measured reservoir. Between steps the
/// register is a computational basis state (the measurement collapses it and
/// the damping is sampled), so each step only needs the statevector column
/// U(x) e_state, never the full matrix.
///
/// Returns the post-measurement (pre-damping) basis index for every step.
inline std::vector<std::uint64_t> sample_trajectory(
    const std::vector<double>& inputs, const ReservoirConfig& cfg,
    RandomStream& rng) {
  cfg.validate();
  const int n = cfg.ansatz.n_qubits;
  const Eigen::Index dim = dim_for_qubits(n);
  const double gamma = cfg.damping_gamma();

  std::vector<std::uint64_t> outcomes;
  outcomes.reserve(inputs.size());
  std::uint64_t state = 0;
  CVector column(dim);
  for (double x : inputs) {
    column.setZero();
    column(static_cast<Eigen::Index>(state)) = 1.0;
    detail::left_apply_encoding(column, cfg.ansatz, x);

    // Sample the measurement outcome from the amplitude-squared law.
    const double u = rng.uniform();
    double cdf = 0.0;
    std::uint64_t outcome = static_cast<std::uint64_t>(dim) - 1;
    for (Eigen::Index j = 0; j < dim; ++j) {
      cdf += std::norm(column(j));
      if (u < cdf) {
        outcome = static_cast<std::uint64_t>(j);
        break;
      }
    }
    outcomes.push_back(outcome);

    // Damping after outcome recording: each excited qubit relaxes with
    // probability gamma.
    state = outcome;
    if (gamma > 0.0) {
      for (int q = 0; q < n; ++q) {
        const std::uint64_t mask = qubit_bit_mask(q, n);
        if ((state & mask) && rng.uniform() < gamma) {
          state &= ~mask;
        }
      }
    }
  }
  return outcomes;
}

/// Batch sampler sharing the per-(step, basis state) outcome distributions
/// across shots. Each distribution is the statevector column U(x_t) e_i,
/// computed lazily on first visit; shots then draw from the cached
/// cumulative sums. Produces bit-identical trajectories to
/// sample_trajectory on the same stream.
class TrajectorySampler {
 public:
  TrajectorySampler(const std::vector<double>& inputs, ReservoirConfig cfg)
      : inputs_(inputs), cfg_(std::move(cfg)) {
    cfg_.validate();
    dim_ = dim_for_qubits(cfg_.ansatz.n_qubits);
    gamma_ = cfg_.damping_gamma();
    cdf_.assign(inputs_.size(),
                std::vector<std::vector<double>>(
                    static_cast<std::size_t>(dim_)));
  }

  std::vector<std::uint64_t> sample(RandomStream& rng) {
    std::vector<std::uint64_t> outcomes;
    outcomes.reserve(inputs_.size());
    std::uint64_t state = 0;
    for (std::size_t t = 0; t < inputs_.size(); ++t) {
      state = step_shot(t, state, rng, outcomes);
    }
    return outcomes;
  }

  /// One measurement + damping step; appends the outcome and returns the
  /// post-damping state.
  std::uint64_t step_shot(std::size_t t, std::uint64_t state, RandomStream& rng,
                          std::vector<std::uint64_t>& outcomes) {
    const int n = cfg_.ansatz.n_qubits;
    const std::vector<double>& cdf = column_cdf(t, state);
    const double u = rng.uniform();
    // First index with cdf > u; matches the sequential scan in
    // sample_trajectory exactly.
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t outcome =
        it == cdf.end() ? static_cast<std::uint64_t>(dim_) - 1
                        : static_cast<std::uint64_t>(it - cdf.begin());
    outcomes.push_back(outcome);
    if (gamma_ > 0.0) {
      for (int q = 0; q < n; ++q) {
        const std::uint64_t mask = qubit_bit_mask(q, n);
        if ((outcome & mask) && rng.uniform() < gamma_) {
          outcome &= ~mask;
        }
      }
    }
    return outcome;
  }

 private:
  const std::vector<double>& column_cdf(std::size_t t, std::uint64_t state) {
    std::vector<double>& slot = cdf_[t][static_cast<std::size_t>(state)];
    if (!slot.empty()) {
      return slot;
    }
    CVector column = CVector::Zero(dim_);
    column(static_cast<Eigen::Index>(state)) = 1.0;
    detail::left_apply_encoding(column, cfg_.ansatz, inputs_[t]);
    slot.resize(static_cast<std::size_t>(dim_));
    double acc = 0.0;
    for (Eigen::Index j = 0; j < dim_; ++j) {
      acc += std::norm(column(j));
      slot[static_cast<std::size_t>(j)] = acc;
    }
    return slot;
  }

  const std::vector<double>& inputs_;
  ReservoirConfig cfg_;
  Eigen::Index dim_ = 0;
  double gamma_ = 0.0;
  std::vector<std::vector<std::vector<double>>> cdf_;
};

/// Samples a full shot plan. Shot s uses the stream derived from
/// (plan.seed, s), so results are independent of execution order.
inline std::vector<std::vector<std::uint64_t>> sample_shots(
    const std::vector<double>& inputs, const ReservoirConfig& cfg,
    const ShotPlan& plan) {
  plan.validate();
  TrajectorySampler sampler(inputs, cfg);
  std::vector<std::vector<std::uint64_t>> trajectories(
      static_cast<std::size_t>(plan.shots));
  for (long s = 0; s < plan.shots; ++s) {
    RandomStream rng =
        RandomStream::from(plan.seed, static_cast<std::uint64_t>(s));
    trajectories[static_cast<std::size_t>(s)] = sampler.sample(rng);
  }
  return trajectories;
}

/// Per-step histogram of recorded measurement outcomes over all shots.
/// Same information as the trajectory list when only per-step statistics
/// are needed, at a fraction of the memory.
struct ShotCounts {
  int n_qubits = 0;
  long shots = 0;
  std::vector<std::vector<std::uint32_t>> counts;  // [step][basis index]
};

/// Accumulates per-step outcome histograms over a shot plan. Shots run on
/// up to `workers` threads; every shot draws from its own (seed, index)
/// stream and the merge is a sum of integer counts, so the result does not
/// depend on scheduling.
inline ShotCounts sample_shot_counts(const std::vector<double>& inputs,
                                     const ReservoirConfig& cfg,
                                     const ShotPlan& plan, int workers = 1) {
  plan.validate();
  const auto dim =
      static_cast<std::size_t>(dim_for_qubits(cfg.ansatz.n_qubits));
  ShotCounts out;
  out.n_qubits = cfg.ansatz.n_qubits;
  out.shots = plan.shots;
  out.counts.assign(inputs.size(), std::vector<std::uint32_t>(dim, 0));

  const auto run_range = [&inputs, &cfg, &plan](long first, long last,
                                                ShotCounts& target) {
    TrajectorySampler sampler(inputs, cfg);
    std::vector<std::uint64_t> outcomes;
    outcomes.reserve(inputs.size());
    for (long s = first; s < last; ++s) {
      RandomStream rng =
          RandomStream::from(plan.seed, static_cast<std::uint64_t>(s));
      outcomes.clear();
      std::uint64_t state = 0;
      for (std::size_t t = 0; t < inputs.size(); ++t) {
        state = sampler.step_shot(t, state, rng, outcomes);
        ++target.counts[t][static_cast<std::size_t>(outcomes.back())];
      }
    }
  };

  workers = std::max(
      1, std::min<long>(workers, plan.shots) > 0
             ? static_cast<int>(std::min<long>(workers, plan.shots))
             : 1);
  if (workers == 1) {
    run_range(0, plan.shots, out);
    return out;
  }
  std::vector<ShotCounts> partials(static_cast<std::size_t>(workers), out);
  std::vector<std::thread> pool;
  const long per_worker = (plan.shots + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long first = w * per_worker;
    const long last = std::min<long>(first + per_worker, plan.shots);
    pool.emplace_back([&run_range, &partials, w, first, last] {
      if (first < last) {
        run_range(first, last, partials[static_cast<std::size_t>(w)]);
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
  for (const ShotCounts& partial : partials) {
    for (std::size_t t = 0; t < out.counts.size(); ++t) {
      for (std::size_t s = 0; s < dim; ++s) {
        out.counts[t][s] += partial.counts[t][s];
      }
    }
  }
  return out;
}

/// Finite-shot feature estimates with per-entry standard errors of the
/// mean. Each Z-correlator is the mean shot parity (-1)^popcount(bits & S).
/// A single trajectory yields exact +-1 parities with zero standard error.
struct FeatureEstimate {
  RMatrix values;  // steps x features
  RMatrix stderrs; // same shape; bias column, if any, has zero error
};

/// Counts-based estimator; value-identical to the trajectory overload
/// (parity sums are integer-exact).
inline FeatureEstimate estimate_features(const ShotCounts& shot_counts,
                                         int order, bool include_bias = true) {
  require(shot_counts.shots >= 1, "estimate_features: no shots");
  const std::vector<std::uint64_t> masks =
      correlator_masks(shot_counts.n_qubits, order);
  const auto n_features =
      static_cast<Eigen::Index>(masks.size()) + (include_bias ? 1 : 0);
  const auto steps = static_cast<Eigen::Index>(shot_counts.counts.size());
  const auto shots = static_cast<double>(shot_counts.shots);

  FeatureEstimate out;
  out.values = RMatrix::Zero(steps, n_features);
  out.stderrs = RMatrix::Zero(steps, n_features);
  for (Eigen::Index t = 0; t < steps; ++t) {
    const auto& histogram = shot_counts.counts[static_cast<std::size_t>(t)];
    for (std::size_t f = 0; f < masks.size(); ++f) {
      std::int64_t parity_sum = 0;
      for (std::size_t s = 0; s < histogram.size(); ++s) {
        const auto count = static_cast<std::int64_t>(histogram[s]);
        parity_sum += parity_sign(s, masks[f]) > 0.0 ? count : -count;
      }
      const double mean = static_cast<double>(parity_sum) / shots;
      const double var =
          shot_counts.shots > 1
              ? std::max(0.0, (shots - shots * mean * mean) / (shots - 1.0))
              : 0.0;
      out.values(t, static_cast<Eigen::Index>(f)) = mean;
      out.stderrs(t, static_cast<Eigen::Index>(f)) = std::sqrt(var / shots);
    }
    if (include_bias) {
      out.values(t, n_features - 1) = 1.0;
    }
  }
  return out;
}

inline FeatureEstimate estimate_features(
    const std::vector<std::vector<std::uint64_t>>& trajectories, int n_qubits,
    int order, bool include_bias = true) {
  require(!trajectories.empty(), "estimate_features: no trajectories");
  const auto shots = static_cast<double>(trajectories.size());
  const std::size_t steps = trajectories.front().size();
  for (const auto& traj : trajectories) {
    require(traj.size() == steps,
            "estimate_features: trajectories differ in length");
  }
  const std::vector<std::uint64_t> masks = correlator_masks(n_qubits, order);
  const auto n_features =
      static_cast<Eigen::Index>(masks.size()) + (include_bias ? 1 : 0);

  FeatureEstimate out;
  out.values = RMatrix::Zero(static_cast<Eigen::Index>(steps), n_features);
  out.stderrs = RMatrix::Zero(static_cast<Eigen::Index>(steps), n_features);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t f = 0; f < masks.size(); ++f) {
      double sum = 0.0;
      for (const auto& traj : trajectories) {
        sum += parity_sign(traj[t], masks[f]);
      }
      const double mean = sum / shots;
      // Parities are +-1, so sum of squares is the shot count.
      const double var =
          trajectories.size() > 1
              ? std::max(0.0, (shots - shots * mean * mean) / (shots - 1.0))
              : 0.0;
      out.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f)) =
          mean;
      out.stderrs(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f)) =
          std::sqrt(var / shots);
    }
    if (include_bias) {
      out.values(static_cast<Eigen::Index>(t), n_features - 1) = 1.0;
    }
  }
  return out;
}

}  // namespace qesn
