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
#include <vector>

#include "qesn/readout.hpp"
#include "qesn/series.hpp"

namespace qesn {

/// Normalized mean square error over a span:
///   sum (target - prediction)^2 / sum (target - mean(target))^2.
inline double nmse(const RVector& predictions, const RVector& targets) {
  require(predictions.size() == targets.size(), "nmse: length mismatch");
  require(predictions.size() >= 2, "nmse: need at least two points");
  const double mu = targets.mean();
  const double denom = (targets.array() - mu).square().sum();
  if (denom <= 0.0) {
    throw undefined_metric_error("nmse: target variance is zero");
  }
  return (targets - predictions).squaredNorm() / denom;
}

/// Delayed-recall scoring formula. SquaredPearson is the standard
/// echo-state definition Cov^2/(Var Var); PrintedRatio is the
/// non-normalized Cov/(Var Var) variant kept for comparison.
enum class McFormula { SquaredPearson, PrintedRatio };

inline double correlation_score(const RVector& a, const RVector& b,
                                McFormula formula, bool* zero_variance) {
  require(a.size() == b.size(), "correlation_score: length mismatch");
  const Eigen::Index n = a.size();
  const double ma = a.mean();
  const double mb = b.mean();
  const double va = (a.array() - ma).square().sum() / static_cast<double>(n);
  const double vb = (b.array() - mb).square().sum() / static_cast<double>(n);
  if (va <= 0.0 || vb <= 0.0) {
    if (zero_variance != nullptr) {
      *zero_variance = true;
    }
    return 0.0;
  }
  const double cov =
      ((a.array() - ma) * (b.array() - mb)).sum() / static_cast<double>(n);
  if (formula == McFormula::PrintedRatio) {
    return cov / (va * vb);
  }
  return std::clamp(cov * cov / (va * vb), 0.0, 1.0);
}

/// Memory capacity at a single delay: trains a readout to reproduce the
/// input delayed by tau, then scores the test-span predictions against the
/// true delayed input. Training rows with t < tau (undefined target) are
/// dropped rather than zero-padded. Returns 0 and sets the flag when either
/// test series has no variance.
inline double memory_capacity_tau(const RMatrix& h,
                                  const std::vector<double>& inputs, int tau,
                                  const SplitIndices& split, double lambda,
                                  McFormula formula = McFormula::SquaredPearson,
                                  bool* zero_variance = nullptr) {
  const int length = static_cast<int>(inputs.size());
  require(h.rows() == length, "memory_capacity_tau: feature rows mismatch");
  split.validate(length);
  require(tau >= 0, "memory_capacity_tau: tau must be non-negative");
  require(tau < split.t_train - split.t_washout,
          "memory_capacity_tau: tau exceeds the training span");

  const int train_begin = std::max(split.t_washout, tau);
  const int train_rows = split.t_train - train_begin;
  const int test_begin = std::max(split.t_train, tau);
  const int test_rows = length - test_begin;
  require(train_rows > 0 && test_rows > 0,
          "memory_capacity_tau: empty train or test span after delay");

  RMatrix h_train(train_rows, h.cols());
  RVector y_train(train_rows);
  for (int t = train_begin; t < split.t_train; ++t) {
    h_train.row(t - train_begin) = h.row(t);
    y_train(t - train_begin) = inputs[static_cast<std::size_t>(t - tau)];
  }
  RMatrix h_test(test_rows, h.cols());
  RVector y_test(test_rows);
  for (int t = test_begin; t < length; ++t) {
    h_test.row(t - test_begin) = h.row(t);
    y_test(t - test_begin) = inputs[static_cast<std::size_t>(t - tau)];
  }

  const ReadoutWeights w = train_readout(h_train, y_train, lambda);
  const RVector predictions = predict(h_test, w);
  return correlation_score(predictions, y_test, formula, zero_variance);
}

/// Overall memory capacity: the delayed-recall scores for tau = 0..tau_max
/// summed and divided by tau_max (a (tau_max+1)-term sum over tau_max, kept
/// as such so that perfect recall at every delay scores (tau_max+1)/tau_max).
inline double memory_capacity(const RMatrix& h,
                              const std::vector<double>& inputs, int tau_max,
                              const SplitIndices& split, double lambda,
                              McFormula formula = McFormula::SquaredPearson) {
  require(tau_max >= 1, "memory_capacity: tau_max must be at least 1");
  double sum = 0.0;
  for (int tau = 0; tau <= tau_max; ++tau) {
    sum += memory_capacity_tau(h, inputs, tau, split, lambda, formula);
  }
  return sum / static_cast<double>(tau_max);
}

}  // namespace qesn
