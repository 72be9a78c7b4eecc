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

#include <vector>

#include "qesn/linalg.hpp"

namespace qesn {

/// Time-index split, 0-based and half-open:
///   washout  rows [0, t_washout)
///   training rows [t_washout, t_train)
///   test     rows [t_train, length)
struct SplitIndices {
  int t_washout = 0;
  int t_train = 0;

  void validate(int length) const {
    require(0 <= t_washout && t_washout < t_train && t_train < length,
            "SplitIndices: need 0 <= washout < train end < length");
  }
};

/// An input/target pair plus its washout/train/test split. `valid_from`
/// marks the first row with a defined target (delayed-recall targets are
/// undefined for the leading rows).
struct SeriesDataset {
  std::vector<double> inputs;
  std::vector<double> targets;
  int t_washout = 0;
  int t_train = 0;
  int valid_from = 0;

  int length() const { return static_cast<int>(inputs.size()); }

  SplitIndices split() const { return SplitIndices{t_washout, t_train}; }

  void validate() const {
    require(inputs.size() == targets.size(),
            "SeriesDataset: inputs and targets must have equal length");
    split().validate(length());
  }
};

}  // namespace qesn
