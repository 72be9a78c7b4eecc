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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qesn/metrics.hpp"

using namespace qesn;

TEST_CASE("nmse", "[metrics]") {
  SECTION("perfect prediction scores zero") {
    RVector y(3);
    y << 1.0, 2.0, 3.0;
    REQUIRE(nmse(y, y) == 0.0);
  }
  SECTION("predicting the target mean scores one") {
    RVector targets(4);
    targets << 1.0, 2.0, 3.0, 4.0;
    const RVector constant = RVector::Constant(4, targets.mean());
    REQUIRE(nmse(constant, targets) == Catch::Approx(1.0));
  }
  SECTION("hand-computed example") {
    RVector targets(3), predictions(3);
    targets << 0.0, 1.0, 2.0;
    predictions << 0.0, 1.0, 1.0;
    REQUIRE(nmse(predictions, targets) == Catch::Approx(0.5));
  }
  SECTION("zero target variance is undefined") {
    const RVector constant = RVector::Constant(5, 2.0);
    REQUIRE_THROWS_AS(nmse(constant, constant), undefined_metric_error);
  }
  SECTION("length checks") {
    RVector a(2), b(3);
    a.setZero();
    b.setZero();
    REQUIRE_THROWS_AS(nmse(a, b), std::invalid_argument);
  }
}

namespace {

/// Feature matrix whose column tau + 1 holds the input delayed by tau, so a
/// linear readout can recall any delay up to tau_max exactly.
struct DelayLine {
  std::vector<double> inputs;
  RMatrix h;
};

DelayLine make_delay_line(int length, int tau_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  DelayLine out;
  out.inputs.resize(static_cast<std::size_t>(length));
  for (double& v : out.inputs) {
    v = dist(rng);
  }
  out.h = RMatrix::Zero(length, tau_max + 2);
  for (int t = 0; t < length; ++t) {
    out.h(t, 0) = 1.0;  // bias-like column
    for (int tau = 0; tau <= tau_max; ++tau) {
      out.h(t, tau + 1) = t >= tau ? out.inputs[static_cast<std::size_t>(t - tau)]
                                   : 0.0;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("memory capacity at a single delay", "[metrics]") {
  const DelayLine line = make_delay_line(200, 6, 20);
  const SplitIndices split{20, 150};

  SECTION("a reservoir that stores the delayed input recalls it perfectly") {
    for (int tau : {0, 3, 6}) {
      const double mc =
          memory_capacity_tau(line.h, line.inputs, tau, split, 1e-10);
      REQUIRE(mc > 0.999999);
      REQUIRE(mc <= 1.0);
    }
  }

  SECTION("features independent of the target recall nothing") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    RMatrix noise(250, 3);
    std::vector<double> inputs(250);
    for (double& v : inputs) {
      v = dist(rng);
    }
    for (int t = 0; t < 250; ++t) {
      noise(t, 0) = 1.0;
      noise(t, 1) = dist(rng);
      noise(t, 2) = dist(rng);
    }
    const double mc =
        memory_capacity_tau(noise, inputs, 2, SplitIndices{10, 50}, 1e-8);
    REQUIRE(mc <= 0.05);
  }

  SECTION("zero-variance prediction sets the flag and returns zero") {
    RMatrix constant = RMatrix::Ones(100, 1);
    std::vector<double> inputs(100, 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double& v : inputs) {
      v = dist(rng);
    }
    bool flag = false;
    const double mc = memory_capacity_tau(constant, inputs, 0,
                                          SplitIndices{10, 60}, 1e-8,
                                          McFormula::SquaredPearson, &flag);
    REQUIRE(mc == 0.0);
    REQUIRE(flag);
  }

  SECTION("tau beyond the training span is rejected") {
    REQUIRE_THROWS_AS(memory_capacity_tau(line.h, line.inputs, 140, split, 1e-8),
                      std::invalid_argument);
  }
}

TEST_CASE("squared correlation is invariant under affine rescaling", "[metrics]") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> dist(0.0, 1.0);
  RVector a(100), b(100);
  for (int i = 0; i < 100; ++i) {
    a(i) = dist(rng);
    b(i) = 0.6 * a(i) + 0.2 * dist(rng);
  }
  const double base = correlation_score(a, b, McFormula::SquaredPearson, nullptr);
  const RVector scaled = (2.5 * a.array() - 7.0).matrix();
  const double rescaled =
      correlation_score(scaled, b, McFormula::SquaredPearson, nullptr);
  REQUIRE(base == Catch::Approx(rescaled).epsilon(1e-12));
  REQUIRE(base >= 0.0);
  REQUIRE(base <= 1.0);
}

TEST_CASE("overall memory capacity follows the literal average", "[metrics]") {
  const int tau_max = 5;
  const DelayLine line = make_delay_line(200, tau_max, 22);
  const SplitIndices split{20, 150};
  const double mc =
      memory_capacity(line.h, line.inputs, tau_max, split, 1e-10);
  // Perfect recall at every delay: a (tau_max + 1)-term sum of ones over
  // tau_max.
  REQUIRE(mc == Catch::Approx(static_cast<double>(tau_max + 1) / tau_max)
                    .epsilon(1e-6));
  REQUIRE_THROWS_AS(memory_capacity(line.h, line.inputs, 0, split, 1e-8),
                    std::invalid_argument);
}

TEST_CASE("printed-ratio formula stays available for comparison", "[metrics]") {
  RVector a(4), b(4);
  a << 0.0, 1.0, 2.0, 3.0;
  b << 0.0, 2.0, 4.0, 6.0;
  // Perfectly correlated: squared Pearson gives 1, the printed ratio gives
  // Cov/(Var*Var) which is not scale-free.
  REQUIRE(correlation_score(a, b, McFormula::SquaredPearson, nullptr) ==
          Catch::Approx(1.0));
  const double cov = 2.5, var_a = 1.25, var_b = 5.0;
  REQUIRE(correlation_score(a, b, McFormula::PrintedRatio, nullptr) ==
          Catch::Approx(cov / (var_a * var_b)));
}
