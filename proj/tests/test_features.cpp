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

#include "oracle.hpp"
#include "qesn/features.hpp"

using namespace qesn;

TEST_CASE("correlator mask ordering", "[features]") {
  // n = 3, k = 2: singles {0}, {1}, {2} then pairs {0,1}, {0,2}, {1,2}.
  const auto masks = correlator_masks(3, 2);
  REQUIRE(masks.size() == 6);
  CHECK(masks[0] == 0b100);
  CHECK(masks[1] == 0b010);
  CHECK(masks[2] == 0b001);
  CHECK(masks[3] == 0b110);
  CHECK(masks[4] == 0b101);
  CHECK(masks[5] == 0b011);
  REQUIRE(feature_count(3, 2, false) == 6);
  REQUIRE(feature_count(3, 2, true) == 7);
  REQUIRE(feature_count(7, 2, false) == 28);
  REQUIRE(feature_count(7, 3, false) == 63);
  REQUIRE_THROWS_AS(correlator_masks(3, 4), std::invalid_argument);
}

TEST_CASE("correlator values", "[features]") {
  SECTION("the all-zero state gives +1 for every correlator") {
    const RVector f = features(PopulationVector::zero_state(3), 3, false);
    REQUIRE(f.size() == 7);
    REQUIRE((f.array() - 1.0).abs().maxCoeff() == 0.0);
  }
  SECTION("the uniform mixture gives 0 for every correlator") {
    const RVector f = features(PopulationVector::uniform(3), 3, false);
    REQUIRE(f.cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("Bell-diagonal populations") {
    PopulationVector p;
    p.n_qubits = 2;
    p.p.resize(4);
    p.p << 0.5, 0.0, 0.0, 0.5;
    const RVector f = features(p, 2, false);
    CHECK(f(0) == Catch::Approx(0.0).margin(1e-15));  // <Z_0>
    CHECK(f(1) == Catch::Approx(0.0).margin(1e-15));  // <Z_1>
    CHECK(f(2) == Catch::Approx(1.0));                // <Z_0 Z_1>
  }
  SECTION("bias entry trails the correlators") {
    const RVector f = features(PopulationVector::uniform(2), 2, true);
    REQUIRE(f.size() == 4);
    REQUIRE(f(3) == 1.0);
  }
}

TEST_CASE("correlators on product states factorize", "[features]") {
  // diag(p) = diag(q0) (x) diag(q1) (x) diag(q2): <Z_S> is the product of
  // the single-qubit expectations over S.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    double single[3];
    PopulationVector p;
    p.n_qubits = 3;
    p.p.resize(8);
    double q[3];
    for (int i = 0; i < 3; ++i) {
      q[i] = dist(rng);
      single[i] = q[i] - (1.0 - q[i]);  // <Z> = p0 - p1
    }
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
      double prob = 1.0;
      for (int i = 0; i < 3; ++i) {
        prob *= qubit_bit(idx, i, 3) == 0 ? q[i] : 1.0 - q[i];
      }
      p.p(static_cast<Eigen::Index>(idx)) = prob;
    }
    const RVector f = features(p, 3, false);
    CHECK(f(0) == Catch::Approx(single[0]));
    CHECK(f(3) == Catch::Approx(single[0] * single[1]));   // {0,1}
    CHECK(f(6) == Catch::Approx(single[0] * single[1] * single[2]));
  }
}

TEST_CASE("correlators stay within [-1, 1]", "[features]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const PopulationVector p = oracle::random_populations(4, rng);
    const RVector f = features(p, 4, false);
    REQUIRE(f.maxCoeff() <= 1.0 + 1e-12);
    REQUIRE(f.minCoeff() >= -1.0 - 1e-12);
  }
}
