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
#include "qesn/reservoir.hpp"
#include "qesn/stochastic.hpp"

using namespace qesn;

TEST_CASE("to_stochastic basics", "[stochastic]") {
  SECTION("identity maps to identity") {
    const StochasticTransition m = to_stochastic(CMatrix::Identity(4, 4));
    REQUIRE((m.m - RMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(m.n_qubits == 2);
  }
  SECTION("single-qubit rotation reproduces the closed-form update") {
    const double u = 0.9;
    const StochasticTransition m = to_stochastic(CMatrix(rx_gate(u)));
    const double c2 = std::cos(u / 2) * std::cos(u / 2);
    const double s2 = std::sin(u / 2) * std::sin(u / 2);
    CHECK(m.m(0, 0) == Catch::Approx(c2));
    CHECK(m.m(0, 1) == Catch::Approx(s2));
    CHECK(m.m(1, 0) == Catch::Approx(s2));
    CHECK(m.m(1, 1) == Catch::Approx(c2));
    // rho00 update: rho00 cos^2 + (1 - rho00) sin^2.
    PopulationVector p;
    p.n_qubits = 1;
    p.p.resize(2);
    p.p << 0.8, 0.2;
    const PopulationVector out = m.apply(p);
    CHECK(out.p(0) == Catch::Approx(0.8 * c2 + 0.2 * s2));
  }
  SECTION("non-unitary input is rejected") {
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 0) = 0.5;
    REQUIRE_THROWS_AS(to_stochastic(bad), std::invalid_argument);
  }
  SECTION("non-power-of-two dimension is rejected") {
    REQUIRE_THROWS_AS(to_stochastic(CMatrix::Identity(3, 3)),
                      std::invalid_argument);
  }
}

TEST_CASE("column sums are one for ansatz unitaries", "[stochastic]") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 12; ++trial) {
    AnsatzConfig cfg;
    cfg.family = trial % 2 == 0 ? AnsatzFamily::CxChain : AnsatzFamily::CcxChain;
    cfg.n_qubits = 3 + static_cast<int>(rng() % 2);
    cfg.topology = trial % 3 == 0 ? Topology::OpenChain : Topology::Ring;
    const double x = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const StochasticTransition m =
        to_stochastic(build_encoding_unitary(cfg, x));
    const RVector sums = m.m.colwise().sum();
    REQUIRE((sums.array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("transition matrix agrees with the density-matrix evolution",
          "[stochastic]") {
  // M p must equal dephase(U diag(p) U^dag) for the CX ansatz on 3 qubits.
  std::mt19937_64 rng(44);
  AnsatzConfig cfg;
  cfg.n_qubits = 3;
  for (int trial = 0; trial < 10; ++trial) {
    const double x = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const PopulationVector p = oracle::random_populations(3, rng);
    const CMatrix u = build_encoding_unitary(cfg, x);
    const PopulationVector fast = to_stochastic(u).apply(p);
    const PopulationVector slow = dephase(apply_unitary(p.to_density(), u));
    REQUIRE((fast.p - slow.p).cwiseAbs().maxCoeff() < 1e-13);
  }
}
