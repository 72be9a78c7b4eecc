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

#include "qesn/experiment.hpp"

using namespace qesn;

TEST_CASE("config parsing and defaults", "[experiment]") {
  SECTION("task is required") {
    REQUIRE_THROWS_AS(parse_experiment_config(json::object()), config_error);
  }
  SECTION("unknown values are named in the diagnostic") {
    try {
      parse_experiment_config({{"task", "narmax"}});
      FAIL("expected config_error");
    } catch (const config_error& e) {
      REQUIRE(std::string(e.what()).find("narmax") != std::string::npos);
    }
  }
  SECTION("profile defaults materialize per task") {
    const ExperimentConfig narma =
        parse_experiment_config({{"task", "narma"}});
    CHECK(narma.reservoir.ansatz.n_qubits == 7);
    CHECK(narma.repetitions == 1);
    CHECK(narma.reservoir.include_bias);
    const ExperimentConfig trace =
        parse_experiment_config({{"task", "trace-distance"}});
    CHECK(trace.reservoir.ansatz.n_qubits == 3);
    CHECK(trace.repetitions == 10);
    const ExperimentConfig overfit =
        parse_experiment_config({{"task", "overfitting"}});
    CHECK(overfit.mode == RunMode::Trajectory);
    CHECK(overfit.reservoir.ansatz.n_qubits == 9);
    CHECK_FALSE(overfit.reservoir.include_bias);
  }
  SECTION("field type errors carry the field path") {
    try {
      parse_experiment_config(
          {{"task", "narma"}, {"reservoir", {{"n_qubits", "seven"}}}});
      FAIL("expected config_error");
    } catch (const config_error& e) {
      REQUIRE(std::string(e.what()).find("reservoir.n_qubits") !=
              std::string::npos);
    }
  }
  SECTION("trace-distance rejects trajectory mode") {
    REQUIRE_THROWS_AS(parse_experiment_config(
                          {{"task", "trace-distance"}, {"mode", "trajectory"}}),
                      config_error);
  }
  SECTION("split sanity is enforced") {
    REQUIRE_THROWS_AS(
        parse_experiment_config(
            {{"task", "narma"},
             {"narma", {{"washout", 100}, {"train", 100}, {"length", 200}}}}),
        config_error);
  }
  SECTION("sweep axis is validated") {
    REQUIRE_THROWS_AS(
        parse_experiment_config(
            {{"task", "narma"}, {"sweep", {{"axis", "phi"}, {"values", {1}}}}}),
        config_error);
  }
}

TEST_CASE("config echo round-trips", "[experiment]") {
  const json original = {
      {"task", "memory-capacity"},
      {"seed", 99},
      {"repetitions", 3},
      {"reservoir",
       {{"n_qubits", 5}, {"ansatz", "ccx-chain"}, {"damping_theta", 0.5}}},
      {"memory_capacity", {{"orders", {1, 2, 3}}, {"tau_max", 10}}},
  };
  const ExperimentConfig cfg = parse_experiment_config(original);
  const json echo = experiment_config_to_json(cfg);
  const ExperimentConfig reparsed = parse_experiment_config(echo);
  REQUIRE(experiment_config_to_json(reparsed) == echo);
  CHECK(echo.at("reservoir").at("ansatz") == "ccx-chain");
  CHECK(echo.at("memory_capacity").at("orders") == json({1, 2, 3}));
}

TEST_CASE("experiment results are reproducible", "[experiment]") {
  const ExperimentConfig cfg = parse_experiment_config({
      {"task", "memory-capacity"},
      {"seed", 7},
      {"repetitions", 3},
      {"reservoir", {{"n_qubits", 3}}},
      {"memory_capacity", {{"orders", {1, 2}}}},
  });
  const ExperimentResult a = run_experiment(cfg, 1);
  const ExperimentResult b = run_experiment(cfg, 1);
  REQUIRE(a.payload.dump() == b.payload.dump());
  REQUIRE(csv_to_string(a.csv) == csv_to_string(b.csv));

  SECTION("worker count does not change the output") {
    const ExperimentResult c = run_experiment(cfg, 3);
    REQUIRE(a.payload.dump() == c.payload.dump());
    REQUIRE(csv_to_string(a.csv) == csv_to_string(c.csv));
  }
}

TEST_CASE("aggregate statistics are recomputable from repetitions",
          "[experiment]") {
  const ExperimentConfig cfg = parse_experiment_config({
      {"task", "trace-distance"},
      {"seed", 3},
      {"repetitions", 4},
      {"trace_distance", {{"steps", 10}, {"thetas", {0.8}}}},
  });
  const ExperimentResult result = run_experiment(cfg, 2);
  const auto& reps = result.payload.at("repetitions");
  REQUIRE(reps.size() == 4);
  const std::string key = "final_trace_distance@0.8";
  double mean = 0.0;
  for (const auto& rep : reps) {
    mean += rep.at("metrics").at(key).get<double>();
  }
  mean /= 4.0;
  REQUIRE(result.payload.at("aggregate").at(key).at("mean").get<double>() ==
          Catch::Approx(mean).epsilon(1e-12));
}

TEST_CASE("csv layout is the documented long format", "[experiment]") {
  const ExperimentConfig cfg = parse_experiment_config({
      {"task", "trace-distance"},
      {"seed", 1},
      {"repetitions", 2},
      {"trace_distance", {{"steps", 3}, {"thetas", {0.0, 0.8}}}},
  });
  const ExperimentResult result = run_experiment(cfg, 1);
  const std::string csv = csv_to_string(result.csv);
  REQUIRE(csv.rfind("repetition,sweep_value,step_or_tau,metric_name,value\n",
                    0) == 0);
  // Two thetas, three steps, two reps of per-step rows plus aggregates.
  REQUIRE(csv.find("0,0.8,2,trace_distance,") != std::string::npos);
  REQUIRE(csv.find("mean,0.8,2,trace_distance,") != std::string::npos);
  REQUIRE(csv.find("sd,0,0,trace_distance,") != std::string::npos);
}

TEST_CASE("sweep over theta merges point results", "[experiment]") {
  ExperimentConfig cfg = parse_experiment_config({
      {"task", "memory-capacity"},
      {"seed", 5},
      {"repetitions", 2},
      {"reservoir", {{"n_qubits", 3}}},
      {"memory_capacity", {{"orders", {1}}}},
      {"sweep", {{"axis", "theta"}, {"values", {0.4, 0.8}}}},
  });
  const ExperimentResult result = run_sweep(cfg, 1);
  REQUIRE(result.payload.at("points").size() == 2);
  const std::string csv = csv_to_string(result.csv);
  REQUIRE(csv.find("0,0.4,") != std::string::npos);
  REQUIRE(csv.find("0,0.8,") != std::string::npos);
  // The in-task axis (k) moved into step_or_tau where that slot was free.
  REQUIRE(csv.find("0,0.8,1,mc_k1,") != std::string::npos);

  SECTION("running a sweep without a sweep axis fails") {
    cfg.sweep.reset();
    REQUIRE_THROWS_AS(run_sweep(cfg, 1), config_error);
  }
}

TEST_CASE("shortest round-trip float formatting", "[experiment]") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.30000000000000004) == "0.30000000000000004");
  CHECK(format_double(-2.5e-8) == "-2.5e-08");
}

TEST_CASE("written files carry payload, csv, and separate metadata",
          "[experiment]") {
  const ExperimentConfig cfg = parse_experiment_config({
      {"task", "trace-distance"},
      {"seed", 2},
      {"repetitions", 1},
      {"trace_distance", {{"steps", 2}, {"thetas", {0.8}}}},
  });
  const ExperimentResult result = run_experiment(cfg, 1);
  const auto dir =
      std::filesystem::temp_directory_path() / "qesn_test_write";
  std::filesystem::remove_all(dir);
  const WrittenFiles files = write_result(result, dir, "probe");
  REQUIRE(std::filesystem::exists(files.payload_json));
  REQUIRE(std::filesystem::exists(files.csv));
  REQUIRE(std::filesystem::exists(files.meta_json));
  std::ifstream in(files.meta_json);
  json meta;
  in >> meta;
  REQUIRE(meta.contains("wall_clock_seconds"));
  // The payload itself must not contain wall-clock data.
  REQUIRE_FALSE(result.payload.contains("wall_clock_seconds"));
  std::filesystem::remove_all(dir);
}
