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
#include <atomic>
#include <charconv>
#include <chrono>
#include <tuple>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qesn/metrics.hpp"
#include "qesn/reservoir.hpp"
#include "qesn/rng.hpp"
#include "qesn/tasks.hpp"
#include "qesn/trajectory.hpp"

namespace qesn {

using nlohmann::json;

/// Raised on malformed or inconsistent experiment configs; the CLI maps it
/// to exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TaskKind { Narma, MackeyGlass, MemoryCapacity, TraceDistance, Overfitting };
enum class RunMode { Ensemble, Trajectory };

// ---------------------------------------------------------------------------
// Per-task parameters. Field defaults are the desk-scale profiles echoed
// into every result, so output files are self-describing.
// ---------------------------------------------------------------------------

struct NarmaExperiment {
  std::vector<int> p_values{2};
  int period = 200;
  int length = 200;
  int washout = 20;
  int train = 130;  // explicit indices: test span = length - washout - train
  bool standard_variant = false;
};

struct MackeyGlassExperiment {
  MackeyGlassParams params;
  int washout = 20;
  int train = 1300;
  int test = 500;
};

struct MemoryCapacityExperiment {
  int tau_max = 20;
  int length = 200;
  int washout = 20;
  int train = 130;
  std::vector<int> orders;  // defaults to {reservoir.observable_order}
};

struct TraceDistanceExperiment {
  int steps = 40;
  std::vector<double> thetas{0.0, 0.8};
};

struct OverfittingExperiment {
  std::vector<int> n_obs{60, 100, 125, 130, 135, 200, 300};
  int tau_max = 20;
  int length = 200;
  int washout = 20;
  int train = 130;
};

struct SweepSpec {
  std::string axis;  // one of: theta, k, n_obs, p, n
  std::vector<double> values;
};

struct OutputOptions {
  std::string name = "result";
  bool dump_features = false;
  bool dump_predictions = false;
};

struct ExperimentConfig {
  TaskKind task = TaskKind::Narma;
  RunMode mode = RunMode::Ensemble;
  ReservoirConfig reservoir;
  int repetitions = 1;
  std::uint64_t seed = 0;
  double ridge_lambda = 1e-8;
  std::vector<double> lambda_grid;  // non-empty: validated ridge selection
  McFormula mc_formula = McFormula::SquaredPearson;
  ShotPlan shots;
  NarmaExperiment narma;
  MackeyGlassExperiment mackey_glass;
  MemoryCapacityExperiment memory_capacity;
  TraceDistanceExperiment trace_distance;
  OverfittingExperiment overfitting;
  std::optional<SweepSpec> sweep;
  OutputOptions output;
};

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// One line of the long-format CSV:
///   repetition, sweep_value, step_or_tau, metric_name, value
struct CsvRow {
  std::string repetition;
  std::string sweep_value;
  std::string step_or_tau;
  std::string metric;
  double value = 0.0;
};

struct RepOutput {
  std::map<std::string, double> metrics;
  std::vector<CsvRow> rows;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

struct ExperimentResult {
  json payload;
  std::vector<CsvRow> csv;
  std::vector<std::pair<std::string, std::string>> extra_files;
  double wall_seconds = 0.0;  // kept out of the payload for reproducibility
};

// ---------------------------------------------------------------------------
// JSON parsing with field-path diagnostics
// ---------------------------------------------------------------------------

namespace detail {

inline void check_object(const json& j, const std::string& path) {
  if (!j.is_object()) {
    throw config_error(path + ": expected an object");
  }
}

template <typename T>
T get_field(const json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(path + "." + key + ": wrong type");
  }
}

inline std::vector<double> get_number_array(const json& j, const char* key,
                                            std::vector<double> fallback,
                                            const std::string& path) {
  if (!j.contains(key)) {
    return fallback;
  }
  const json& arr = j.at(key);
  std::vector<double> out;
  if (arr.is_number()) {
    out.push_back(arr.get<double>());
    return out;
  }
  if (!arr.is_array()) {
    throw config_error(path + "." + key + ": expected a number or array");
  }
  for (const json& v : arr) {
    if (!v.is_number()) {
      throw config_error(path + "." + key + ": expected numeric entries");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

inline std::vector<int> to_int_vector(const std::vector<double>& v,
                                      const std::string& what) {
  std::vector<int> out;
  out.reserve(v.size());
  for (double x : v) {
    if (std::abs(x - std::round(x)) > 1e-9) {
      throw config_error(what + ": expected integer values");
    }
    out.push_back(static_cast<int>(std::llround(x)));
  }
  return out;
}

}  // namespace detail

inline const char* task_name(TaskKind task) {
  switch (task) {
    case TaskKind::Narma: return "narma";
    case TaskKind::MackeyGlass: return "mackey-glass";
    case TaskKind::MemoryCapacity: return "memory-capacity";
    case TaskKind::TraceDistance: return "trace-distance";
    case TaskKind::Overfitting: return "overfitting";
  }
  return "?";
}

inline TaskKind parse_task_name(const std::string& name) {
  if (name == "narma") return TaskKind::Narma;
  if (name == "mackey-glass") return TaskKind::MackeyGlass;
  if (name == "memory-capacity") return TaskKind::MemoryCapacity;
  if (name == "trace-distance") return TaskKind::TraceDistance;
  if (name == "overfitting") return TaskKind::Overfitting;
  throw config_error("task: unknown value '" + name + "'");
}

/// Task-profile defaults. The memory-capacity and overfitting profiles map
/// their uniform [0, 1] inputs onto rotation angles in [0, pi/2], where the
/// measurement statistics are injective in the input; the wider default
/// band a*x + b in [pi/2, 3pi/2] folds x and 1-x onto identical statistics
/// (|R_X(theta)|^2 = |R_X(2pi-theta)|^2 entrywise), which would erase
/// delayed-recall targets. The Mackey-Glass profile encodes the raw series
/// value as the angle for the same reason.
struct TaskProfile {
  int n_qubits;
  double input_scale;
  double input_offset;
  int observable_order;
  bool include_bias;
  int repetitions;
};

inline TaskProfile task_profile(TaskKind task) {
  switch (task) {
    case TaskKind::Narma:
      // Gentle rotations: the input band maps to angles in [0.05, 0.25],
      // where fading memory is set by the damping rather than by the
      // mixing of the encoding itself.
      return {7, 1.0, 0.15, 2, true, 1};
    case TaskKind::MackeyGlass:
      return {7, 1.0, 0.0, 2, true, 1};
    case TaskKind::MemoryCapacity:
      return {7, M_PI / 2.0, 0.0, 2, true, 12};
    case TaskKind::TraceDistance:
      return {3, M_PI, M_PI / 2.0, 1, true, 10};
    case TaskKind::Overfitting:
      // Gentle rotations keep delayed-recall signals above the shot noise;
      // the collapse at n_obs ~ training length needs that noise, so this
      // task defaults to trajectory mode.
      return {9, 0.3, 0.0, 5, false, 4};
  }
  return {7, M_PI, M_PI / 2.0, 2, true, 1};
}

inline ExperimentConfig parse_experiment_config(const json& root) {
  detail::check_object(root, "config");
  if (!root.contains("task")) {
    throw config_error("task: missing required field");
  }
  ExperimentConfig cfg;
  cfg.task = parse_task_name(
      detail::get_field<std::string>(root, "task", "", "config"));
  const TaskProfile profile = task_profile(cfg.task);

  const std::string mode = detail::get_field<std::string>(
      root, "mode",
      cfg.task == TaskKind::Overfitting ? "trajectory" : "ensemble", "config");
  if (mode == "ensemble") {
    cfg.mode = RunMode::Ensemble;
  } else if (mode == "trajectory") {
    cfg.mode = RunMode::Trajectory;
  } else {
    throw config_error("mode: unknown value '" + mode + "'");
  }
  if (cfg.mode == RunMode::Trajectory && cfg.task == TaskKind::TraceDistance) {
    throw config_error("mode: trace-distance requires ensemble mode");
  }

  cfg.seed = detail::get_field<std::uint64_t>(root, "seed", 0, "config");
  cfg.repetitions =
      detail::get_field<int>(root, "repetitions", profile.repetitions, "config");
  if (cfg.repetitions < 1) {
    throw config_error("repetitions: must be at least 1");
  }

  const json reservoir = root.value("reservoir", json::object());
  detail::check_object(reservoir, "reservoir");
  AnsatzConfig& ansatz = cfg.reservoir.ansatz;
  ansatz.n_qubits =
      detail::get_field<int>(reservoir, "n_qubits", profile.n_qubits, "reservoir");
  const std::string family = detail::get_field<std::string>(
      reservoir, "ansatz", "cx-chain", "reservoir");
  if (family == "cx-chain") {
    ansatz.family = AnsatzFamily::CxChain;
  } else if (family == "ccx-chain") {
    ansatz.family = AnsatzFamily::CcxChain;
  } else {
    throw config_error("reservoir.ansatz: unknown value '" + family + "'");
  }
  const std::string topology = detail::get_field<std::string>(
      reservoir, "topology", "ring", "reservoir");
  if (topology == "ring") {
    ansatz.topology = Topology::Ring;
  } else if (topology == "open-chain") {
    ansatz.topology = Topology::OpenChain;
  } else {
    throw config_error("reservoir.topology: unknown value '" + topology + "'");
  }
  ansatz.input_scale = detail::get_field<double>(reservoir, "input_scale",
                                                 profile.input_scale, "reservoir");
  ansatz.input_offset = detail::get_field<double>(
      reservoir, "input_offset", profile.input_offset, "reservoir");
  cfg.reservoir.damping_theta =
      detail::get_field<double>(reservoir, "damping_theta", 0.8, "reservoir");
  cfg.reservoir.observable_order = detail::get_field<int>(
      reservoir, "observable_order", profile.observable_order, "reservoir");
  cfg.reservoir.include_bias = detail::get_field<bool>(
      reservoir, "include_bias", profile.include_bias, "reservoir");
  try {
    cfg.reservoir.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("reservoir: ") + e.what());
  }

  const json readout = root.value("readout", json::object());
  detail::check_object(readout, "readout");
  cfg.ridge_lambda =
      detail::get_field<double>(readout, "lambda", 1e-8, "readout");
  if (cfg.ridge_lambda < 0.0) {
    throw config_error("readout.lambda: must be non-negative");
  }
  // Benchmark fits select the ridge strength on a forward holdout of the
  // training span when a grid is given; an explicit empty array disables
  // the selection. NARMA defaults to a wide grid so that per-p tasks of
  // very different learnability each get a sensible shrinkage.
  std::vector<double> default_grid;
  if (cfg.task == TaskKind::Narma) {
    default_grid = {1e-8, 1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4};
  }
  cfg.lambda_grid = detail::get_number_array(readout, "lambda_grid",
                                             default_grid, "readout");
  for (double v : cfg.lambda_grid) {
    if (v < 0.0) {
      throw config_error("readout.lambda_grid: entries must be non-negative");
    }
  }
  const std::string formula = detail::get_field<std::string>(
      readout, "mc_formula", "squared-pearson", "readout");
  if (formula == "squared-pearson") {
    cfg.mc_formula = McFormula::SquaredPearson;
  } else if (formula == "printed-ratio") {
    cfg.mc_formula = McFormula::PrintedRatio;
  } else {
    throw config_error("readout.mc_formula: unknown value '" + formula + "'");
  }

  const json shots = root.value("shots", json::object());
  detail::check_object(shots, "shots");
  cfg.shots.shots = detail::get_field<long>(shots, "shots", 50000, "shots");
  cfg.shots.batches = detail::get_field<int>(shots, "batches", 1, "shots");
  try {
    cfg.shots.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("shots: ") + e.what());
  }

  const json narma = root.value("narma", json::object());
  detail::check_object(narma, "narma");
  cfg.narma.p_values = detail::to_int_vector(
      detail::get_number_array(narma, "p", {2.0}, "narma"), "narma.p");
  cfg.narma.period = detail::get_field<int>(narma, "period", 200, "narma");
  cfg.narma.length = detail::get_field<int>(narma, "length", 200, "narma");
  cfg.narma.washout = detail::get_field<int>(narma, "washout", 20, "narma");
  cfg.narma.train = detail::get_field<int>(narma, "train", 130, "narma");
  cfg.narma.standard_variant =
      detail::get_field<bool>(narma, "standard_variant", false, "narma");
  if (cfg.narma.p_values.empty()) {
    throw config_error("narma.p: must be non-empty");
  }
  for (int p : cfg.narma.p_values) {
    if (p < 1) {
      throw config_error("narma.p: entries must be at least 1");
    }
  }
  if (cfg.narma.washout + cfg.narma.train >= cfg.narma.length) {
    throw config_error("narma: washout + train must leave a test span");
  }

  const json mg = root.value("mackey_glass", json::object());
  detail::check_object(mg, "mackey_glass");
  cfg.mackey_glass.params.beta =
      detail::get_field<double>(mg, "beta", 0.2, "mackey_glass");
  cfg.mackey_glass.params.gamma =
      detail::get_field<double>(mg, "gamma", 0.1, "mackey_glass");
  cfg.mackey_glass.params.tau =
      detail::get_field<double>(mg, "tau", 17.0, "mackey_glass");
  cfg.mackey_glass.params.n =
      detail::get_field<double>(mg, "n", 10.0, "mackey_glass");
  cfg.mackey_glass.params.dt =
      detail::get_field<double>(mg, "dt", 0.01, "mackey_glass");
  cfg.mackey_glass.params.sample_period =
      detail::get_field<double>(mg, "sample_period", 1.0, "mackey_glass");
  cfg.mackey_glass.params.length =
      detail::get_field<int>(mg, "length", 2000, "mackey_glass");
  cfg.mackey_glass.params.history =
      detail::get_field<double>(mg, "history", 1.2, "mackey_glass");
  cfg.mackey_glass.washout =
      detail::get_field<int>(mg, "washout", 20, "mackey_glass");
  cfg.mackey_glass.train =
      detail::get_field<int>(mg, "train", 1300, "mackey_glass");
  cfg.mackey_glass.test =
      detail::get_field<int>(mg, "test", 500, "mackey_glass");
  try {
    cfg.mackey_glass.params.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("mackey_glass: ") + e.what());
  }
  if (cfg.mackey_glass.washout + cfg.mackey_glass.train + cfg.mackey_glass.test >
      cfg.mackey_glass.params.length - 1) {
    throw config_error("mackey_glass: washout + train + test exceeds the series");
  }

  const json mc = root.value("memory_capacity", json::object());
  detail::check_object(mc, "memory_capacity");
  cfg.memory_capacity.tau_max =
      detail::get_field<int>(mc, "tau_max", 20, "memory_capacity");
  cfg.memory_capacity.length =
      detail::get_field<int>(mc, "length", 200, "memory_capacity");
  cfg.memory_capacity.washout =
      detail::get_field<int>(mc, "washout", 20, "memory_capacity");
  cfg.memory_capacity.train =
      detail::get_field<int>(mc, "train", 130, "memory_capacity");
  cfg.memory_capacity.orders = detail::to_int_vector(
      detail::get_number_array(
          mc, "orders",
          {static_cast<double>(cfg.reservoir.observable_order)},
          "memory_capacity"),
      "memory_capacity.orders");
  if (cfg.memory_capacity.orders.empty()) {
    throw config_error("memory_capacity.orders: must be non-empty");
  }
  for (int k : cfg.memory_capacity.orders) {
    if (k < 1 || k > ansatz.n_qubits) {
      throw config_error("memory_capacity.orders: entries outside [1, n_qubits]");
    }
    if (k > cfg.reservoir.observable_order) {
      cfg.reservoir.observable_order = k;  // widen extraction to cover orders
    }
  }
  if (cfg.memory_capacity.tau_max < 1) {
    throw config_error("memory_capacity.tau_max: must be at least 1");
  }
  if (cfg.memory_capacity.tau_max >= cfg.memory_capacity.train) {
    throw config_error("memory_capacity.tau_max: must be below the training length");
  }
  if (cfg.memory_capacity.washout + cfg.memory_capacity.train >=
      cfg.memory_capacity.length) {
    throw config_error("memory_capacity: washout + train must leave a test span");
  }

  const json trace = root.value("trace_distance", json::object());
  detail::check_object(trace, "trace_distance");
  cfg.trace_distance.steps =
      detail::get_field<int>(trace, "steps", 40, "trace_distance");
  cfg.trace_distance.thetas = detail::get_number_array(
      trace, "thetas", {0.0, 0.8}, "trace_distance");
  if (cfg.trace_distance.steps < 1) {
    throw config_error("trace_distance.steps: must be at least 1");
  }
  for (double theta : cfg.trace_distance.thetas) {
    if (theta < 0.0 || theta > M_PI) {
      throw config_error("trace_distance.thetas: entries outside [0, pi]");
    }
  }

  const json overfit = root.value("overfitting", json::object());
  detail::check_object(overfit, "overfitting");
  {
    std::vector<double> defaults;
    for (int v : OverfittingExperiment{}.n_obs) {
      defaults.push_back(v);
    }
    cfg.overfitting.n_obs = detail::to_int_vector(
        detail::get_number_array(overfit, "n_obs", defaults, "overfitting"),
        "overfitting.n_obs");
  }
  cfg.overfitting.tau_max =
      detail::get_field<int>(overfit, "tau_max", 20, "overfitting");
  cfg.overfitting.length =
      detail::get_field<int>(overfit, "length", 200, "overfitting");
  cfg.overfitting.washout =
      detail::get_field<int>(overfit, "washout", 20, "overfitting");
  cfg.overfitting.train =
      detail::get_field<int>(overfit, "train", 130, "overfitting");
  if (cfg.task == TaskKind::Overfitting) {
    if (cfg.overfitting.n_obs.empty()) {
      throw config_error("overfitting.n_obs: must be non-empty");
    }
    const int available = feature_count(
        ansatz.n_qubits, cfg.reservoir.observable_order, false);
    for (int n_obs : cfg.overfitting.n_obs) {
      if (n_obs < 1 || n_obs > available) {
        throw config_error(
            "overfitting.n_obs: entry exceeds the available observable count (" +
            std::to_string(available) + ")");
      }
    }
    if (cfg.overfitting.washout + cfg.overfitting.train >=
        cfg.overfitting.length) {
      throw config_error("overfitting: washout + train must leave a test span");
    }
  }

  if (root.contains("sweep")) {
    const json& sweep = root.at("sweep");
    detail::check_object(sweep, "sweep");
    SweepSpec spec;
    spec.axis = detail::get_field<std::string>(sweep, "axis", "", "sweep");
    if (spec.axis != "theta" && spec.axis != "k" && spec.axis != "n_obs" &&
        spec.axis != "p" && spec.axis != "n") {
      throw config_error("sweep.axis: must be one of theta, k, n_obs, p, n");
    }
    spec.values = detail::get_number_array(sweep, "values", {}, "sweep");
    if (spec.values.empty()) {
      throw config_error("sweep.values: must be non-empty");
    }
    cfg.sweep = spec;
  }

  const json output = root.value("output", json::object());
  detail::check_object(output, "output");
  cfg.output.name =
      detail::get_field<std::string>(output, "name", "result", "output");
  cfg.output.dump_features =
      detail::get_field<bool>(output, "dump_features", false, "output");
  cfg.output.dump_predictions =
      detail::get_field<bool>(output, "dump_predictions", false, "output");
  return cfg;
}

/// Full config echo with every default materialized; re-parses to an
/// equivalent config.
inline json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["task"] = task_name(cfg.task);
  j["mode"] = cfg.mode == RunMode::Ensemble ? "ensemble" : "trajectory";
  j["seed"] = cfg.seed;
  j["repetitions"] = cfg.repetitions;
  j["reservoir"] = {
      {"n_qubits", cfg.reservoir.ansatz.n_qubits},
      {"ansatz", cfg.reservoir.ansatz.family == AnsatzFamily::CxChain
                     ? "cx-chain"
                     : "ccx-chain"},
      {"topology", cfg.reservoir.ansatz.topology == Topology::Ring
                       ? "ring"
                       : "open-chain"},
      {"input_scale", cfg.reservoir.ansatz.input_scale},
      {"input_offset", cfg.reservoir.ansatz.input_offset},
      {"damping_theta", cfg.reservoir.damping_theta},
      {"observable_order", cfg.reservoir.observable_order},
      {"include_bias", cfg.reservoir.include_bias},
  };
  j["readout"] = {
      {"lambda", cfg.ridge_lambda},
      {"lambda_grid", cfg.lambda_grid},
      {"mc_formula", cfg.mc_formula == McFormula::SquaredPearson
                         ? "squared-pearson"
                         : "printed-ratio"},
  };
  j["shots"] = {{"shots", cfg.shots.shots}, {"batches", cfg.shots.batches}};
  j["narma"] = {
      {"p", cfg.narma.p_values},
      {"period", cfg.narma.period},
      {"length", cfg.narma.length},
      {"washout", cfg.narma.washout},
      {"train", cfg.narma.train},
      {"standard_variant", cfg.narma.standard_variant},
  };
  j["mackey_glass"] = {
      {"beta", cfg.mackey_glass.params.beta},
      {"gamma", cfg.mackey_glass.params.gamma},
      {"tau", cfg.mackey_glass.params.tau},
      {"n", cfg.mackey_glass.params.n},
      {"dt", cfg.mackey_glass.params.dt},
      {"sample_period", cfg.mackey_glass.params.sample_period},
      {"length", cfg.mackey_glass.params.length},
      {"history", cfg.mackey_glass.params.history},
      {"washout", cfg.mackey_glass.washout},
      {"train", cfg.mackey_glass.train},
      {"test", cfg.mackey_glass.test},
  };
  j["memory_capacity"] = {
      {"tau_max", cfg.memory_capacity.tau_max},
      {"length", cfg.memory_capacity.length},
      {"washout", cfg.memory_capacity.washout},
      {"train", cfg.memory_capacity.train},
      {"orders", cfg.memory_capacity.orders},
  };
  j["trace_distance"] = {
      {"steps", cfg.trace_distance.steps},
      {"thetas", cfg.trace_distance.thetas},
  };
  j["overfitting"] = {
      {"n_obs", cfg.overfitting.n_obs},
      {"tau_max", cfg.overfitting.tau_max},
      {"length", cfg.overfitting.length},
      {"washout", cfg.overfitting.washout},
      {"train", cfg.overfitting.train},
  };
  if (cfg.sweep) {
    j["sweep"] = {{"axis", cfg.sweep->axis}, {"values", cfg.sweep->values}};
  }
  j["output"] = {
      {"name", cfg.output.name},
      {"dump_features", cfg.output.dump_features},
      {"dump_predictions", cfg.output.dump_predictions},
  };
  return j;
}

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

/// Runs fn(0..count-1) on up to `workers` threads. Callers store results
/// into index-addressed slots, so the merge order never depends on
/// scheduling.
inline void parallel_for_index(int count, int workers,
                               const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

inline int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// ---------------------------------------------------------------------------
// Experiment execution
// ---------------------------------------------------------------------------

namespace detail {

/// Feature matrix for an input sequence under the configured mode. In
/// trajectory mode the features are finite-shot estimates with the plan
/// seed derived from the repetition.
inline RMatrix feature_matrix(const std::vector<double>& inputs,
                              const ReservoirConfig& reservoir, RunMode mode,
                              const ShotPlan& base_plan,
                              std::uint64_t rep_seed) {
  if (mode == RunMode::Ensemble) {
    return run_sequence(
        inputs, reservoir,
        PopulationVector::zero_state(reservoir.ansatz.n_qubits));
  }
  ShotPlan plan = base_plan;
  plan.seed = rep_seed;
  const ShotCounts counts = sample_shot_counts(inputs, reservoir, plan);
  return estimate_features(counts, reservoir.observable_order,
                           reservoir.include_bias)
      .values;
}

/// First `columns` feature columns plus the trailing bias column when the
/// matrix carries one.
inline RMatrix truncate_features(const RMatrix& h, int columns, bool has_bias) {
  const Eigen::Index total = h.cols() - (has_bias ? 1 : 0);
  require(columns >= 1 && columns <= total,
          "truncate_features: column count out of range");
  RMatrix out(h.rows(), columns + (has_bias ? 1 : 0));
  out.leftCols(columns) = h.leftCols(columns);
  if (has_bias) {
    out.col(columns) = h.col(h.cols() - 1);
  }
  return out;
}

inline std::string predictions_csv(const std::vector<int>& times,
                                   const RVector& targets,
                                   const RVector& predictions) {
  std::string out = "t,target,prediction\n";
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    out += format_int(times[static_cast<std::size_t>(i)]);
    out += ",";
    out += format_double(targets(i));
    out += ",";
    out += format_double(predictions(i));
    out += "\n";
  }
  return out;
}

inline std::string features_csv(const RMatrix& h) {
  std::string out = "t";
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    out += ",f" + format_int(c);
  }
  out += "\n";
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    out += format_int(r);
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      out += ",";
      out += format_double(h(r, c));
    }
    out += "\n";
  }
  return out;
}

/// Fits a readout on the training span of a dataset and scores NMSE on the
/// test span. Returns the test times/targets/predictions for dumps.
struct FitResult {
  double nmse_value = 0.0;
  double lambda_used = 0.0;
  std::vector<int> test_times;
  RVector test_targets;
  RVector test_predictions;
};

inline FitResult fit_and_score(const RMatrix& h,
                               const std::vector<double>& targets,
                               const SplitIndices& split, int length,
                               int valid_from, double lambda,
                               const std::vector<double>* lambda_grid = nullptr) {
  const int train_begin = std::max(split.t_washout, valid_from);
  const int train_rows = split.t_train - train_begin;
  const int test_rows = length - split.t_train;
  require(train_rows > 0 && test_rows >= 2,
          "fit_and_score: degenerate train or test span");
  RMatrix h_train(train_rows, h.cols());
  RVector y_train(train_rows);
  for (int t = train_begin; t < split.t_train; ++t) {
    h_train.row(t - train_begin) = h.row(t);
    y_train(t - train_begin) = targets[static_cast<std::size_t>(t)];
  }
  RMatrix h_test(test_rows, h.cols());
  FitResult out;
  out.test_targets.resize(test_rows);
  out.test_times.resize(static_cast<std::size_t>(test_rows));
  for (int t = split.t_train; t < length; ++t) {
    h_test.row(t - split.t_train) = h.row(t);
    out.test_targets(t - split.t_train) = targets[static_cast<std::size_t>(t)];
    out.test_times[static_cast<std::size_t>(t - split.t_train)] = t;
  }

  // Center features and targets on the training span so the ridge penalty
  // does not act on the intercept; large lambda then shrinks toward the
  // training-mean predictor rather than toward zero. Columns without
  // training variance (the bias column, dead observables) drop out of the
  // solve.
  const RVector h_mean = h_train.colwise().mean();
  const double y_mean = y_train.mean();
  h_train.rowwise() -= h_mean.transpose();
  h_test.rowwise() -= h_mean.transpose();
  std::vector<Eigen::Index> active;
  for (Eigen::Index c = 0; c < h_train.cols(); ++c) {
    if (h_train.col(c).squaredNorm() > 0.0) {
      active.push_back(c);
    }
  }
  if (active.empty()) {
    out.test_predictions = RVector::Constant(test_rows, y_mean);
    out.nmse_value = nmse(out.test_predictions, out.test_targets);
    return out;
  }
  RMatrix h_train_active(train_rows, static_cast<Eigen::Index>(active.size()));
  RMatrix h_test_active(test_rows, static_cast<Eigen::Index>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) {
    h_train_active.col(static_cast<Eigen::Index>(i)) = h_train.col(active[i]);
    h_test_active.col(static_cast<Eigen::Index>(i)) = h_test.col(active[i]);
  }
  const RVector y_centered = y_train.array() - y_mean;

  double chosen_lambda = lambda;
  if (lambda_grid != nullptr && lambda_grid->size() > 1) {
    // Forward-chained holdout selection: fit on leading training rows,
    // score on the rows ahead of them, over two folds. Among the
    // candidates, take the largest lambda within 5% of the best score
    // (one-standard-error style), so targets the reservoir cannot predict
    // shrink to the training-mean predictor instead of overfitting.
    std::vector<double> grid = *lambda_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<double> scores(grid.size(), 0.0);
    bool scored = false;
    for (int fold = 0; fold < 2; ++fold) {
      const int val_rows =
          std::max(train_rows / 4, std::min(train_rows / 2, 10));
      const int fit_rows = train_rows - (2 - fold) * val_rows;
      if (fit_rows < 1 || val_rows < 2) {
        continue;
      }
      const RMatrix h_fit = h_train_active.topRows(fit_rows);
      const RVector y_fit = y_centered.head(fit_rows);
      const RMatrix h_val = h_train_active.middleRows(fit_rows, val_rows);
      const RVector y_val = y_centered.segment(fit_rows, val_rows);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const ReadoutWeights w = train_readout(h_fit, y_fit, grid[i]);
        scores[i] += (predict(h_val, w) - y_val).squaredNorm();
      }
      scored = true;
    }
    if (scored) {
      const double best = *std::min_element(scores.begin(), scores.end());
      for (std::size_t i = grid.size(); i-- > 0;) {
        if (scores[i] <= 1.05 * best) {
          chosen_lambda = grid[i];
          break;
        }
      }
    }
  }
  out.lambda_used = chosen_lambda;

  const ReadoutWeights w = train_readout(h_train_active, y_centered, chosen_lambda);
  out.test_predictions = (predict(h_test_active, w).array() + y_mean).matrix();
  out.nmse_value = nmse(out.test_predictions, out.test_targets);
  return out;
}

inline RepOutput run_narma_rep(const ExperimentConfig& cfg, int rep) {
  RepOutput out;
  const std::uint64_t rep_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  const NarmaExperiment& task = cfg.narma;
  const std::vector<double> u = narma_input_series(task.length, task.period);
  const RMatrix h =
      feature_matrix(u, cfg.reservoir, cfg.mode, cfg.shots, rep_seed);
  const SplitIndices split{task.washout, task.washout + task.train};
  split.validate(task.length);

  const std::string rep_label = format_int(rep);
  double nmse_sum = 0.0;
  for (int p : task.p_values) {
    NarmaParams params;
    params.p = p;
    params.period = task.period;
    params.length = task.length;
    params.standard_variant = task.standard_variant;
    const std::vector<double> y = narma_target(u, params);
    const FitResult fit = fit_and_score(
        h, y, split, task.length, 0, cfg.ridge_lambda,
        cfg.lambda_grid.empty() ? nullptr : &cfg.lambda_grid);
    out.metrics["nmse_p" + format_int(p)] = fit.nmse_value;
    out.rows.push_back({rep_label, format_int(p), "", "nmse", fit.nmse_value});
    nmse_sum += fit.nmse_value;
    if (cfg.output.dump_predictions) {
      out.extra_files.emplace_back(
          cfg.output.name + "_predictions_rep" + rep_label + "_p" +
              format_int(p) + ".csv",
          predictions_csv(fit.test_times, fit.test_targets,
                          fit.test_predictions));
    }
  }
  if (task.p_values.size() > 1) {
    const double mean = nmse_sum / static_cast<double>(task.p_values.size());
    out.metrics["nmse_mean_over_p"] = mean;
    out.rows.push_back({rep_label, "", "", "nmse_mean_over_p", mean});
  }
  if (cfg.output.dump_features) {
    out.extra_files.emplace_back(
        cfg.output.name + "_features_rep" + rep_label + ".csv",
        features_csv(h));
  }
  return out;
}

inline RepOutput run_mackey_glass_rep(const ExperimentConfig& cfg, int rep) {
  RepOutput out;
  const std::uint64_t rep_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  const MackeyGlassExperiment& task = cfg.mackey_glass;
  const std::vector<double> series = mackey_glass_series(task.params);
  const SeriesDataset ds =
      next_step_task(series, task.washout, task.train, task.test);
  const RMatrix h =
      feature_matrix(ds.inputs, cfg.reservoir, cfg.mode, cfg.shots, rep_seed);
  const FitResult fit = fit_and_score(
      h, ds.targets, ds.split(), ds.length(), ds.valid_from, cfg.ridge_lambda,
      cfg.lambda_grid.empty() ? nullptr : &cfg.lambda_grid);
  const std::string rep_label = format_int(rep);
  out.metrics["nmse"] = fit.nmse_value;
  out.rows.push_back({rep_label, "", "", "nmse", fit.nmse_value});
  if (cfg.output.dump_predictions) {
    out.extra_files.emplace_back(
        cfg.output.name + "_predictions_rep" + rep_label + ".csv",
        predictions_csv(fit.test_times, fit.test_targets,
                        fit.test_predictions));
  }
  if (cfg.output.dump_features) {
    out.extra_files.emplace_back(
        cfg.output.name + "_features_rep" + rep_label + ".csv",
        features_csv(h));
  }
  return out;
}

inline RepOutput run_memory_capacity_rep(const ExperimentConfig& cfg, int rep) {
  RepOutput out;
  const std::uint64_t rep_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  const MemoryCapacityExperiment& task = cfg.memory_capacity;
  RandomStream stream(rep_seed);
  const std::vector<double> inputs =
      stream.uniform_vector(static_cast<std::size_t>(task.length));

  ReservoirConfig reservoir = cfg.reservoir;
  reservoir.observable_order =
      *std::max_element(task.orders.begin(), task.orders.end());
  const RMatrix h_full =
      feature_matrix(inputs, reservoir, cfg.mode, cfg.shots, rep_seed);
  const SplitIndices split{task.washout, task.washout + task.train};
  split.validate(task.length);

  const std::string rep_label = format_int(rep);
  for (int k : task.orders) {
    const int columns =
        feature_count(reservoir.ansatz.n_qubits, k, false);
    const RMatrix h =
        truncate_features(h_full, columns, reservoir.include_bias);
    const std::string suffix = "_k" + format_int(k);
    double sum = 0.0;
    for (int tau = 0; tau <= task.tau_max; ++tau) {
      const double mc_tau = memory_capacity_tau(
          h, inputs, tau, split, cfg.ridge_lambda, cfg.mc_formula);
      sum += mc_tau;
      out.rows.push_back({rep_label, format_int(k), format_int(tau),
                          "mc_tau" + suffix, mc_tau});
    }
    const double mc = sum / static_cast<double>(task.tau_max);
    out.metrics["mc" + suffix] = mc;
    out.rows.push_back({rep_label, format_int(k), "", "mc" + suffix, mc});
  }
  if (cfg.output.dump_features) {
    out.extra_files.emplace_back(
        cfg.output.name + "_features_rep" + rep_label + ".csv",
        features_csv(h_full));
  }
  return out;
}

inline RepOutput run_trace_distance_rep(const ExperimentConfig& cfg, int rep) {
  RepOutput out;
  const std::uint64_t rep_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  const TraceDistanceExperiment& task = cfg.trace_distance;
  RandomStream stream(rep_seed);
  const std::vector<double> inputs =
      stream.uniform_vector(static_cast<std::size_t>(task.steps));

  const std::string rep_label = format_int(rep);
  for (double theta : task.thetas) {
    ReservoirConfig reservoir = cfg.reservoir;
    reservoir.damping_theta = theta;
    const std::vector<double> curve = diagnostics_trace_distance(
        reservoir, inputs,
        PopulationVector::zero_state(reservoir.ansatz.n_qubits));
    const std::string theta_label = format_double(theta);
    for (std::size_t t = 0; t < curve.size(); ++t) {
      out.rows.push_back({rep_label, theta_label,
                          format_int(static_cast<long long>(t)),
                          "trace_distance", curve[t]});
    }
    out.metrics["final_trace_distance@" + theta_label] = curve.back();
  }
  return out;
}

inline RepOutput run_overfitting_rep(const ExperimentConfig& cfg, int rep) {
  RepOutput out;
  const std::uint64_t rep_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  const OverfittingExperiment& task = cfg.overfitting;
  RandomStream stream(rep_seed);
  const std::vector<double> inputs =
      stream.uniform_vector(static_cast<std::size_t>(task.length));

  const RMatrix h_full =
      feature_matrix(inputs, cfg.reservoir, cfg.mode, cfg.shots, rep_seed);
  const SplitIndices split{task.washout, task.washout + task.train};
  split.validate(task.length);

  const std::string rep_label = format_int(rep);
  for (int n_obs : task.n_obs) {
    const RMatrix h =
        truncate_features(h_full, n_obs, cfg.reservoir.include_bias);
    double sum = 0.0;
    for (int tau = 0; tau <= task.tau_max; ++tau) {
      sum += memory_capacity_tau(h, inputs, tau, split, cfg.ridge_lambda,
                                 cfg.mc_formula);
    }
    const double mc = sum / static_cast<double>(task.tau_max);
    out.metrics["mc_nobs" + format_int(n_obs)] = mc;
    out.rows.push_back({rep_label, format_int(n_obs), "", "mc", mc});
  }
  return out;
}

inline RepOutput run_repetition(const ExperimentConfig& cfg, int rep) {
  switch (cfg.task) {
    case TaskKind::Narma: return run_narma_rep(cfg, rep);
    case TaskKind::MackeyGlass: return run_mackey_glass_rep(cfg, rep);
    case TaskKind::MemoryCapacity: return run_memory_capacity_rep(cfg, rep);
    case TaskKind::TraceDistance: return run_trace_distance_rep(cfg, rep);
    case TaskKind::Overfitting: return run_overfitting_rep(cfg, rep);
  }
  throw std::logic_error("run_repetition: unhandled task");
}

/// Mean and sample standard deviation per metric across repetitions.
inline json aggregate_metrics(const std::vector<RepOutput>& reps) {
  std::map<std::string, std::vector<double>> grouped;
  for (const RepOutput& rep : reps) {
    for (const auto& [name, value] : rep.metrics) {
      grouped[name].push_back(value);
    }
  }
  json out = json::object();
  for (const auto& [name, values] : grouped) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
      mean += v;
    }
    mean /= n;
    double sd = 0.0;
    if (values.size() > 1) {
      double acc = 0.0;
      for (double v : values) {
        acc += (v - mean) * (v - mean);
      }
      sd = std::sqrt(acc / (n - 1.0));
    }
    out[name] = {{"mean", mean}, {"sd", sd}};
  }
  return out;
}

/// Appends mean/sd rows per (sweep_value, step_or_tau, metric) group, in
/// first-encounter order.
inline void append_aggregate_rows(std::vector<CsvRow>& rows) {
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  std::map<std::tuple<std::string, std::string, std::string>,
           std::vector<double>>
      grouped;
  for (const CsvRow& row : rows) {
    const auto key = std::make_tuple(row.sweep_value, row.step_or_tau, row.metric);
    auto [it, inserted] = grouped.try_emplace(key);
    if (inserted) {
      order.push_back(key);
    }
    it->second.push_back(row.value);
  }
  for (const auto& key : order) {
    const std::vector<double>& values = grouped.at(key);
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
      mean += v;
    }
    mean /= n;
    double sd = 0.0;
    if (values.size() > 1) {
      double acc = 0.0;
      for (double v : values) {
        acc += (v - mean) * (v - mean);
      }
      sd = std::sqrt(acc / (n - 1.0));
    }
    rows.push_back({"mean", std::get<0>(key), std::get<1>(key),
                    std::get<2>(key), mean});
    rows.push_back(
        {"sd", std::get<0>(key), std::get<1>(key), std::get<2>(key), sd});
  }
}

}  // namespace detail

/// Runs one experiment: all repetitions, deterministic merge by repetition
/// index, aggregates appended.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       int workers = 0) {
  if (workers <= 0) {
    workers = default_workers();
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<RepOutput> reps(static_cast<std::size_t>(cfg.repetitions));
  parallel_for_index(cfg.repetitions, workers, [&](int rep) {
    reps[static_cast<std::size_t>(rep)] = detail::run_repetition(cfg, rep);
  });

  ExperimentResult result;
  result.payload["config"] = experiment_config_to_json(cfg);
  json rep_array = json::array();
  for (const RepOutput& rep : reps) {
    rep_array.push_back({{"metrics", rep.metrics}});
    result.csv.insert(result.csv.end(), rep.rows.begin(), rep.rows.end());
    result.extra_files.insert(result.extra_files.end(),
                              rep.extra_files.begin(), rep.extra_files.end());
  }
  result.payload["repetitions"] = std::move(rep_array);
  result.payload["aggregate"] = detail::aggregate_metrics(reps);
  detail::append_aggregate_rows(result.csv);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

namespace detail {

/// Applies one sweep-axis value to a copy of the config.
inline ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                          const std::string& axis,
                                          double value) {
  ExperimentConfig cfg = base;
  cfg.sweep.reset();
  if (axis == "theta") {
    if (value < 0.0 || value > M_PI) {
      throw config_error("sweep.values: theta outside [0, pi]");
    }
    cfg.reservoir.damping_theta = value;
    cfg.trace_distance.thetas = {value};
  } else if (axis == "k") {
    const int k = static_cast<int>(std::llround(value));
    cfg.reservoir.observable_order = k;
    cfg.memory_capacity.orders = {k};
  } else if (axis == "n_obs") {
    cfg.overfitting.n_obs = {static_cast<int>(std::llround(value))};
  } else if (axis == "p") {
    cfg.narma.p_values = {static_cast<int>(std::llround(value))};
  } else if (axis == "n") {
    cfg.reservoir.ansatz.n_qubits = static_cast<int>(std::llround(value));
  }
  try {
    cfg.reservoir.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("sweep.values: ") + e.what());
  }
  return cfg;
}

}  // namespace detail

/// Runs the config once per sweep value. Rows carry the sweep value in the
/// sweep_value column; a row's in-task axis label, when the run produced
/// one, moves to step_or_tau if that slot is free.
inline ExperimentResult run_sweep(const ExperimentConfig& cfg,
                                  int workers = 0) {
  if (!cfg.sweep) {
    throw config_error("sweep: missing sweep axis for the sweep command");
  }
  if (workers <= 0) {
    workers = default_workers();
  }
  const auto start = std::chrono::steady_clock::now();
  const SweepSpec& spec = *cfg.sweep;

  ExperimentResult result;
  result.payload["config"] = experiment_config_to_json(cfg);
  json points = json::array();
  for (double value : spec.values) {
    const ExperimentConfig point_cfg =
        detail::apply_sweep_value(cfg, spec.axis, value);
    ExperimentResult point = run_experiment(point_cfg, workers);
    const std::string value_label = format_double(value);
    for (CsvRow row : point.csv) {
      if (row.repetition == "mean" || row.repetition == "sd") {
        continue;  // re-aggregated after the merge
      }
      if (row.step_or_tau.empty() && !row.sweep_value.empty()) {
        row.step_or_tau = row.sweep_value;
      }
      row.sweep_value = value_label;
      result.csv.push_back(std::move(row));
    }
    points.push_back({{"value", value},
                      {"repetitions", point.payload.at("repetitions")},
                      {"aggregate", point.payload.at("aggregate")}});
    for (auto& file : point.extra_files) {
      result.extra_files.emplace_back(
          spec.axis + value_label + "_" + file.first, std::move(file.second));
    }
  }
  result.payload["points"] = std::move(points);
  detail::append_aggregate_rows(result.csv);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

// ---------------------------------------------------------------------------
// File output
// ---------------------------------------------------------------------------

inline std::string csv_to_string(const std::vector<CsvRow>& rows) {
  std::string out = "repetition,sweep_value,step_or_tau,metric_name,value\n";
  for (const CsvRow& row : rows) {
    out += row.repetition;
    out += ",";
    out += row.sweep_value;
    out += ",";
    out += row.step_or_tau;
    out += ",";
    out += row.metric;
    out += ",";
    out += format_double(row.value);
    out += "\n";
  }
  return out;
}

struct WrittenFiles {
  std::filesystem::path payload_json;
  std::filesystem::path csv;
  std::filesystem::path meta_json;
};

/// Writes <name>.json (deterministic payload), <name>.csv, and
/// <name>.meta.json (wall-clock time, kept separate so payloads are
/// byte-identical across reruns), plus any dump files.
inline WrittenFiles write_result(const ExperimentResult& result,
                                 const std::filesystem::path& out_dir,
                                 const std::string& name) {
  std::filesystem::create_directories(out_dir);
  WrittenFiles files;
  files.payload_json = out_dir / (name + ".json");
  files.csv = out_dir / (name + ".csv");
  files.meta_json = out_dir / (name + ".meta.json");
  {
    std::ofstream out(files.payload_json);
    out << result.payload.dump(2) << "\n";
  }
  {
    std::ofstream out(files.csv);
    out << csv_to_string(result.csv);
  }
  {
    json meta;
    meta["wall_clock_seconds"] = result.wall_seconds;
    meta["written_at_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    std::ofstream out(files.meta_json);
    out << meta.dump(2) << "\n";
  }
  for (const auto& [filename, content] : result.extra_files) {
    std::ofstream out(out_dir / filename);
    out << content;
  }
  return files;
}

}  // namespace qesn
