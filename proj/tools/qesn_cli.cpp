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

// Experiment harness CLI.
//
//   qesn run   <config.json>   execute one experiment
//   qesn sweep <config.json>   execute a one-axis parameter sweep
//   qesn taskgen <task> ...    write a benchmark input/target series
//
// Exit codes: 0 success, 1 runtime failure, 2 config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qesn/experiment.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

int line_of_byte_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
    }
  }
  return line;
}

qesn::json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw qesn::config_error("cannot open config file: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return qesn::json::parse(text);
  } catch (const qesn::json::parse_error& e) {
    throw qesn::config_error("parse error at line " +
                             std::to_string(line_of_byte_offset(text, e.byte)) +
                             ": " + e.what());
  }
}

fs::path resolve_out_dir(const std::optional<std::string>& flag_value) {
  if (flag_value) {
    return *flag_value;
  }
  if (const char* env = std::getenv("QESN_OUT_DIR")) {
    return env;
  }
  return fs::current_path();
}

struct GlobalOptions {
  int workers = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

int run_config_command(const std::string& config_path, const GlobalOptions& opts,
                       bool sweep) {
  qesn::ExperimentConfig cfg =
      qesn::parse_experiment_config(load_json_file(config_path));
  if (opts.seed) {
    cfg.seed = *opts.seed;
  }
  const qesn::ExperimentResult result =
      sweep ? qesn::run_sweep(cfg, opts.workers)
            : qesn::run_experiment(cfg, opts.workers);
  const qesn::WrittenFiles files =
      qesn::write_result(result, resolve_out_dir(opts.out_dir), cfg.output.name);
  std::cout << "wrote " << files.payload_json.string() << "\n"
            << "wrote " << files.csv.string() << "\n";
  return 0;
}

void write_series_csv(const fs::path& path, const std::vector<double>& inputs,
                      const std::vector<double>& targets, int valid_from) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
  out << "t,input,target\n";
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    out << t << "," << qesn::format_double(inputs[t]) << ",";
    if (static_cast<int>(t) >= valid_from) {
      out << qesn::format_double(targets[t]);
    }
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum echo-state-network simulator and benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--workers", opts.workers,
                 "Worker threads (default: logical processors)");
  std::uint64_t seed_value = 0;
  auto* seed_flag =
      app.add_option("--seed", seed_value, "Override the config seed");
  std::string out_dir_value;
  auto* out_dir_flag = app.add_option(
      "--out-dir", out_dir_value,
      "Output directory (default: $QESN_OUT_DIR or the working directory)");

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "Execute one experiment config");
  run_cmd->add_option("config", run_config, "Experiment config JSON")
      ->required();

  std::string sweep_config;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Execute a one-axis parameter sweep");
  sweep_cmd->add_option("config", sweep_config, "Sweep config JSON")
      ->required();

  auto* taskgen_cmd =
      app.add_subcommand("taskgen", "Write a benchmark series to CSV");
  std::string task_name;
  std::string taskgen_out;
  int gen_p = 2;
  int gen_period = 200;
  int gen_length = 200;
  int gen_tau = 5;
  double gen_mg_tau = 17.0;
  double gen_mg_n = 10.0;
  double gen_mg_dt = 0.01;
  double gen_mg_sample = 1.0;
  double gen_mg_history = 1.2;
  std::uint64_t gen_seed = 0;
  taskgen_cmd->add_option("task", task_name, "narma | mackey-glass | delay")
      ->required();
  taskgen_cmd->add_option("-o,--output", taskgen_out, "Output CSV path")
      ->required();
  taskgen_cmd->add_option("--p", gen_p, "NARMA memory order");
  taskgen_cmd->add_option("--period", gen_period, "NARMA input period");
  taskgen_cmd->add_option("--length", gen_length, "Series length");
  taskgen_cmd->add_option("--delay", gen_tau, "Delay task shift");
  taskgen_cmd->add_option("--mg-tau", gen_mg_tau, "Mackey-Glass delay");
  taskgen_cmd->add_option("--mg-n", gen_mg_n, "Mackey-Glass exponent");
  taskgen_cmd->add_option("--mg-dt", gen_mg_dt, "Integrator step");
  taskgen_cmd->add_option("--mg-sample-period", gen_mg_sample,
                          "Sample spacing in time units");
  taskgen_cmd->add_option("--mg-history", gen_mg_history,
                          "Constant pre-history value");
  taskgen_cmd->add_option("--gen-seed", gen_seed,
                          "Seed for the delay task's random input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (seed_flag->count() > 0) {
    opts.seed = seed_value;
  }
  if (out_dir_flag->count() > 0) {
    opts.out_dir = out_dir_value;
  }

  try {
    if (run_cmd->parsed()) {
      return run_config_command(run_config, opts, /*sweep=*/false);
    }
    if (sweep_cmd->parsed()) {
      return run_config_command(sweep_config, opts, /*sweep=*/true);
    }
    if (taskgen_cmd->parsed()) {
      const fs::path out_path = taskgen_out;
      if (task_name == "narma") {
        const std::vector<double> u =
            qesn::narma_input_series(gen_length, gen_period);
        qesn::NarmaParams params;
        params.p = gen_p;
        params.period = gen_period;
        params.length = gen_length;
        write_series_csv(out_path, u, qesn::narma_target(u, params), 0);
      } else if (task_name == "mackey-glass") {
        qesn::MackeyGlassParams params;
        params.tau = gen_mg_tau;
        params.n = gen_mg_n;
        params.dt = gen_mg_dt;
        params.sample_period = gen_mg_sample;
        params.history = gen_mg_history;
        params.length = gen_length + 1;
        const std::vector<double> series = qesn::mackey_glass_series(params);
        const std::vector<double> inputs(series.begin(), series.end() - 1);
        const std::vector<double> targets(series.begin() + 1, series.end());
        write_series_csv(out_path, inputs, targets, 0);
      } else if (task_name == "delay") {
        qesn::RandomStream stream(gen_seed);
        const std::vector<double> inputs =
            stream.uniform_vector(static_cast<std::size_t>(gen_length));
        const qesn::SeriesDataset ds = qesn::delay_task(inputs, gen_tau);
        write_series_csv(out_path, ds.inputs, ds.targets, ds.valid_from);
      } else {
        throw qesn::config_error("taskgen: unknown task '" + task_name + "'");
      }
      std::cout << "wrote " << out_path.string() << "\n";
      return 0;
    }
  } catch (const qesn::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
