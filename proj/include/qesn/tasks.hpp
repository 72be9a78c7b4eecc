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
#include <cstdint>
#include <vector>

#include "qesn/series.hpp"

namespace qesn {

// ---------------------------------------------------------------------------
// NARMA-p
// ---------------------------------------------------------------------------

struct NarmaParams {
  int p = 2;
  double alpha = 0.3;
  double beta = 0.05;
  double gamma = 1.5;
  double delta = 0.1;
  int period = 200;  // T of the periodic input
  int length = 200;  // L
  // The default recurrence feeds the history sum in linearly; the
  // standard NARMA family multiplies that sum by y_{t-1}; enable for
  // comparison runs.
  bool standard_variant = false;

  void validate() const {
    require(p >= 1, "NarmaParams: p must be at least 1");
    require(period > 0, "NarmaParams: period must be positive");
    require(length > p, "NarmaParams: length must exceed p");
  }
};

/// Deterministic input signal: a product of three incommensurate sines
/// scaled to |u| <= 0.1.
inline double narma_input(int t, int period) {
  require(period > 0, "narma_input: period must be positive");
  const double f = 2.0 * M_PI * static_cast<double>(t) / static_cast<double>(period);
  return 0.1 * std::sin(2.11 * f) * std::sin(3.73 * f) * std::sin(4.11 * f);
}

inline std::vector<double> narma_input_series(int length, int period) {
  std::vector<double> u(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) {
    u[static_cast<std::size_t>(t)] = narma_input(t, period);
  }
  return u;
}

/// NARMA-p recurrence over the p most recent already-computed values:
///   y_t = alpha y_{t-1} + beta sum_{l=1..p} y_{t-l}
///         + gamma u_{t-p+1} u_t + delta,
/// with y_t = 0 for t < p. The standard variant multiplies the history sum
/// by y_{t-1}.
inline std::vector<double> narma_target(const std::vector<double>& u,
                                        const NarmaParams& params) {
  params.validate();
  require(static_cast<int>(u.size()) >= params.p,
          "narma_target: input shorter than the memory order");
  std::vector<double> y(u.size(), 0.0);
  for (std::size_t t = static_cast<std::size_t>(params.p); t < u.size(); ++t) {
    double history = 0.0;
    for (int l = 1; l <= params.p; ++l) {
      history += y[t - static_cast<std::size_t>(l)];
    }
    if (params.standard_variant) {
      history *= y[t - 1];
    }
    y[t] = params.alpha * y[t - 1] + params.beta * history +
           params.gamma * u[t - static_cast<std::size_t>(params.p) + 1] * u[t] +
           params.delta;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Mackey-Glass
// ---------------------------------------------------------------------------

struct MackeyGlassParams {
  double beta = 0.2;
  double gamma = 0.1;
  double tau = 17.0;
  double n = 10.0;            // nonlinearity exponent
  double dt = 0.01;           // integrator step
  double sample_period = 1.0; // spacing of emitted samples, in time units
  int length = 2000;          // number of emitted samples
  double history = 1.2;       // constant pre-history value

  void validate() const {
    require(dt > 0.0, "MackeyGlassParams: dt must be positive");
    require(length >= 1, "MackeyGlassParams: length must be positive");
    const double steps_per_sample = sample_period / dt;
    require(std::abs(steps_per_sample - std::round(steps_per_sample)) <=
                1e-9 * steps_per_sample,
            "MackeyGlassParams: sample_period must be a multiple of dt");
    const double delay_steps = tau / dt;
    require(std::abs(delay_steps - std::round(delay_steps)) <=
                1e-9 * std::max(delay_steps, 1.0),
            "MackeyGlassParams: tau must be a multiple of dt");
  }
};

/// Integrates dx/dt = beta x(t-tau) / (1 + x(t-tau)^n) - gamma x(t) with
/// classical fourth-order Runge-Kutta. The delayed value at half steps is
/// linearly interpolated on the dt-grid history buffer; pre-history is the
/// constant `history`. Emits `length` samples spaced `sample_period` apart,
/// starting one sample period after t = 0.
inline std::vector<double> mackey_glass_series(const MackeyGlassParams& params) {
  params.validate();
  const auto delay_steps = static_cast<std::size_t>(std::llround(params.tau / params.dt));
  const auto steps_per_sample =
      static_cast<std::size_t>(std::llround(params.sample_period / params.dt));
  const std::size_t total_steps =
      steps_per_sample * static_cast<std::size_t>(params.length);

  const auto derivative = [&params](double x, double x_delayed) {
    return params.beta * x_delayed / (1.0 + std::pow(x_delayed, params.n)) -
           params.gamma * x;
  };

  // history[k] = x(t - (delay_steps - k) dt); ring buffer over the delay span.
  std::vector<double> buffer(std::max<std::size_t>(delay_steps, 1), params.history);
  std::size_t head = 0;  // index of x(t - tau)
  double x = params.history;

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(params.length));
  for (std::size_t step = 1; step <= total_steps; ++step) {
    double x_tau_0, x_tau_1;
    if (delay_steps == 0) {
      x_tau_0 = x;
      x_tau_1 = x;  // undelayed limit, tau = 0
    } else {
      x_tau_0 = buffer[head];
      x_tau_1 = delay_steps == 1 ? x : buffer[(head + 1) % delay_steps];
    }
    const double x_tau_half = 0.5 * (x_tau_0 + x_tau_1);

    const double k1 = derivative(x, x_tau_0);
    const double k2 = derivative(x + 0.5 * params.dt * k1, x_tau_half);
    const double k3 = derivative(x + 0.5 * params.dt * k2, x_tau_half);
    const double k4 = derivative(x + params.dt * k3, x_tau_1);
    const double x_next = x + params.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(x_next)) {
      throw integrator_divergence_error(
          "mackey_glass_series: state became non-finite");
    }
    if (delay_steps > 0) {
      buffer[head] = x;
      head = (head + 1) % delay_steps;
    }
    x = x_next;
    if (step % steps_per_sample == 0) {
      samples.push_back(x);
    }
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Dataset constructors
// ---------------------------------------------------------------------------

/// Next-step prediction: inputs are the series, targets the series shifted
/// by one. Rows beyond washout + train + test are discarded.
inline SeriesDataset next_step_task(const std::vector<double>& series,
                                    int washout = 20, int train_length = 1300,
                                    int test_length = 500) {
  require(series.size() >= 2, "next_step_task: series too short");
  const int max_rows = static_cast<int>(series.size()) - 1;
  const int wanted = washout + train_length + test_length;
  require(wanted <= max_rows,
          "next_step_task: series shorter than washout + train + test");
  SeriesDataset out;
  out.inputs.assign(series.begin(), series.begin() + wanted);
  out.targets.assign(series.begin() + 1, series.begin() + 1 + wanted);
  out.t_washout = washout;
  out.t_train = washout + train_length;
  out.valid_from = 0;
  out.validate();
  return out;
}

/// Delayed-recall dataset: target_t = input_{t-tau}. The first tau targets
/// are undefined; they are stored as zero and excluded through valid_from.
inline SeriesDataset delay_task(const std::vector<double>& inputs, int tau,
                                int washout = 0, int train_length = -1) {
  const int length = static_cast<int>(inputs.size());
  require(tau >= 0 && tau < length, "delay_task: tau outside [0, length)");
  SeriesDataset out;
  out.inputs = inputs;
  out.targets.assign(inputs.size(), 0.0);
  for (int t = tau; t < length; ++t) {
    out.targets[static_cast<std::size_t>(t)] =
        inputs[static_cast<std::size_t>(t - tau)];
  }
  out.valid_from = tau;
  out.t_washout = washout;
  out.t_train = train_length < 0 ? washout + (length - washout) / 2
                                 : washout + train_length;
  out.validate();
  return out;
}

}  // namespace qesn
