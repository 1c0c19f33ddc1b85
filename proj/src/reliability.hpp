// Copyright 2026 The shadowdiff authors
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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowdiff {

/// Raised when an estimator is asked for more than the data supports
/// (fewer observations than the formula needs, or invalid durations).
class ReliabilityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Times from each (re)start of concurrent execution to the next detected
/// difference, in seconds.
struct ObservationLog {
  std::vector<double> durations;

  std::size_t count() const { return durations.size(); }
};

/// Rate estimate for the difference-arrival process, modeled as exponential
/// inter-arrival times: (N-1) / sum(T_i). Requires N >= 2 and all T_i > 0.
double estimate_lambda(const ObservationLog& observations);

/// Plug-in standard error of the rate estimate: sqrt(lambda_hat^2 / (N-2)).
/// Requires N >= 3.
double standard_error(double lambda_hat, std::size_t n);

/// Probability that no difference occurs within `t_required` time units:
/// exp(-lambda_hat * t_required). Requires t_required >= 0.
double survival_probability(double lambda_hat, double t_required);

/// The stop/continue decision at a required difference-free horizon, with a
/// sensitivity band at lambda_hat +/- one standard error. The standard
/// error is unavailable below three observations; the estimate itself still
/// reports.
struct DecisionReport {
  std::size_t observation_count = 0;
  double total_duration = 0.0;
  double lambda_hat = 0.0;
  std::optional<double> se;
  double t_required = 0.0;
  double threshold = 0.0;
  double probability = 0.0;
  std::optional<double> probability_at_plus_se;   // rate one se higher
  std::optional<double> probability_at_minus_se;  // rate one se lower, floored at 0
  bool stop = false;                              // stop iff probability >= threshold
};

DecisionReport decision_report(const ObservationLog& observations, double t_required,
                               double threshold);

std::string render_report(const DecisionReport& report);

// ---------------------------------------------------------------------------
// Observations file: JSON lines {"run_index": N, "duration_seconds": T}.
// Lines carrying a "marker" member are operator annotations (e.g. restarts)
// and are skipped by the loader.

ObservationLog load_observations(const std::string& path);
void append_observation(const std::string& path, std::size_t run_index, double duration_seconds);
void append_restart_marker(const std::string& path);
/// One past the highest run_index present (1 for a missing/empty file).
std::size_t next_run_index(const std::string& path);

}  // namespace shadowdiff
