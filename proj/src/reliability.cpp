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

#include "reliability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace shadowdiff {

double estimate_lambda(const ObservationLog& observations) {
  const std::size_t n = observations.count();
  if (n < 2) {
    throw ReliabilityError("rate estimation needs at least 2 observations, have " +
                           std::to_string(n));
  }
  double total = 0.0;
  for (double t : observations.durations) {
    if (!(t > 0.0)) {
      throw ReliabilityError("observation durations must be positive");
    }
    total += t;
  }
  return static_cast<double>(n - 1) / total;
}

double standard_error(double lambda_hat, std::size_t n) {
  if (n < 3) {
    throw ReliabilityError("standard error needs at least 3 observations, have " +
                           std::to_string(n));
  }
  return std::sqrt(lambda_hat * lambda_hat / static_cast<double>(n - 2));
}

double survival_probability(double lambda_hat, double t_required) {
  if (t_required < 0.0) {
    throw ReliabilityError("required time must be non-negative");
  }
  return std::exp(-lambda_hat * t_required);
}

DecisionReport decision_report(const ObservationLog& observations, double t_required,
                               double threshold) {
  DecisionReport report;
  report.observation_count = observations.count();
  for (double t : observations.durations) report.total_duration += t;
  report.lambda_hat = estimate_lambda(observations);
  report.t_required = t_required;
  report.threshold = threshold;
  report.probability = survival_probability(report.lambda_hat, t_required);
  if (report.observation_count >= 3) {
    double se = standard_error(report.lambda_hat, report.observation_count);
    report.se = se;
    report.probability_at_plus_se = survival_probability(report.lambda_hat + se, t_required);
    report.probability_at_minus_se =
        survival_probability(std::max(report.lambda_hat - se, 0.0), t_required);
  }
  report.stop = report.probability >= threshold;
  return report;
}

namespace {

std::string human_duration(double seconds) {
  std::ostringstream out;
  out.precision(4);
  if (seconds >= 86400.0) {
    out << seconds / 86400.0 << " d";
  } else if (seconds >= 3600.0) {
    out << seconds / 3600.0 << " h";
  } else if (seconds >= 60.0) {
    out << seconds / 60.0 << " min";
  } else {
    out << seconds << " s";
  }
  return out.str();
}

}  // namespace

std::string render_report(const DecisionReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << "observations:          " << report.observation_count << " (total "
      << human_duration(report.total_duration) << ")\n";
  out << "rate estimate:         " << report.lambda_hat << " /s\n";
  if (report.se) {
    out << "standard error:        " << *report.se << " /s (plug-in)\n";
  } else {
    out << "standard error:        unavailable (needs >= 3 observations)\n";
  }
  out << "required horizon:      " << human_duration(report.t_required) << "\n";
  out << "P(no difference):      " << report.probability << "\n";
  if (report.probability_at_plus_se && report.probability_at_minus_se) {
    out << "sensitivity (+/-1 se): " << *report.probability_at_plus_se << " .. "
        << *report.probability_at_minus_se << "\n";
  }
  out << "threshold:             " << report.threshold << "\n";
  out << "decision:              " << (report.stop ? "stop" : "continue")
      << " concurrent execution\n";
  return out.str();
}

ObservationLog load_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ReliabilityError("cannot open observations file: " + path);
  }
  ObservationLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw ReliabilityError("observations file line " + std::to_string(line_no) +
                             " is not a JSON object");
    }
    if (doc.contains("marker")) continue;
    if (!doc.contains("duration_seconds")) {
      throw ReliabilityError("observations file line " + std::to_string(line_no) +
                             " lacks duration_seconds");
    }
    log.durations.push_back(doc["duration_seconds"].get<double>());
  }
  return log;
}

void append_observation(const std::string& path, std::size_t run_index,
                        double duration_seconds) {
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw ReliabilityError("cannot open observations file for writing: " + path);
  }
  nlohmann::json line = {{"run_index", run_index}, {"duration_seconds", duration_seconds}};
  out << line.dump() << "\n";
}

void append_restart_marker(const std::string& path) {
  std::size_t index = next_run_index(path);
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw ReliabilityError("cannot open observations file for writing: " + path);
  }
  double now = std::chrono::duration<double>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
  nlohmann::json line = {{"run_index", index}, {"marker", "restart"}, {"time", now}};
  out << line.dump() << "\n";
}

std::size_t next_run_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) return 1;
  std::size_t max_index = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("run_index")) continue;
    max_index = std::max(max_index, doc["run_index"].get<std::size_t>());
  }
  return max_index + 1;
}

}  // namespace shadowdiff
