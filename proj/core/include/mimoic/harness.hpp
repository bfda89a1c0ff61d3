/*
 * Copyright 2026 The mimoic Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimoic/algorithms.hpp"
#include "mimoic/model.hpp"

namespace mimoic::harness {

enum class PowerControl { none, adhoc, spca };

std::string_view to_string(PowerControl pc);
std::optional<PowerControl> parse_power_control(std::string_view name);

/// A seeded Monte-Carlo sweep over SNR for one algorithm.
struct ExperimentSpec {
  int users = 3;
  std::vector<int> tx_antennas{4, 4, 4};
  std::vector<int> rx_antennas{4, 4, 4};
  std::vector<int> streams{2, 2, 2};
  double snr_start_db = 0.0;
  double snr_stop_db = 60.0;
  double snr_step_db = 10.0;
  int mc = 1;
  algorithms::Algorithm algorithm = algorithms::Algorithm::max_sinr;
  /// Fixed half-step count; empty means run until the sum-rate settles.
  std::optional<int> iters;
  double epsilon = algorithms::kDefaultEpsilon;
  PowerControl power_control = PowerControl::none;
  /// Per-user rate targets in bits, spca only.
  std::vector<double> rate_targets;
  std::uint64_t seed = 1;
  std::string out;
  /// Worker threads for independent trials.
  int threads = 1;
  /// Record wall-clock time per trial. Off by default so identical specs give
  /// byte-identical CSV.
  bool timing = false;

  /// Throws ConfigError on an invalid spec.
  void validate() const;
  [[nodiscard]] std::vector<double> snr_grid() const;
  /// Network at one SNR point: every user's budget is the linear SNR.
  [[nodiscard]] NetworkConfig network(double snr_db) const;
  [[nodiscard]] algorithms::StoppingRule stopping() const;
};

/// Seed of trial (snr_index, mc_index); independent of the grid length.
std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t mc_index);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One stream of one trial. Floating fields hold values already rounded to
/// the 12 significant digits written to CSV; NaN marks a missing value.
struct TrialRow {
  std::string algorithm;
  int mc = 0;
  double snr_db = 0.0;
  int user = 1;    ///< 1-based
  int stream = 1;  ///< 1-based
  double sinr = kMissing;
  double rate = kMissing;
  double user_rate = kMissing;
  double sum_rate = kMissing;
  double sum_stream_rate = kMissing;
  double leakage = kMissing;  ///< IL of this row's user
  int iters = 0;
  bool converged = false;
  double wall_ms = kMissing;
  std::string pc = "none";
  double pc_sinr = kMissing;
  double pc_rate = kMissing;
  /// Failure description; not serialized.
  std::string error;

  friend bool operator==(const TrialRow& a, const TrialRow& b);
};

/// Runs every (snr, mc) trial. A failing trial yields rows with
/// converged = false instead of aborting the sweep. Rows are ordered by
/// (snr, mc, user, stream).
std::vector<TrialRow> run_experiment(const ExperimentSpec& spec);

/// Per (algorithm, power control, snr) aggregates.
struct SummaryRecord {
  std::string algorithm;
  std::string pc;
  double snr_db = 0.0;
  int trials = 0;
  double mean_sum_rate = kMissing;
  double mean_sum_stream_rate = kMissing;
  double mean_leakage = kMissing;
  double imbalance_ratio_of_sums = kMissing;
  double imbalance_sum_of_ratios = kMissing;
  double pc_imbalance_ratio_of_sums = kMissing;
  double mean_iterations = 0.0;
  double converged_fraction = 0.0;
  double mean_wall_ms = kMissing;
};

struct Summary {
  std::vector<SummaryRecord> records;
  /// Per algorithm: total wall time with adhoc power control over total wall
  /// time without, minus one. Present only when both runs are in the rows
  /// and timing was recorded.
  std::map<std::string, double> pc_overhead;
};

/// Imbalance values are means over trials of the per-trial statistic; trials
/// where it is undefined are skipped.
Summary summarize(const std::vector<TrialRow>& rows);

void print_summary(std::ostream& os, const Summary& summary);

// CSV ----------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "algorithm,mc,snr_db,user,stream,sinr,rate,user_rate,sum_rate,sum_stream_rate,leakage,"
    "iters,converged,wall_ms,pc,pc_sinr,pc_rate";

/// Rounds to the 12 significant digits used on output.
double quantize(double value);

void write_csv(std::ostream& os, const std::vector<TrialRow>& rows);
std::vector<TrialRow> read_csv(std::istream& is);

void write_csv_file(const std::string& path, const std::vector<TrialRow>& rows);
std::vector<TrialRow> read_csv_file(const std::string& path);

// Config -------------------------------------------------------------------

/// Applies the keys of a YAML mapping on top of base.
ExperimentSpec parse_experiment_spec(std::string_view yaml_text, ExperimentSpec base = {});
ExperimentSpec load_experiment_spec(const std::string& path, ExperimentSpec base = {});

/// Sets one key from its textual value (YAML scalar, or a comma list for
/// vector keys). Throws ConfigError on an unknown key or bad value.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Every recognized key, in canonical order.
const std::vector<std::string>& config_keys();

/// Resolved spec as YAML.
std::string format_experiment_spec(const ExperimentSpec& spec);

}  // namespace mimoic::harness
