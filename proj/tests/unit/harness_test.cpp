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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "mimoic/harness.hpp"

namespace mimoic {
namespace {

using namespace harness;

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.snr_start_db = 0.0;
  s.snr_stop_db = 20.0;
  s.snr_step_db = 10.0;
  s.mc = 2;
  s.iters = 10;
  s.seed = 5;
  return s;
}

std::string to_csv(const std::vector<TrialRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

TEST(ExperimentSpec, ValidationErrors) {
  ExperimentSpec s = small_spec();
  EXPECT_NO_THROW(s.validate());
  s.snr_step_db = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.mc = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.snr_stop_db = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.streams = {2, 2};
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.power_control = PowerControl::spca;
  EXPECT_THROW(s.validate(), ConfigError);
  s.rate_targets = {1.0};
  EXPECT_NO_THROW(s.validate());
}

TEST(ExperimentSpec, GridAndNetwork) {
  ExperimentSpec s;
  EXPECT_EQ(s.snr_grid(), (std::vector<double>{0, 10, 20, 30, 40, 50, 60}));
  s.snr_start_db = 0.0;
  s.snr_stop_db = 1.0;
  s.snr_step_db = 0.1;
  EXPECT_EQ(s.snr_grid().size(), 11u);
  s.tx_antennas = {5};
  s.streams = {1, 2, 3};
  const NetworkConfig n = s.network(20.0);
  EXPECT_EQ(n.tx_antennas, (std::vector<int>{5, 5, 5}));
  EXPECT_EQ(n.streams, (std::vector<int>{1, 2, 3}));
  EXPECT_NEAR(n.power[1], 100.0, 1e-12);
  EXPECT_EQ(s.stopping().describe(), "auto");
}

TEST(TrialSeed, IndependentOfGridLength) {
  ExperimentSpec a = small_spec();
  ExperimentSpec b = small_spec();
  b.snr_stop_db = 40.0;
  const auto ra = run_experiment(a);
  const auto rb = run_experiment(b);
  ASSERT_EQ(rb.size(), 5u * 2u * 6u);
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_TRUE(ra[i] == rb[i]) << i;
}

TEST(RunExperiment, RowAccountingAndOrder) {
  ExperimentSpec s = small_spec();
  s.snr_stop_db = 0.0;
  s.mc = 1;
  EXPECT_EQ(run_experiment(s).size(), 6u);

  s = small_spec();
  s.streams = {1, 2, 1};
  const auto rows = run_experiment(s);
  ASSERT_EQ(rows.size(), 3u * 2u * 4u);
  std::set<std::tuple<double, int, int, int>> keys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    keys.insert({rows[i].snr_db, rows[i].mc, rows[i].user, rows[i].stream});
    if (i > 0) {
      const auto prev = std::tuple(rows[i - 1].snr_db, rows[i - 1].mc, rows[i - 1].user,
                                   rows[i - 1].stream);
      EXPECT_LT(prev, std::tuple(rows[i].snr_db, rows[i].mc, rows[i].user, rows[i].stream));
    }
    EXPECT_EQ(rows[i].iters, 10);
    EXPECT_TRUE(rows[i].converged);
    EXPECT_TRUE(std::isnan(rows[i].wall_ms));
    EXPECT_TRUE(std::isnan(rows[i].pc_sinr));
  }
  EXPECT_EQ(keys.size(), rows.size());
}

TEST(RunExperiment, DeterministicAndThreadIndependent) {
  ExperimentSpec s = small_spec();
  s.power_control = PowerControl::adhoc;
  const std::string a = to_csv(run_experiment(s));
  const std::string b = to_csv(run_experiment(s));
  EXPECT_EQ(a, b);
  s.threads = 3;
  EXPECT_EQ(to_csv(run_experiment(s)), a);
}

TEST(RunExperiment, PowerControlColumns) {
  ExperimentSpec s = small_spec();
  s.power_control = PowerControl::adhoc;
  for (const TrialRow& r : run_experiment(s)) {
    EXPECT_EQ(r.pc, "adhoc");
    EXPECT_FALSE(std::isnan(r.pc_sinr));
    EXPECT_NEAR(r.pc_rate, std::log2(1.0 + r.pc_sinr), 1e-9 * (1.0 + r.pc_rate));
  }
  s.power_control = PowerControl::spca;
  s.rate_targets = {2.0};
  s.algorithm = algorithms::Algorithm::gevd;
  for (const TrialRow& r : run_experiment(s)) {
    EXPECT_EQ(r.pc, "spca");
    if (r.error.empty()) {
      EXPECT_FALSE(std::isnan(r.pc_sinr));
    }
  }
}

TEST(RunExperiment, FailingTrialIsRecordedNotFatal) {
  ExperimentSpec s = small_spec();
  s.power_control = PowerControl::spca;
  s.rate_targets = {60.0};  // far beyond any achievable rate
  const auto rows = run_experiment(s);
  ASSERT_EQ(rows.size(), 36u);
  for (const TrialRow& r : rows) {
    EXPECT_FALSE(r.converged);
    EXPECT_FALSE(r.error.empty());
    EXPECT_FALSE(std::isnan(r.sum_rate));
    EXPECT_TRUE(std::isnan(r.pc_sinr));
  }
}

TEST(RunExperiment, TimingIsOptIn) {
  ExperimentSpec s = small_spec();
  s.timing = true;
  for (const TrialRow& r : run_experiment(s)) EXPECT_GT(r.wall_ms, 0.0);
}

TEST(Csv, RoundTripIsExact) {
  ExperimentSpec s = small_spec();
  s.power_control = PowerControl::adhoc;
  s.timing = true;
  const auto rows = run_experiment(s);
  std::stringstream buffer;
  write_csv(buffer, rows);
  const auto parsed = read_csv(buffer);
  ASSERT_EQ(parsed.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_TRUE(parsed[i] == rows[i]) << i;
  EXPECT_EQ(to_csv(parsed), to_csv(rows));
}

TEST(Csv, HeaderAndEmptyFields) {
  TrialRow r;
  r.algorithm = "dia";
  r.sinr = 1.0 / 3.0;
  const std::string text = to_csv({r});
  EXPECT_EQ(text.substr(0, text.find('\n')), std::string(kCsvHeader));
  EXPECT_NE(text.find("dia,0,0,1,1,0.333333333333,,,,,,0,0,,none,,\n"), std::string::npos)
      << text;
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(read_csv(bad_header), std::runtime_error);
  std::istringstream short_row(std::string(kCsvHeader) + "\ndia,0,0\n");
  EXPECT_THROW(read_csv(short_row), std::runtime_error);
  std::istringstream bad_number(std::string(kCsvHeader) +
                                "\ndia,0,x,1,1,,,,,,,0,0,,none,,\n");
  EXPECT_THROW(read_csv(bad_number), std::runtime_error);
}

TEST(Quantize, TwelveSignificantDigits) {
  EXPECT_EQ(quantize(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(quantize(quantize(2.0 / 3.0)), quantize(2.0 / 3.0));
  EXPECT_TRUE(std::isnan(quantize(kMissing)));
}

TEST(Summary, BalancedTrialHasUnitImbalance) {
  std::vector<TrialRow> rows;
  for (int k = 1; k <= 3; ++k) {
    for (int l = 1; l <= 2; ++l) {
      TrialRow r;
      r.algorithm = "dia";
      r.user = k;
      r.stream = l;
      r.sinr = 2.0 * k;
      r.sum_rate = 10.0;
      r.leakage = 0.5;
      r.iters = 4;
      r.converged = true;
      rows.push_back(r);
    }
  }
  const Summary s = summarize(rows);
  ASSERT_EQ(s.records.size(), 1u);
  const SummaryRecord& rec = s.records.front();
  EXPECT_EQ(rec.trials, 1);
  EXPECT_DOUBLE_EQ(rec.imbalance_ratio_of_sums, 1.0);
  EXPECT_DOUBLE_EQ(rec.imbalance_sum_of_ratios, 3.0);
  EXPECT_DOUBLE_EQ(rec.mean_leakage, 1.5);
  EXPECT_DOUBLE_EQ(rec.mean_sum_rate, 10.0);
  EXPECT_DOUBLE_EQ(rec.converged_fraction, 1.0);
  EXPECT_TRUE(std::isnan(rec.pc_imbalance_ratio_of_sums));
  EXPECT_TRUE(s.pc_overhead.empty());
}

TEST(Summary, PowerControlOverhead) {
  ExperimentSpec s = small_spec();
  s.timing = true;
  auto rows = run_experiment(s);
  s.power_control = PowerControl::adhoc;
  const auto pc_rows = run_experiment(s);
  rows.insert(rows.end(), pc_rows.begin(), pc_rows.end());
  const Summary sum = summarize(rows);
  EXPECT_EQ(sum.records.size(), 6u);
  ASSERT_EQ(sum.pc_overhead.count("max-sinr"), 1u);
  EXPECT_GT(sum.pc_overhead.at("max-sinr"), -1.0);
  std::ostringstream os;
  print_summary(os, sum);
  EXPECT_NE(os.str().find("overhead (max-sinr)"), std::string::npos);
}

TEST(Config, ParsesEveryKey) {
  const ExperimentSpec s = parse_experiment_spec(R"(
users: 2
tx_antennas: [3, 4]
rx_antennas: 3
streams: 1
snr_start_db: 5
snr_stop_db: 25
snr_step_db: 5
mc: 7
algorithm: gevd
iters: 12
epsilon: 1e-5
power_control: spca
rate_targets: [1.5, 2.5]
seed: 99
out: result.csv
threads: 2
timing: true
)");
  EXPECT_EQ(s.users, 2);
  EXPECT_EQ(s.tx_antennas, (std::vector<int>{3, 4}));
  EXPECT_EQ(s.rx_antennas, (std::vector<int>{3}));
  EXPECT_EQ(s.snr_stop_db, 25.0);
  EXPECT_EQ(s.mc, 7);
  EXPECT_EQ(s.algorithm, algorithms::Algorithm::gevd);
  EXPECT_EQ(s.iters, 12);
  EXPECT_EQ(s.epsilon, 1e-5);
  EXPECT_EQ(s.power_control, PowerControl::spca);
  EXPECT_EQ(s.rate_targets, (std::vector<double>{1.5, 2.5}));
  EXPECT_EQ(s.seed, 99u);
  EXPECT_EQ(s.out, "result.csv");
  EXPECT_EQ(s.threads, 2);
  EXPECT_TRUE(s.timing);
  EXPECT_NO_THROW(s.validate());
}

TEST(Config, ErrorsAndAuto) {
  EXPECT_THROW(parse_experiment_spec("antennas: 4\n"), ConfigError);
  EXPECT_THROW(parse_experiment_spec("algorithm: zf\n"), ConfigError);
  EXPECT_THROW(parse_experiment_spec("mc: many\n"), ConfigError);
  EXPECT_THROW(parse_experiment_spec("- 1\n- 2\n"), ConfigError);
  ExperimentSpec base;
  base.iters = 4;
  EXPECT_FALSE(parse_experiment_spec("iters: auto\n", base).iters.has_value());
  EXPECT_EQ(parse_experiment_spec("", base).iters, 4);
}

TEST(Config, SettingsOverrideAndFormatRoundTrip) {
  ExperimentSpec s = parse_experiment_spec("mc: 3\nalgorithm: dia\n");
  apply_setting(s, "mc", "8");
  apply_setting(s, "streams", "1,2,1");
  apply_setting(s, "out", "-");
  apply_setting(s, "iters", "auto");
  EXPECT_EQ(s.mc, 8);
  EXPECT_EQ(s.streams, (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(s.out, "-");
  EXPECT_THROW(apply_setting(s, "bogus", "1"), ConfigError);

  const ExperimentSpec again = parse_experiment_spec(format_experiment_spec(s));
  EXPECT_EQ(format_experiment_spec(again), format_experiment_spec(s));
  EXPECT_EQ(again.streams, s.streams);
  EXPECT_EQ(again.algorithm, algorithms::Algorithm::dia);
  EXPECT_EQ(config_keys().size(), 17u);
}

}  // namespace
}  // namespace mimoic
