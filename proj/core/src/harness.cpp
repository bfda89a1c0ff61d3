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

#include "mimoic/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "mimoic/metrics.hpp"
#include "mimoic/power_control.hpp"

namespace mimoic::harness {

std::string_view to_string(PowerControl pc) {
  switch (pc) {
    case PowerControl::none:
      return "none";
    case PowerControl::adhoc:
      return "adhoc";
    case PowerControl::spca:
      return "spca";
  }
  return "none";
}

std::optional<PowerControl> parse_power_control(std::string_view name) {
  for (PowerControl pc : {PowerControl::none, PowerControl::adhoc, PowerControl::spca}) {
    if (to_string(pc) == name) return pc;
  }
  return std::nullopt;
}

namespace {

int per_user(const std::vector<int>& values, int k) {
  return values.size() == 1 ? values.front() : values.at(static_cast<std::size_t>(k));
}

}  // namespace

void ExperimentSpec::validate() const {
  std::ostringstream msg;
  if (users < 1) {
    throw ConfigError("users must be >= 1");
  }
  for (const auto& [name, values] : {std::pair{"tx_antennas", &tx_antennas},
                                     std::pair{"rx_antennas", &rx_antennas},
                                     std::pair{"streams", &streams}}) {
    if (values->size() != 1 && values->size() != static_cast<std::size_t>(users)) {
      msg << name << " needs 1 or " << users << " entries, got " << values->size();
      throw ConfigError(msg.str());
    }
  }
  if (!(snr_step_db > 0.0)) {
    throw ConfigError("snr_step_db must be > 0");
  }
  if (snr_stop_db < snr_start_db) {
    throw ConfigError("snr grid is empty: snr_stop_db < snr_start_db");
  }
  if (mc < 1) {
    throw ConfigError("mc must be >= 1");
  }
  if (iters && *iters < 1) {
    throw ConfigError("iters must be a positive integer or auto");
  }
  if (!(epsilon > 0.0)) {
    throw ConfigError("epsilon must be > 0");
  }
  if (threads < 1) {
    throw ConfigError("threads must be >= 1");
  }
  if (power_control == PowerControl::spca) {
    if (rate_targets.size() != 1 && rate_targets.size() != static_cast<std::size_t>(users)) {
      msg << "power_control spca needs rate_targets with 1 or " << users << " entries";
      throw ConfigError(msg.str());
    }
  }
  network(snr_start_db).validate();
}

std::vector<double> ExperimentSpec::snr_grid() const {
  std::vector<double> grid;
  const double tolerance = 1e-9 * std::max(1.0, std::abs(snr_stop_db));
  for (std::size_t i = 0;; ++i) {
    const double snr = snr_start_db + static_cast<double>(i) * snr_step_db;
    if (snr > snr_stop_db + tolerance) break;
    grid.push_back(snr);
  }
  return grid;
}

NetworkConfig ExperimentSpec::network(double snr_db) const {
  NetworkConfig cfg;
  cfg.users = users;
  const double power = snr_to_power(snr_db);
  for (int k = 0; k < users; ++k) {
    cfg.tx_antennas.push_back(per_user(tx_antennas, k));
    cfg.rx_antennas.push_back(per_user(rx_antennas, k));
    cfg.streams.push_back(per_user(streams, k));
    cfg.power.push_back(power);
  }
  return cfg;
}

algorithms::StoppingRule ExperimentSpec::stopping() const {
  return iters ? algorithms::StoppingRule::fixed(*iters)
               : algorithms::StoppingRule::epsilon(epsilon, algorithms::kDefaultIterationCap);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t mc_index) {
  return mix_seed(master, snr_index, mc_index);
}

bool operator==(const TrialRow& a, const TrialRow& b) {
  auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  return a.algorithm == b.algorithm && a.mc == b.mc && same(a.snr_db, b.snr_db) &&
         a.user == b.user && a.stream == b.stream && same(a.sinr, b.sinr) &&
         same(a.rate, b.rate) && same(a.user_rate, b.user_rate) &&
         same(a.sum_rate, b.sum_rate) && same(a.sum_stream_rate, b.sum_stream_rate) &&
         same(a.leakage, b.leakage) && a.iters == b.iters && a.converged == b.converged &&
         same(a.wall_ms, b.wall_ms) && a.pc == b.pc && same(a.pc_sinr, b.pc_sinr) &&
         same(a.pc_rate, b.pc_rate);
}

namespace {

struct PowerControlOutcome {
  std::vector<RVector> sinr;
  bool converged = true;
};

PowerControlOutcome apply_power_control(const ExperimentSpec& spec, const ChannelSet& channels,
                                        const NetworkConfig& config,
                                        const algorithms::DesignResult& design,
                                        const metrics::SinrReport& sinr) {
  PowerControlOutcome out;
  if (spec.power_control == PowerControl::adhoc) {
    const power_control::DpcaResult dpca =
        power_control::adhoc_dpca(channels, design.bf, config, sinr, spec.epsilon);
    out.sinr = dpca.sinr.sinr;
    out.converged = dpca.converged;
  } else if (spec.power_control == PowerControl::spca) {
    RVector targets(config.users);
    for (int k = 0; k < config.users; ++k) {
      targets(k) = spec.rate_targets.size() == 1 ? spec.rate_targets.front()
                                                 : spec.rate_targets[static_cast<std::size_t>(k)];
    }
    power_control::SpcaCaps caps;
    caps.epsilon = spec.epsilon;
    const power_control::SpcaResult spca =
        power_control::user_fairness_spca(channels, design.bf, config, targets, caps);
    NetworkConfig at_fixed_point = config;
    for (int k = 0; k < config.users; ++k) at_fixed_point.power[k] = spca.power(k);
    Beamformers bf = design.bf;
    bf.rx = spca.receivers;
    for (CMatrix& v : bf.rx) normalize_columns(v);
    out.sinr = metrics::sinr_report(channels, bf, StreamPowers::even(at_fixed_point),
                                    metrics::FilteringStyle::group, config.noise_var)
                   .sinr;
  }
  return out;
}

std::vector<TrialRow> run_trial(const ExperimentSpec& spec, std::size_t snr_index, double snr_db,
                                int mc_index) {
  const auto start = std::chrono::steady_clock::now();
  const NetworkConfig config = spec.network(snr_db);
  const std::string algorithm(algorithms::to_string(spec.algorithm));
  const std::string pc(to_string(spec.power_control));

  std::vector<TrialRow> rows;
  for (int k = 0; k < config.users; ++k) {
    for (int l = 0; l < config.streams[k]; ++l) {
      TrialRow row;
      row.algorithm = algorithm;
      row.mc = mc_index;
      row.snr_db = quantize(snr_db);
      row.user = k + 1;
      row.stream = l + 1;
      row.pc = pc;
      rows.push_back(std::move(row));
    }
  }

  try {
    const std::uint64_t seed = trial_seed(spec.seed, snr_index, static_cast<std::size_t>(mc_index));
    const ChannelSet channels = sample_channels(config, mix_seed(seed, 1));
    algorithms::RunOptions options;
    options.seed = mix_seed(seed, 2);
    const algorithms::DesignResult design =
        algorithms::run_design(spec.algorithm, channels, config, StreamPowers::even(config),
                               spec.stopping(), options);
    const metrics::SinrReport sinr =
        metrics::sinr_report(channels, design.bf, design.powers,
                             algorithms::reporting_style(spec.algorithm), config.noise_var);
    const metrics::RateReport rates =
        metrics::rate_report(channels, design.bf, design.powers, sinr, config.noise_var);

    bool converged = design.trace.converged;
    PowerControlOutcome pc_outcome;
    std::string pc_error;
    if (spec.power_control != PowerControl::none) {
      try {
        pc_outcome = apply_power_control(spec, channels, config, design, sinr);
        converged = converged && pc_outcome.converged;
      } catch (const std::exception& e) {
        converged = false;
        pc_error = e.what();
      }
    }
    const double wall =
        spec.timing ? std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count()
                    : kMissing;

    std::size_t i = 0;
    for (int k = 0; k < config.users; ++k) {
      const double user_leakage = metrics::leakage(k, channels, design.bf, design.powers);
      for (int l = 0; l < config.streams[k]; ++l, ++i) {
        TrialRow& row = rows[i];
        row.sinr = quantize(sinr.at(k, l));
        row.rate = quantize(rates.stream_rate[k](l));
        row.user_rate = quantize(rates.user_rate(k));
        row.sum_rate = quantize(rates.sum_rate);
        row.sum_stream_rate = quantize(rates.sum_stream_rate);
        row.leakage = quantize(user_leakage);
        row.iters = design.trace.iterations;
        row.converged = converged;
        row.wall_ms = quantize(wall);
        if (!pc_outcome.sinr.empty()) {
          const double s = pc_outcome.sinr[k](l);
          row.pc_sinr = quantize(s);
          row.pc_rate = quantize(metrics::stream_rate(s));
        }
        row.error = pc_error;
      }
    }
  } catch (const std::exception& e) {
    for (TrialRow& row : rows) {
      row.converged = false;
      row.error = e.what();
    }
  }
  return rows;
}

}  // namespace

std::vector<TrialRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> grid = spec.snr_grid();
  const std::size_t total = grid.size() * static_cast<std::size_t>(spec.mc);
  std::vector<std::vector<TrialRow>> slots(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t snr_index = job / static_cast<std::size_t>(spec.mc);
      const int mc_index = static_cast<int>(job % static_cast<std::size_t>(spec.mc));
      slots[job] = run_trial(spec, snr_index, grid[snr_index], mc_index);
    }
  };
  const int workers = std::min<int>(spec.threads, static_cast<int>(total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<TrialRow> rows;
  for (auto& slot : slots) {
    std::move(slot.begin(), slot.end(), std::back_inserter(rows));
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

struct TrialView {
  std::vector<const TrialRow*> rows;
};

double mean_of(const std::vector<double>& values) {
  double total = 0.0;
  int n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    total += v;
    ++n;
  }
  return n ? total / n : kMissing;
}

std::optional<metrics::Imbalance> trial_imbalance(const TrialView& trial, bool post_pc) {
  std::map<int, std::map<int, double>> sinr;
  for (const TrialRow* row : trial.rows) {
    const double s = post_pc ? row->pc_sinr : row->sinr;
    if (std::isnan(s)) return std::nullopt;
    sinr[row->user][row->stream] = s;
  }
  metrics::SinrReport report;
  for (const auto& [user, streams] : sinr) {
    RVector v(static_cast<Eigen::Index>(streams.size()));
    Eigen::Index i = 0;
    for (const auto& [stream, value] : streams) v(i++) = value;
    report.sinr.push_back(std::move(v));
  }
  try {
    return metrics::imbalance_ratio(report);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

}  // namespace

Summary summarize(const std::vector<TrialRow>& rows) {
  using GroupKey = std::tuple<std::string, std::string, double>;
  std::map<GroupKey, std::map<int, TrialView>> groups;
  for (const TrialRow& row : rows) {
    groups[{row.algorithm, row.pc, row.snr_db}][row.mc].rows.push_back(&row);
  }

  Summary summary;
  struct WallTotal {
    double total = 0.0;
    bool missing = false;
  };
  std::map<std::pair<std::string, std::string>, WallTotal> wall_totals;
  for (const auto& [key, trials] : groups) {
    SummaryRecord rec;
    std::tie(rec.algorithm, rec.pc, rec.snr_db) = key;
    rec.trials = static_cast<int>(trials.size());
    std::vector<double> sum_rate, sum_stream, leak, ros, sor, pc_ros, iters, conv, wall;
    for (const auto& [mc, trial] : trials) {
      const TrialRow& first = *trial.rows.front();
      sum_rate.push_back(first.sum_rate);
      sum_stream.push_back(first.sum_stream_rate);
      std::map<int, double> per_user_leakage;
      for (const TrialRow* r : trial.rows) per_user_leakage[r->user] = r->leakage;
      double total_leak = 0.0;
      for (const auto& [user, value] : per_user_leakage) total_leak += value;
      leak.push_back(total_leak);
      if (auto imb = trial_imbalance(trial, false)) {
        ros.push_back(imb->ratio_of_sums);
        sor.push_back(imb->sum_of_ratios);
      }
      if (auto imb = trial_imbalance(trial, true)) pc_ros.push_back(imb->ratio_of_sums);
      iters.push_back(first.iters);
      conv.push_back(first.converged ? 1.0 : 0.0);
      wall.push_back(first.wall_ms);

      WallTotal& wt = wall_totals[{rec.algorithm, rec.pc}];
      if (std::isnan(first.wall_ms)) {
        wt.missing = true;
      } else {
        wt.total += first.wall_ms;
      }
    }
    rec.mean_sum_rate = mean_of(sum_rate);
    rec.mean_sum_stream_rate = mean_of(sum_stream);
    rec.mean_leakage = mean_of(leak);
    rec.imbalance_ratio_of_sums = mean_of(ros);
    rec.imbalance_sum_of_ratios = mean_of(sor);
    rec.pc_imbalance_ratio_of_sums = mean_of(pc_ros);
    rec.mean_iterations = mean_of(iters);
    rec.converged_fraction = mean_of(conv);
    rec.mean_wall_ms = mean_of(wall);
    summary.records.push_back(std::move(rec));
  }

  for (const auto& [key, value] : wall_totals) {
    const auto& [algorithm, pc] = key;
    if (pc != "adhoc" || value.missing) continue;
    const auto base = wall_totals.find({algorithm, "none"});
    if (base == wall_totals.end() || base->second.missing || !(base->second.total > 0.0)) {
      continue;
    }
    summary.pc_overhead[algorithm] = value.total / base->second.total - 1.0;
  }
  return summary;
}

void print_summary(std::ostream& os, const Summary& summary) {
  os << std::left << std::setw(14) << "algorithm" << std::setw(7) << "pc" << std::right
     << std::setw(8) << "snr_db" << std::setw(7) << "trials" << std::setw(12) << "sum_rate"
     << std::setw(12) << "sum_stream" << std::setw(12) << "leakage" << std::setw(11)
     << "imb_ros" << std::setw(11) << "imb_sor" << std::setw(11) << "pc_imb" << std::setw(9)
     << "iters" << std::setw(7) << "conv" << std::setw(11) << "wall_ms" << "\n";
  const auto flags = os.flags();
  const auto precision = os.precision(4);
  for (const SummaryRecord& r : summary.records) {
    os << std::left << std::setw(14) << r.algorithm << std::setw(7) << r.pc << std::right
       << std::setw(8) << r.snr_db << std::setw(7) << r.trials << std::setw(12)
       << r.mean_sum_rate << std::setw(12) << r.mean_sum_stream_rate << std::setw(12)
       << r.mean_leakage << std::setw(11) << r.imbalance_ratio_of_sums << std::setw(11)
       << r.imbalance_sum_of_ratios << std::setw(11) << r.pc_imbalance_ratio_of_sums
       << std::setw(9) << r.mean_iterations << std::setw(7) << r.converged_fraction
       << std::setw(11) << r.mean_wall_ms << "\n";
  }
  for (const auto& [algorithm, overhead] : summary.pc_overhead) {
    os << "adhoc power control overhead (" << algorithm << "): " << overhead * 100.0 << "%\n";
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace mimoic::harness
