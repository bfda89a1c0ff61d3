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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mimoic/metrics.hpp"
#include "mimoic/model.hpp"

namespace mimoic::algorithms {

inline constexpr int kDefaultIterationCap = 2000;
inline constexpr double kDefaultEpsilon = 1e-6;

/// When an alternating design stops.
///
/// Iterations count half-steps: one receive (downlink) update and one
/// transmit (uplink) update are two iterations. The epsilon rule stops at
/// iteration n once |R_sum(n) - R_sum(n - 2)| <= epsilon, comparing states of
/// the same phase, or when the cap is reached.
class StoppingRule {
 public:
  enum class Kind { fixed_iterations, epsilon_increment };

  static StoppingRule fixed(int count);
  static StoppingRule epsilon(double epsilon = kDefaultEpsilon, int cap = kDefaultIterationCap);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int count() const { return count_; }
  [[nodiscard]] double epsilon_value() const { return epsilon_; }
  [[nodiscard]] int cap() const { return cap_; }
  [[nodiscard]] int max_iterations() const;

  /// True when the run should end after the last entry of sum_rates.
  [[nodiscard]] bool done(std::span<const double> sum_rates) const;
  /// True when stopping after sum_rates counts as converged.
  [[nodiscard]] bool converged(std::span<const double> sum_rates) const;

  /// "auto" for the epsilon rule, the count otherwise.
  [[nodiscard]] std::string describe() const;

 private:
  StoppingRule(Kind kind, int count, double epsilon, int cap)
      : kind_(kind), count_(count), epsilon_(epsilon), cap_(cap) {}

  Kind kind_;
  int count_;
  double epsilon_;
  int cap_;
};

struct AlgorithmTrace {
  std::vector<double> sum_rate;
  std::vector<double> leakage;
  /// Only filled by min-sum-MSE.
  std::vector<double> sum_mse;
  int iterations = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

struct DesignResult {
  Beamformers bf;
  /// Input powers, or the powers implied by the design (min-sum-MSE).
  StreamPowers powers;
  AlgorithmTrace trace;
};

using IterationObserver =
    std::function<void(int iteration, const Beamformers&, const StreamPowers&)>;

struct RunOptions {
  /// Seed for random_precoders when no initial beamformers are given.
  std::uint64_t seed = 0;
  std::optional<Beamformers> initial;
  IterationObserver on_iteration;
};

enum class Algorithm { dia, max_sinr, max_sinr_modified, gevd, min_sum_mse };
enum class MaxSinrVariant { conventional, modified };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
/// SINR definition used to report stream rates of each scheme.
metrics::FilteringStyle reporting_style(Algorithm algorithm);

// Receive-side updates. Each returns the new V_k for every user given the
// current precoders; applied to reciprocal channels and swapped beamformers
// they produce the transmit-side update.

/// d_k eigenvectors of Q_k with the smallest eigenvalues, ascending.
std::vector<CMatrix> dia_receive_update(const ChannelSet& channels, const Beamformers& bf,
                                        const StreamPowers& powers);

/// v_{k,l} proportional to B^-1 H_kk u_{k,l}, B = B_{k,l} (conventional) or
/// B_k (modified).
std::vector<CMatrix> max_sinr_receive_update(const ChannelSet& channels, const Beamformers& bf,
                                             const StreamPowers& powers, MaxSinrVariant variant,
                                             double noise_var = 1.0);

/// Top-d_k generalized eigenvectors of (R_k, B_k), renormalized to unit
/// columns.
std::vector<CMatrix> gevd_receive_update(const ChannelSet& channels, const Beamformers& bf,
                                         const StreamPowers& powers, double noise_var = 1.0);

DesignResult dia_run(const ChannelSet& channels, const NetworkConfig& config,
                     const StreamPowers& powers, const StoppingRule& stop,
                     const RunOptions& options);
DesignResult max_sinr_run(const ChannelSet& channels, const NetworkConfig& config,
                          const StreamPowers& powers, const StoppingRule& stop,
                          MaxSinrVariant variant, const RunOptions& options);
DesignResult gevd_run(const ChannelSet& channels, const NetworkConfig& config,
                      const StreamPowers& powers, const StoppingRule& stop,
                      const RunOptions& options);

/// Alternating MMSE: receivers are linear MMSE filters, transmitters solve the
/// per-user MMSE problem under ||T_k||_F^2 <= p_k with the multiplier found by
/// bisection. Returns unit-norm directions and the implied stream powers.
DesignResult min_sum_mse_run(const ChannelSet& channels, const NetworkConfig& config,
                             const StreamPowers& powers, const StoppingRule& stop,
                             const RunOptions& options);

/// Dispatch by algorithm tag.
DesignResult run_design(Algorithm algorithm, const ChannelSet& channels,
                        const NetworkConfig& config, const StreamPowers& powers,
                        const StoppingRule& stop, const RunOptions& options);

/// Sum of tr(E_k) for precoders T_k (power included) and receivers W_k.
double sum_mse(const ChannelSet& channels, const std::vector<CMatrix>& precoders,
               const std::vector<CMatrix>& receivers, double noise_var = 1.0);

}  // namespace mimoic::algorithms
