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
#include <stdexcept>
#include <vector>

#include "mimoic/numerics.hpp"

namespace mimoic {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimensions and budgets of a K-user MIMO interference channel.
///
/// User k transmits d_k streams from M_k antennas to its own receiver with
/// N_k antennas. power[k] is the total linear transmit budget of user k; with
/// unit noise variance it equals the per-user SNR.
struct NetworkConfig {
  int users = 0;
  std::vector<int> tx_antennas;
  std::vector<int> rx_antennas;
  std::vector<int> streams;
  std::vector<double> power;
  double noise_var = 1.0;

  /// Same M, N, d and budget for every user.
  static NetworkConfig uniform(int users, int tx, int rx, int streams, double power);

  /// Throws ConfigError when any invariant fails.
  void validate() const;

  [[nodiscard]] int total_streams() const;

  /// Dimensions of the dual network: transmit and receive antennas swap.
  [[nodiscard]] NetworkConfig reciprocal() const;
};

/// K x K grid of channel matrices; link(k, l) is H_kl, the N_k x M_l channel
/// from transmitter l to receiver k.
class ChannelSet {
 public:
  ChannelSet() = default;
  explicit ChannelSet(int users);

  [[nodiscard]] int users() const { return users_; }
  [[nodiscard]] const CMatrix& link(int rx, int tx) const { return links_[index(rx, tx)]; }
  CMatrix& link(int rx, int tx) { return links_[index(rx, tx)]; }

  /// Channels of the dual network: link(k, j) of the result is
  /// link(j, k)^H of this set.
  [[nodiscard]] ChannelSet reciprocal() const;

  /// Throws ConfigError if any link disagrees with the config dimensions.
  void check_against(const NetworkConfig& config) const;

  friend bool operator==(const ChannelSet& a, const ChannelSet& b);

 private:
  [[nodiscard]] std::size_t index(int rx, int tx) const;

  int users_ = 0;
  std::vector<CMatrix> links_;
};

/// Transmit precoders U_k (M_k x d_k) and receive filters V_k (N_k x d_k).
/// Every column is a unit-norm direction; power lives in StreamPowers.
struct Beamformers {
  std::vector<CMatrix> tx;
  std::vector<CMatrix> rx;

  /// Roles swapped for the dual network.
  [[nodiscard]] Beamformers reciprocal() const { return Beamformers{rx, tx}; }

  /// Largest deviation of any column norm from one, across U and V.
  [[nodiscard]] double max_column_norm_defect() const;
};

/// Per-stream transmit powers p_{k,l}; entry k has length d_k.
struct StreamPowers {
  std::vector<RVector> per_user;

  /// p_{k,l} = power_k / d_k.
  static StreamPowers even(const NetworkConfig& config);

  [[nodiscard]] double user_total(int k) const { return per_user.at(k).sum(); }
  [[nodiscard]] double at(int k, int l) const { return per_user.at(k)(l); }

  /// Throws ConfigError on negative entries or a budget overrun beyond 1e-9.
  void check_budget(const NetworkConfig& config) const;
};

/// I.i.d. CN(0, 1) entries; deterministic for a given seed.
ChannelSet sample_channels(const NetworkConfig& config, std::uint64_t seed);

/// Orthonormalized Gaussian precoders; receive filters are zero placeholders
/// until the first receive update.
Beamformers random_precoders(const NetworkConfig& config, std::uint64_t seed);

/// 10^(snr_db / 10).
double snr_to_power(double snr_db);

/// Mixes values into a well-spread 64-bit seed (splitmix64 finalizer chain).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace mimoic
