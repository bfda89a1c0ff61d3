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

#include <optional>
#include <vector>

#include "mimoic/model.hpp"
#include "mimoic/numerics.hpp"

namespace mimoic::metrics {

// Covariances below weight each stream (j, s) by its own power p_{j,s}; under
// even allocation that is p_j / d_j.

/// Which terms enter an interference covariance at receiver k.
struct CovarianceScope {
  /// false: Q_k, the sum over interferers j != k only.
  /// true: the sum over every user j including k itself.
  bool include_intra = false;
  /// With include_intra, drops the desired stream l of user k, giving Q_{k,l}.
  std::optional<int> exclude_stream;
};

HermitianMatrix interference_covariance(int k, const ChannelSet& channels, const Beamformers& bf,
                                        const StreamPowers& powers, CovarianceScope scope = {});

/// R_k = sum_l p_{k,l} H_kk u_{k,l} u_{k,l}^H H_kk^H.
HermitianMatrix desired_covariance(int k, const ChannelSet& channels, const Beamformers& bf,
                                   const StreamPowers& powers);

/// R_{k,l} = p_{k,l} H_kk u_{k,l} u_{k,l}^H H_kk^H.
HermitianMatrix stream_covariance(int k, int l, const ChannelSet& channels, const Beamformers& bf,
                                  const StreamPowers& powers);

/// B_k = Q_k + sigma^2 I (inter-user interference plus noise).
HermitianMatrix interference_plus_noise(int k, const ChannelSet& channels, const Beamformers& bf,
                                        const StreamPowers& powers, double noise_var = 1.0);

/// B_{k,l} = Q_{k,l} + sigma^2 I (includes the user's other streams).
HermitianMatrix stream_interference_plus_noise(int k, int l, const ChannelSet& channels,
                                               const Beamformers& bf, const StreamPowers& powers,
                                               double noise_var = 1.0);

/// Separate-filtering SINR: v^H R_{k,l} v / v^H B_{k,l} v.
double sinr_sf(int k, int l, const ChannelSet& channels, const Beamformers& bf,
               const StreamPowers& powers, double noise_var = 1.0);

/// Group-filtering SINR: v^H R_k v / v^H B_k v.
double sinr_gf(int k, int l, const ChannelSet& channels, const Beamformers& bf,
               const StreamPowers& powers, double noise_var = 1.0);

/// Shannon rate log2 det(I + (V^H B_k V)^-1 V^H R_k V), in bits, evaluated
/// on the numerical column space of V_k (relative eigenvalue floor 1e-10 on
/// V^H V). Throws NumericError when V_k is zero.
double user_rate(int k, const ChannelSet& channels, const Beamformers& bf,
                 const StreamPowers& powers, double noise_var = 1.0);

/// log2(1 + sinr).
double stream_rate(double sinr);

/// IL_k = tr(V_k^H Q_k V_k).
double leakage(int k, const ChannelSet& channels, const Beamformers& bf,
               const StreamPowers& powers);

/// tr(V_k^H R_k V_k); the denominator of the relative leakage.
double desired_power(int k, const ChannelSet& channels, const Beamformers& bf,
                     const StreamPowers& powers);

/// Trace quotient tr(V^H R_k V) / tr(V^H B_k V), the per-user average
/// group-filtering SINR when V^H B_k V is a scaled identity.
double avg_sinr_gf(int k, const ChannelSet& channels, const Beamformers& bf,
                   const StreamPowers& powers, double noise_var = 1.0);

/// tr((V^H B V)^-1 (V^H R V)) for an arbitrary receive matrix.
double trace_ratio(const CMatrix& v, const HermitianMatrix& desired,
                   const HermitianMatrix& interference);

enum class FilteringStyle { separate, group };

struct SinrReport {
  /// sinr[k](l), linear.
  std::vector<RVector> sinr;
  FilteringStyle style = FilteringStyle::separate;

  [[nodiscard]] double at(int k, int l) const { return sinr.at(k)(l); }
};

struct RateReport {
  RVector user_rate;
  std::vector<RVector> stream_rate;
  double sum_rate = 0.0;
  double sum_stream_rate = 0.0;
};

SinrReport sinr_report(const ChannelSet& channels, const Beamformers& bf,
                       const StreamPowers& powers, FilteringStyle style, double noise_var = 1.0);

/// Shannon user rates plus stream rates derived from the given SINRs.
RateReport rate_report(const ChannelSet& channels, const Beamformers& bf,
                       const StreamPowers& powers, const SinrReport& sinr, double noise_var = 1.0);

/// Sum of user rates.
double sum_rate(const ChannelSet& channels, const Beamformers& bf, const StreamPowers& powers,
                double noise_var = 1.0);

/// Sum over users and streams of log2(1 + SINR).
double sum_stream_rate(const SinrReport& report);

/// Sum of IL_k over all users.
double total_leakage(const ChannelSet& channels, const Beamformers& bf, const StreamPowers& powers);

/// Sum of IL_k over sum of tr(V_k^H R_k V_k).
double relative_leakage(const ChannelSet& channels, const Beamformers& bf,
                        const StreamPowers& powers);

/// Second-to-first stream SINR comparisons across users (needs d_k >= 2).
struct Imbalance {
  /// (sum_k SINR_{k,2}) / (sum_k SINR_{k,1}).
  double ratio_of_sums = 0.0;
  /// sum_k SINR_{k,2} / SINR_{k,1}.
  double sum_of_ratios = 0.0;
};

/// Throws std::domain_error for a user with fewer than two streams or a zero
/// denominator.
Imbalance imbalance_ratio(const SinrReport& report);

/// Per-user SINR_{k,2} / SINR_{k,1}.
RVector per_user_imbalance(const SinrReport& report);

}  // namespace mimoic::metrics
