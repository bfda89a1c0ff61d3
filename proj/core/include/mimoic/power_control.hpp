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

#include <stdexcept>
#include <vector>

#include "mimoic/metrics.hpp"
#include "mimoic/model.hpp"

namespace mimoic::power_control {

/// Power stream (k, l) needs per unit SINR with every other stream fixed:
/// v^H B_k v / v^H R'_{k,l} v, where B_k holds inter-user interference at the
/// given powers plus noise and R'_{k,l} = H_kk u u^H H_kk^H carries no power.
/// Throws NumericError when the effective desired gain is zero.
double delta(int k, int l, const ChannelSet& channels, const Beamformers& bf,
             const StreamPowers& powers, double noise_var = 1.0);

/// delta for every stream.
std::vector<RVector> delta_all(const ChannelSet& channels, const Beamformers& bf,
                               const StreamPowers& powers, double noise_var = 1.0);

/// SINR p_{k,l} / delta_{k,l}(p) for every stream, i.e. the group-filtering
/// SINR with intra-user terms treated as non-interfering per stream.
metrics::SinrReport power_consistent_sinr(const ChannelSet& channels, const Beamformers& bf,
                                          const StreamPowers& powers, double noise_var = 1.0);

struct DpcaCaps {
  int outer_max = 50;
  int inner_max = 500;
};

/// One pass of the outer loop.
struct DpcaOuterStep {
  RVector target;                      ///< Gamma_k used in this pass
  int inner_iterations = 0;
  bool inner_converged = false;
  std::vector<RVector> sinr;           ///< SINR' after the pass
  double spread = 0.0;                 ///< sum_k sum_{m != n} |SINR'_m - SINR'_n|
};

struct DpcaResult {
  StreamPowers powers;
  metrics::SinrReport sinr;
  std::vector<DpcaOuterStep> trace;
  bool converged = false;
};

/// Ad-hoc sub-stream fairness power control on fixed beamformers.
///
/// Each outer pass restarts from even powers with Gamma_k set to the mean of
/// the current SINR'_k, then iterates (Jacobi style) until the L1 power change
/// is at most epsilon: recompute delta with the previous powers and give each
/// user's streams min(Gamma_k delta, remaining budget) from the smallest delta
/// upward. SINR' is then re-evaluated as p / delta(p). The run ends when the
/// summed pairwise SINR' differences fall to epsilon or outer_max is reached.
DpcaResult adhoc_dpca(const ChannelSet& channels, const Beamformers& bf,
                      const NetworkConfig& config, const metrics::SinrReport& initial_sinr,
                      double epsilon = 1e-6, DpcaCaps caps = {});

/// Sum over users and ordered stream pairs of |SINR_m - SINR_n|.
double pairwise_spread(const std::vector<RVector>& sinr);

// ---------------------------------------------------------------------------
// User-level fairness through a standard interference function.

class InfeasibleTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// I_k(p) = (2^{R_k} - 1) tr(V_k^H B_k(p) V_k) / tr(V_k^H H_kk U_k U_k^H H_kk^H V_k)
/// where B_k(p) = I + sum_{j != k} (p_j / d_j) H_kj U_j U_j^H H_kj^H.
///
/// The receive matrices are fixed at construction; they are B-orthonormalized
/// against B_k evaluated at the reference powers so the trace quotient equals
/// the mean stream SINR there.
class UserInterferenceFunction {
 public:
  UserInterferenceFunction(const ChannelSet& channels, const Beamformers& bf,
                           const NetworkConfig& config, const RVector& rate_targets,
                           const RVector& reference_power);

  /// I(p) for all users.
  [[nodiscard]] RVector operator()(const RVector& power) const;

  [[nodiscard]] const std::vector<CMatrix>& receivers() const { return receivers_; }
  [[nodiscard]] int users() const { return static_cast<int>(gamma_.size()); }
  /// Trace-quotient average SINR of user k at per-user powers p.
  [[nodiscard]] double avg_sinr(int k, const RVector& power) const;

 private:
  RVector gamma_;
  RVector noise_term_;                 ///< tr(V^H V)
  RVector desired_gain_;               ///< tr(V^H H U U^H H^H V)
  std::vector<RVector> coupling_;      ///< coupling_[k](j) = tr(V_k^H H_kj U_j U_j^H H_kj^H V_k) / d_j
  std::vector<CMatrix> receivers_;
  std::vector<int> streams_;
};

struct SpcaCaps {
  double epsilon = 1e-6;
  int max_iterations = 10000;
  double ceiling = 1e12;
};

struct SpcaResult {
  RVector power;                       ///< per-user total power
  int iterations = 0;
  std::vector<CMatrix> receivers;      ///< B-orthonormalized V_k used by I(p)
};

/// Fixed point p = I(p) from p = 0. Throws InfeasibleTarget once any power
/// passes the ceiling or the iteration cap is hit without convergence.
SpcaResult user_fairness_spca(const ChannelSet& channels, const Beamformers& bf,
                              const NetworkConfig& config, const RVector& rate_targets,
                              SpcaCaps caps = {});

}  // namespace mimoic::power_control
