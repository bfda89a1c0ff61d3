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

#include "mimoic/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mimoic::power_control {

double delta(int k, int l, const ChannelSet& channels, const Beamformers& bf,
             const StreamPowers& powers, double noise_var) {
  const CVector v = bf.rx.at(k).col(l);
  const CVector h = channels.link(k, k) * bf.tx.at(k).col(l);
  const double gain = std::norm(v.dot(h));
  if (!(gain > 0.0)) {
    std::ostringstream msg;
    msg << "delta: stream (" << k << ", " << l << ") has zero effective desired gain";
    throw NumericError(msg.str());
  }
  const HermitianMatrix b = metrics::interference_plus_noise(k, channels, bf, powers, noise_var);
  return (v.adjoint() * b.matrix() * v)(0, 0).real() / gain;
}

std::vector<RVector> delta_all(const ChannelSet& channels, const Beamformers& bf,
                               const StreamPowers& powers, double noise_var) {
  std::vector<RVector> out;
  out.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const CMatrix& v = bf.rx.at(k);
    const CMatrix gains = v.adjoint() * channels.link(k, k) * bf.tx.at(k);
    const HermitianMatrix b = metrics::interference_plus_noise(k, channels, bf, powers, noise_var);
    const CMatrix bv = b.matrix() * v;
    RVector d(v.cols());
    for (Eigen::Index l = 0; l < v.cols(); ++l) {
      const double gain = std::norm(gains(l, l));
      if (!(gain > 0.0)) {
        std::ostringstream msg;
        msg << "delta: stream (" << k << ", " << l << ") has zero effective desired gain";
        throw NumericError(msg.str());
      }
      d(l) = v.col(l).dot(bv.col(l)).real() / gain;
    }
    out.push_back(std::move(d));
  }
  return out;
}

metrics::SinrReport power_consistent_sinr(const ChannelSet& channels, const Beamformers& bf,
                                          const StreamPowers& powers, double noise_var) {
  const std::vector<RVector> d = delta_all(channels, bf, powers, noise_var);
  metrics::SinrReport out;
  out.style = metrics::FilteringStyle::group;
  for (std::size_t k = 0; k < d.size(); ++k) {
    out.sinr.push_back(powers.per_user[k].cwiseQuotient(d[k]));
  }
  return out;
}

double pairwise_spread(const std::vector<RVector>& sinr) {
  double total = 0.0;
  for (const RVector& s : sinr) {
    for (Eigen::Index m = 0; m < s.size(); ++m) {
      for (Eigen::Index n = 0; n < s.size(); ++n) {
        if (m != n) total += std::abs(s(m) - s(n));
      }
    }
  }
  return total;
}

namespace {

// Serves streams of each user from the smallest delta upward, each at
// Gamma_k * delta capped by what is left of the budget.
StreamPowers greedy_allocation(const std::vector<RVector>& deltas, const RVector& target,
                               const NetworkConfig& config) {
  StreamPowers out;
  out.per_user.reserve(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const RVector& d = deltas[k];
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&d](Eigen::Index a, Eigen::Index b) { return d(a) < d(b); });
    RVector p = RVector::Zero(d.size());
    double used = 0.0;
    const double budget = config.power[k];
    for (Eigen::Index y : order) {
      p(y) = std::max(0.0, std::min(target(static_cast<Eigen::Index>(k)) * d(y), budget - used));
      used += p(y);
    }
    out.per_user.push_back(std::move(p));
  }
  return out;
}

double l1_change(const StreamPowers& a, const StreamPowers& b) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.per_user.size(); ++k) {
    total += (a.per_user[k] - b.per_user[k]).cwiseAbs().sum();
  }
  return total;
}

}  // namespace

DpcaResult adhoc_dpca(const ChannelSet& channels, const Beamformers& bf,
                      const NetworkConfig& config, const metrics::SinrReport& initial_sinr,
                      double epsilon, DpcaCaps caps) {
  config.validate();
  channels.check_against(config);
  if (!(epsilon > 0.0) || caps.outer_max < 1 || caps.inner_max < 1) {
    throw ConfigError("adhoc_dpca: epsilon and caps must be positive");
  }
  if (initial_sinr.sinr.size() != static_cast<std::size_t>(config.users)) {
    throw ConfigError("adhoc_dpca: initial SINR report does not match the user count");
  }

  const StreamPowers even = StreamPowers::even(config);
  std::vector<RVector> current = initial_sinr.sinr;
  DpcaResult result;
  result.powers = even;

  for (int outer = 1; outer <= caps.outer_max; ++outer) {
    DpcaOuterStep step;
    step.target.resize(config.users);
    for (int k = 0; k < config.users; ++k) step.target(k) = current[k].mean();

    StreamPowers previous = even;
    for (int inner = 1; inner <= caps.inner_max; ++inner) {
      const std::vector<RVector> d = delta_all(channels, bf, previous, config.noise_var);
      StreamPowers next = greedy_allocation(d, step.target, config);
      const double change = l1_change(next, previous);
      previous = std::move(next);
      step.inner_iterations = inner;
      if (change <= epsilon) {
        step.inner_converged = true;
        break;
      }
    }

    current = power_consistent_sinr(channels, bf, previous, config.noise_var).sinr;
    step.sinr = current;
    step.spread = pairwise_spread(current);
    result.powers = std::move(previous);
    result.trace.push_back(std::move(step));
    if (result.trace.back().spread <= epsilon) {
      result.converged = true;
      break;
    }
  }
  result.sinr.style = metrics::FilteringStyle::group;
  result.sinr.sinr = current;
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// V (V^H B V)^-1/2, so that V^H B V = I.
CMatrix b_orthonormalize(const CMatrix& v, const HermitianMatrix& b) {
  const EigResult eig = hermitian_eig_sorted(b.congruence(v));
  if (!(eig.values.minCoeff() > 0.0)) {
    throw NumericError("B-orthonormalization: receive matrix is rank deficient");
  }
  const RVector inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  return v * eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

UserInterferenceFunction::UserInterferenceFunction(const ChannelSet& channels,
                                                   const Beamformers& bf,
                                                   const NetworkConfig& config,
                                                   const RVector& rate_targets,
                                                   const RVector& reference_power) {
  config.validate();
  channels.check_against(config);
  const int users = config.users;
  if (rate_targets.size() != users || reference_power.size() != users) {
    throw ConfigError("interference function: rate targets and powers need one entry per user");
  }
  if ((rate_targets.array() < 0.0).any()) {
    throw ConfigError("interference function: rate targets must be nonnegative");
  }
  streams_ = config.streams;
  gamma_ = rate_targets.unaryExpr([](double r) { return std::exp2(r) - 1.0; });
  noise_term_.resize(users);
  desired_gain_.resize(users);

  NetworkConfig reference = config;
  for (int k = 0; k < users; ++k) reference.power[k] = reference_power(k);
  const StreamPowers ref_powers = StreamPowers::even(reference);

  for (int k = 0; k < users; ++k) {
    const HermitianMatrix b =
        metrics::interference_plus_noise(k, channels, bf, ref_powers, config.noise_var);
    receivers_.push_back(b_orthonormalize(bf.rx.at(k), b));
  }
  for (int k = 0; k < users; ++k) {
    const CMatrix& v = receivers_[k];
    noise_term_(k) = config.noise_var * v.squaredNorm();
    RVector c = RVector::Zero(users);
    for (int j = 0; j < users; ++j) {
      const double g = (v.adjoint() * channels.link(k, j) * bf.tx.at(j)).squaredNorm();
      if (j == k) {
        desired_gain_(k) = g;
      } else {
        c(j) = g / config.streams[j];
      }
    }
    if (!(desired_gain_(k) > 0.0)) {
      std::ostringstream msg;
      msg << "interference function: user " << k << " has zero effective desired gain";
      throw NumericError(msg.str());
    }
    coupling_.push_back(std::move(c));
  }
}

RVector UserInterferenceFunction::operator()(const RVector& power) const {
  RVector out(gamma_.size());
  for (Eigen::Index k = 0; k < gamma_.size(); ++k) {
    const double interference = noise_term_(k) + coupling_[k].dot(power);
    out(k) = gamma_(k) * interference / desired_gain_(k);
  }
  return out;
}

double UserInterferenceFunction::avg_sinr(int k, const RVector& power) const {
  const double interference = noise_term_(k) + coupling_[k].dot(power);
  return power(k) / streams_[k] * desired_gain_(k) / interference;
}

SpcaResult user_fairness_spca(const ChannelSet& channels, const Beamformers& bf,
                              const NetworkConfig& config, const RVector& rate_targets,
                              SpcaCaps caps) {
  RVector reference(config.users);
  for (int k = 0; k < config.users; ++k) reference(k) = config.power.at(k);
  const UserInterferenceFunction interference(channels, bf, config, rate_targets, reference);

  SpcaResult result;
  result.receivers = interference.receivers();
  RVector p = RVector::Zero(config.users);
  for (int it = 1; it <= caps.max_iterations; ++it) {
    const RVector next = interference(p);
    const double change = (next - p).cwiseAbs().sum();
    p = next;
    result.iterations = it;
    if (!p.allFinite() || p.maxCoeff() > caps.ceiling) {
      std::ostringstream msg;
      msg << "user_fairness_spca: rate targets infeasible, power exceeded " << caps.ceiling
          << " after " << it << " iterations";
      throw InfeasibleTarget(msg.str());
    }
    if (change <= caps.epsilon) {
      result.power = p;
      return result;
    }
  }
  std::ostringstream msg;
  msg << "user_fairness_spca: no fixed point within " << caps.max_iterations << " iterations";
  throw InfeasibleTarget(msg.str());
}

}  // namespace mimoic::power_control
