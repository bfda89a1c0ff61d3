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

#include "mimoic/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mimoic::algorithms {

StoppingRule StoppingRule::fixed(int count) {
  if (count < 1) {
    throw ConfigError("fixed iteration count must be >= 1");
  }
  return StoppingRule(Kind::fixed_iterations, count, 0.0, count);
}

StoppingRule StoppingRule::epsilon(double epsilon, int cap) {
  if (!(epsilon > 0.0)) {
    throw ConfigError("stopping epsilon must be > 0");
  }
  if (cap < 2) {
    throw ConfigError("iteration cap must be >= 2");
  }
  return StoppingRule(Kind::epsilon_increment, 0, epsilon, cap);
}

int StoppingRule::max_iterations() const {
  return kind_ == Kind::fixed_iterations ? count_ : cap_;
}

bool StoppingRule::converged(std::span<const double> sum_rates) const {
  const auto n = sum_rates.size();
  if (kind_ == Kind::fixed_iterations) {
    return n >= static_cast<std::size_t>(count_);
  }
  return n >= 3 && std::abs(sum_rates[n - 1] - sum_rates[n - 3]) <= epsilon_;
}

bool StoppingRule::done(std::span<const double> sum_rates) const {
  return converged(sum_rates) || sum_rates.size() >= static_cast<std::size_t>(max_iterations());
}

std::string StoppingRule::describe() const {
  return kind_ == Kind::fixed_iterations ? std::to_string(count_) : std::string("auto");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::dia:
      return "dia";
    case Algorithm::max_sinr:
      return "max-sinr";
    case Algorithm::max_sinr_modified:
      return "max-sinr-mod";
    case Algorithm::gevd:
      return "gevd";
    case Algorithm::min_sum_mse:
      return "min-sum-mse";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::dia, Algorithm::max_sinr, Algorithm::max_sinr_modified,
                      Algorithm::gevd, Algorithm::min_sum_mse}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

metrics::FilteringStyle reporting_style(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::max_sinr:
    case Algorithm::max_sinr_modified:
      return metrics::FilteringStyle::separate;
    default:
      return metrics::FilteringStyle::group;
  }
}

std::vector<CMatrix> dia_receive_update(const ChannelSet& channels, const Beamformers& bf,
                                        const StreamPowers& powers) {
  std::vector<CMatrix> out;
  out.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const auto d = bf.tx.at(k).cols();
    const EigResult eig =
        hermitian_eig_sorted(metrics::interference_covariance(k, channels, bf, powers));
    out.push_back(eig.vectors.leftCols(d));
  }
  return out;
}

std::vector<CMatrix> max_sinr_receive_update(const ChannelSet& channels, const Beamformers& bf,
                                             const StreamPowers& powers, MaxSinrVariant variant,
                                             double noise_var) {
  std::vector<CMatrix> out;
  out.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const CMatrix effective = channels.link(k, k) * bf.tx.at(k);
    const auto d = effective.cols();
    CMatrix v(effective.rows(), d);
    if (variant == MaxSinrVariant::modified) {
      const HermitianMatrix b = metrics::interference_plus_noise(k, channels, bf, powers, noise_var);
      v = solve_hpd(b, effective);
    } else {
      const HermitianMatrix all =
          metrics::interference_covariance(k, channels, bf, powers, {true, std::nullopt})
              .plus_identity(noise_var);
      for (Eigen::Index l = 0; l < d; ++l) {
        HermitianMatrix b = all;
        b.add_outer(effective.col(l), -powers.at(k, static_cast<int>(l)));
        v.col(l) = solve_hpd(b, effective.col(l));
      }
    }
    normalize_columns(v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CMatrix> gevd_receive_update(const ChannelSet& channels, const Beamformers& bf,
                                         const StreamPowers& powers, double noise_var) {
  std::vector<CMatrix> out;
  out.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const auto d = bf.tx.at(k).cols();
    const GevdResult g =
        gevd_hpd(metrics::desired_covariance(k, channels, bf, powers),
                 metrics::interference_plus_noise(k, channels, bf, powers, noise_var));
    CMatrix v = g.vectors.leftCols(d);
    normalize_columns(v);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

using ReceiveUpdate =
    std::function<std::vector<CMatrix>(const ChannelSet&, const Beamformers&, const StreamPowers&)>;

Beamformers initial_beamformers(const NetworkConfig& config, const RunOptions& options) {
  return options.initial ? *options.initial : random_precoders(config, options.seed);
}

void prepare(const ChannelSet& channels, const NetworkConfig& config, const StreamPowers& powers) {
  config.validate();
  channels.check_against(config);
  powers.check_budget(config);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Odd iterations update receivers in the original network, even iterations
// update precoders through the reciprocal network. A run that stops after an
// uplink step gets one uncounted receive refresh so V matches the final U.
DesignResult alternate(const ChannelSet& channels, const NetworkConfig& config,
                       const StreamPowers& powers, const StoppingRule& stop,
                       const RunOptions& options, const ReceiveUpdate& update) {
  const auto start = std::chrono::steady_clock::now();
  prepare(channels, config, powers);
  const ChannelSet reverse = channels.reciprocal();

  DesignResult result{initial_beamformers(config, options), powers, {}};
  Beamformers& bf = result.bf;
  AlgorithmTrace& trace = result.trace;

  bool last_was_uplink = false;
  for (int n = 1; n <= stop.max_iterations(); ++n) {
    if (n % 2 == 1) {
      bf.rx = update(channels, bf, powers);
      last_was_uplink = false;
    } else {
      bf.tx = update(reverse, bf.reciprocal(), powers);
      last_was_uplink = true;
    }
    trace.iterations = n;
    trace.sum_rate.push_back(metrics::sum_rate(channels, bf, powers, config.noise_var));
    trace.leakage.push_back(metrics::total_leakage(channels, bf, powers));
    if (options.on_iteration) options.on_iteration(n, bf, powers);
    if (stop.done(trace.sum_rate)) break;
  }
  if (last_was_uplink) {
    bf.rx = update(channels, bf, powers);
  }
  trace.converged = stop.converged(trace.sum_rate);
  trace.wall_ms = elapsed_ms(start);
  return result;
}

}  // namespace

DesignResult dia_run(const ChannelSet& channels, const NetworkConfig& config,
                     const StreamPowers& powers, const StoppingRule& stop,
                     const RunOptions& options) {
  return alternate(channels, config, powers, stop, options,
                   [](const ChannelSet& ch, const Beamformers& bf, const StreamPowers& p) {
                     return dia_receive_update(ch, bf, p);
                   });
}

DesignResult max_sinr_run(const ChannelSet& channels, const NetworkConfig& config,
                          const StreamPowers& powers, const StoppingRule& stop,
                          MaxSinrVariant variant, const RunOptions& options) {
  const double noise = config.noise_var;
  return alternate(channels, config, powers, stop, options,
                   [variant, noise](const ChannelSet& ch, const Beamformers& bf,
                                    const StreamPowers& p) {
                     return max_sinr_receive_update(ch, bf, p, variant, noise);
                   });
}

DesignResult gevd_run(const ChannelSet& channels, const NetworkConfig& config,
                      const StreamPowers& powers, const StoppingRule& stop,
                      const RunOptions& options) {
  const double noise = config.noise_var;
  return alternate(channels, config, powers, stop, options,
                   [noise](const ChannelSet& ch, const Beamformers& bf, const StreamPowers& p) {
                     return gevd_receive_update(ch, bf, p, noise);
                   });
}

// ---------------------------------------------------------------------------
// min-sum-MSE

double sum_mse(const ChannelSet& channels, const std::vector<CMatrix>& precoders,
               const std::vector<CMatrix>& receivers, double noise_var) {
  double total = 0.0;
  for (int k = 0; k < channels.users(); ++k) {
    const CMatrix& w = receivers.at(k);
    const Eigen::Index n = w.rows();
    CMatrix received = CMatrix::Identity(n, n) * noise_var;
    for (int j = 0; j < channels.users(); ++j) {
      const CMatrix ht = channels.link(k, j) * precoders.at(j);
      received.noalias() += ht * ht.adjoint();
    }
    const CMatrix gain = w.adjoint() * channels.link(k, k) * precoders.at(k);
    const Eigen::Index d = w.cols();
    const CMatrix e = CMatrix::Identity(d, d) - gain - gain.adjoint() +
                      w.adjoint() * received * w;
    total += e.trace().real();
  }
  return total;
}

namespace {

std::vector<CMatrix> mmse_receivers(const ChannelSet& channels, const std::vector<CMatrix>& t,
                                    double noise_var) {
  std::vector<CMatrix> out;
  out.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const Eigen::Index n = channels.link(k, k).rows();
    HermitianMatrix received = HermitianMatrix::identity(n, noise_var);
    for (int j = 0; j < channels.users(); ++j) {
      const CMatrix ht = channels.link(k, j) * t[j];
      for (Eigen::Index s = 0; s < ht.cols(); ++s) received.add_outer(ht.col(s), 1.0);
    }
    out.push_back(solve_hpd(received, channels.link(k, k) * t[k]));
  }
  return out;
}

// argmin_T tr(T^H A T) - 2 Re tr(G^H T) subject to ||T||_F^2 <= budget, i.e.
// T = (A + mu I)^-1 G with the smallest mu >= 0 meeting the budget.
CMatrix constrained_mmse_precoder(const HermitianMatrix& a, const CMatrix& g, double budget,
                                  int user) {
  const EigResult eig = hermitian_eig_sorted(a);
  const CMatrix f = eig.vectors.adjoint() * g;
  const RVector weight = f.rowwise().squaredNorm();
  const RVector& lambda = eig.values;
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  const double singular_floor = 1e-14 * scale;

  auto norm_sq = [&](double mu) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (weight(i) == 0.0) continue;
      const double denom = std::max(lambda(i), 0.0) + mu;
      if (denom <= singular_floor) return std::numeric_limits<double>::infinity();
      total += weight(i) / (denom * denom);
    }
    return total;
  };
  auto precoder = [&](double mu) {
    RVector inv(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const double denom = std::max(lambda(i), 0.0) + mu;
      inv(i) = weight(i) == 0.0 || denom <= singular_floor ? 0.0 : 1.0 / denom;
    }
    return CMatrix(eig.vectors * inv.asDiagonal() * f);
  };

  if (weight.sum() == 0.0 || norm_sq(0.0) <= budget) {
    return precoder(0.0);
  }
  double lo = 0.0;
  double hi = scale;
  while (norm_sq(hi) > budget) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) {
      std::ostringstream msg;
      msg << "min-sum-MSE power bisection failed for user " << user << ": bracket [" << lo
          << ", " << hi << "], norm^2 at hi " << norm_sq(hi) << ", budget " << budget;
      throw NumericError(msg.str());
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_sq(mid) > budget ? lo : hi) = mid;
  }
  return precoder(hi);
}

std::vector<CMatrix> mmse_precoders(const ChannelSet& channels, const std::vector<CMatrix>& w,
                                    const NetworkConfig& config) {
  std::vector<CMatrix> out;
  out.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const Eigen::Index m = channels.link(k, k).cols();
    HermitianMatrix a = HermitianMatrix::zero(m);
    for (int j = 0; j < channels.users(); ++j) {
      const CMatrix hw = channels.link(j, k).adjoint() * w[j];
      for (Eigen::Index s = 0; s < hw.cols(); ++s) a.add_outer(hw.col(s), 1.0);
    }
    const CMatrix g = channels.link(k, k).adjoint() * w[k];
    out.push_back(constrained_mmse_precoder(a, g, config.power[k], k));
  }
  return out;
}

// Splits filters into unit directions; a zero column keeps its previous
// direction since it carries no power.
void split_directions(const std::vector<CMatrix>& filters, std::vector<CMatrix>& directions) {
  for (std::size_t k = 0; k < filters.size(); ++k) {
    for (Eigen::Index c = 0; c < filters[k].cols(); ++c) {
      const double n = filters[k].col(c).norm();
      if (n > 0.0 && std::isfinite(n)) {
        directions[k].col(c) = filters[k].col(c) / n;
      } else if (directions[k].col(c).norm() == 0.0) {
        directions[k].col(c).setZero();
        directions[k](c % directions[k].rows(), c) = 1.0;
      }
    }
  }
}

StreamPowers column_powers(const std::vector<CMatrix>& t) {
  StreamPowers out;
  for (const CMatrix& m : t) out.per_user.push_back(m.colwise().squaredNorm().transpose());
  return out;
}

}  // namespace

DesignResult min_sum_mse_run(const ChannelSet& channels, const NetworkConfig& config,
                             const StreamPowers& powers, const StoppingRule& stop,
                             const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  prepare(channels, config, powers);

  DesignResult result{initial_beamformers(config, options), powers, {}};
  Beamformers& bf = result.bf;
  AlgorithmTrace& trace = result.trace;

  std::vector<CMatrix> t(channels.users());
  std::vector<CMatrix> w(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    t[k] = bf.tx[k] * powers.per_user[k].cwiseSqrt().asDiagonal();
  }

  bool last_was_uplink = false;
  for (int n = 1; n <= stop.max_iterations(); ++n) {
    if (n % 2 == 1) {
      w = mmse_receivers(channels, t, config.noise_var);
      split_directions(w, bf.rx);
      last_was_uplink = false;
    } else {
      t = mmse_precoders(channels, w, config);
      split_directions(t, bf.tx);
      result.powers = column_powers(t);
      last_was_uplink = true;
    }
    trace.iterations = n;
    trace.sum_rate.push_back(metrics::sum_rate(channels, bf, result.powers, config.noise_var));
    trace.leakage.push_back(metrics::total_leakage(channels, bf, result.powers));
    trace.sum_mse.push_back(sum_mse(channels, t, w, config.noise_var));
    if (options.on_iteration) options.on_iteration(n, bf, result.powers);
    if (stop.done(trace.sum_rate)) break;
  }
  if (last_was_uplink) {
    w = mmse_receivers(channels, t, config.noise_var);
    split_directions(w, bf.rx);
  }
  trace.converged = stop.converged(trace.sum_rate);
  trace.wall_ms = elapsed_ms(start);
  return result;
}

DesignResult run_design(Algorithm algorithm, const ChannelSet& channels,
                        const NetworkConfig& config, const StreamPowers& powers,
                        const StoppingRule& stop, const RunOptions& options) {
  switch (algorithm) {
    case Algorithm::dia:
      return dia_run(channels, config, powers, stop, options);
    case Algorithm::max_sinr:
      return max_sinr_run(channels, config, powers, stop, MaxSinrVariant::conventional, options);
    case Algorithm::max_sinr_modified:
      return max_sinr_run(channels, config, powers, stop, MaxSinrVariant::modified, options);
    case Algorithm::gevd:
      return gevd_run(channels, config, powers, stop, options);
    case Algorithm::min_sum_mse:
      return min_sum_mse_run(channels, config, powers, stop, options);
  }
  throw std::invalid_argument("run_design: unknown algorithm");
}

}  // namespace mimoic::algorithms
