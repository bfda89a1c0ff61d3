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

#include "mimoic/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mimoic::metrics {

namespace {

// Relative eigenvalue floor of V^H V below which a direction of V is dropped.
constexpr double kRankTolerance = 1e-10;

void check_user(int k, const ChannelSet& channels) {
  if (k < 0 || k >= channels.users()) {
    std::ostringstream msg;
    msg << "user index " << k << " out of range for " << channels.users() << " users";
    throw std::out_of_range(msg.str());
  }
}

void check_stream(int k, int l, const Beamformers& bf) {
  if (l < 0 || l >= bf.tx.at(k).cols()) {
    std::ostringstream msg;
    msg << "stream index " << l << " out of range for user " << k;
    throw std::out_of_range(msg.str());
  }
}

double quad(const CVector& v, const HermitianMatrix& a) {
  return (v.adjoint() * a.matrix() * v)(0, 0).real();
}

}  // namespace

HermitianMatrix interference_covariance(int k, const ChannelSet& channels, const Beamformers& bf,
                                        const StreamPowers& powers, CovarianceScope scope) {
  check_user(k, channels);
  if (scope.exclude_stream && !scope.include_intra) {
    throw std::invalid_argument(
        "interference_covariance: exclude_stream requires include_intra");
  }
  if (scope.exclude_stream) check_stream(k, *scope.exclude_stream, bf);

  const Eigen::Index n = channels.link(k, k).rows();
  HermitianMatrix q = HermitianMatrix::zero(n);
  for (int j = 0; j < channels.users(); ++j) {
    if (j == k && !scope.include_intra) continue;
    const CMatrix effective = channels.link(k, j) * bf.tx.at(j);
    for (Eigen::Index s = 0; s < effective.cols(); ++s) {
      if (j == k && scope.exclude_stream && *scope.exclude_stream == s) continue;
      q.add_outer(effective.col(s), powers.at(j, static_cast<int>(s)));
    }
  }
  return q;
}

HermitianMatrix desired_covariance(int k, const ChannelSet& channels, const Beamformers& bf,
                                   const StreamPowers& powers) {
  check_user(k, channels);
  const CMatrix effective = channels.link(k, k) * bf.tx.at(k);
  HermitianMatrix r = HermitianMatrix::zero(effective.rows());
  for (Eigen::Index s = 0; s < effective.cols(); ++s) {
    r.add_outer(effective.col(s), powers.at(k, static_cast<int>(s)));
  }
  return r;
}

HermitianMatrix stream_covariance(int k, int l, const ChannelSet& channels, const Beamformers& bf,
                                  const StreamPowers& powers) {
  check_user(k, channels);
  check_stream(k, l, bf);
  const CVector h = channels.link(k, k) * bf.tx.at(k).col(l);
  HermitianMatrix r = HermitianMatrix::zero(h.size());
  r.add_outer(h, powers.at(k, l));
  return r;
}

HermitianMatrix interference_plus_noise(int k, const ChannelSet& channels, const Beamformers& bf,
                                        const StreamPowers& powers, double noise_var) {
  return interference_covariance(k, channels, bf, powers).plus_identity(noise_var);
}

HermitianMatrix stream_interference_plus_noise(int k, int l, const ChannelSet& channels,
                                               const Beamformers& bf, const StreamPowers& powers,
                                               double noise_var) {
  return interference_covariance(k, channels, bf, powers, {true, l}).plus_identity(noise_var);
}

namespace {

double rayleigh_ratio(const CVector& v, const HermitianMatrix& num, const HermitianMatrix& den,
                      int k, int l) {
  if (v.norm() == 0.0) {
    std::ostringstream msg;
    msg << "receive vector of stream (" << k << ", " << l << ") is zero";
    throw NumericError(msg.str());
  }
  return std::max(0.0, quad(v, num)) / quad(v, den);
}

}  // namespace

double sinr_sf(int k, int l, const ChannelSet& channels, const Beamformers& bf,
               const StreamPowers& powers, double noise_var) {
  check_user(k, channels);
  check_stream(k, l, bf);
  return rayleigh_ratio(bf.rx.at(k).col(l), stream_covariance(k, l, channels, bf, powers),
                        stream_interference_plus_noise(k, l, channels, bf, powers, noise_var), k,
                        l);
}

double sinr_gf(int k, int l, const ChannelSet& channels, const Beamformers& bf,
               const StreamPowers& powers, double noise_var) {
  check_user(k, channels);
  check_stream(k, l, bf);
  return rayleigh_ratio(bf.rx.at(k).col(l), desired_covariance(k, channels, bf, powers),
                        interference_plus_noise(k, channels, bf, powers, noise_var), k, l);
}

double user_rate(int k, const ChannelSet& channels, const Beamformers& bf,
                 const StreamPowers& powers, double noise_var) {
  // The rate only depends on the column space of V, so V is replaced by an
  // orthonormal basis of its numerical range. This also covers receivers whose
  // columns have merged into a common direction.
  const CMatrix& v = bf.rx.at(k);
  const EigResult gram = hermitian_eig_sorted(HermitianMatrix::gram(v));
  const double top = gram.values.size() ? gram.values.maxCoeff() : 0.0;
  Eigen::Index first = 0;
  while (first < gram.values.size() && !(gram.values(first) > kRankTolerance * top)) ++first;
  if (first == gram.values.size()) {
    std::ostringstream msg;
    msg << "user_rate: V^H B V is singular for user " << k << " (zero receive matrix)";
    throw NumericError(msg.str());
  }
  const Eigen::Index rank = gram.values.size() - first;
  const CMatrix basis = v * gram.vectors.rightCols(rank) *
                        gram.values.tail(rank).cwiseSqrt().cwiseInverse().asDiagonal();

  const HermitianMatrix b = interference_plus_noise(k, channels, bf, powers, noise_var);
  const HermitianMatrix r = desired_covariance(k, channels, bf, powers);
  const HermitianMatrix wbw = b.congruence(basis);
  const HermitianMatrix wrw = r.congruence(basis);
  // det(I + (W^H B W)^-1 W^H R W) = det(W^H B W + W^H R W) / det(W^H B W)
  const Eigen::LLT<CMatrix> den(wbw.matrix());
  const Eigen::LLT<CMatrix> num((wbw + wrw).matrix());
  if (den.info() != Eigen::Success || num.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "user_rate: V^H B V is singular for user " << k;
    throw NumericError(msg.str());
  }
  const RVector dn = den.matrixLLT().diagonal().real();
  const RVector nu = num.matrixLLT().diagonal().real();
  const double log_ratio = 2.0 * (nu.array().log().sum() - dn.array().log().sum());
  return std::max(0.0, log_ratio / std::log(2.0));
}

double stream_rate(double sinr) { return std::log2(1.0 + sinr); }

double leakage(int k, const ChannelSet& channels, const Beamformers& bf,
               const StreamPowers& powers) {
  const CMatrix& v = bf.rx.at(k);
  const HermitianMatrix q = interference_covariance(k, channels, bf, powers);
  return std::max(0.0, (v.adjoint() * q.matrix() * v).trace().real());
}

double desired_power(int k, const ChannelSet& channels, const Beamformers& bf,
                     const StreamPowers& powers) {
  const CMatrix& v = bf.rx.at(k);
  const HermitianMatrix r = desired_covariance(k, channels, bf, powers);
  return std::max(0.0, (v.adjoint() * r.matrix() * v).trace().real());
}

double avg_sinr_gf(int k, const ChannelSet& channels, const Beamformers& bf,
                   const StreamPowers& powers, double noise_var) {
  const CMatrix& v = bf.rx.at(k);
  const HermitianMatrix b = interference_plus_noise(k, channels, bf, powers, noise_var);
  const double den = (v.adjoint() * b.matrix() * v).trace().real();
  if (!(den > 0.0)) {
    throw NumericError("avg_sinr_gf: receive matrix is zero");
  }
  return desired_power(k, channels, bf, powers) / den;
}

double trace_ratio(const CMatrix& v, const HermitianMatrix& desired,
                   const HermitianMatrix& interference) {
  const HermitianMatrix vbv(v.adjoint() * interference.matrix() * v);
  const CMatrix vrv = v.adjoint() * desired.matrix() * v;
  return solve_hpd(vbv, vrv).trace().real();
}

SinrReport sinr_report(const ChannelSet& channels, const Beamformers& bf,
                       const StreamPowers& powers, FilteringStyle style, double noise_var) {
  SinrReport out;
  out.style = style;
  out.sinr.reserve(channels.users());
  for (int k = 0; k < channels.users(); ++k) {
    const auto d = static_cast<int>(bf.tx.at(k).cols());
    RVector s(d);
    for (int l = 0; l < d; ++l) {
      s(l) = style == FilteringStyle::separate ? sinr_sf(k, l, channels, bf, powers, noise_var)
                                               : sinr_gf(k, l, channels, bf, powers, noise_var);
    }
    out.sinr.push_back(std::move(s));
  }
  return out;
}

RateReport rate_report(const ChannelSet& channels, const Beamformers& bf,
                       const StreamPowers& powers, const SinrReport& sinr, double noise_var) {
  RateReport out;
  const int users = channels.users();
  out.user_rate.resize(users);
  for (int k = 0; k < users; ++k) {
    out.user_rate(k) = user_rate(k, channels, bf, powers, noise_var);
    RVector sr = sinr.sinr.at(k).unaryExpr([](double s) { return stream_rate(s); });
    out.sum_stream_rate += sr.sum();
    out.stream_rate.push_back(std::move(sr));
  }
  out.sum_rate = out.user_rate.sum();
  return out;
}

double sum_rate(const ChannelSet& channels, const Beamformers& bf, const StreamPowers& powers,
                double noise_var) {
  double total = 0.0;
  for (int k = 0; k < channels.users(); ++k) {
    total += user_rate(k, channels, bf, powers, noise_var);
  }
  return total;
}

double sum_stream_rate(const SinrReport& report) {
  double total = 0.0;
  for (const RVector& s : report.sinr) {
    for (Eigen::Index l = 0; l < s.size(); ++l) total += stream_rate(s(l));
  }
  return total;
}

double total_leakage(const ChannelSet& channels, const Beamformers& bf,
                     const StreamPowers& powers) {
  double total = 0.0;
  for (int k = 0; k < channels.users(); ++k) total += leakage(k, channels, bf, powers);
  return total;
}

double relative_leakage(const ChannelSet& channels, const Beamformers& bf,
                        const StreamPowers& powers) {
  double desired = 0.0;
  for (int k = 0; k < channels.users(); ++k) desired += desired_power(k, channels, bf, powers);
  return total_leakage(channels, bf, powers) / desired;
}

RVector per_user_imbalance(const SinrReport& report) {
  RVector out(static_cast<Eigen::Index>(report.sinr.size()));
  for (std::size_t k = 0; k < report.sinr.size(); ++k) {
    const RVector& s = report.sinr[k];
    if (s.size() < 2) {
      throw std::domain_error("imbalance needs at least two streams per user");
    }
    if (!(s(0) > 0.0)) {
      std::ostringstream msg;
      msg << "imbalance: first-stream SINR of user " << k << " is zero";
      throw std::domain_error(msg.str());
    }
    out(static_cast<Eigen::Index>(k)) = s(1) / s(0);
  }
  return out;
}

Imbalance imbalance_ratio(const SinrReport& report) {
  Imbalance out;
  double first = 0.0;
  double second = 0.0;
  for (const RVector& s : report.sinr) {
    if (s.size() < 2) {
      throw std::domain_error("imbalance needs at least two streams per user");
    }
    first += s(0);
    second += s(1);
  }
  if (!(first > 0.0)) {
    throw std::domain_error("imbalance: first-stream SINRs sum to zero");
  }
  out.ratio_of_sums = second / first;
  out.sum_of_ratios = per_user_imbalance(report).sum();
  return out;
}

}  // namespace mimoic::metrics
