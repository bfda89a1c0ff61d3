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

#include "mimoic/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mimoic {

NetworkConfig NetworkConfig::uniform(int users, int tx, int rx, int streams, double power) {
  NetworkConfig cfg;
  cfg.users = users;
  cfg.tx_antennas.assign(users, tx);
  cfg.rx_antennas.assign(users, rx);
  cfg.streams.assign(users, streams);
  cfg.power.assign(users, power);
  return cfg;
}

void NetworkConfig::validate() const {
  std::ostringstream msg;
  if (users < 1) {
    msg << "users must be >= 1, got " << users;
    throw ConfigError(msg.str());
  }
  const auto n = static_cast<std::size_t>(users);
  if (tx_antennas.size() != n || rx_antennas.size() != n || streams.size() != n ||
      power.size() != n) {
    msg << "per-user vectors must all have length " << users;
    throw ConfigError(msg.str());
  }
  for (int k = 0; k < users; ++k) {
    const int d = streams[k];
    if (tx_antennas[k] < 1 || rx_antennas[k] < 1) {
      msg << "user " << k << ": antenna counts must be positive";
      throw ConfigError(msg.str());
    }
    if (d < 1 || d > std::min(tx_antennas[k], rx_antennas[k])) {
      msg << "user " << k << ": streams " << d << " must lie in [1, min(M, N)] = [1, "
          << std::min(tx_antennas[k], rx_antennas[k]) << "]";
      throw ConfigError(msg.str());
    }
    if (!(power[k] > 0.0) || !std::isfinite(power[k])) {
      msg << "user " << k << ": power budget must be positive and finite, got " << power[k];
      throw ConfigError(msg.str());
    }
  }
  if (noise_var != 1.0) {
    throw ConfigError("noise variance is fixed at 1");
  }
}

int NetworkConfig::total_streams() const {
  int total = 0;
  for (int d : streams) total += d;
  return total;
}

NetworkConfig NetworkConfig::reciprocal() const {
  NetworkConfig out = *this;
  std::swap(out.tx_antennas, out.rx_antennas);
  return out;
}

ChannelSet::ChannelSet(int users)
    : users_(users), links_(static_cast<std::size_t>(users) * static_cast<std::size_t>(users)) {}

std::size_t ChannelSet::index(int rx, int tx) const {
  if (rx < 0 || rx >= users_ || tx < 0 || tx >= users_) {
    std::ostringstream msg;
    msg << "ChannelSet: link (" << rx << ", " << tx << ") out of range for " << users_
        << " users";
    throw std::out_of_range(msg.str());
  }
  return static_cast<std::size_t>(rx) * static_cast<std::size_t>(users_) +
         static_cast<std::size_t>(tx);
}

ChannelSet ChannelSet::reciprocal() const {
  ChannelSet out(users_);
  for (int k = 0; k < users_; ++k) {
    for (int j = 0; j < users_; ++j) {
      out.link(k, j) = link(j, k).adjoint();
    }
  }
  return out;
}

void ChannelSet::check_against(const NetworkConfig& config) const {
  if (users_ != config.users) {
    throw ConfigError("ChannelSet: user count differs from config");
  }
  for (int k = 0; k < users_; ++k) {
    for (int l = 0; l < users_; ++l) {
      const CMatrix& h = link(k, l);
      if (h.rows() != config.rx_antennas[k] || h.cols() != config.tx_antennas[l]) {
        std::ostringstream msg;
        msg << "ChannelSet: link (" << k << ", " << l << ") is " << h.rows() << "x"
            << h.cols() << ", expected " << config.rx_antennas[k] << "x"
            << config.tx_antennas[l];
        throw ConfigError(msg.str());
      }
    }
  }
}

bool operator==(const ChannelSet& a, const ChannelSet& b) {
  if (a.users_ != b.users_) return false;
  for (std::size_t i = 0; i < a.links_.size(); ++i) {
    if (a.links_[i].rows() != b.links_[i].rows() || a.links_[i].cols() != b.links_[i].cols() ||
        a.links_[i] != b.links_[i]) {
      return false;
    }
  }
  return true;
}

double Beamformers::max_column_norm_defect() const {
  double worst = 0.0;
  for (const auto* side : {&tx, &rx}) {
    for (const CMatrix& m : *side) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        worst = std::max(worst, std::abs(m.col(c).norm() - 1.0));
      }
    }
  }
  return worst;
}

StreamPowers StreamPowers::even(const NetworkConfig& config) {
  StreamPowers out;
  out.per_user.reserve(config.users);
  for (int k = 0; k < config.users; ++k) {
    out.per_user.push_back(RVector::Constant(config.streams[k], config.power[k] / config.streams[k]));
  }
  return out;
}

void StreamPowers::check_budget(const NetworkConfig& config) const {
  if (per_user.size() != static_cast<std::size_t>(config.users)) {
    throw ConfigError("StreamPowers: user count differs from config");
  }
  for (int k = 0; k < config.users; ++k) {
    const RVector& p = per_user[k];
    if (p.size() != config.streams[k]) {
      throw ConfigError("StreamPowers: stream count differs from config");
    }
    if ((p.array() < 0.0).any()) {
      std::ostringstream msg;
      msg << "StreamPowers: user " << k << " has a negative stream power";
      throw ConfigError(msg.str());
    }
    if (p.sum() > config.power[k] + 1e-9) {
      std::ostringstream msg;
      msg << "StreamPowers: user " << k << " uses " << p.sum() << " over budget "
          << config.power[k];
      throw ConfigError(msg.str());
    }
  }
}

namespace {

CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  // column-major fill order is part of the reproducibility contract
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace

ChannelSet sample_channels(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  ChannelSet out(config.users);
  for (int k = 0; k < config.users; ++k) {
    for (int l = 0; l < config.users; ++l) {
      out.link(k, l) = gaussian_matrix(config.rx_antennas[k], config.tx_antennas[l], rng);
    }
  }
  return out;
}

Beamformers random_precoders(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  Beamformers out;
  out.tx.reserve(config.users);
  out.rx.reserve(config.users);
  for (int k = 0; k < config.users; ++k) {
    const int m = config.tx_antennas[k];
    const int d = config.streams[k];
    const Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(m, d, rng));
    CMatrix u = qr.householderQ() * CMatrix::Identity(m, d);
    out.tx.push_back(std::move(u));
    out.rx.push_back(CMatrix::Zero(config.rx_antennas[k], d));
  }
  return out;
}

double snr_to_power(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

}  // namespace mimoic
