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
#include <random>

#include "mimoic/model.hpp"
#include "mimoic/numerics.hpp"

namespace mimoic::testing {

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = Complex(n(rng), n(rng));
  }
  return out;
}

inline HermitianMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const CMatrix a = random_complex(dim, dim, rng);
  return HermitianMatrix(CMatrix((a + a.adjoint()) / 2.0));
}

/// A A^H + shift I, comfortably positive definite.
inline HermitianMatrix random_hpd(Eigen::Index dim, std::mt19937_64& rng, double shift = 0.5) {
  const CMatrix a = random_complex(dim, dim, rng);
  return HermitianMatrix(CMatrix(a * a.adjoint())).plus_identity(shift);
}

inline CMatrix unit_columns(CMatrix m) {
  normalize_columns(m);
  return m;
}

/// Random unit-column beamformers for both sides.
inline Beamformers random_beamformers(const NetworkConfig& c, std::mt19937_64& rng) {
  Beamformers bf;
  for (int k = 0; k < c.users; ++k) {
    bf.tx.push_back(unit_columns(random_complex(c.tx_antennas[k], c.streams[k], rng)));
    bf.rx.push_back(unit_columns(random_complex(c.rx_antennas[k], c.streams[k], rng)));
  }
  return bf;
}

/// Random nonnegative stream powers within each budget.
inline StreamPowers random_powers(const NetworkConfig& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  StreamPowers p;
  for (int k = 0; k < c.users; ++k) {
    RVector v(c.streams[k]);
    for (Eigen::Index l = 0; l < v.size(); ++l) v(l) = u(rng);
    p.per_user.push_back(v * (c.power[k] / v.sum()));
  }
  return p;
}

}  // namespace mimoic::testing
