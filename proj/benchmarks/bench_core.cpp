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

#include <benchmark/benchmark.h>

#include "mimoic/algorithms.hpp"
#include "mimoic/metrics.hpp"
#include "mimoic/model.hpp"
#include "mimoic/numerics.hpp"
#include "mimoic/power_control.hpp"

namespace {

using namespace mimoic;

NetworkConfig default_network(double snr_db) {
  return NetworkConfig::uniform(3, 4, 4, 2, snr_to_power(snr_db));
}

void BM_GevdHpd(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const CMatrix a = CMatrix::Random(n, n);
  const CMatrix c = CMatrix::Random(n, n);
  const HermitianMatrix r(a * a.adjoint());
  const HermitianMatrix b = HermitianMatrix(c * c.adjoint()).plus_identity(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gevd_hpd(r, b));
  }
}
BENCHMARK(BM_GevdHpd)->Arg(2)->Arg(4)->Arg(8);

void BM_MaxSinrReceiveUpdate(benchmark::State& state) {
  const NetworkConfig config = default_network(20.0);
  const ChannelSet channels = sample_channels(config, 1);
  Beamformers bf = random_precoders(config, 2);
  const StreamPowers powers = StreamPowers::even(config);
  for (auto _ : state) {
    bf.rx = algorithms::max_sinr_receive_update(channels, bf, powers,
                                                algorithms::MaxSinrVariant::conventional);
    benchmark::DoNotOptimize(bf.rx);
  }
}
BENCHMARK(BM_MaxSinrReceiveUpdate);

void BM_MaxSinrRun(benchmark::State& state) {
  const NetworkConfig config = default_network(20.0);
  const ChannelSet channels = sample_channels(config, 1);
  const auto stop = algorithms::StoppingRule::fixed(static_cast<int>(state.range(0)));
  algorithms::RunOptions options;
  options.seed = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(algorithms::max_sinr_run(channels, config,
                                                      StreamPowers::even(config), stop,
                                                      algorithms::MaxSinrVariant::conventional,
                                                      options));
  }
}
BENCHMARK(BM_MaxSinrRun)->Arg(10)->Arg(50);

void BM_AdhocDpca(benchmark::State& state) {
  const NetworkConfig config = default_network(static_cast<double>(state.range(0)));
  const ChannelSet channels = sample_channels(config, 1);
  algorithms::RunOptions options;
  options.seed = 2;
  const auto design = algorithms::max_sinr_run(channels, config, StreamPowers::even(config),
                                               algorithms::StoppingRule::fixed(50),
                                               algorithms::MaxSinrVariant::conventional, options);
  const auto sinr = metrics::sinr_report(channels, design.bf, design.powers,
                                         metrics::FilteringStyle::separate);
  for (auto _ : state) {
    benchmark::DoNotOptimize(power_control::adhoc_dpca(channels, design.bf, config, sinr));
  }
}
BENCHMARK(BM_AdhocDpca)->Arg(0)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
