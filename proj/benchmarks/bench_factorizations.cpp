// Wall time plus operation counters. Counters are the portable part: wall time depends on the
// host, the GEMM and level-2 volumes do not.

#include <benchmark/benchmark.h>

#include "rqrcp/rqrcp.hpp"

using namespace rqrcp;

namespace {

DenseMatrix gaussian(std::size_t m, std::size_t n) {
  RngState rng(42);
  return gaussian_matrix(rng, m, n);
}

void report(benchmark::State& state, const OpCounters& c) {
  state.counters["gemm_flops"] = static_cast<double>(c.gemm_flops);
  state.counters["level2_flops"] = static_cast<double>(c.level2_flops);
  state.counters["flops"] = benchmark::Counter(static_cast<double>(c.gemm_flops + c.level2_flops),
                                               benchmark::Counter::kIsIterationInvariantRate);
}

enum class Full { kQrBlocked, kQrcpBlocked, kRqrcp, kRsrqrcp };

template <Full kind>
void BM_Full(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian(n, n);
  const RandomizedConfig cfg{.block = 32, .padding = 8, .seed = 1};
  OpCounters counters;
  for (auto _ : state) {
    Factorization f;
    if constexpr (kind == Full::kQrBlocked) f = qr_blocked(a, std::nullopt, cfg.block);
    if constexpr (kind == Full::kQrcpBlocked) f = qrcp_blocked(a, std::nullopt, cfg.block);
    if constexpr (kind == Full::kRqrcp) f = rqrcp::rqrcp(a, n, cfg);
    if constexpr (kind == Full::kRsrqrcp) f = rsrqrcp(a, n, cfg);
    counters = f.counters;
    benchmark::DoNotOptimize(f.rank);
  }
  report(state, counters);
}

enum class Truncated { kQrcpBlocked, kRqrcp, kTrqrcp, kTuxv };

template <Truncated kind>
void BM_Truncated(benchmark::State& state) {
  const std::size_t n = 1024;
  const auto k = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian(n, n);
  const RandomizedConfig cfg{.block = 32, .padding = 8, .seed = 1};
  OpCounters counters;
  for (auto _ : state) {
    if constexpr (kind == Truncated::kQrcpBlocked) counters = qrcp_blocked(a, k, cfg.block).counters;
    if constexpr (kind == Truncated::kRqrcp) counters = rqrcp::rqrcp(a, k, cfg).counters;
    if constexpr (kind == Truncated::kTrqrcp) counters = trqrcp(a, k, cfg).counters;
    if constexpr (kind == Truncated::kTuxv) counters = tuxv(a, k, cfg).counters;
    benchmark::ClobberMemory();
  }
  report(state, counters);
}

}  // namespace

BENCHMARK(BM_Full<Full::kQrBlocked>)->Name("full/qr_blocked")->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Full<Full::kQrcpBlocked>)->Name("full/qrcp_blocked")->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Full<Full::kRqrcp>)->Name("full/rqrcp")->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Full<Full::kRsrqrcp>)->Name("full/rsrqrcp")->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK(BM_Truncated<Truncated::kQrcpBlocked>)->Name("truncated/qrcp_blocked")->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Truncated<Truncated::kRqrcp>)->Name("truncated/rqrcp")->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Truncated<Truncated::kTrqrcp>)->Name("truncated/trqrcp")->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Truncated<Truncated::kTuxv>)->Name("truncated/tuxv")->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
