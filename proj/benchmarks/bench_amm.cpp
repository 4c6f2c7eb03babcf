#include <benchmark/benchmark.h>

#include <cstdint>

#include "amm/fcheck.hpp"
#include "amm/stirling.hpp"
#include "amm/verifier.hpp"

namespace {

// One Stirling row step mod 2^width; the screen's inner loop.
void BM_RowAdvance(benchmark::State& state) {
    const uint32_t width = static_cast<uint32_t>(state.range(0));
    amm::StirlingRowMod2 row(13, width);
    for (auto _ : state) {
        row.advance();
        benchmark::DoNotOptimize(row.value_u64());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RowAdvance)->Arg(8)->Arg(64)->Arg(130)->Arg(512);

void BM_PowMod2(benchmark::State& state) {
    const uint32_t width = static_cast<uint32_t>(state.range(0));
    uint64_t e = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(amm::pow_mod2(3, 100000 + e, width));
        ++e;
    }
}
BENCHMARK(BM_PowMod2)->Arg(16)->Arg(64)->Arg(256);

// Incremental evaluation of the auxiliary sum, the scan's kernel.
void BM_FEvalSeq(benchmark::State& state) {
    const amm::FParams p = amm::FParams::make(13, 1);
    uint64_t n0 = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(amm::f_eval_seq(p, n0, 4096));
        n0 += 4096;
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_FEvalSeq);

// A whole residue scan over one period (2^14 steps for k=13, ell=1).
void BM_ScanResidues(benchmark::State& state) {
    const amm::FParams p = amm::FParams::make(13, 1);
    amm::ScanOptions opt;
    opt.threads = static_cast<uint32_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(amm::scan_residues(p, 4, opt));
    }
    state.SetItemsProcessed(state.iterations() * (uint64_t{1} << 14));
}
BENCHMARK(BM_ScanResidues)->Arg(1)->Arg(2);

// End-to-end verification of the smallest column.
void BM_VerifySmallest(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(amm::verify_amm(5));
    }
}
BENCHMARK(BM_VerifySmallest);

}  // namespace

BENCHMARK_MAIN();
