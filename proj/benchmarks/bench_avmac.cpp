#include <benchmark/benchmark.h>

#include "avmac/channel.hpp"
#include "avmac/discrete_sim.hpp"
#include "avmac/gaussian_sim.hpp"
#include "avmac/region.hpp"
#include "avmac/rng.hpp"
#include "avmac/symmetrization.hpp"

using namespace avmac;

namespace {

FactorizedInput uniform_input(int x_card, int y_card) {
    return FactorizedInput{{1.0},
                           CondDistribution::uniform({1}, x_card),
                           CondDistribution::uniform({1}, y_card)};
}

DiscreteAVMAC bench_channel() { return binary_xor_channel({0.0, 1.0}, 0.6); }

}  // namespace

static void BM_BuildSymmetrizingLp(benchmark::State& state) {
    const DiscreteAVMAC ch = bench_channel();
    const auto graphs = enumerate_graphs(static_cast<int>(state.range(0)), 4);
    for (auto _ : state)
        for (const auto& g : graphs) benchmark::DoNotOptimize(build_symmetrizing_lp(ch, g));
}
BENCHMARK(BM_BuildSymmetrizingLp)->DenseRange(1, 4);

static void BM_WeakSymmetrizability(benchmark::State& state) {
    const DiscreteAVMAC ch = bench_channel();
    const FactorizedInput input = uniform_input(2, 2);
    const int cap = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(weak_symmetrizability(ch, input, cap));
}
BENCHMARK(BM_WeakSymmetrizability)->DenseRange(1, 3);

static void BM_StrongSymmetrizability(benchmark::State& state) {
    const DiscreteAVMAC ch = bench_channel();
    const FactorizedInput input = uniform_input(2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(strong_symmetrizability(ch, input, 2));
}
BENCHMARK(BM_StrongSymmetrizability);

static void BM_WorstCaseJammer(benchmark::State& state) {
    const DiscreteAVMAC ch = bench_channel();
    const FactorizedInput input = uniform_input(2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_case_jammer(ch, input, JammerObjective::sum_rate));
}
BENCHMARK(BM_WorstCaseJammer);

static void BM_TypicalityDecode(benchmark::State& state) {
    const DiscreteAVMAC ch = bench_channel();
    const FactorizedInput input = uniform_input(2, 2);
    const int messages = static_cast<int>(state.range(0));
    const DiscreteCodebookPair cb = make_codebook_pair(ch, input, 48, messages, messages, 11);
    Rng rng(3);
    std::vector<int> z(48);
    for (int& v : z) v = static_cast<int>(rng.next_below(2));
    DecoderParams params;
    params.list_size = 2;
    for (auto _ : state) benchmark::DoNotOptimize(typicality_list_decode(cb, ch, z, params));
    state.SetItemsProcessed(state.iterations() * messages * messages);
}
BENCHMARK(BM_TypicalityDecode)->Arg(16)->Arg(64);

static void BM_MinDistanceDecode(benchmark::State& state) {
    const int n = 64, messages = static_cast<int>(state.range(0));
    const SphericalCodebook c1 = spherical_codebook(n, messages, 1.0, 5);
    const SphericalCodebook c2 = spherical_codebook(n, messages, 1.0, 6);
    Rng rng(9);
    std::vector<double> z(static_cast<std::size_t>(n));
    for (double& v : z) v = rng.next_gaussian();
    for (auto _ : state) benchmark::DoNotOptimize(min_distance_list_decode(c1, c2, z, 2));
    state.SetItemsProcessed(state.iterations() * messages * messages);
}
BENCHMARK(BM_MinDistanceDecode)->Arg(64)->Arg(128);

static void BM_SymmetrizingAttackDraw(benchmark::State& state) {
    const DiscreteAVMAC ch = bench_channel();
    const FactorizedInput input = uniform_input(2, 2);
    const auto rep = weak_symmetrizability(ch, input, 2);
    const DiscreteCodebookPair cb = make_codebook_pair(ch, input, 200, 64, 64, 13);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            symmetrizing_attack_state(cb, *rep.witness_graph, rep.witness_q, ch, ++seed));
}
BENCHMARK(BM_SymmetrizingAttackDraw);

BENCHMARK_MAIN();
