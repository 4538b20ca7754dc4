#include <benchmark/benchmark.h>

#include "rsgame/discounted.hpp"
#include "rsgame/ergodic.hpp"
#include "rsgame/feynman_kac.hpp"
#include "rsgame/matrix_game.hpp"
#include "rsgame/rng.hpp"
#include "rsgame/simulate.hpp"
#include "test_models.hpp"

using namespace rsgame;
using rsgame::testing::birth_death_two_state;
using rsgame::testing::constant_profile;
using rsgame::testing::gated_ladder;
using rsgame::testing::random_model;

namespace {

MatrixGame random_game(int m, std::uint64_t seed) {
    CounterRng rng(seed);
    Matrix a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = 2.0 * rng.next_uniform() - 1.0;
    return {a};
}

void BM_MatrixGame(benchmark::State& state) {
    const MatrixGame game = random_game(static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_matrix_game(game).value);
}
BENCHMARK(BM_MatrixGame)->Arg(2)->Arg(4)->Arg(8);

void BM_HamiltonianEval(benchmark::State& state) {
    GameModel model = random_model(7, static_cast<int>(state.range(0)), 3, 3);
    ValueFunction psi = ValueFunction::constant(model.num_states(), 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(hamiltonian_eval(model, psi, 1.0).value[0]);
}
BENCHMARK(BM_HamiltonianEval)->Arg(5)->Arg(10)->Arg(20);

void BM_SolveDiscounted(benchmark::State& state) {
    GameModel model = random_model(11, static_cast<int>(state.range(0)), 2, 2, 1.0, 1.0, 1.0);
    for (auto _ : state) {
        const DiscountedSolution sol = solve_discounted(model, 1e-3, 0.6);
        benchmark::DoNotOptimize(sol.psi.back()[0]);
    }
}
BENCHMARK(BM_SolveDiscounted)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SolveErgodic(benchmark::State& state) {
    GameModel model = gated_ladder(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const ErgodicSolution sol = solve_ergodic(model, *model.certificate, {model.num_states()});
        benchmark::DoNotOptimize(sol.rho);
    }
}
BENCHMARK(BM_SolveErgodic)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PerronValue(benchmark::State& state) {
    GameModel model = gated_ladder(static_cast<int>(state.range(0)));
    const auto v1 = constant_profile(model.num_states(), MixedAction::uniform(2));
    const auto v2 = constant_profile(model.num_states(), MixedAction::uniform(2));
    for (auto _ : state) benchmark::DoNotOptimize(perron_value(model, v1, v2).lambda);
}
BENCHMARK(BM_PerronValue)->Arg(4)->Arg(8)->Arg(16);

void BM_SimulatePaths(benchmark::State& state) {
    GameModel model = birth_death_two_state();
    const StrategyProfile profile =
        stationary_profile(constant_profile(2, MixedAction::uniform(2)),
                           constant_profile(2, MixedAction::uniform(2)));
    std::uint64_t k = 0;
    for (auto _ : state) {
        const PathSample path = simulate_path(model, profile, 0, 20.0, ++k);
        benchmark::DoNotOptimize(path.num_jumps());
    }
}
BENCHMARK(BM_SimulatePaths);

void BM_FeynmanKac(benchmark::State& state) {
    GameModel model = gated_ladder(static_cast<int>(state.range(0)));
    const auto v1 = constant_profile(model.num_states(), MixedAction::uniform(2));
    const auto v2 = constant_profile(model.num_states(), MixedAction::uniform(2));
    for (auto _ : state) benchmark::DoNotOptimize(feynman_kac(model, v1, v2, 1.0)(0, 0));
}
BENCHMARK(BM_FeynmanKac)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
