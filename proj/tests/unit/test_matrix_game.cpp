#include <cmath>

#include <doctest.h>

#include "rsgame/errors.hpp"
#include "rsgame/matrix_game.hpp"
#include "rsgame/rng.hpp"

using namespace rsgame;

namespace {

MatrixGame make(const std::vector<std::vector<double>>& rows) {
    Matrix a(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
    return {a};
}

MatrixGame random_game(CounterRng& rng, int m1, int m2, double scale = 1.0) {
    Matrix a(m1, m2);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m2; ++j) a(i, j) = scale * (2.0 * rng.next_uniform() - 1.0);
    return {a};
}

}  // namespace

TEST_SUITE("matrix_game") {

TEST_CASE("grid oracle on closed-form games") {
    CHECK(brute_force_value(make({{3.25}}), 10) == doctest::Approx(3.25));
    // Matching pennies: value 0, grid error at most 2/k.
    const double mp = brute_force_value(make({{1, -1}, {-1, 1}}), 100);
    CHECK(std::abs(mp) <= 2.0 / 100);
    // Equalizing-row game: value 3/2.
    const double v = brute_force_value(make({{0, 2}, {3, 1}}), 200);
    CHECK(std::abs(v - 1.5) <= 0.02);
}

TEST_CASE("support enumeration solves the equalizer game exactly") {
    const GameSolution sol = support_enumeration_solve(make({{0, 2}, {3, 1}}));
    CHECK(sol.value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sol.p_star[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.q_star[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("lp solver on canonical instances") {
    SUBCASE("1x1") {
        const GameSolution sol = solve_matrix_game(make({{4.5}}));
        CHECK(sol.value == doctest::Approx(4.5));
        CHECK(sol.p_star[0] == doctest::Approx(1.0));
        CHECK(sol.q_star[0] == doctest::Approx(1.0));
    }
    SUBCASE("matching pennies") {
        const GameSolution sol = solve_matrix_game(make({{1, -1}, {-1, 1}}));
        CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(sol.p_star[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(sol.q_star[0] == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("equalizer") {
        const GameSolution sol = solve_matrix_game(make({{0, 2}, {3, 1}}));
        CHECK(sol.value == doctest::Approx(1.5).epsilon(1e-11));
        CHECK(sol.p_star[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(saddle_residual(make({{0, 2}, {3, 1}}), sol) <= 1e-9);
    }
}

TEST_CASE("degenerate single-row and single-column games") {
    const GameSolution row = solve_matrix_game(make({{3, -1, 7, 2}}));
    CHECK(row.value == doctest::Approx(7.0));
    CHECK(row.q_star[2] == doctest::Approx(1.0));
    const GameSolution col = solve_matrix_game(make({{3}, {-1}, {7}}));
    CHECK(col.value == doctest::Approx(-1.0));
    CHECK(col.p_star[1] == doctest::Approx(1.0));
}

TEST_CASE("non-finite payoff entries are rejected") {
    CHECK_THROWS_AS(solve_matrix_game(make({{1.0, std::nan("")}, {0.0, 2.0}})), NonFiniteEntry);
}

TEST_CASE("duality gap on random games up to 8x8") {
    CounterRng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int m1 = 1 + static_cast<int>(rng.next_u64() % 8);
        const int m2 = 1 + static_cast<int>(rng.next_u64() % 8);
        const MatrixGame game = random_game(rng, m1, m2, 3.0);
        const GameSolution sol = solve_matrix_game(game);
        const double maxmin = game_value_maxmin(game);
        CHECK(std::abs(sol.value - maxmin) <= 1e-9);
        CHECK(saddle_residual(game, sol) <= 1e-9);
    }
}

TEST_CASE("shift and scale equivariance") {
    CounterRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const MatrixGame game = random_game(rng, 3, 4);
        const double base = solve_matrix_game(game).value;

        const double shift = 4.0 * rng.next_uniform() - 2.0;
        MatrixGame shifted = game;
        for (auto& v : shifted.payoff.data()) v += shift;
        const GameSolution ssol = solve_matrix_game(shifted);
        CHECK(ssol.value == doctest::Approx(base + shift).epsilon(1e-9));
        // Strategies may differ under degeneracy; the saddle residual is the
        // invariant to compare.
        CHECK(saddle_residual(shifted, ssol) <= 1e-9);

        const double scale = 0.1 + 3.0 * rng.next_uniform();
        MatrixGame scaled = game;
        for (auto& v : scaled.payoff.data()) v *= scale;
        CHECK(solve_matrix_game(scaled).value == doctest::Approx(scale * base).epsilon(1e-9));
    }
}

TEST_CASE("oracle agreement on random 3x3 games") {
    CounterRng rng(99);
    constexpr int kGrid = 300;
    for (int trial = 0; trial < 100; ++trial) {
        const MatrixGame game = random_game(rng, 3, 3);
        const GameSolution lp = solve_matrix_game(game);
        const GameSolution supp = support_enumeration_solve(game);
        CHECK(std::abs(lp.value - supp.value) <= 1e-9);
        CHECK(std::abs(lp.value - brute_force_value(game, kGrid)) <= 3.0 / kGrid);
    }
}

}  // TEST_SUITE
