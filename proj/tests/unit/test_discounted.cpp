#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "rsgame/discounted.hpp"
#include "rsgame/errors.hpp"
#include "rsgame/rng.hpp"
#include "test_models.hpp"

using namespace rsgame;
using rsgame::testing::one_state_model;
using rsgame::testing::random_model;

namespace {

GameModel zero_cost_chain(int n) {
    GameModel model(n, 2, 2);
    for (int i = 0; i < n; ++i)
        for (int u1 = 0; u1 < 2; ++u1)
            for (int u2 = 0; u2 < 2; ++u2) {
                double exit = 0.0;
                if (i + 1 < n) {
                    model.rate(i, i + 1, u1, u2) = 1.0 + 0.5 * u1;
                    exit += 1.0 + 0.5 * u1;
                }
                if (i > 0) {
                    model.rate(i, i - 1, u1, u2) = 2.0 + 0.5 * u2;
                    exit += 2.0 + 0.5 * u2;
                }
                model.rate(i, i, u1, u2) = -exit;
            }
    validate(model);
    return model;
}

}  // namespace

TEST_SUITE("discounted") {

TEST_CASE("contraction_step closed forms") {
    SUBCASE("pure cost: kappa = delta") {
        GameModel model = one_state_model({{1.0}});  // M = 0, ||r|| = 1
        const ContractionStep step = contraction_step(model, 0.1, 1.0, 0.5);
        CHECK(step.delta == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(step.kappa == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("pure drift: logarithmic inversion") {
        GameModel model = zero_cost_chain(2);  // costs 0
        // Scale rates so M = 1.
        for (auto& v : model.rate_tensor()) v /= 2.5;
        validate(model);
        CHECK(model.max_exit_rate() == doctest::Approx(1.0));
        const ContractionStep step = contraction_step(model, 0.1, 1.0, 0.5);
        const double expected = 0.1 * (std::exp(0.25) - 1.0);
        CHECK(step.delta == doctest::Approx(expected).epsilon(1e-7));
        // Bisection oracle: kappa at delta is feasible, just beyond is not.
        CHECK(step.kappa <= 0.5 + 1e-12);
        CHECK(2.0 * std::log1p(step.delta * 1.001 / 0.1) > 0.5);
    }
    SUBCASE("doubling alpha strictly enlarges the step") {
        GameModel model = random_model(3, 3, 2, 2);
        const double d1 = contraction_step(model, 0.05, 1.0, 0.5).delta;
        const double d2 = contraction_step(model, 0.05, 2.0, 0.5).delta;
        CHECK(d2 > d1 * 1.01);
    }
}

TEST_CASE("picard_apply") {
    SUBCASE("zero cost fixes the constant 1") {
        GameModel model = zero_cost_chain(3);
        std::vector<double> grid(65);
        for (int k = 0; k < 65; ++k) grid[k] = 0.01 + 0.2 * k / 64.0;
        std::vector<std::vector<double>> f(65, std::vector<double>(3, 1.0));
        const auto tf = picard_apply(model, grid, f, std::vector<double>(3, 1.0), 1.0);
        for (const auto& row : tf)
            for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("one sweep from the constant start is the first Taylor iterate") {
        GameModel model = one_state_model({{0, 2}, {3, 1}});
        const double eps = 0.01, alpha = 1.0;
        const double h_eps = std::exp(eps * model.cost_sup() / alpha);
        std::vector<double> grid(33);
        for (int k = 0; k < 33; ++k) grid[k] = eps + 0.3 * k / 32.0;
        std::vector<std::vector<double>> f(33, std::vector<double>(1, h_eps));
        const auto tf = picard_apply(model, grid, f, {h_eps}, alpha);
        for (int k = 0; k < 33; ++k) {
            const double expected = h_eps * (1.0 + 1.5 * (grid[k] - eps) / alpha);
            CHECK(tf[k][0] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("measured Lipschitz constant stays below kappa") {
        GameModel model = random_model(51, 4, 2, 3, 1.3);
        const double eps = 0.05, alpha = 1.3;
        const ContractionStep step = contraction_step(model, eps, alpha, 0.5);
        std::vector<double> grid(65);
        for (int k = 0; k < 65; ++k) grid[k] = eps + step.delta * k / 64.0;
        CounterRng rng(8);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::vector<double>> f1(65, std::vector<double>(4)), f2 = f1;
            double gap = 0.0;
            for (int k = 0; k < 65; ++k)
                for (int i = 0; i < 4; ++i) {
                    f1[k][i] = 0.5 + 2.5 * rng.next_uniform();
                    f2[k][i] = 0.5 + 2.5 * rng.next_uniform();
                    gap = std::max(gap, std::abs(f1[k][i] - f2[k][i]));
                }
            const std::vector<double> left(4, 1.0);
            const auto t1 = picard_apply(model, grid, f1, left, alpha);
            const auto t2 = picard_apply(model, grid, f2, left, alpha);
            double tgap = 0.0;
            for (int k = 0; k < 65; ++k) tgap = std::max(tgap, sup_norm_diff(t1[k], t2[k]));
            CHECK(tgap <= step.kappa * gap * (1.0 + 1e-6) + 1e-12);
        }
    }
    SUBCASE("quadrature estimate flags a coarse grid") {
        GameModel model = random_model(53, 3, 2, 2, 1.0, 1.0, 2.0);
        std::vector<double> grid(5);
        for (int k = 0; k < 5; ++k) grid[k] = 0.001 + 0.4 * k / 4.0;
        std::vector<std::vector<double>> f(5, std::vector<double>(3));
        for (int k = 0; k < 5; ++k)
            for (int i = 0; i < 3; ++i) f[k][i] = 1.0 + grid[k] * grid[k] * (i + 1.0);
        CHECK_THROWS_AS(picard_apply(model, grid, f, std::vector<double>(3, 1.0), 1.0, 1e-15),
                        GridTooCoarse);
    }
}

TEST_CASE("solve_discounted closed forms") {
    SUBCASE("zero cost gives psi == 1") {
        GameModel model = zero_cost_chain(3);
        const DiscountedSolution sol = solve_discounted(model, 1e-3, 0.8);
        for (const auto& row : sol.psi)
            for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("one-state equalizer game reaches exp(val * theta / alpha)") {
        GameModel model = one_state_model({{0, 2}, {3, 1}});
        const EpsilonRefinement ref = refine_epsilon(model, 0.5, 1e-8);
        const double psi = ref.solution.value_at(0.5, 0);
        CHECK(psi == doctest::Approx(std::exp(0.75)).epsilon(1e-6));
        CHECK(std::exp(0.75) == doctest::Approx(2.117).epsilon(1e-3));
    }
    SUBCASE("constant cost is state independent") {
        GameModel model = zero_cost_chain(3);
        for (auto& c : model.cost_tensor()) c = 0.9;
        validate(model);
        const EpsilonRefinement ref = refine_epsilon(model, 0.6, 1e-8);
        for (int i = 0; i < 3; ++i)
            CHECK(ref.solution.value_at(0.6, i) == doctest::Approx(std::exp(0.54)).epsilon(1e-6));
    }
}

TEST_CASE("sandwich and monotonicity on random models") {
    for (std::uint64_t seed : {101, 102, 103, 104}) {
        GameModel model = random_model(seed, 4 + seed % 3, 2, 2, 0.8 + 0.1 * (seed % 4));
        const DiscountedSolution sol = solve_discounted(model, 1e-3, 0.7);
        const double bound_rate = model.cost_sup() / model.alpha;
        double prev_min = 0.0;
        for (std::size_t k = 0; k < sol.theta_grid.size(); ++k) {
            const double upper = std::exp(sol.theta_grid[k] * bound_rate);
            double slice_min = 1e300;
            for (double v : sol.psi[k]) {
                CHECK(v >= 1.0);
                CHECK(v <= upper);
                slice_min = std::min(slice_min, v);
            }
            // Monotone in theta (nonnegative cost), allowing roundoff.
            CHECK(slice_min >= prev_min - 1e-12);
            prev_min = slice_min;
        }
        CHECK(sol.residual <= sol.residual_bound);
    }
}

TEST_CASE("raising the cost never lowers psi") {
    GameModel model = random_model(61, 4, 2, 2);
    const DiscountedSolution base = solve_discounted(model, 1e-3, 0.6);
    GameModel bumped = model;
    for (auto& c : bumped.cost_tensor()) c += 0.3;
    validate(bumped);
    const DiscountedSolution more = solve_discounted(bumped, 1e-3, 0.6);
    CHECK(more.value_at(0.6, 2) >= base.value_at(0.6, 2) - 1e-10);
}

TEST_CASE("refine_epsilon behavior") {
    SUBCASE("zero cost converges at the first halving") {
        GameModel model = zero_cost_chain(2);
        const EpsilonRefinement ref = refine_epsilon(model, 0.5, 1e-10);
        CHECK(ref.diffs.size() == 1);
        CHECK(ref.diffs.front() <= 1e-12);
    }
    SUBCASE("one-state halving ratio is about one half") {
        GameModel model = one_state_model({{0, 2}, {3, 1}});
        const EpsilonRefinement ref = refine_epsilon(model, 0.5, 1e-9);
        REQUIRE(ref.diffs.size() >= 4);
        for (std::size_t k = 0; k + 1 < ref.diffs.size(); ++k) {
            if (ref.diffs[k + 1] < 1e-12) break;  // at the floor the ratio is noise
            CHECK(ref.diffs[k + 1] / ref.diffs[k] == doctest::Approx(0.5).epsilon(0.2));
        }
    }
    SUBCASE("diffs are monotone nonincreasing within slack") {
        GameModel model = random_model(71, 3, 2, 2);
        const EpsilonRefinement ref = refine_epsilon(model, 0.5, 1e-7);
        for (std::size_t k = 0; k + 1 < ref.diffs.size(); ++k)
            CHECK(ref.diffs[k + 1] <= ref.diffs[k] * 1.1 + 1e-15);
    }
}

TEST_CASE("extract_markov_policy") {
    GameModel model = one_state_model({{0, 2}, {3, 1}});
    const DiscountedSolution sol = solve_discounted(model, 1e-3, 0.5);
    SUBCASE("time zero uses the selector at theta itself") {
        const MarkovPolicy policy = extract_markov_policy(sol, 0.5, 2.0, 0.25);
        const int node = sol.nearest_node(0.5);
        CHECK(policy.table.front()[0].v1.weights == sol.selectors[node][0].v1.weights);
        CHECK_FALSE(policy.truncated);
    }
    SUBCASE("fast discounting truncates to a single entry") {
        GameModel fast = one_state_model({{0, 2}, {3, 1}}, /*alpha=*/50.0);
        const DiscountedSolution fsol = solve_discounted(fast, 1e-3, 0.5);
        // theta(dt) < epsilon already at dt = 0.25.
        const MarkovPolicy policy = extract_markov_policy(fsol, 0.5, 2.0, 0.25);
        CHECK(policy.truncated);
        CHECK(policy.table.size() == 1);
        CHECK(policy.t_cutoff == doctest::Approx(std::log(0.5 / 1e-3) / 50.0));
    }
    SUBCASE("one-state policies are constant in time") {
        const MarkovPolicy policy = extract_markov_policy(sol, 0.5, 3.0, 0.1);
        for (const auto& slice : policy.table) {
            CHECK(slice[0].v1[0] == doctest::Approx(0.5).epsilon(1e-8));
            CHECK(slice[0].v2[0] == doctest::Approx(0.25).epsilon(1e-8));
        }
    }
}

TEST_CASE("theta outside the solvable range is rejected") {
    GameModel model = one_state_model({{1.0}});
    CHECK_THROWS(solve_discounted(model, 1e-3, 1.5));
    CHECK_THROWS(solve_discounted(model, 0.5, 0.4));
}

}  // TEST_SUITE
