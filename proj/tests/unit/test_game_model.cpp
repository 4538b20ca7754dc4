#include <cmath>

#include <doctest.h>

#include "rsgame/errors.hpp"
#include "rsgame/model.hpp"
#include "rsgame/rng.hpp"
#include "test_models.hpp"

using namespace rsgame;
using rsgame::testing::birth_death_two_state;
using rsgame::testing::one_state_model;
using rsgame::testing::random_model;

namespace {

MixedAction random_mixed(int m, CounterRng& rng) {
    MixedAction a;
    a.weights.resize(m);
    for (double& w : a.weights) w = -std::log1p(-rng.next_uniform());
    a.normalize();
    return a;
}

}  // namespace

TEST_SUITE("game_model") {

TEST_CASE("validate on the canonical small models") {
    SUBCASE("one state, zero generator") {
        GameModel model = one_state_model({{0.7}});
        const ValidationReport report = validate(model);
        CHECK(report.ok);
        CHECK(report.max_exit_rate == doctest::Approx(0.0));
        CHECK(report.cost_sup == doctest::Approx(0.7));
    }
    SUBCASE("two states") {
        GameModel model(2, 1, 1);
        model.rate(0, 1, 0, 0) = 2.0;
        model.rate(0, 0, 0, 0) = -2.0;
        model.rate(1, 0, 0, 0) = 1.0;
        model.rate(1, 1, 0, 0) = -1.0;
        const ValidationReport report = validate(model);
        CHECK(report.ok);
        CHECK(report.max_exit_rate >= 2.0);
    }
    SUBCASE("non-conservative row is reported") {
        GameModel model(2, 2, 2);
        model.rate(0, 1, 0, 0) = 0.1;  // row sum 0.1, beyond repair tolerance
        const ValidationReport report = validate(model);
        CHECK_FALSE(report.ok);
        REQUIRE(report.issues.size() >= 1);
        CHECK(report.issues.front().kind == ValidationIssue::Kind::kNonConservativeRow);
        CHECK(report.issues.front().i == 0);
    }
}

TEST_CASE("validate repairs tiny row defects through the diagonal") {
    GameModel model(2, 1, 1);
    model.rate(0, 1, 0, 0) = 2.0;
    model.rate(0, 0, 0, 0) = -2.0 + 3e-10;
    model.rate(1, 0, 0, 0) = 1.0;
    model.rate(1, 1, 0, 0) = -1.0;
    const ValidationReport report = validate(model);
    CHECK(report.ok);
    CHECK(model.rate(0, 0, 0, 0) == doctest::Approx(-2.0).epsilon(1e-14));
    double row = 0.0;
    for (int j = 0; j < 2; ++j) row += model.rate(0, j, 0, 0);
    CHECK(row == 0.0);
}

TEST_CASE("validate flags negative entries") {
    GameModel model(2, 1, 1);
    model.rate(0, 1, 0, 0) = -0.5;
    model.rate(0, 0, 0, 0) = 0.5;
    model.rate(1, 1, 0, 0) = 0.0;
    model.cost(1, 0, 0) = -1.0;
    const ValidationReport report = validate(model);
    CHECK_FALSE(report.ok);
    bool saw_offdiag = false, saw_cost = false;
    for (const auto& issue : report.issues) {
        saw_offdiag |= issue.kind == ValidationIssue::Kind::kNegativeOffDiagonal;
        saw_cost |= issue.kind == ValidationIssue::Kind::kNegativeCost;
    }
    CHECK(saw_offdiag);
    CHECK(saw_cost);
}

TEST_CASE("bilinear forms reduce correctly") {
    GameModel model = birth_death_two_state();
    SUBCASE("point masses pick out tensor entries") {
        for (int u1 = 0; u1 < 2; ++u1)
            for (int u2 = 0; u2 < 2; ++u2) {
                const MixedAction d1 = MixedAction::point_mass(2, u1);
                const MixedAction d2 = MixedAction::point_mass(2, u2);
                CHECK(bilinear_rate(model, 0, 1, d1, d2) == doctest::Approx(model.rate(0, 1, u1, u2)));
                CHECK(bilinear_cost(model, 0, d1, d2) == doctest::Approx(model.cost(0, u1, u2)));
            }
    }
    SUBCASE("uniform mixes give the arithmetic mean") {
        const MixedAction u = MixedAction::uniform(2);
        double mean = 0.0;
        for (int u1 = 0; u1 < 2; ++u1)
            for (int u2 = 0; u2 < 2; ++u2) mean += 0.25 * model.cost(0, u1, u2);
        CHECK(bilinear_cost(model, 0, u, u) == doctest::Approx(mean));
    }
    SUBCASE("explicit 2x2 expansion against a loop oracle") {
        GameModel m = one_state_model({{0, 4}, {2, 2}});
        const MixedAction v1(std::vector<double>{0.25, 0.75});
        const MixedAction v2(std::vector<double>{0.5, 0.5});
        double oracle = 0.0;
        for (int u1 = 0; u1 < 2; ++u1)
            for (int u2 = 0; u2 < 2; ++u2) oracle += v1[u1] * v2[u2] * m.cost(0, u1, u2);
        CHECK(oracle == doctest::Approx(2.0));
        CHECK(bilinear_cost(m, 0, v1, v2) == doctest::Approx(2.0).epsilon(1e-13));
    }
}

TEST_CASE("conservativity survives mixing") {
    GameModel model = random_model(11, 5, 3, 2);
    CounterRng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const MixedAction v1 = random_mixed(3, rng);
        const MixedAction v2 = random_mixed(2, rng);
        for (int i = 0; i < 5; ++i) {
            double row = 0.0;
            for (int j = 0; j < 5; ++j) row += bilinear_rate(model, i, j, v1, v2);
            CHECK(std::abs(row) <= 1e-10);
        }
    }
}

TEST_CASE("bilinear forms are affine in each argument") {
    GameModel model = random_model(13, 4, 3, 3);
    CounterRng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const MixedAction v1a = random_mixed(3, rng), v1b = random_mixed(3, rng);
        const MixedAction v2 = random_mixed(3, rng);
        const double lam = rng.next_uniform();
        MixedAction blend;
        blend.weights.resize(3);
        for (int k = 0; k < 3; ++k) blend.weights[k] = lam * v1a[k] + (1.0 - lam) * v1b[k];
        const double lhs = bilinear_cost(model, 1, blend, v2);
        const double rhs =
            lam * bilinear_cost(model, 1, v1a, v2) + (1.0 - lam) * bilinear_cost(model, 1, v1b, v2);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
        const double lhs_rate = bilinear_rate(model, 1, 2, blend, v2);
        const double rhs_rate = lam * bilinear_rate(model, 1, 2, v1a, v2) +
                                (1.0 - lam) * bilinear_rate(model, 1, 2, v1b, v2);
        CHECK(std::abs(lhs_rate - rhs_rate) <= 1e-12);
    }
}

TEST_CASE("truncate_cost") {
    GameModel model = random_model(19, 3, 2, 2);
    SUBCASE("full level keeps the model identical") {
        const GameModel full = truncate_cost(model, 3);
        CHECK(full.cost_tensor() == model.cost_tensor());
    }
    SUBCASE("level 0 is rejected") { CHECK_THROWS_AS(truncate_cost(model, 0), BadTruncationLevel); }
    SUBCASE("level 1 zeroes costs beyond the first state") {
        const GameModel cut = truncate_cost(model, 1);
        for (int u1 = 0; u1 < 2; ++u1)
            for (int u2 = 0; u2 < 2; ++u2) {
                CHECK(cut.cost(0, u1, u2) == model.cost(0, u1, u2));
                CHECK(cut.cost(1, u1, u2) == 0.0);
                CHECK(cut.cost(2, u1, u2) == 0.0);
            }
        CHECK(cut.rate_tensor() == model.rate_tensor());
    }
}

TEST_CASE("check_lyapunov on the hand-checked chain") {
    GameModel model = birth_death_two_state();
    SUBCASE("one-state model passes trivially") {
        GameModel single = one_state_model({{0.3}});
        const LyapunovReport report =
            check_lyapunov(single, LyapunovCertificate{{1.0}, 0.4, 1.0, {0}});
        CHECK(report.ok);  // drift 0 <= -2*0.4 + 1
    }
    SUBCASE("W=(1,2) passes with delta=1, b=3 and with delta=0.5, b=2") {
        CHECK(check_lyapunov(model, LyapunovCertificate{{1.0, 2.0}, 1.0, 3.0, {0}}).ok);
        CHECK(check_lyapunov(model, LyapunovCertificate{{1.0, 2.0}, 0.5, 2.0, {0}}).ok);
        // At delta=1 the charge b=2 cannot cover the drift at the C state.
        const LyapunovReport tight =
            check_lyapunov(model, LyapunovCertificate{{1.0, 2.0}, 1.0, 2.0, {0}});
        CHECK_FALSE(tight.ok);
        CHECK(tight.violations.front().i == 0);
    }
    SUBCASE("flat W fails at the un-charged state") {
        const LyapunovReport report =
            check_lyapunov(model, LyapunovCertificate{{1.0, 1.0}, 1.0, 2.0, {0}});
        CHECK_FALSE(report.ok);
        bool state1 = false;
        for (const auto& v : report.violations) state1 |= v.i == 1;
        CHECK(state1);  // drift 0 > -2 there
    }
}

TEST_CASE("pure-pair certificate check covers mixed pairs") {
    GameModel model = rsgame::testing::gated_ladder(4);
    const LyapunovCertificate cert = *model.certificate;
    const LyapunovReport pure = check_lyapunov(model, cert);
    REQUIRE(pure.ok);
    CounterRng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const MixedAction v1 = random_mixed(2, rng);
        const MixedAction v2 = random_mixed(2, rng);
        for (int i = 0; i < model.num_states(); ++i) {
            const double drift = apply_generator(model, i, v1, v2, cert.W);
            const double rhs = -2.0 * cert.delta * cert.W[i] + (i == 0 ? cert.b : 0.0);
            CHECK(drift <= rhs + 1e-9);
        }
    }
}

TEST_CASE("check_small_cost is strict") {
    GameModel model(1, 1, 1);
    model.cost(0, 0, 0) = 0.4;
    validate(model);
    LyapunovCertificate cert{{1.0}, 1.0, 1.0, {0}};
    CHECK(check_small_cost(model, cert).ok);           // 0.4 < 0.5
    CHECK(check_small_cost(model, cert, 2.0).ok == false);  // 0.8 >= 0.5
    model.cost(0, 0, 0) = 0.5;
    validate(model);
    CHECK_FALSE(check_small_cost(model, cert).ok);     // boundary excluded
    CHECK(check_small_cost(model, cert).max_admissible_theta == doctest::Approx(1.0));
}

}  // TEST_SUITE
