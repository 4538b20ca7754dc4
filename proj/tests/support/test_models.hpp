#pragma once

#include <cmath>
#include <vector>

#include "rsgame/model.hpp"
#include "rsgame/rng.hpp"

namespace rsgame::testing {

// 1-state model whose stage game is the given payoff matrix.
inline GameModel one_state_model(const std::vector<std::vector<double>>& payoff, double alpha = 1.0,
                                 double theta_cap = 1.0) {
    const int m1 = static_cast<int>(payoff.size());
    const int m2 = static_cast<int>(payoff.front().size());
    GameModel model(1, m1, m2);
    model.alpha = alpha;
    model.theta_cap = theta_cap;
    for (int u1 = 0; u1 < m1; ++u1)
        for (int u2 = 0; u2 < m2; ++u2) model.cost(0, u1, u2) = payoff[u1][u2];
    validate(model);
    return model;
}

// 2-state chain with rate 1 up and 4 down for every action pair, 2x2
// actions, costs below 0.4. Carries the certificate W=(1,2), delta=1, b=3,
// C={state 1}.
inline GameModel birth_death_two_state(bool with_certificate = true) {
    GameModel model(2, 2, 2);
    model.alpha = 1.0;
    model.theta_cap = 1.0;
    model.ref_state = 0;
    for (int u1 = 0; u1 < 2; ++u1) {
        for (int u2 = 0; u2 < 2; ++u2) {
            model.rate(0, 1, u1, u2) = 1.0;
            model.rate(0, 0, u1, u2) = -1.0;
            model.rate(1, 0, u1, u2) = 4.0;
            model.rate(1, 1, u1, u2) = -4.0;
        }
    }
    // Nondegenerate stage games at both states, sup-norm 0.4.
    model.cost(0, 0, 0) = 0.00;
    model.cost(0, 0, 1) = 0.26;
    model.cost(0, 1, 0) = 0.40;
    model.cost(0, 1, 1) = 0.13;
    model.cost(1, 0, 0) = 0.32;
    model.cost(1, 0, 1) = 0.08;
    model.cost(1, 1, 0) = 0.05;
    model.cost(1, 1, 1) = 0.24;
    if (with_certificate) model.certificate = LyapunovCertificate{{1.0, 2.0}, 1.0, 3.0, {0}};
    validate(model);
    return model;
}

// Birth-death ladder with W(i) = 2^i, delta = 1, b = 3, C = {state 1}:
// birth rates in [0.5, 1], death rates in [8, 10], so the drift inequality
// holds at every pure pair; costs stay below 0.45 (small-cost gate at
// theta = 1). With 6+ states the top of the ladder clears the C0 threshold.
inline GameModel gated_ladder(int num_states, int m1 = 2, int m2 = 2,
                              std::uint64_t cost_seed = 7) {
    GameModel model(num_states, m1, m2);
    model.alpha = 1.0;
    model.theta_cap = 1.0;
    model.ref_state = 0;
    CounterRng rng(cost_seed);
    for (int i = 0; i < num_states; ++i) {
        for (int u1 = 0; u1 < m1; ++u1) {
            for (int u2 = 0; u2 < m2; ++u2) {
                const double f1 = m1 > 1 ? static_cast<double>(u1) / (m1 - 1) : 0.0;
                const double f2 = m2 > 1 ? static_cast<double>(u2) / (m2 - 1) : 0.0;
                const double birth = 0.5 + 0.25 * f1 + 0.25 * f2;
                const double death = 8.0 + 1.0 * f1 + 1.0 * f2;
                double exit = 0.0;
                if (i + 1 < num_states) {
                    model.rate(i, i + 1, u1, u2) = birth;
                    exit += birth;
                }
                if (i > 0) {
                    model.rate(i, i - 1, u1, u2) = death;
                    exit += death;
                }
                model.rate(i, i, u1, u2) = -exit;
                model.cost(i, u1, u2) = 0.45 * rng.next_uniform();
            }
        }
    }
    LyapunovCertificate cert;
    cert.W.resize(num_states);
    for (int i = 0; i < num_states; ++i) cert.W[i] = std::pow(2.0, i);
    cert.delta = 1.0;
    cert.b = 3.0;
    cert.C = {0};
    model.certificate = cert;
    validate(model);
    return model;
}

// Random irreducible validated model: a ring of guaranteed rates plus
// random extra transitions; costs uniform in [0, cost_max].
inline GameModel random_model(std::uint64_t seed, int num_states, int m1, int m2,
                              double alpha = 1.0, double theta_cap = 1.0, double cost_max = 1.5) {
    CounterRng rng(seed);
    GameModel model(num_states, m1, m2);
    model.alpha = alpha;
    model.theta_cap = theta_cap;
    model.ref_state = 0;
    for (int i = 0; i < num_states; ++i) {
        for (int u1 = 0; u1 < m1; ++u1) {
            for (int u2 = 0; u2 < m2; ++u2) {
                double exit = 0.0;
                for (int j = 0; j < num_states; ++j) {
                    if (j == i) continue;
                    double rate = rng.next_uniform() < 0.5 ? 0.0 : 2.0 * rng.next_uniform();
                    if (j == (i + 1) % num_states) rate += 0.2;  // keep every pair irreducible
                    model.rate(i, j, u1, u2) = rate;
                    exit += rate;
                }
                model.rate(i, i, u1, u2) = -exit;
                model.cost(i, u1, u2) = cost_max * rng.next_uniform();
            }
        }
    }
    validate(model);
    return model;
}

inline std::vector<MixedAction> constant_profile(int num_states, const MixedAction& action) {
    return std::vector<MixedAction>(num_states, action);
}

}  // namespace rsgame::testing
