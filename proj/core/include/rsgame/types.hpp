#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace rsgame {

// Probability vector over one player's action set.
struct MixedAction {
    std::vector<double> weights;

    MixedAction() = default;
    explicit MixedAction(std::vector<double> w) : weights(std::move(w)) {}

    static MixedAction point_mass(int num_actions, int which);
    static MixedAction uniform(int num_actions);

    int size() const { return static_cast<int>(weights.size()); }
    double operator[](int k) const { return weights[k]; }

    // Entries nonnegative and summing to 1 within tol.
    bool is_valid(double tol = 1e-12) const;

    // Rescales to exact unit mass (used after sampling random points).
    void normalize();
};

// One mixed action per player.
struct MixedPair {
    MixedAction v1;
    MixedAction v2;
};

// Strictly positive per-state values; the unknown of both stationary
// equations lives here.
struct ValueFunction {
    std::vector<double> values;

    ValueFunction() = default;
    explicit ValueFunction(std::vector<double> v) : values(std::move(v)) {}
    static ValueFunction constant(int num_states, double value) {
        return ValueFunction(std::vector<double>(num_states, value));
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }
};

// Time-indexed table of per-state mixed pairs, piecewise constant on
// [k*dt, (k+1)*dt); the last entry extends to the end of the horizon.
struct MarkovPolicy {
    double dt = 0.0;
    std::vector<std::vector<MixedPair>> table;  // [time index][state]

    // Set when the table stops short of the requested horizon because the
    // underlying parameter curve left the solved range at time t_cutoff.
    bool truncated = false;
    double t_cutoff = std::numeric_limits<double>::infinity();

    int steps() const { return static_cast<int>(table.size()); }
    double horizon() const { return dt * steps(); }
    const MixedPair& at(double t, int state) const;
};

// Either a stationary per-state pair or a Markov (time-indexed) table.
struct StrategyProfile {
    enum class Kind { kStationary, kMarkov };

    Kind kind = Kind::kStationary;
    std::vector<MixedPair> stationary;  // [state]
    MarkovPolicy markov;

    static StrategyProfile make_stationary(std::vector<MixedPair> per_state);
    static StrategyProfile make_markov(MarkovPolicy policy);

    bool is_stationary() const { return kind == Kind::kStationary; }
    const MixedPair& at(double t, int state) const;

    // Copy with one player's strategy replaced by a stationary deviation
    // (player is 1 or 2); the other player's entries are untouched.
    StrategyProfile with_player_replaced(int player, const std::vector<MixedAction>& stationary_dev) const;
};

}  // namespace rsgame
