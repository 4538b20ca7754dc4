#pragma once

#include <cstdint>
#include <vector>

#include "rsgame/model.hpp"
#include "rsgame/types.hpp"

namespace rsgame {

// Jump intervals for one (state, mixed pair): disjoint intervals of length
// pi_ij(v) packed consecutively from 0 in ascending j (the canonical order
// that makes seeded runs reproducible), total mass -pi_ii(v).
struct JumpLayout {
    std::vector<int> targets;
    std::vector<double> cumulative;  // running interval right endpoints
    double total = 0.0;

    static JumpLayout build(const GameModel& model, int i, const MixedAction& v1,
                            const MixedAction& v2);
    // Target state for a point z in [0, total).
    int target_for(double z) const;
};

// kExponential draws sojourns directly from their exponential law (valid
// for stationary profiles); kThinning replays the driving-measure
// construction against the uniform bound M and also handles time-dependent
// profiles. Both sample the same path law.
enum class SamplerKind { kExponential, kThinning };

struct PathSample {
    std::vector<double> jump_times;   // strictly increasing, within (0, horizon)
    std::vector<int> states;          // states[k] holds on sojourn k; size jumps+1
    std::vector<MixedPair> actions;   // mixed pair applied at each sojourn start
    double horizon = 0.0;

    int state_at(double t) const;
    int num_jumps() const { return static_cast<int>(jump_times.size()); }
};

// Exact-law sampling of the controlled chain under the given profile,
// deterministic given the seed. Markov profiles always go through thinning.
// A state with zero exit rate holds to the horizon.
PathSample simulate_path(const GameModel& model, const StrategyProfile& profile, int start_state,
                         double horizon, std::uint64_t seed,
                         SamplerKind kind = SamplerKind::kExponential);

struct McEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
    int n_paths = 0;
    // Deterministic bound on the neglected tail factor (discounted only).
    double tail_factor = 1.0;
};

// Monte Carlo mean of exp(theta * int_0^T e^{-alpha s} r ds); the integral
// is a closed-form sum over sojourn/profile segments.
McEstimate estimate_discounted(const GameModel& model, const StrategyProfile& profile, double theta,
                               int start_state, double horizon, int n_paths, std::uint64_t seed);

struct GrowthEstimate {
    double rho_hat = 0.0;
    double stderr_rho = 0.0;  // delta method: se(mean) / (mean * T)
    double mean_functional = 0.0;
    int n_paths = 0;
};

// (1/T) ln of the Monte Carlo mean of exp(int_0^T r ds) under a stationary
// pair. The exponential functional is heavy-tailed; prefer long horizons
// over many paths when variance matters.
GrowthEstimate estimate_ergodic_growth(const GameModel& model, const std::vector<MixedAction>& v1,
                                       const std::vector<MixedAction>& v2, int start_state,
                                       double horizon, int n_paths, std::uint64_t seed);

// int_{t0}^{t1} r(Y(s), v(s)) ds along a sampled path, splitting sojourns at
// the profile's time grid.
double pathwise_cost_integral(const GameModel& model, const StrategyProfile& profile,
                              const PathSample& path, double t0, double t1);

// Same with the e^{-alpha s} discount factor inside the integral.
double pathwise_discounted_cost_integral(const GameModel& model, const StrategyProfile& profile,
                                         const PathSample& path, double alpha, double t0, double t1);

StrategyProfile stationary_profile(const std::vector<MixedAction>& v1,
                                   const std::vector<MixedAction>& v2);

}  // namespace rsgame
