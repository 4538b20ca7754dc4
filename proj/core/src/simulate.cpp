#include "rsgame/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "rsgame/errors.hpp"
#include "rsgame/linalg.hpp"
#include "rsgame/parallel.hpp"
#include "rsgame/rng.hpp"

namespace rsgame {

namespace {
constexpr double kZeroRate = 1e-14;
}

JumpLayout JumpLayout::build(const GameModel& model, int i, const MixedAction& v1,
                             const MixedAction& v2) {
    JumpLayout layout;
    double acc = 0.0;
    for (int j = 0; j < model.num_states(); ++j) {
        if (j == i) continue;
        const double rate = bilinear_rate(model, i, j, v1, v2);
        if (rate <= kZeroRate) continue;
        acc += rate;
        layout.targets.push_back(j);
        layout.cumulative.push_back(acc);
    }
    layout.total = acc;
    return layout;
}

int JumpLayout::target_for(double z) const {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), z);
    const std::size_t idx = std::min<std::size_t>(it - cumulative.begin(), targets.size() - 1);
    return targets[idx];
}

int PathSample::state_at(double t) const {
    const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    return states[it - jump_times.begin()];
}

StrategyProfile stationary_profile(const std::vector<MixedAction>& v1,
                                   const std::vector<MixedAction>& v2) {
    std::vector<MixedPair> pairs(v1.size());
    for (std::size_t i = 0; i < v1.size(); ++i) pairs[i] = {v1[i], v2[i]};
    return StrategyProfile::make_stationary(std::move(pairs));
}

PathSample simulate_path(const GameModel& model, const StrategyProfile& profile, int start_state,
                         double horizon, std::uint64_t seed, SamplerKind kind) {
    if (!model.validated()) throw ValidationError("model must pass validate() first");
    if (start_state < 0 || start_state >= model.num_states()) throw Error("bad start state");

    CounterRng rng(seed);
    PathSample path;
    path.horizon = horizon;
    path.states.push_back(start_state);
    {
        const MixedPair& pair = profile.at(0.0, start_state);
        path.actions.push_back(pair);
    }

    const bool thinning = kind == SamplerKind::kThinning || !profile.is_stationary();
    double t = 0.0;
    int state = start_state;

    if (thinning) {
        const double bound = model.max_exit_rate();
        if (bound <= kZeroRate) return path;  // no jumps anywhere
        while (true) {
            t += rng.next_exponential(bound);
            if (t >= horizon) break;
            const MixedPair& pair = profile.at(t, state);
            const JumpLayout layout = JumpLayout::build(model, state, pair.v1, pair.v2);
            const double z = rng.next_uniform() * bound;
            if (z >= layout.total) continue;  // phantom candidate
            state = layout.target_for(z);
            path.jump_times.push_back(t);
            path.states.push_back(state);
            path.actions.push_back(profile.at(t, state));
        }
        return path;
    }

    while (true) {
        const MixedPair& pair = profile.at(t, state);
        const JumpLayout layout = JumpLayout::build(model, state, pair.v1, pair.v2);
        if (layout.total <= kZeroRate) break;  // absorbing: sojourn to horizon
        t += rng.next_exponential(layout.total);
        if (t >= horizon) break;
        state = layout.target_for(rng.next_uniform() * layout.total);
        path.jump_times.push_back(t);
        path.states.push_back(state);
        path.actions.push_back(profile.at(t, state));
    }
    return path;
}

namespace {

// Visits every (sub)segment of constant state and constant mixed pair in
// [t0, t1], splitting sojourns at the Markov profile's grid times.
template <typename Fn>
void for_each_segment(const StrategyProfile& profile, const PathSample& path, double t0, double t1,
                      Fn&& fn) {
    const int jumps = path.num_jumps();
    double seg_start = t0;
    int k = 0;
    while (k < jumps && path.jump_times[k] <= t0) ++k;
    int state = path.states[k];
    while (seg_start < t1) {
        const double sojourn_end = k < jumps ? std::min(path.jump_times[k], t1) : t1;
        if (profile.is_stationary()) {
            fn(state, profile.at(seg_start, state), seg_start, sojourn_end);
        } else {
            const double dt = profile.markov.dt;
            double s = seg_start;
            while (s < sojourn_end) {
                double grid_next = sojourn_end;
                if (dt > 0.0) {
                    grid_next = (std::floor(s / dt) + 1.0) * dt;
                    // Rounding can park grid_next at s when s sits on a grid
                    // line; keep stepping or the segment never advances.
                    while (grid_next <= s) grid_next += dt;
                }
                const double e = std::min(grid_next, sojourn_end);
                fn(state, profile.at(0.5 * (s + e), state), s, e);
                s = e;
            }
        }
        seg_start = sojourn_end;
        if (k < jumps && sojourn_end >= path.jump_times[k]) {
            state = path.states[k + 1];
            ++k;
        }
    }
}

double stddev_of_mean(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    std::vector<double> sq(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) sq[k] = (xs[k] - mean) * (xs[k] - mean);
    const double var = pairwise_sum(sq) / (static_cast<double>(xs.size()) - 1.0);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

double pathwise_cost_integral(const GameModel& model, const StrategyProfile& profile,
                              const PathSample& path, double t0, double t1) {
    double acc = 0.0;
    for_each_segment(profile, path, t0, t1, [&](int state, const MixedPair& pair, double a, double b) {
        acc += bilinear_cost(model, state, pair.v1, pair.v2) * (b - a);
    });
    return acc;
}

double pathwise_discounted_cost_integral(const GameModel& model, const StrategyProfile& profile,
                                         const PathSample& path, double alpha, double t0, double t1) {
    double acc = 0.0;
    for_each_segment(profile, path, t0, t1, [&](int state, const MixedPair& pair, double a, double b) {
        const double weight = (std::exp(-alpha * a) - std::exp(-alpha * b)) / alpha;
        acc += bilinear_cost(model, state, pair.v1, pair.v2) * weight;
    });
    return acc;
}

McEstimate estimate_discounted(const GameModel& model, const StrategyProfile& profile, double theta,
                               int start_state, double horizon, int n_paths, std::uint64_t seed) {
    std::vector<double> values(n_paths);
    parallel_for(0, n_paths, [&](int k) {
        const PathSample path = simulate_path(model, profile, start_state, horizon,
                                              CounterRng::derive_stream(seed, k));
        values[k] = std::exp(
            theta * pathwise_discounted_cost_integral(model, profile, path, model.alpha, 0.0, horizon));
    });
    McEstimate est;
    est.n_paths = n_paths;
    est.mean = pairwise_sum(values) / n_paths;
    est.stderr_mean = stddev_of_mean(values, est.mean);
    est.tail_factor =
        std::exp(theta * std::exp(-model.alpha * horizon) * model.cost_sup() / model.alpha);
    return est;
}

GrowthEstimate estimate_ergodic_growth(const GameModel& model, const std::vector<MixedAction>& v1,
                                       const std::vector<MixedAction>& v2, int start_state,
                                       double horizon, int n_paths, std::uint64_t seed) {
    const StrategyProfile profile = stationary_profile(v1, v2);
    std::vector<double> values(n_paths);
    parallel_for(0, n_paths, [&](int k) {
        const PathSample path = simulate_path(model, profile, start_state, horizon,
                                              CounterRng::derive_stream(seed, k));
        values[k] = std::exp(pathwise_cost_integral(model, profile, path, 0.0, horizon));
    });
    GrowthEstimate est;
    est.n_paths = n_paths;
    est.mean_functional = pairwise_sum(values) / n_paths;
    est.rho_hat = std::log(est.mean_functional) / horizon;
    est.stderr_rho = stddev_of_mean(values, est.mean_functional) / (est.mean_functional * horizon);
    return est;
}

}  // namespace rsgame
