#include "rsgame/feynman_kac.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "rsgame/errors.hpp"
#include "rsgame/parallel.hpp"
#include "rsgame/rng.hpp"

namespace rsgame {

namespace {

// Uniformization series for one moderate factor (Lambda * t and ||r|| * t
// both small enough that no term over- or underflows).
Matrix uniformized_exponential(const Matrix& p, double lambda_t, double row_bound, int n) {
    Matrix sum = Matrix::identity(n);
    Matrix pk = Matrix::identity(n);
    double coeff = std::exp(-lambda_t);
    for (auto& v : sum.data()) v *= coeff;
    double tail_weight = coeff;  // running term coefficient
    double pk_bound = 1.0;       // bound on row sums of P^k
    for (int k = 1; k < 20000; ++k) {
        pk = pk * p;
        pk_bound *= row_bound;
        coeff *= lambda_t / k;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) sum(r, c) += coeff * pk(r, c);
        tail_weight = coeff * pk_bound;
        // Past twice the mode the term ratio is below 1/2, so the remaining
        // tail is at most twice the current term bound.
        if (k > 2.0 * lambda_t * row_bound + 4.0 && tail_weight * 2.0 < 1e-13) return sum;
    }
    throw SeriesTruncationOverflow("uniformization series did not settle");
}

}  // namespace

Matrix feynman_kac(const GameModel& model, const std::vector<MixedAction>& v1,
                   const std::vector<MixedAction>& v2, double t) {
    if (!model.validated()) throw ValidationError("model must pass validate() first");
    if (t < 0.0) throw Error("feynman_kac needs t >= 0");
    const int n = model.num_states();
    if (t == 0.0) return Matrix::identity(n);
    if (t * model.cost_sup() > 690.0)
        throw SeriesTruncationOverflow("exp(||r|| t) with ||r|| t = " +
                                       std::to_string(t * model.cost_sup()) +
                                       " is not representable; split t and compose");

    const double lambda = model.max_exit_rate() + model.cost_sup() + 1.0;
    const Matrix a = strategy_generator_matrix(model, v1, v2);
    Matrix p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = (i == j ? 1.0 : 0.0) + a(i, j) / lambda;

    // Split long horizons so each factor keeps the Poisson weights and the
    // cost growth within comfortable double range, then compose.
    const int pieces = std::max({1, static_cast<int>(std::ceil(lambda * t / 64.0)),
                                 static_cast<int>(std::ceil(model.cost_sup() * t / 2.0))});
    const double tau = t / pieces;
    const double row_bound = 1.0 + model.cost_sup() / lambda;
    const Matrix factor = uniformized_exponential(p, lambda * tau, row_bound, n);

    Matrix result = factor;
    for (int k = 1; k < pieces; ++k) result = result * factor;
    return result;
}

TwistedChain build_twisted_chain(const GameModel& model, const std::vector<MixedAction>& v1,
                                 const std::vector<MixedAction>& v2) {
    const Matrix k1 = feynman_kac(model, v1, v2, 1.0);
    const int n = k1.rows();
    TwistedChain chain;
    chain.kernel = Matrix(n, n);
    chain.r_hat.resize(n);
    chain.base_v1 = v1;
    chain.base_v2 = v2;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) row_sum += k1(i, j);
        chain.r_hat[i] = std::log(row_sum);
        double check = 0.0;
        for (int j = 0; j < n; ++j) {
            chain.kernel(i, j) = k1(i, j) / row_sum;
            check += chain.kernel(i, j);
        }
        if (std::abs(check - 1.0) > 1e-12)
            throw SolverError("twisted kernel row failed to normalize");
        for (int j = 0; j < n; ++j) chain.kernel(i, j) /= check;
    }
    return chain;
}

namespace {

void require_irreducible_from(const Matrix& kernel, int atom) {
    const int n = kernel.rows();
    auto reach = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{atom};
        seen[atom] = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                const double w = transpose ? kernel(j, i) : kernel(i, j);
                if (!seen[j] && w > 1e-14) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        return std::count(seen.begin(), seen.end(), char(1)) == n;
    };
    if (!reach(false) || !reach(true))
        throw NotIrreducible("twisted chain is not irreducible from the atom state");
}

}  // namespace

DRhoResult d_of_rho(const TwistedChain& chain, double rho, int atom, const DRhoOptions& opts) {
    const int n = chain.kernel.rows();
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = std::exp(chain.r_hat[i] - rho);

    DRhoResult res;
    if (n == 1) {
        res.value = w[0];  // tau = 1 with certainty
        return res;
    }
    require_irreducible_from(chain.kernel, atom);

    // Off-atom states, weighted by the multiplicative factor of the state
    // being entered; m(j) is the expected product collected from j until
    // the first entry into the atom (that final step included).
    std::vector<int> off;
    for (int j = 0; j < n; ++j)
        if (j != atom) off.push_back(j);
    const int m = static_cast<int>(off.size());
    Matrix b(m, m);
    std::vector<double> c(m);
    for (int r = 0; r < m; ++r) {
        for (int s = 0; s < m; ++s) b(r, s) = chain.kernel(off[r], off[s]) * w[off[s]];
        c[r] = chain.kernel(off[r], atom) * w[atom];
    }
    res.spectral_radius = spectral_radius_nonnegative(b);
    if (res.spectral_radius < 1.0 - 1e-12) {
        Matrix sys(m, m);
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) sys(r, s) = (r == s ? 1.0 : 0.0) - b(r, s);
        const std::vector<double> mret = solve_linear(sys, c);
        double d = chain.kernel(atom, atom) * w[atom];
        for (int r = 0; r < m; ++r) d += chain.kernel(atom, off[r]) * w[off[r]] * mret[r];
        res.value = d;
        return res;
    }

    // Heavy-tail regime: sample the twisted chain directly.
    res.exact = false;
    std::vector<double> samples(opts.mc_paths);
    std::atomic<bool> diverged{false};
    parallel_for(0, opts.mc_paths, [&](int k) {
        CounterRng rng(CounterRng::derive_stream(opts.seed, k));
        int state = atom;
        double acc = 1.0;
        for (long step = 0; step < opts.step_cap; ++step) {
            const double z = rng.next_uniform();
            double cum = 0.0;
            int next = n - 1;
            for (int j = 0; j < n; ++j) {
                cum += chain.kernel(state, j);
                if (z < cum) {
                    next = j;
                    break;
                }
            }
            acc *= w[next];
            state = next;
            if (state == atom) {
                samples[k] = acc;
                return;
            }
        }
        diverged = true;
    });
    if (diverged)
        throw SeriesDiverges("twisted-chain walk failed to return within the step cap");
    res.value = pairwise_sum(samples) / opts.mc_paths;
    return res;
}

std::vector<double> exp_hitting_moment(const GameModel& model, const std::vector<MixedAction>& v1,
                                       const std::vector<MixedAction>& v2, int target, double delta) {
    const int n = model.num_states();
    if (target < 0 || target >= n) throw Error("bad target state");
    std::vector<double> u(n, 1.0);
    if (n == 1) return u;

    Matrix q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q(i, j) = bilinear_rate(model, i, j, v1[i], v2[i]);

    std::vector<int> off;
    for (int i = 0; i < n; ++i)
        if (i != target) off.push_back(i);
    const int m = static_cast<int>(off.size());
    Matrix sys(m, m);
    std::vector<double> rhs(m);
    for (int r = 0; r < m; ++r) {
        for (int s = 0; s < m; ++s) sys(r, s) = -q(off[r], off[s]) - (r == s ? delta : 0.0);
        rhs[r] = q(off[r], target);
    }
    std::vector<double> sol;
    try {
        sol = solve_linear(sys, rhs);
    } catch (const SolverError&) {
        throw MomentInfinite("first-passage system is singular (delta too large)");
    }
    for (int r = 0; r < m; ++r) {
        if (!(sol[r] > 0.0) || !std::isfinite(sol[r]))
            throw MomentInfinite("first-passage moment is not finite and positive (delta too large)");
        u[off[r]] = sol[r];
    }
    return u;
}

double twisted_return_moment(const TwistedChain& chain, int atom, double step_weight) {
    const int n = chain.kernel.rows();
    if (n == 1) return step_weight;  // tau = 1
    require_irreducible_from(chain.kernel, atom);

    std::vector<int> off;
    for (int j = 0; j < n; ++j)
        if (j != atom) off.push_back(j);
    const int m = static_cast<int>(off.size());
    Matrix sys(m, m);
    std::vector<double> rhs(m);
    for (int r = 0; r < m; ++r) {
        for (int s = 0; s < m; ++s)
            sys(r, s) = (r == s ? 1.0 : 0.0) - step_weight * chain.kernel(off[r], off[s]);
        rhs[r] = step_weight * chain.kernel(off[r], atom);
    }
    std::vector<double> f;
    try {
        f = solve_linear(sys, rhs);
    } catch (const SolverError&) {
        throw MomentInfinite("twisted return-time system is singular (weight too large)");
    }
    double moment = step_weight * chain.kernel(atom, atom);
    for (int r = 0; r < m; ++r) {
        if (!(f[r] > 0.0) || !std::isfinite(f[r]))
            throw MomentInfinite("twisted return-time moment is not finite and positive");
        moment += step_weight * chain.kernel(atom, off[r]) * f[r];
    }
    return moment;
}

std::vector<double> twisted_hitting_moment(const TwistedChain& chain,
                                           const std::vector<int>& target_set, double step_weight) {
    const int n = chain.kernel.rows();
    if (target_set.empty()) throw Error("empty hitting target set");
    std::vector<char> is_target(n, 0);
    for (int s : target_set) is_target[s] = 1;

    std::vector<int> off;
    for (int j = 0; j < n; ++j)
        if (!is_target[j]) off.push_back(j);
    std::vector<double> u(n, 1.0);
    if (off.empty()) return u;

    const int m = static_cast<int>(off.size());
    Matrix sys(m, m);
    std::vector<double> rhs(m);
    for (int r = 0; r < m; ++r) {
        double to_target = 0.0;
        for (int j = 0; j < n; ++j)
            if (is_target[j]) to_target += chain.kernel(off[r], j);
        for (int s = 0; s < m; ++s)
            sys(r, s) = (r == s ? 1.0 : 0.0) - step_weight * chain.kernel(off[r], off[s]);
        rhs[r] = step_weight * to_target;
    }
    std::vector<double> f;
    try {
        f = solve_linear(sys, rhs);
    } catch (const SolverError&) {
        throw MomentInfinite("twisted hitting-time system is singular (weight too large)");
    }
    for (int r = 0; r < m; ++r) {
        if (!(f[r] > 0.0) || !std::isfinite(f[r]))
            throw MomentInfinite("twisted hitting-time moment is not finite and positive");
        u[off[r]] = f[r];
    }
    return u;
}

TkepReport tkep_check(const TwistedChain& chain, const LyapunovCertificate& cert) {
    TkepReport report;
    const double delta = cert.delta;
    const double weight = std::exp(0.5 * delta);
    report.threshold = 1.0 + cert.b * std::exp(1.5 * delta) / (std::exp(0.5 * delta) - 1.0);

    std::vector<int> light;  // complement of C0
    for (int i = 0; i < static_cast<int>(cert.W.size()); ++i) {
        if (cert.W[i] >= report.threshold)
            report.c0.push_back(i);
        else
            light.push_back(i);
    }

    std::vector<double> moments;
    if (!report.c0.empty() && !light.empty())
        moments = twisted_hitting_moment(chain, light, weight);

    for (int i : report.c0) {
        const double moment =
            light.empty() ? twisted_return_moment(chain, i, weight) : moments[i];
        const double bound = std::exp(-0.5 * delta) * (cert.W[i] + cert.b * std::exp(1.5 * delta));
        report.moments.push_back(moment);
        report.bounds.push_back(bound);
        report.margins.push_back(bound - moment);
    }
    report.ok = std::all_of(report.margins.begin(), report.margins.end(),
                            [](double margin) { return margin >= -1e-9; });
    return report;
}

double ValueTable::at(double tau, int state) const {
    const int last = static_cast<int>(psi.size()) - 1;
    const double pos = std::clamp(tau / dt, 0.0, static_cast<double>(last));
    const int k = std::min(static_cast<int>(pos), last - 1 >= 0 ? last - 1 : 0);
    if (last == 0) return psi[0][state];
    const double frac = pos - k;
    // Values grow exponentially in tau; interpolate the logarithm.
    return std::exp((1.0 - frac) * std::log(psi[k][state]) + frac * std::log(psi[k + 1][state]));
}

ValueTable ValueTable::from_march(const std::vector<MarchStep>& history) {
    if (history.size() < 2) throw Error("march history too short for a value table");
    ValueTable table;
    table.dt = history[1].t - history[0].t;
    table.psi.reserve(history.size());
    for (const auto& step : history) {
        std::vector<double> row(step.psi_bar.size());
        for (std::size_t i = 0; i < row.size(); ++i)
            row[i] = std::exp(step.log_psi_ref) * step.psi_bar[i];
        table.psi.push_back(std::move(row));
    }
    return table;
}

ValueTable ValueTable::from_stationary(const GameModel& model, const std::vector<MixedAction>& v1,
                                       const std::vector<MixedAction>& v2, double horizon,
                                       int steps) {
    if (steps < 1) throw Error("need at least one step");
    ValueTable table;
    table.dt = horizon / steps;
    const Matrix k_step = feynman_kac(model, v1, v2, table.dt);
    std::vector<double> psi(model.num_states(), 1.0);
    table.psi.push_back(psi);
    for (int k = 1; k <= steps; ++k) {
        psi = k_step * psi;
        table.psi.push_back(psi);
    }
    return table;
}

StrategyProfile profile_from_march(const std::vector<MarchStep>& history, double t) {
    if (history.size() < 2) throw Error("march history too short for a profile");
    const double dt = history[1].t - history[0].t;
    if (history.back().t < t - 1e-9) throw Error("march history does not cover the horizon");

    MarkovPolicy policy;
    policy.dt = dt;
    const int steps = static_cast<int>(std::ceil(t / dt)) + 1;
    policy.table.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        const double remaining = t - k * dt;
        int idx = static_cast<int>(std::lround(remaining / dt));
        idx = std::clamp(idx, 0, static_cast<int>(history.size()) - 1);
        policy.table.push_back(history[idx].selectors);
    }
    return StrategyProfile::make_markov(std::move(policy));
}

DppReport multiplicative_dpp_check(const GameModel& model, const StrategyProfile& profile,
                                   const ValueTable& table, const std::vector<int>& hit_set,
                                   double t, const std::vector<int>& start_states, int n_paths,
                                   std::uint64_t seed) {
    if (table.horizon() < t - 1e-9) throw Error("value table does not cover the horizon");
    std::vector<char> in_set(model.num_states(), 0);
    for (int s : hit_set) in_set[s] = 1;

    DppReport report;
    report.ok = true;
    for (int start : start_states) {
        DppCheckEntry entry{};
        entry.state = start;
        entry.reference = table.at(t, start);

        if (in_set[start]) {
            // tau = 0: every path yields the reference exactly.
            entry.mc_mean = entry.reference;
            entry.mc_stderr = 0.0;
            entry.z = 0.0;
            entry.pass = true;
            report.entries.push_back(entry);
            continue;
        }
        std::vector<double> values(n_paths);
        {
            parallel_for(0, n_paths, [&](int k) {
                const std::uint64_t path_seed =
                    CounterRng::derive_stream(seed, static_cast<std::uint64_t>(start) * n_paths + k);
                const PathSample path = simulate_path(model, profile, start, t, path_seed);
                double t_hit = t;
                int state_hit = path.states.back();
                for (int jump = 0; jump < path.num_jumps(); ++jump) {
                    if (in_set[path.states[jump + 1]]) {
                        t_hit = path.jump_times[jump];
                        state_hit = path.states[jump + 1];
                        break;
                    }
                }
                const double cost = pathwise_cost_integral(model, profile, path, 0.0, t_hit);
                values[k] = std::exp(cost) * table.at(t - t_hit, state_hit);
            });
        }
        entry.mc_mean = pairwise_sum(values) / n_paths;
        std::vector<double> sq(n_paths);
        for (int k = 0; k < n_paths; ++k)
            sq[k] = (values[k] - entry.mc_mean) * (values[k] - entry.mc_mean);
        const double se =
            n_paths > 1 ? std::sqrt(pairwise_sum(sq) / (n_paths - 1.0) / n_paths) : 0.0;
        entry.mc_stderr = se;
        if (se > 0.0) {
            entry.z = std::abs(entry.mc_mean - entry.reference) / se;
            entry.pass = entry.z <= 3.0;
        } else {
            entry.z = 0.0;
            entry.pass = std::abs(entry.mc_mean - entry.reference) <= 1e-9 * entry.reference;
        }
        report.ok = report.ok && entry.pass;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace rsgame
