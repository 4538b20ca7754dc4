#include "rsgame/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "rsgame/errors.hpp"
#include "rsgame/rng.hpp"

namespace rsgame {

namespace {

std::vector<double> hamiltonian_values(const GameModel& model, const std::vector<double>& psi) {
    return hamiltonian_eval(model, ValueFunction{std::vector<double>(psi)}, 1.0).value;
}

double weighted_gap(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& w) {
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]) / w[i]);
    return gap;
}

// Least-squares slope of (t_k, y_k) over a uniformly spaced window.
double window_slope(const std::deque<double>& ys, double dt) {
    const int n = static_cast<int>(ys.size());
    if (n < 2) return 0.0;
    const double t_mean = 0.5 * (n - 1) * dt;
    double y_mean = 0.0;
    for (double y : ys) y_mean += y;
    y_mean /= n;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        const double tc = k * dt - t_mean;
        num += tc * (ys[k] - y_mean);
        den += tc * tc;
    }
    return num / den;
}

}  // namespace

MarchOutcome march_finite_horizon(const GameModel& model, const MarchOptions& opts) {
    if (!model.validated()) throw ValidationError("model must pass validate() first");
    const int n = model.num_states();
    const int i0 = model.ref_state;
    const double scale = model.max_exit_rate() + model.cost_sup();

    double dt = opts.dt;
    if (dt <= 0.0) dt = scale > 0.0 ? 0.05 / scale : std::min(0.1, opts.t_max / 100.0);
    if (dt * scale > 0.1 + 1e-12)
        throw StepUnstable("dt * (M + ||r||) = " + std::to_string(dt * scale) + " exceeds 0.1");

    std::vector<double> weight(n, 1.0);
    if (model.certificate) weight = model.certificate->W;

    const int steps_per_unit = std::max(1, static_cast<int>(std::lround(1.0 / dt)));
    const int window = std::max(10, steps_per_unit);

    MarchOutcome out;
    out.dt = dt;
    std::vector<double> psi_bar(n, 1.0);
    double log_ref = 0.0;
    std::deque<double> log_window;        // trailing log_psi_ref samples
    std::deque<double> rho_samples;       // trailing rho estimates, one per step
    std::deque<std::vector<double>> psi_samples;

    auto rk4_step = [&](const std::vector<double>& y) {
        const auto k1 = hamiltonian_values(model, y);
        std::vector<double> tmp(n);
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        const auto k2 = hamiltonian_values(model, tmp);
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        const auto k3 = hamiltonian_values(model, tmp);
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
        const auto k4 = hamiltonian_values(model, tmp);
        std::vector<double> next(n);
        for (int i = 0; i < n; ++i)
            next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return next;
    };

    const long max_steps = static_cast<long>(std::ceil(opts.t_max / dt));
    log_window.push_back(0.0);
    for (long step = 0; step <= max_steps; ++step) {
        const double t = step * dt;
        const HamiltonianResult h =
            hamiltonian_eval(model, ValueFunction{std::vector<double>(psi_bar)}, 1.0);

        const double rho_now = window_slope(log_window, dt);
        if (opts.record_history) {
            MarchStep rec;
            rec.t = t;
            rec.psi_bar = psi_bar;
            rec.log_psi_ref = log_ref;
            rec.rho_estimate = rho_now;
            rec.selectors = h.saddle;
            out.history.push_back(std::move(rec));
        }
        rho_samples.push_back(rho_now);
        psi_samples.push_back(psi_bar);
        if (static_cast<int>(rho_samples.size()) > steps_per_unit + 1) {
            rho_samples.pop_front();
            psi_samples.pop_front();
        }

        // Convergence over a unit-time window, once the slope window is full.
        if (step >= window && static_cast<int>(rho_samples.size()) == steps_per_unit + 1) {
            out.last_rho_delta = std::abs(rho_samples.back() - rho_samples.front());
            out.last_psi_delta = weighted_gap(psi_samples.back(), psi_samples.front(), weight);
            if (out.last_rho_delta < opts.tol && out.last_psi_delta < opts.tol) {
                out.converged = true;
                out.t_final = t;
                out.rho = rho_now;
                out.psi_bar = psi_bar;
                out.selectors = h.saddle;
                return out;
            }
        }
        if (step == max_steps) {
            out.t_final = t;
            out.rho = rho_now;
            out.psi_bar = psi_bar;
            out.selectors = h.saddle;
            break;
        }

        std::vector<double> next = rk4_step(psi_bar);
        const double ref = next[i0];
        if (!(ref > 0.0) || !std::isfinite(ref))
            throw StepUnstable("normalizer became nonpositive at t = " + std::to_string(t));
        for (int i = 0; i < n; ++i) {
            next[i] /= ref;
            if (!(next[i] > 0.0) || !std::isfinite(next[i]))
                throw StepUnstable("psi became nonpositive at t = " + std::to_string(t));
        }
        psi_bar = std::move(next);
        log_ref += std::log(ref);
        log_window.push_back(log_ref);
        if (static_cast<int>(log_window.size()) > window) log_window.pop_front();
    }

    if (opts.require_convergence)
        throw NoConvergence("finite-horizon march to t_max = " + std::to_string(opts.t_max),
                            std::max(out.last_rho_delta, out.last_psi_delta));
    return out;
}

Matrix strategy_generator_matrix(const GameModel& model, const std::vector<MixedAction>& v1,
                                 const std::vector<MixedAction>& v2) {
    const int n = model.num_states();
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = bilinear_rate(model, i, j, v1[i], v2[i]);
        a(i, i) += bilinear_cost(model, i, v1[i], v2[i]);
    }
    return a;
}

bool is_irreducible(const Matrix& rates) {
    const int n = rates.rows();
    if (n == 1) return true;
    auto reachable = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (j == i || seen[j]) continue;
                const double q = transpose ? rates(j, i) : rates(i, j);
                if (q > 1e-14) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reachable(false) && reachable(true);
}

PerronResult perron_value(const GameModel& model, const std::vector<MixedAction>& v1,
                          const std::vector<MixedAction>& v2) {
    const int n = model.num_states();
    Matrix rates(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rates(i, j) = bilinear_rate(model, i, j, v1[i], v2[i]);
    if (!is_irreducible(rates))
        throw NotIrreducible("chain under the given stationary pair is not irreducible");

    const double big = model.max_exit_rate() + model.cost_sup() + 1.0;
    Matrix p = rates;
    for (int i = 0; i < n; ++i) {
        p(i, i) += bilinear_cost(model, i, v1[i], v2[i]) + big;
        for (int j = 0; j < n; ++j) p(i, j) /= big;
    }

    std::vector<double> x(n, 1.0);
    constexpr int kMaxIter = 500000;
    constexpr double kTol = 1e-14;
    double mu = 1.0;
    for (int it = 0; it < kMaxIter; ++it) {
        std::vector<double> y = p * x;
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, norm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ratio = y[i] / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            norm = std::max(norm, y[i]);
        }
        mu = 0.5 * (lo + hi);
        for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
        if (hi - lo <= kTol * std::max(1.0, mu)) {
            PerronResult res;
            res.lambda = big * (mu - 1.0);
            res.eigenvector = std::move(x);
            const double ref = res.eigenvector[model.ref_state];
            for (double& v : res.eigenvector) v /= ref;
            return res;
        }
    }
    throw PowerIterationStalled(kMaxIter, mu);
}

double ergodic_residual(const GameModel& model, double rho, const ValueFunction& psi_hat) {
    const auto h = hamiltonian_values(model, psi_hat.values);
    double worst = 0.0;
    for (int i = 0; i < model.num_states(); ++i)
        worst = std::max(worst, std::abs(rho * psi_hat[i] - h[i]));
    return worst;
}

ErgodicSolution solve_ergodic(const GameModel& model, const LyapunovCertificate& cert,
                              const std::vector<int>& levels, const ErgodicOptions& opts) {
    if (!model.validated()) throw ValidationError("model must pass validate() first");
    if (levels.empty()) throw Error("empty truncation schedule");
    for (std::size_t k = 1; k < levels.size(); ++k)
        if (levels[k] <= levels[k - 1]) throw Error("truncation schedule must be strictly increasing");

    ErgodicSolution sol;
    const LyapunovReport lyap = check_lyapunov(model, cert);
    const SmallCostReport small = check_small_cost(model, cert);
    sol.gate_lyapunov_ok = lyap.ok;
    sol.gate_small_cost_ok = small.ok;
    if (!lyap.ok || !small.ok) {
        if (!opts.override_gates) throw GateFailed(!lyap.ok ? "lyapunov" : "small_cost");
        sol.gate_overridden = true;
    }

    MarchOptions march_opts = opts.march;
    march_opts.record_history = false;

    MarchOutcome last;
    GameModel last_model;
    for (int level : levels) {
        GameModel truncated = truncate_cost(model, level);
        MarchOutcome outcome = march_finite_horizon(truncated, march_opts);
        if (!sol.level_rhos.empty() && outcome.rho < sol.level_rhos.back() - 1e-8)
            throw SolverError("rho decreased between truncation levels (" +
                              std::to_string(sol.level_rhos.back()) + " -> " +
                              std::to_string(outcome.rho) + ")");
        sol.level_rhos.push_back(outcome.rho);
        last = std::move(outcome);
        last_model = std::move(truncated);
    }

    sol.truncation_level = levels.back();
    sol.march_time = last.t_final;

    // Selector/eigenpair polish: freeze the saddle pair, take the exact
    // principal eigenpair of the frozen linear problem, re-derive selectors,
    // and keep the best stationary-equation residual seen.
    double best_res = ergodic_residual(last_model, last.rho, ValueFunction{std::vector<double>(last.psi_bar)});
    sol.rho = last.rho;
    sol.psi_hat = ValueFunction{last.psi_bar};
    std::vector<MixedPair> saddle = last.selectors;
    sol.residual = best_res;

    for (int round = 0; round < opts.max_polish_rounds; ++round) {
        std::vector<MixedAction> v1(model.num_states()), v2(model.num_states());
        for (int i = 0; i < model.num_states(); ++i) {
            v1[i] = saddle[i].v1;
            v2[i] = saddle[i].v2;
        }
        PerronResult pf;
        try {
            pf = perron_value(last_model, v1, v2);
        } catch (const NotIrreducible&) {
            break;  // keep the march result; the residual gate decides below
        }
        const ValueFunction psi{std::vector<double>(pf.eigenvector)};
        const HamiltonianResult h = hamiltonian_eval(last_model, psi, 1.0);
        double res = 0.0;
        for (int i = 0; i < model.num_states(); ++i)
            res = std::max(res, std::abs(pf.lambda * psi[i] - h.value[i]));
        sol.polish_rounds = round + 1;
        if (res < best_res) {
            best_res = res;
            sol.rho = pf.lambda;
            sol.psi_hat = psi;
            saddle = h.saddle;
            sol.residual = res;
        } else {
            break;
        }
        if (res <= opts.residual_tol * std::max(1.0, std::abs(pf.lambda))) break;
    }

    sol.residual_bound = opts.residual_tol * std::max(1.0, std::abs(sol.rho));
    if (sol.residual > sol.residual_bound)
        throw NoConvergence("ergodic stationary-equation residual", sol.residual);

    // Exact normalization at the reference state.
    const double ref = sol.psi_hat[model.ref_state];
    for (double& v : sol.psi_hat.values) v /= ref;

    sol.v1_star.resize(model.num_states());
    sol.v2_star.resize(model.num_states());
    for (int i = 0; i < model.num_states(); ++i) {
        sol.v1_star[i] = saddle[i].v1;
        sol.v2_star[i] = saddle[i].v2;
    }
    return sol;
}

namespace {

std::vector<MixedAction> random_mixed_profile(int num_states, int num_actions, CounterRng& rng) {
    std::vector<MixedAction> profile(num_states);
    for (auto& a : profile) {
        a.weights.resize(num_actions);
        for (double& w : a.weights) w = -std::log1p(-rng.next_uniform());
        a.normalize();
    }
    return profile;
}

}  // namespace

SaddleReport verify_saddle(const GameModel& model, const ErgodicSolution& solution,
                           const SaddleCheckOptions& opts) {
    const int n = model.num_states();
    SaddleReport report;
    report.worst_p2_excess = -std::numeric_limits<double>::infinity();
    report.worst_p1_shortfall = -std::numeric_limits<double>::infinity();

    auto check = [&](int player, const std::vector<MixedAction>& deviation, const std::string& label) {
        const auto& v1 = player == 1 ? deviation : solution.v1_star;
        const auto& v2 = player == 2 ? deviation : solution.v2_star;
        const double lambda = perron_value(model, v1, v2).lambda;
        const double margin =
            player == 2 ? lambda - solution.rho : solution.rho - lambda;
        if (player == 2)
            report.worst_p2_excess = std::max(report.worst_p2_excess, margin);
        else
            report.worst_p1_shortfall = std::max(report.worst_p1_shortfall, margin);
        if (margin > opts.tol) report.violations.push_back({player, lambda, margin, label});
    };

    auto enumerate_pure = [&](int player) {
        const int m = player == 1 ? model.num_actions1() : model.num_actions2();
        double combos = 1.0;
        for (int i = 0; i < n; ++i) {
            combos *= m;
            if (combos > opts.max_pure_enumeration) break;
        }
        int& counted = player == 1 ? report.pure_checked_p1 : report.pure_checked_p2;
        if (combos <= opts.max_pure_enumeration) {
            std::vector<int> pick(n, 0);
            for (;;) {
                std::vector<MixedAction> dev(n);
                for (int i = 0; i < n; ++i) dev[i] = MixedAction::point_mass(m, pick[i]);
                check(player, dev, "pure");
                ++counted;
                int pos = 0;
                while (pos < n && ++pick[pos] == m) pick[pos++] = 0;
                if (pos == n) break;
            }
        } else {
            report.pure_exhaustive = false;
            CounterRng rng(CounterRng::derive_stream(opts.seed, 7000 + player));
            for (int k = 0; k < opts.max_pure_enumeration; ++k) {
                std::vector<MixedAction> dev(n);
                for (int i = 0; i < n; ++i)
                    dev[i] = MixedAction::point_mass(m, static_cast<int>(rng.next_u64() % m));
                check(player, dev, "pure(sampled)");
                ++counted;
            }
        }
    };

    enumerate_pure(2);
    enumerate_pure(1);

    CounterRng rng2(CounterRng::derive_stream(opts.seed, 2));
    for (int k = 0; k < opts.n_mixed; ++k) {
        check(2, random_mixed_profile(n, model.num_actions2(), rng2), "mixed");
        ++report.mixed_checked_p2;
    }
    CounterRng rng1(CounterRng::derive_stream(opts.seed, 1));
    for (int k = 0; k < opts.n_mixed; ++k) {
        check(1, random_mixed_profile(n, model.num_actions1(), rng1), "mixed");
        ++report.mixed_checked_p1;
    }

    report.ok = report.violations.empty();
    return report;
}

}  // namespace rsgame
