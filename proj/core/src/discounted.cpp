#include "rsgame/discounted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsgame/errors.hpp"
#include "rsgame/parallel.hpp"

namespace rsgame {

namespace {

double kappa_of(double delta, double left, double alpha, double cost_sup, double exit_rate) {
    return (cost_sup * delta + 2.0 * exit_rate * std::log1p(delta / left)) / alpha;
}

// Integrand of the interval operator at one node: per-state min-max of
// (1/th) Pi f + r f, computed from the weight-th stage game by positive
// homogeneity of the game value.
std::vector<double> integrand_at(const GameModel& model, const std::vector<double>& f_node,
                                 double theta) {
    const ValueFunction psi{std::vector<double>(f_node)};
    HamiltonianResult h = hamiltonian_eval(model, psi, theta);
    for (double& v : h.value) v /= theta;
    return h.value;
}

// Cumulative composite Simpson weights: prefix[k] approximates the integral
// from grid.front() to grid[k] of a per-state integrand g.
std::vector<std::vector<double>> cumulative_simpson(const std::vector<double>& grid,
                                                    const std::vector<std::vector<double>>& g) {
    const int nodes = static_cast<int>(grid.size());
    const int n = static_cast<int>(g.front().size());
    std::vector<std::vector<double>> prefix(nodes, std::vector<double>(n, 0.0));
    const double h = (grid.back() - grid.front()) / (nodes - 1);
    for (int k = 2; k < nodes; k += 2)
        for (int i = 0; i < n; ++i)
            prefix[k][i] = prefix[k - 2][i] + h / 3.0 * (g[k - 2][i] + 4.0 * g[k - 1][i] + g[k][i]);
    // Odd prefixes from the quadratic through (k-1, k, k+1).
    for (int k = 1; k < nodes; k += 2)
        for (int i = 0; i < n; ++i)
            prefix[k][i] = prefix[k - 1][i] + h / 12.0 * (5.0 * g[k - 1][i] + 8.0 * g[k][i] - g[k + 1][i]);
    return prefix;
}

struct NonuniformStencil {
    double cm, c0, cp;  // weights for psi(k-1), psi(k), psi(k+1)
};

NonuniformStencil central_difference(double h_minus, double h_plus) {
    return {-h_plus / (h_minus * (h_minus + h_plus)),
            (h_plus - h_minus) / (h_minus * h_plus),
            h_minus / (h_plus * (h_minus + h_plus))};
}

}  // namespace

int DiscountedSolution::nearest_node(double theta) const {
    const auto it = std::lower_bound(theta_grid.begin(), theta_grid.end(), theta);
    if (it == theta_grid.begin()) return 0;
    if (it == theta_grid.end()) return static_cast<int>(theta_grid.size()) - 1;
    const int hi = static_cast<int>(it - theta_grid.begin());
    return (theta - theta_grid[hi - 1] <= theta_grid[hi] - theta) ? hi - 1 : hi;
}

double DiscountedSolution::value_at(double theta, int state) const {
    return psi[nearest_node(theta)][state];
}

ContractionStep contraction_step(const GameModel& model, double left, double alpha, double safety,
                                 double delta_cap) {
    if (!(left > 0.0) || !(alpha > 0.0) || !(safety > 0.0))
        throw Error("contraction_step requires positive left endpoint, alpha and safety");
    const double r = model.cost_sup();
    const double m = model.max_exit_rate();
    if (r == 0.0 && m == 0.0) return {delta_cap, 0.0};

    double hi = std::min(delta_cap, 1.0);
    while (hi < delta_cap && kappa_of(hi, left, alpha, r, m) < safety) hi = std::min(delta_cap, hi * 2.0);
    if (kappa_of(hi, left, alpha, r, m) <= safety) return {hi, kappa_of(hi, left, alpha, r, m)};

    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kappa_of(mid, left, alpha, r, m) <= safety)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, kappa_of(lo, left, alpha, r, m)};
}

std::vector<std::vector<double>> picard_apply(const GameModel& model,
                                              const std::vector<double>& theta_grid,
                                              const std::vector<std::vector<double>>& f,
                                              const std::vector<double>& left_values, double alpha,
                                              double quadrature_tol) {
    const int nodes = static_cast<int>(theta_grid.size());
    if (nodes < 3 || nodes % 2 == 0) throw Error("picard_apply needs an odd node count >= 3");
    const int n = model.num_states();

    std::vector<std::vector<double>> g(nodes);
    for (int k = 0; k < nodes; ++k) g[k] = integrand_at(model, f[k], theta_grid[k]);

    const auto prefix = cumulative_simpson(theta_grid, g);

    if (std::isfinite(quadrature_tol)) {
        // Richardson estimate: full grid vs every-other-node Simpson.
        const int coarse_nodes = (nodes - 1) / 2 + 1;
        if (coarse_nodes >= 3 && coarse_nodes % 2 == 1) {
            std::vector<double> cg(coarse_nodes);
            std::vector<std::vector<double>> cval(coarse_nodes);
            for (int k = 0; k < coarse_nodes; ++k) {
                cg[k] = theta_grid[2 * k];
                cval[k] = g[2 * k];
            }
            const auto cprefix = cumulative_simpson(cg, cval);
            double est = 0.0;
            for (int i = 0; i < n; ++i)
                est = std::max(est, std::abs(prefix.back()[i] - cprefix.back()[i]) / 15.0);
            if (est > quadrature_tol) throw GridTooCoarse(est, quadrature_tol);
        }
    }

    std::vector<std::vector<double>> out(nodes, std::vector<double>(n));
    for (int k = 0; k < nodes; ++k)
        for (int i = 0; i < n; ++i) out[k][i] = left_values[i] + prefix[k][i] / alpha;
    return out;
}

namespace {

// Solves one contraction interval in place; returns the measured worst
// per-sweep contraction ratio.
double solve_interval(const GameModel& model, const std::vector<double>& grid,
                      std::vector<std::vector<double>>& f, const std::vector<double>& left_values,
                      double alpha, double kappa, const DiscountedOptions& opts) {
    double prev_delta = -1.0;
    double worst_ratio = 0.0;
    double f_sup = 1.0;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        const auto next = picard_apply(model, grid, f, left_values, alpha);
        double delta = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            delta = std::max(delta, sup_norm_diff(f[k], next[k]));
            f_sup = std::max(f_sup, sup_norm(next[k]));
        }
        f = next;
        // Measured-contraction assertion, skipped once deltas reach the
        // roundoff floor of the cumulative quadrature.
        if (prev_delta > 1e-12 * f_sup) {
            const double ratio = delta / prev_delta;
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > kappa + 1e-3 * std::max(kappa, 1.0) + 1e-9)
                throw SolverError("measured Picard contraction " + std::to_string(ratio) +
                                  " exceeds bound " + std::to_string(kappa) + " on [" +
                                  std::to_string(grid.front()) + ", " + std::to_string(grid.back()) +
                                  "] (deltas " + std::to_string(prev_delta) + " -> " +
                                  std::to_string(delta) + ", sweep " + std::to_string(sweep) + ")");
        }
        if (delta < opts.picard_tol) return worst_ratio;
        prev_delta = delta;
    }
    throw NoConvergence("Picard interval [" + std::to_string(grid.front()) + ", " +
                            std::to_string(grid.back()) + "]",
                        prev_delta);
}

}  // namespace

DiscountedSolution solve_discounted(const GameModel& model, double epsilon, double theta_query,
                                    const DiscountedOptions& opts, const std::vector<double>& knots) {
    if (!model.validated()) throw ValidationError("model must pass validate() first");
    if (!(epsilon > 0.0) || !(epsilon < theta_query) || theta_query > model.theta_cap * (1.0 + 1e-12))
        throw Error("need 0 < epsilon < theta_query <= theta_cap");

    const int n = model.num_states();
    const double growth = theta_query * model.cost_sup() / model.alpha;
    DiscountedSolution sol;
    sol.epsilon = epsilon;
    sol.alpha = model.alpha;
    if (growth > 700.0)
        throw SolverError("psi magnitude exp(" + std::to_string(growth) + ") overflows double");
    if (growth > 600.0)
        sol.warnings.push_back("theta * ||r|| / alpha = " + std::to_string(growth) +
                               " is close to the double overflow limit");

    std::vector<double> sorted_knots(knots);
    std::sort(sorted_knots.begin(), sorted_knots.end());

    int nodes_per_interval = std::max(opts.min_nodes_per_interval, 5) | 1;
    for (int refinement = 0;; ++refinement) {
        sol.theta_grid.clear();
        sol.psi.clear();
        sol.selectors.clear();
        sol.kappa_per_interval.clear();

        const double h_eps = std::exp(epsilon * model.cost_sup() / model.alpha);
        std::vector<double> left_values(n, h_eps);
        double a = epsilon;
        sol.theta_grid.push_back(a);
        sol.psi.push_back(left_values);

        while (a < theta_query * (1.0 - 1e-15)) {
            auto step = contraction_step(model, a, model.alpha, opts.safety, theta_query - a);
            double b = std::min(a + step.delta, theta_query);
            for (double knot : sorted_knots) {
                if (knot > a * (1.0 + 1e-15) && knot < b * (1.0 - 1e-15)) {
                    b = knot;
                    break;
                }
            }
            step.kappa = kappa_of(b - a, a, model.alpha, model.cost_sup(), model.max_exit_rate());
            sol.kappa_per_interval.push_back(step.kappa);

            std::vector<double> grid(nodes_per_interval);
            for (int k = 0; k < nodes_per_interval; ++k)
                grid[k] = a + (b - a) * k / (nodes_per_interval - 1);
            grid.front() = a;
            grid.back() = b;

            std::vector<std::vector<double>> f(nodes_per_interval, left_values);
            solve_interval(model, grid, f, left_values, model.alpha, step.kappa, opts);

            for (int k = 1; k < nodes_per_interval; ++k) {
                sol.theta_grid.push_back(grid[k]);
                sol.psi.push_back(f[k]);
            }
            left_values = f.back();
            a = b;
        }

        // Saddle selectors at every node, from the converged values.
        sol.selectors.resize(sol.theta_grid.size());
        for (std::size_t k = 0; k < sol.theta_grid.size(); ++k) {
            const HamiltonianResult h =
                hamiltonian_eval(model, ValueFunction{std::vector<double>(sol.psi[k])}, sol.theta_grid[k]);
            sol.selectors[k] = h.saddle;
        }

        double psi_sup = 0.0;
        for (const auto& row : sol.psi) psi_sup = std::max(psi_sup, sup_norm(row));
        sol.residual = discounted_residual(model, sol);
        sol.residual_bound = opts.residual_tol_rel * psi_sup;
        sol.grid_refinements = refinement;
        if (sol.residual <= sol.residual_bound) return sol;
        if (refinement >= opts.max_grid_refinements) throw GridTooCoarse(sol.residual, sol.residual_bound);
        nodes_per_interval = 2 * nodes_per_interval - 1;
    }
}

double discounted_residual(const GameModel& model, const DiscountedSolution& solution) {
    const int nodes = static_cast<int>(solution.theta_grid.size());
    const int n = solution.num_states();
    std::vector<double> per_node(std::max(0, nodes - 2), 0.0);
    parallel_for(1, nodes - 1, [&](int k) {
        const double hm = solution.theta_grid[k] - solution.theta_grid[k - 1];
        const double hp = solution.theta_grid[k + 1] - solution.theta_grid[k];
        const auto st = central_difference(hm, hp);
        const HamiltonianResult h = hamiltonian_eval(
            model, ValueFunction{std::vector<double>(solution.psi[k])}, solution.theta_grid[k]);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dpsi = st.cm * solution.psi[k - 1][i] + st.c0 * solution.psi[k][i] +
                                st.cp * solution.psi[k + 1][i];
            worst = std::max(worst,
                             std::abs(solution.alpha * solution.theta_grid[k] * dpsi - h.value[i]));
        }
        per_node[k - 1] = worst;
    });
    double residual = 0.0;
    for (double v : per_node) residual = std::max(residual, v);
    return residual;
}

EpsilonRefinement refine_epsilon(const GameModel& model, double theta_query, double tol,
                                 double initial_epsilon, const DiscountedOptions& opts,
                                 int max_halvings) {
    double eps = initial_epsilon > 0.0 ? initial_epsilon : 1e-3 * model.theta_cap;
    eps = std::min(eps, 0.5 * theta_query);

    // Geometric probe ladder shared by every run; each run clips interval
    // ends so the probes land exactly on grid nodes.
    constexpr int kProbes = 9;
    std::vector<double> probes(kProbes);
    for (int k = 0; k < kProbes; ++k)
        probes[k] = theta_query * std::pow(eps / theta_query, static_cast<double>(kProbes - 1 - k) /
                                                                  (kProbes - 1));
    probes.back() = theta_query;

    EpsilonRefinement out;
    out.solution = solve_discounted(model, eps, theta_query, opts, probes);
    out.epsilons.push_back(eps);

    const int n = model.num_states();
    for (int halving = 0; halving < max_halvings; ++halving) {
        const double next_eps = 0.5 * eps;
        DiscountedSolution next = solve_discounted(model, next_eps, theta_query, opts, probes);
        double diff = 0.0;
        for (double probe : probes) {
            for (int i = 0; i < n; ++i)
                diff = std::max(diff, std::abs(out.solution.value_at(probe, i) - next.value_at(probe, i)));
        }
        out.solution = std::move(next);
        out.epsilons.push_back(next_eps);
        out.diffs.push_back(diff);
        eps = next_eps;
        if (diff < tol) return out;
    }
    throw NoConvergence("epsilon refinement", out.diffs.empty() ? -1.0 : out.diffs.back());
}

MarkovPolicy extract_markov_policy(const DiscountedSolution& solution, double theta,
                                   double t_horizon, double dt) {
    if (solution.theta_grid.empty()) throw Error("empty solution");
    if (!(dt > 0.0) || !(t_horizon >= 0.0)) throw Error("need dt > 0 and t_horizon >= 0");
    if (theta < solution.epsilon || theta > solution.theta_grid.back() * (1.0 + 1e-12))
        throw Error("theta outside the solved range");

    MarkovPolicy policy;
    policy.dt = dt;
    const double t_eps = std::log(theta / solution.epsilon) / solution.alpha;
    const double t_end = std::min(t_horizon, t_eps);
    policy.truncated = t_eps < t_horizon;
    if (policy.truncated) policy.t_cutoff = t_eps;

    const int steps = std::max(1, static_cast<int>(std::floor(t_end / dt)) + 1);
    policy.table.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        if (t > t_end && k > 0) break;
        const double theta_t = theta * std::exp(-solution.alpha * t);
        policy.table.push_back(solution.selectors[solution.nearest_node(theta_t)]);
    }
    return policy;
}

}  // namespace rsgame
