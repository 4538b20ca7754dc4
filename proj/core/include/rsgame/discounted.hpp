#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rsgame/hamiltonian.hpp"
#include "rsgame/model.hpp"
#include "rsgame/types.hpp"

namespace rsgame {

struct DiscountedOptions {
    double picard_tol = 1e-10;       // sup-norm fixed-point tolerance
    int max_sweeps = 200;
    int min_nodes_per_interval = 65; // odd
    int max_grid_refinements = 5;    // node-count doublings for the residual gate
    double safety = 0.5;             // contraction target for each interval
    double residual_tol_rel = 1e-6;  // residual gate, relative to sup |psi|
};

// Solution of the risk-parameter ODE on [epsilon, theta_query]: psi on a
// stitched grid, one saddle pair per (node, state).
struct DiscountedSolution {
    std::vector<double> theta_grid;                 // strictly increasing
    std::vector<std::vector<double>> psi;           // [node][state]
    std::vector<std::vector<MixedPair>> selectors;  // [node][state]
    double epsilon = 0.0;
    double alpha = 0.0;

    double residual = 0.0;        // achieved interior-node residual
    double residual_bound = 0.0;  // tolerance it was checked against
    std::vector<double> kappa_per_interval;
    int grid_refinements = 0;
    std::vector<std::string> warnings;

    int num_states() const { return psi.empty() ? 0 : static_cast<int>(psi.front().size()); }
    int nearest_node(double theta) const;
    double value_at(double theta, int state) const;  // nearest-node lookup
};

struct ContractionStep {
    double delta;
    double kappa;
};

// Largest step delta (bisection) with
//   kappa(delta) = (||r|| * delta + 2 M ln(1 + delta/left)) / alpha <= safety.
// When both M and ||r|| vanish, kappa is identically zero and delta_cap is
// returned.
ContractionStep contraction_step(const GameModel& model, double left, double alpha,
                                 double safety = 0.5,
                                 double delta_cap = std::numeric_limits<double>::infinity());

// One application of the integral operator on a single interval:
//   (Tf)(eta, i) = left_values(i)
//       + (1/alpha) * integral_{grid front}^{eta} minmax[(1/th) Pi f + r f] dth
// with the integral accumulated by cumulative composite Simpson on the grid
// (odd node count). Throws GridTooCoarse when the Richardson estimate of the
// quadrature error exceeds quadrature_tol.
std::vector<std::vector<double>> picard_apply(
    const GameModel& model, const std::vector<double>& theta_grid,
    const std::vector<std::vector<double>>& f, const std::vector<double>& left_values,
    double alpha, double quadrature_tol = std::numeric_limits<double>::infinity());

// Marches contraction intervals from epsilon to theta_query, each solved by
// Picard iteration, stitching terminal slices as initial conditions. The
// grid is refined (node doubling) until the central-difference residual of
// the ODE is below residual_tol_rel * sup|psi| at interior nodes.
// `knots` lists parameter values that must land exactly on grid nodes.
DiscountedSolution solve_discounted(const GameModel& model, double epsilon, double theta_query,
                                    const DiscountedOptions& opts = {},
                                    const std::vector<double>& knots = {});

struct EpsilonRefinement {
    DiscountedSolution solution;        // for the final epsilon
    std::vector<double> epsilons;       // every epsilon tried
    std::vector<double> diffs;          // sup-norm gaps between successive runs
};

// Halves epsilon until successive solutions differ by less than tol in sup
// norm on a shared probe grid.
EpsilonRefinement refine_epsilon(const GameModel& model, double theta_query, double tol,
                                 double initial_epsilon = -1.0,  // <0: 1e-3 * theta_cap
                                 const DiscountedOptions& opts = {}, int max_halvings = 40);

// Samples the solved selector table along theta(t) = theta * exp(-alpha t)
// on a uniform time grid (nearest-node lookup, no interpolation of mixed
// actions). If theta(t) would leave the solved range before T_horizon the
// table is cut at that time and flagged.
MarkovPolicy extract_markov_policy(const DiscountedSolution& solution, double theta,
                                   double t_horizon, double dt);

// Interior-node residual  max |alpha * th * psi' - minmax[Pi psi + th r psi]|
// with the derivative from three-point central differences.
double discounted_residual(const GameModel& model, const DiscountedSolution& solution);

}  // namespace rsgame
