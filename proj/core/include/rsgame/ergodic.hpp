#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsgame/hamiltonian.hpp"
#include "rsgame/model.hpp"
#include "rsgame/types.hpp"

namespace rsgame {

// One recorded step of the normalized finite-horizon march.
struct MarchStep {
    double t = 0.0;
    std::vector<double> psi_bar;       // psi_bar[ref_state] == 1
    double log_psi_ref = 0.0;          // ln psi(t, ref_state)
    double rho_estimate = 0.0;         // trailing-window slope of log_psi_ref
    std::vector<MixedPair> selectors;  // saddle pairs used to leave this step
};

struct MarchOptions {
    double t_max = 500.0;
    double dt = -1.0;    // <= 0: picked from the stability bound
    double tol = 1e-9;   // on both the rho estimate and the weighted psi_bar gap
    bool require_convergence = true;
    bool record_history = true;
};

struct MarchOutcome {
    std::vector<MarchStep> history;  // empty unless record_history
    bool converged = false;
    double t_final = 0.0;
    double dt = 0.0;
    double rho = 0.0;
    std::vector<double> psi_bar;
    std::vector<MixedPair> selectors;
    double last_rho_delta = 0.0;
    double last_psi_delta = 0.0;
};

struct ErgodicSolution {
    double rho = 0.0;
    ValueFunction psi_hat;             // psi_hat[ref_state] == 1
    std::vector<MixedAction> v1_star;  // stationary saddle pair
    std::vector<MixedAction> v2_star;

    int truncation_level = 0;
    double residual = 0.0;
    double residual_bound = 0.0;
    double march_time = 0.0;
    std::vector<double> level_rhos;    // one per truncation level
    int polish_rounds = 0;
    bool gate_overridden = false;
    bool gate_lyapunov_ok = false;
    bool gate_small_cost_ok = false;
};

struct ErgodicOptions {
    MarchOptions march;
    double residual_tol = 1e-6;  // scaled by max(1, |rho|)
    bool override_gates = false;
    int max_polish_rounds = 50;
};

struct PerronResult {
    double lambda = 0.0;
    std::vector<double> eigenvector;  // normalized at ref_state
};

// Integrates d psi/dt = minmax[Pi psi + r psi] by RK4 in normalized
// variables: advance one step from psi_bar, renormalize at the reference
// state and accumulate the log of the normalizer. Stops when both the rho
// estimate and the weighted psi_bar gap over a unit time window fall below
// tol, or at t_max (throwing NoConvergence if require_convergence).
MarchOutcome march_finite_horizon(const GameModel& model, const MarchOptions& opts = {});

// Full pipeline: certificate and small-cost gates, cost-truncated marches
// over the given ascending level schedule, then a selector/eigenpair polish
// of the last level until the stationary equation residual passes.
ErgodicSolution solve_ergodic(const GameModel& model, const LyapunovCertificate& cert,
                              const std::vector<int>& levels, const ErgodicOptions& opts = {});

// Principal eigenvalue/eigenvector of Pi_v + diag(r_v) for a stationary
// pair, by power iteration on the uniformized nonnegative matrix
// I + A/Lambda with Lambda = M + ||r|| + 1 (Collatz-Wielandt brackets).
PerronResult perron_value(const GameModel& model, const std::vector<MixedAction>& v1,
                          const std::vector<MixedAction>& v2);

// Pi_v + diag(r_v) for a stationary pair.
Matrix strategy_generator_matrix(const GameModel& model, const std::vector<MixedAction>& v1,
                                 const std::vector<MixedAction>& v2);

bool is_irreducible(const Matrix& rates);

struct SaddleViolation {
    int player;
    double lambda;
    double margin;  // amount by which the inequality failed
    std::string strategy;
};

struct SaddleReport {
    bool ok = false;
    int pure_checked_p1 = 0, pure_checked_p2 = 0;
    int mixed_checked_p1 = 0, mixed_checked_p2 = 0;
    bool pure_exhaustive = true;
    // Signed worst margins; positive means some deviation beat the bound.
    double worst_p2_excess = 0.0;     // max lambda(v1*, v2) - rho
    double worst_p1_shortfall = 0.0;  // max rho - lambda(v1, v2*)
    std::vector<SaddleViolation> violations;
};

struct SaddleCheckOptions {
    int max_pure_enumeration = 20000;  // cap on m^N pure stationary maps
    int n_mixed = 100;
    std::uint64_t seed = 1234;
    double tol = 1e-6;
};

// Checks lambda(v1*, v2) <= rho + tol over pure stationary deviations of
// player 2 (exhaustive when m2^N fits the cap, sampled otherwise) plus
// n_mixed random mixed stationary deviations, and symmetrically for
// player 1.
SaddleReport verify_saddle(const GameModel& model, const ErgodicSolution& solution,
                           const SaddleCheckOptions& opts = {});

// max_i |rho * psi(i) - minmax[Pi psi + r psi](i)|.
double ergodic_residual(const GameModel& model, double rho, const ValueFunction& psi_hat);

}  // namespace rsgame
