#pragma once

#include <cstdint>
#include <vector>

#include "rsgame/ergodic.hpp"
#include "rsgame/linalg.hpp"
#include "rsgame/model.hpp"
#include "rsgame/simulate.hpp"

namespace rsgame {

// K(t) = exp(t * (Pi_v + diag r_v)) by the uniformization series
// exp(-Lambda t) sum_k (Lambda t)^k / k! P^k with P = I + A/Lambda and
// Lambda = M + ||r|| + 1; K(t)_{ij} is the expected cost exponential on
// {Y(t) = j}. Long horizons are split and composed internally; throws
// SeriesTruncationOverflow when the result cannot be represented.
Matrix feynman_kac(const GameModel& model, const std::vector<MixedAction>& v1,
                   const std::vector<MixedAction>& v2, double t);

// Unit-time skeleton reweighted by the cost exponential:
//   r_hat(i) = ln sum_j K(1)_{ij},   kernel(i -> j) = K(1)_{ij} / sum_j.
struct TwistedChain {
    Matrix kernel;               // row-stochastic
    std::vector<double> r_hat;   // per-state potential
    std::vector<MixedAction> base_v1, base_v2;
};

TwistedChain build_twisted_chain(const GameModel& model, const std::vector<MixedAction>& v1,
                                 const std::vector<MixedAction>& v2);

struct DRhoResult {
    double value = 0.0;
    bool exact = true;           // linear solve vs Monte Carlo fallback
    double spectral_radius = 0.0;
};

struct DRhoOptions {
    int mc_paths = 100000;
    std::uint64_t seed = 20240101;
    long step_cap = 10000000;
};

// Return-time functional of the twisted chain at atom i:
//   D(rho) = E_i[ prod_{n=1}^{tau} e^{r_hat(Y_n) - rho} ],  tau = first
// return to i. Exact first-return linear solve when the weighted off-atom
// sub-kernel is a strict contraction, Monte Carlo on the twisted chain
// otherwise; throws SeriesDiverges if even sampling fails to return.
DRhoResult d_of_rho(const TwistedChain& chain, double rho, int atom, const DRhoOptions& opts = {});

// First-passage exponential moments u(i) = E_i[e^{delta * tau_target}] from
// the linear system (Q u)(i) + delta u(i) = 0 off the target, u(target)=1.
// Throws MomentInfinite when delta is too large for the system to have a
// finite positive solution.
std::vector<double> exp_hitting_moment(const GameModel& model, const std::vector<MixedAction>& v1,
                                       const std::vector<MixedAction>& v2, int target, double delta);

// Discrete analogue on a twisted chain: E_i[w^{tau}] with weight w per step
// and tau the first return to the atom.
double twisted_return_moment(const TwistedChain& chain, int atom, double step_weight);

// E_i[w^{tau}] with tau the first entry into target_set, one value per
// start state (1 at the target states themselves would be w^0; here tau
// counts the steps, so values at target states are 0 steps = 1).
std::vector<double> twisted_hitting_moment(const TwistedChain& chain,
                                           const std::vector<int>& target_set, double step_weight);

struct TkepReport {
    double threshold = 0.0;        // membership cut on W
    std::vector<int> c0;           // states with W(i) >= threshold
    std::vector<double> moments;   // E_i[e^{delta tau / 2}], one per C0 state
    std::vector<double> bounds;    // e^{-delta/2} (W(i) + b e^{3 delta/2})
    std::vector<double> margins;   // bound - moment
    bool ok = false;               // margins >= -1e-9
};

// Step-weight e^{delta/2} moment bound for the heavy-weight states of the
// certificate: for each i with W(i) >= threshold, the moment of the first
// entry into the light-weight complement (the drift's supermartingale
// region ends there). When every state clears the threshold the complement
// is empty and the first return to i is used instead.
TkepReport tkep_check(const TwistedChain& chain, const LyapunovCertificate& cert);

// Table of finite-horizon values psi(tau, i) on a uniform tau grid with
// log-linear interpolation between nodes.
struct ValueTable {
    double dt = 0.0;
    std::vector<std::vector<double>> psi;  // [time index][state]

    double at(double tau, int state) const;
    double horizon() const { return dt * (static_cast<double>(psi.size()) - 1.0); }

    static ValueTable from_march(const std::vector<MarchStep>& history);
    // Exact-at-grid values under a stationary pair via one uniformization
    // step composed along the grid.
    static ValueTable from_stationary(const GameModel& model, const std::vector<MixedAction>& v1,
                                      const std::vector<MixedAction>& v2, double horizon, int steps);
};

// Time-reversal of a march's selector history into a simulatable Markov
// profile for paths on [0, t]: the pair applied at elapsed time s is the
// selector recorded at march time t - s.
StrategyProfile profile_from_march(const std::vector<MarchStep>& history, double t);

struct DppCheckEntry {
    int state;
    double reference;
    double mc_mean;
    double mc_stderr;
    double z;  // |mc_mean - reference| / stderr (0 when stderr is 0)
    bool pass;
};

struct DppReport {
    std::vector<DppCheckEntry> entries;
    bool ok = false;
};

// Monte Carlo check of the product form at a hitting time: for tau the
// first entry into hit_set,
//   psi(t, i) = E_i[ e^{int_0^{t ^ tau} r ds} psi(t - t ^ tau, Y(t ^ tau)) ].
// Runs one check per requested start state at 3 standard errors.
DppReport multiplicative_dpp_check(const GameModel& model, const StrategyProfile& profile,
                                   const ValueTable& table, const std::vector<int>& hit_set,
                                   double t, const std::vector<int>& start_states, int n_paths,
                                   std::uint64_t seed);

}  // namespace rsgame
