#pragma once

#include "rsgame/matrix_game.hpp"
#include "rsgame/model.hpp"
#include "rsgame/types.hpp"

namespace rsgame {

// Per-state min-max value of the stage game plus the saddle pair that
// attains it. Selectors depend on psi and are recomputed on every call.
struct HamiltonianResult {
    std::vector<double> value;       // H(i)
    std::vector<MixedPair> saddle;   // (v1*(i), v2*(i))
};

// Stage payoff at state i for a positive value function psi:
//   G[u1][u2] = sum_j rate(i,j,u1,u2) * psi(j) + weight * cost(i,u1,u2) * psi(i).
MatrixGame stage_matrix(const GameModel& model, int i, const ValueFunction& psi, double weight);

// Solves the stage game at every state. Per-state solves are independent
// and run under the shared worker cap with a merge by state index.
HamiltonianResult hamiltonian_eval(const GameModel& model, const ValueFunction& psi, double weight);

}  // namespace rsgame
