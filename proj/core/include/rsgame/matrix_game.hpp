#pragma once

#include "rsgame/linalg.hpp"
#include "rsgame/types.hpp"

namespace rsgame {

// Finite zero-sum game: the row player (player 1) picks p to minimize
// p' A q, the column player (player 2) picks q to maximize it.
struct MatrixGame {
    Matrix payoff;
};

struct GameSolution {
    double value = 0.0;
    MixedAction p_star;  // row player (minimizer)
    MixedAction q_star;  // column player (maximizer)
};

// Exact value and one optimal mixed pair, via the standard zero-sum LP on
// a positively shifted payoff (degenerate 1xM / Mx1 games by direct scan).
// Optimal strategies are not unique in general; consumers should rely on
// the value and on saddle residuals, not on the particular vectors.
GameSolution solve_matrix_game(const MatrixGame& game);

// The max-min side computed by an independent LP (solve_matrix_game gives
// min-max); the gap between the two is a numerical health check.
double game_value_maxmin(const MatrixGame& game);

// Test oracle: min over a simplex grid with grid_k points per edge of the
// best pure column response. Converges to the game value from above at
// rate O(max|A| / grid_k).
double brute_force_value(const MatrixGame& game, int grid_k);

// Test oracle: support enumeration (equalizing linear systems over all
// support pairs, verified against pure deviations). Exact for small games;
// intended for payoffs up to about 5x5.
GameSolution support_enumeration_solve(const MatrixGame& game);

// Largest violation of the saddle inequalities
//   p' A q* >= value for all pure p,   p*' A q <= value for all pure q.
double saddle_residual(const MatrixGame& game, const GameSolution& sol);

}  // namespace rsgame
