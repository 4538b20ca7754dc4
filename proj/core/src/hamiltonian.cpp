#include "rsgame/hamiltonian.hpp"

#include "rsgame/errors.hpp"
#include "rsgame/parallel.hpp"

namespace rsgame {

MatrixGame stage_matrix(const GameModel& model, int i, const ValueFunction& psi, double weight) {
    const int m1 = model.num_actions1();
    const int m2 = model.num_actions2();
    MatrixGame game{Matrix(m1, m2)};
    for (int u1 = 0; u1 < m1; ++u1) {
        for (int u2 = 0; u2 < m2; ++u2) {
            double drift = 0.0;
            for (int j = 0; j < model.num_states(); ++j) drift += model.rate(i, j, u1, u2) * psi[j];
            game.payoff(u1, u2) = drift + weight * model.cost(i, u1, u2) * psi[i];
        }
    }
    return game;
}

HamiltonianResult hamiltonian_eval(const GameModel& model, const ValueFunction& psi, double weight) {
    const int n = model.num_states();
    if (psi.size() != n) throw Error("value function has wrong length");
    HamiltonianResult result;
    result.value.resize(n);
    result.saddle.resize(n);
    parallel_for(0, n, [&](int i) {
        const GameSolution sol = solve_matrix_game(stage_matrix(model, i, psi, weight));
        result.value[i] = sol.value;
        result.saddle[i] = {sol.p_star, sol.q_star};
    });
    return result;
}

}  // namespace rsgame
