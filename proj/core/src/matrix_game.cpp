#include "rsgame/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "rsgame/errors.hpp"

namespace rsgame {

namespace {

constexpr double kPivotTol = 1e-11;

// Dense tableau simplex for  max 1'x  s.t.  D x <= 1, x >= 0  with D > 0.
// Returns the objective, the primal x and the dual y (one per constraint).
// Dantzig entering rule with a switch to Bland after a burn-in to rule out
// cycling on degenerate tableaus.
struct SimplexResult {
    double objective;
    std::vector<double> x;
    std::vector<double> y;
};

SimplexResult simplex_max(const Matrix& d) {
    const int m = d.rows();  // constraints
    const int n = d.cols();  // variables
    const int width = n + m + 1;

    std::vector<std::vector<double>> t(m, std::vector<double>(width, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = d(i, j);
        t[i][n + i] = 1.0;
        t[i][width - 1] = 1.0;
    }
    std::vector<double> obj(width, 0.0);
    for (int j = 0; j < n; ++j) obj[j] = -1.0;  // maximize 1'x

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    const int bland_after = 50 * (m + n);
    const int max_iter = 2000 * (m + n) + 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
        const bool bland = iter >= bland_after;
        int enter = -1;
        double best = -kPivotTol;
        for (int j = 0; j < width - 1; ++j) {
            if (obj[j] < best) {
                if (bland) {
                    enter = j;
                    break;
                }
                best = obj[j];
                enter = j;
            }
        }
        if (enter < 0) {
            SimplexResult res;
            res.objective = obj[width - 1];
            res.x.assign(n, 0.0);
            for (int i = 0; i < m; ++i)
                if (basis[i] < n) res.x[basis[i]] = t[i][width - 1];
            res.y.assign(m, 0.0);
            for (int i = 0; i < m; ++i) res.y[i] = obj[n + i];
            return res;
        }
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (t[i][enter] > kPivotTol) {
                const double ratio = t[i][width - 1] / t[i][enter];
                if (ratio < best_ratio - 1e-15 ||
                    (ratio < best_ratio + 1e-15 && (leave < 0 || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw SolverError("unbounded zero-sum LP (payoff shift failed)");

        const double pivot = t[leave][enter];
        for (int j = 0; j < width; ++j) t[leave][j] /= pivot;
        for (int i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0.0) continue;
            const double f = t[i][enter];
            for (int j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
        }
        if (obj[enter] != 0.0) {
            const double f = obj[enter];
            for (int j = 0; j < width; ++j) obj[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    throw SolverError("simplex iteration cap reached");
}

void check_finite(const Matrix& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!std::isfinite(a(i, j))) throw NonFiniteEntry(i, j);
}

// Closed form for 2x2 games: a pure saddle cell if one exists, otherwise
// the equalizing mixture. Returns nullopt only in degenerate near-ties,
// which fall back to the LP.
std::optional<GameSolution> solve_2x2(const Matrix& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double cell = m(i, j);
            if (cell >= m(i, 1 - j) && cell <= m(1 - i, j)) {
                GameSolution sol;
                sol.value = cell;
                sol.p_star = MixedAction::point_mass(2, i);
                sol.q_star = MixedAction::point_mass(2, j);
                return sol;
            }
        }
    }
    const double denom = (a - b) + (d - c);
    if (denom == 0.0) return std::nullopt;
    const double p = (d - c) / denom;
    const double q = (d - b) / denom;
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) return std::nullopt;
    GameSolution sol;
    // Convex combination instead of (ad - bc)/denom: the determinant form
    // cancels catastrophically when the entries are nearly equal.
    sol.value = p * a + (1.0 - p) * c;
    sol.p_star = MixedAction(std::vector<double>{p, 1.0 - p});
    sol.q_star = MixedAction(std::vector<double>{q, 1.0 - q});
    return sol;
}

GameSolution solve_degenerate(const Matrix& a) {
    GameSolution sol;
    if (a.rows() == 1) {
        int best = 0;
        for (int j = 1; j < a.cols(); ++j)
            if (a(0, j) > a(0, best)) best = j;
        sol.value = a(0, best);
        sol.p_star = MixedAction::point_mass(1, 0);
        sol.q_star = MixedAction::point_mass(a.cols(), best);
        return sol;
    }
    int best = 0;
    for (int i = 1; i < a.rows(); ++i)
        if (a(i, 0) < a(best, 0)) best = i;
    sol.value = a(best, 0);
    sol.p_star = MixedAction::point_mass(a.rows(), best);
    sol.q_star = MixedAction::point_mass(1, 0);
    return sol;
}

}  // namespace

GameSolution solve_matrix_game(const MatrixGame& game) {
    const Matrix& a = game.payoff;
    check_finite(a);
    const int m1 = a.rows();
    const int m2 = a.cols();
    if (m1 < 1 || m2 < 1) throw ValidationError("empty payoff matrix");
    if (m1 == 1 || m2 == 1) return solve_degenerate(a);
    if (m1 == 2 && m2 == 2) {
        if (auto sol = solve_2x2(a)) return *sol;
    }

    double lo = a(0, 0);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m2; ++j) lo = std::min(lo, a(i, j));
    const double shift = 1.0 - lo;

    // Row player: the feasible set {x >= 0 : A'^T x <= 1} maximizes 1'x at
    // 1/value; dual multipliers recover the column player's strategy.
    Matrix d(m2, m1);
    for (int j = 0; j < m2; ++j)
        for (int i = 0; i < m1; ++i) d(j, i) = a(i, j) + shift;

    const SimplexResult lp = simplex_max(d);
    if (!(lp.objective > 0.0)) throw SolverError("zero-sum LP returned nonpositive mass");
    const double shifted_value = 1.0 / lp.objective;

    GameSolution sol;
    sol.value = shifted_value - shift;
    sol.p_star = MixedAction(lp.x);
    for (double& w : sol.p_star.weights) w = std::max(0.0, w) * shifted_value;
    sol.p_star.normalize();
    sol.q_star = MixedAction(lp.y);
    for (double& w : sol.q_star.weights) w = std::max(0.0, w) * shifted_value;
    sol.q_star.normalize();
    return sol;
}

double game_value_maxmin(const MatrixGame& game) {
    const Matrix& a = game.payoff;
    check_finite(a);
    // max_q min_p p'Aq  ==  -(min-max of -A^T), solved by an independent LP.
    Matrix neg_t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) neg_t(j, i) = -a(i, j);
    return -solve_matrix_game({neg_t}).value;
}

double brute_force_value(const MatrixGame& game, int grid_k) {
    const Matrix& a = game.payoff;
    check_finite(a);
    const int m1 = a.rows();
    const int m2 = a.cols();

    // For a fixed row mix p the best column response is pure, so only the
    // row simplex needs a grid.
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> counts(m1, 0);
    std::vector<double> p(m1);
    auto evaluate = [&] {
        for (int i = 0; i < m1; ++i) p[i] = static_cast<double>(counts[i]) / grid_k;
        double worst = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < m2; ++j) {
            double col = 0.0;
            for (int i = 0; i < m1; ++i) col += p[i] * a(i, j);
            worst = std::max(worst, col);
        }
        best = std::min(best, worst);
    };
    // Enumerate compositions of grid_k into m1 parts.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == m1 - 1) {
            counts[pos] = remaining;
            evaluate();
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    rec(rec, 0, grid_k);
    return best;
}

GameSolution support_enumeration_solve(const MatrixGame& game) {
    const Matrix& a = game.payoff;
    check_finite(a);
    const int m1 = a.rows();
    const int m2 = a.cols();
    if (m1 == 1 || m2 == 1) return solve_degenerate(a);
    constexpr double kTol = 1e-9;

    // Square supports suffice (extreme optimal pairs come from square
    // kernels), so enumerate size-k row and column subsets together.
    for (int k = 1; k <= std::min(m1, m2); ++k) {
        std::vector<int> rsel(k), csel(k);
        auto try_supports = [&]() -> std::optional<GameSolution> {
            // Unknowns (q_C, v): rows of the submatrix equalize to v, mass 1.
            Matrix sys(k + 1, k + 1);
            std::vector<double> rhs(k + 1, 0.0);
            for (int r = 0; r < k; ++r) {
                for (int c = 0; c < k; ++c) sys(r, c) = a(rsel[r], csel[c]);
                sys(r, k) = -1.0;
            }
            for (int c = 0; c < k; ++c) sys(k, c) = 1.0;
            rhs[k] = 1.0;
            std::vector<double> qv;
            try {
                qv = solve_linear(sys, rhs);
            } catch (const SolverError&) {
                return std::nullopt;
            }
            // Unknowns (p_R, v): columns equalize.
            Matrix sys2(k + 1, k + 1);
            std::vector<double> rhs2(k + 1, 0.0);
            for (int c = 0; c < k; ++c) {
                for (int r = 0; r < k; ++r) sys2(c, r) = a(rsel[r], csel[c]);
                sys2(c, k) = -1.0;
            }
            for (int r = 0; r < k; ++r) sys2(k, r) = 1.0;
            rhs2[k] = 1.0;
            std::vector<double> pv;
            try {
                pv = solve_linear(sys2, rhs2);
            } catch (const SolverError&) {
                return std::nullopt;
            }
            const double v = qv[k];
            if (std::abs(pv[k] - v) > kTol) return std::nullopt;

            GameSolution sol;
            sol.value = v;
            sol.p_star = MixedAction(std::vector<double>(m1, 0.0));
            sol.q_star = MixedAction(std::vector<double>(m2, 0.0));
            for (int r = 0; r < k; ++r) {
                if (pv[r] < -kTol) return std::nullopt;
                sol.p_star.weights[rsel[r]] = std::max(0.0, pv[r]);
            }
            for (int c = 0; c < k; ++c) {
                if (qv[c] < -kTol) return std::nullopt;
                sol.q_star.weights[csel[c]] = std::max(0.0, qv[c]);
            }
            sol.p_star.normalize();
            sol.q_star.normalize();
            if (saddle_residual(game, sol) > kTol) return std::nullopt;
            return sol;
        };

        // Enumerate k-subsets of rows and columns.
        auto rec_cols = [&](auto&& self, int pos, int start) -> std::optional<GameSolution> {
            if (pos == k) return try_supports();
            for (int c = start; c < m2; ++c) {
                csel[pos] = c;
                if (auto sol = self(self, pos + 1, c + 1)) return sol;
            }
            return std::nullopt;
        };
        auto rec_rows = [&](auto&& self, int pos, int start) -> std::optional<GameSolution> {
            if (pos == k) return rec_cols(rec_cols, 0, 0);
            for (int r = start; r < m1; ++r) {
                rsel[pos] = r;
                if (auto sol = self(self, pos + 1, r + 1)) return sol;
            }
            return std::nullopt;
        };
        if (auto sol = rec_rows(rec_rows, 0, 0)) return *sol;
    }
    throw SolverError("support enumeration found no equilibrium (numerically degenerate game)");
}

double saddle_residual(const MatrixGame& game, const GameSolution& sol) {
    const Matrix& a = game.payoff;
    double worst = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double pay = 0.0;
        for (int i = 0; i < a.rows(); ++i) pay += sol.p_star[i] * a(i, j);
        worst = std::max(worst, pay - sol.value);  // column deviation gains
    }
    for (int i = 0; i < a.rows(); ++i) {
        double pay = 0.0;
        for (int j = 0; j < a.cols(); ++j) pay += a(i, j) * sol.q_star[j];
        worst = std::max(worst, sol.value - pay);  // row deviation gains
    }
    return worst;
}

}  // namespace rsgame
