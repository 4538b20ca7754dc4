#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsgame/types.hpp"

namespace rsgame {

// Drift certificate: Pi_v W(i) <= -2*delta*W(i) + b*1_C(i) for all action
// pairs, with W >= 1. Validity is established only by check_lyapunov.
struct LyapunovCertificate {
    std::vector<double> W;
    double delta = 0.0;
    double b = 0.0;
    std::vector<int> C;  // 0-based state indices
};

class GameModel;
struct ValidationReport;
ValidationReport validate(GameModel& model);

// A finite two-player game on a continuous-time chain: controlled rate
// tensor, nonnegative cost tensor, discount rate, risk cap, reference state.
// States are 0-based internally; file schemas use 1-based labels.
class GameModel {
  public:
    GameModel() = default;
    GameModel(int num_states, int num_actions1, int num_actions2);

    int num_states() const { return num_states_; }
    int num_actions1() const { return num_actions1_; }
    int num_actions2() const { return num_actions2_; }

    double rate(int i, int j, int u1, int u2) const {
        return rate_[rate_index(i, j, u1, u2)];
    }
    double& rate(int i, int j, int u1, int u2) { return rate_[rate_index(i, j, u1, u2)]; }

    double cost(int i, int u1, int u2) const { return cost_[cost_index(i, u1, u2)]; }
    double& cost(int i, int u1, int u2) { return cost_[cost_index(i, u1, u2)]; }

    double alpha = 1.0;       // discount rate, > 0
    double theta_cap = 1.0;   // admissible risk parameters are (0, theta_cap]
    int ref_state = 0;
    std::optional<LyapunovCertificate> certificate;
    std::string name;

    // Recorded by validate(): max over (i,u) of -rate(i,i,u).
    double max_exit_rate() const { return max_exit_rate_; }
    // Recorded by validate(): sup-norm of the cost tensor.
    double cost_sup() const { return cost_sup_; }
    bool validated() const { return validated_; }

    const std::vector<double>& rate_tensor() const { return rate_; }
    std::vector<double>& rate_tensor() { return rate_; }
    const std::vector<double>& cost_tensor() const { return cost_; }
    std::vector<double>& cost_tensor() { return cost_; }

    friend ValidationReport validate(GameModel& model);

  private:
    std::size_t rate_index(int i, int j, int u1, int u2) const {
        return ((static_cast<std::size_t>(i) * num_states_ + j) * num_actions1_ + u1) * num_actions2_ + u2;
    }
    std::size_t cost_index(int i, int u1, int u2) const {
        return (static_cast<std::size_t>(i) * num_actions1_ + u1) * num_actions2_ + u2;
    }

    int num_states_ = 0;
    int num_actions1_ = 0;
    int num_actions2_ = 0;
    std::vector<double> rate_;  // [i][j][u1][u2]
    std::vector<double> cost_;  // [i][u1][u2]
    double max_exit_rate_ = 0.0;
    double cost_sup_ = 0.0;
    bool validated_ = false;
};

struct ValidationIssue {
    enum class Kind { kNegativeOffDiagonal, kNonConservativeRow, kNegativeCost, kNonFinite };
    Kind kind;
    int i = -1, j = -1, u1 = -1, u2 = -1;
    double value = 0.0;
    std::string describe() const;
};

struct ValidationReport {
    bool ok = false;
    double max_exit_rate = 0.0;   // M
    double cost_sup = 0.0;        // ||r||_inf
    double worst_row_defect = 0.0;
    std::vector<ValidationIssue> issues;
};

struct LyapunovViolation {
    int i, u1, u2;
    double slack;  // rhs - Pi_u W(i), negative when violated
};

struct LyapunovReport {
    bool ok = false;
    // Worst (smallest) slack of rhs - Pi_u W per state over pure pairs.
    std::vector<double> worst_slack;
    std::vector<LyapunovViolation> violations;
    // Informational: whether W(ref_state) clears 1 + b/delta, the margin the
    // boundedness analysis assumes for the normalization state.
    bool ref_state_weight_ok = false;
};

struct SmallCostReport {
    bool ok = false;
    double theta = 1.0;
    double cost_sup = 0.0;
    double delta = 0.0;
    double max_admissible_theta = 0.0;  // largest theta with theta*||r|| < delta/2
};

// Checks invariants: nonnegative off-diagonal rates, conservative rows,
// nonnegative costs. Row-sum defects up to 1e-9 are absorbed into the
// diagonal; larger defects are reported as failures. Records M and ||r||_inf
// on the model when everything passes.
ValidationReport validate(GameModel& model);

// Bilinear extension of the rate tensor: v1' * rate[i][j] * v2.
double bilinear_rate(const GameModel& model, int i, int j, const MixedAction& v1, const MixedAction& v2);

// Bilinear extension of the cost tensor: v1' * cost[i] * v2.
double bilinear_cost(const GameModel& model, int i, const MixedAction& v1, const MixedAction& v2);

// Copy with cost zeroed for states with index >= n (1 <= n <= N).
GameModel truncate_cost(const GameModel& model, int n);

// Verifies the drift inequality over all pure action pairs (sufficient for
// all mixed pairs, the bilinear form attains its maximum at vertices).
LyapunovReport check_lyapunov(const GameModel& model, const LyapunovCertificate& cert);

// theta * ||r||_inf < delta / 2, strict.
SmallCostReport check_small_cost(const GameModel& model, const LyapunovCertificate& cert, double theta = 1.0);

// Generator applied to a function at mixed actions:
// sum_j bilinear_rate(i, j, v1, v2) * f(j).
double apply_generator(const GameModel& model, int i, const MixedAction& v1, const MixedAction& v2,
                       const std::vector<double>& f);

}  // namespace rsgame
