#include "rsgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsgame/errors.hpp"

namespace rsgame {

namespace {
constexpr double kRowRepairTol = 1e-9;
}  // namespace

MixedAction MixedAction::point_mass(int num_actions, int which) {
    MixedAction a;
    a.weights.assign(num_actions, 0.0);
    a.weights[which] = 1.0;
    return a;
}

MixedAction MixedAction::uniform(int num_actions) {
    MixedAction a;
    a.weights.assign(num_actions, 1.0 / num_actions);
    return a;
}

bool MixedAction::is_valid(double tol) const {
    if (weights.empty()) return false;
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) return false;
        sum += w;
    }
    return std::abs(sum - 1.0) <= tol;
}

void MixedAction::normalize() {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (sum <= 0.0) throw Error("cannot normalize a nonpositive weight vector");
    for (double& w : weights) w /= sum;
}

const MixedPair& MarkovPolicy::at(double t, int state) const {
    if (table.empty()) throw Error("empty Markov policy table");
    int k = dt > 0.0 ? static_cast<int>(std::floor(t / dt)) : 0;
    k = std::clamp(k, 0, steps() - 1);
    return table[k][state];
}

StrategyProfile StrategyProfile::make_stationary(std::vector<MixedPair> per_state) {
    StrategyProfile p;
    p.kind = Kind::kStationary;
    p.stationary = std::move(per_state);
    return p;
}

StrategyProfile StrategyProfile::make_markov(MarkovPolicy policy) {
    StrategyProfile p;
    p.kind = Kind::kMarkov;
    p.markov = std::move(policy);
    return p;
}

const MixedPair& StrategyProfile::at(double t, int state) const {
    if (kind == Kind::kStationary) return stationary[state];
    return markov.at(t, state);
}

StrategyProfile StrategyProfile::with_player_replaced(
        int player, const std::vector<MixedAction>& stationary_dev) const {
    StrategyProfile out = *this;
    auto patch = [&](MixedPair& pair, int state) {
        if (player == 1)
            pair.v1 = stationary_dev[state];
        else
            pair.v2 = stationary_dev[state];
    };
    if (out.kind == Kind::kStationary) {
        for (int i = 0; i < static_cast<int>(out.stationary.size()); ++i) patch(out.stationary[i], i);
    } else {
        for (auto& slice : out.markov.table)
            for (int i = 0; i < static_cast<int>(slice.size()); ++i) patch(slice[i], i);
    }
    return out;
}

GameModel::GameModel(int num_states, int num_actions1, int num_actions2)
    : num_states_(num_states),
      num_actions1_(num_actions1),
      num_actions2_(num_actions2),
      rate_(static_cast<std::size_t>(num_states) * num_states * num_actions1 * num_actions2, 0.0),
      cost_(static_cast<std::size_t>(num_states) * num_actions1 * num_actions2, 0.0) {
    if (num_states < 1 || num_actions1 < 1 || num_actions2 < 1)
        throw ValidationError("model dimensions must be positive");
}

std::string ValidationIssue::describe() const {
    auto at = [&](bool with_j) {
        std::string s = "(i=" + std::to_string(i + 1);
        if (with_j) s += ", j=" + std::to_string(j + 1);
        s += ", u=(" + std::to_string(u1 + 1) + "," + std::to_string(u2 + 1) + "))";
        return s;
    };
    switch (kind) {
        case Kind::kNegativeOffDiagonal:
            return "NegativeOffDiagonal " + at(true) + " value " + std::to_string(value);
        case Kind::kNonConservativeRow:
            return "NonConservativeRow " + at(false) + " row sum " + std::to_string(value);
        case Kind::kNegativeCost:
            return "NegativeCost " + at(false) + " value " + std::to_string(value);
        case Kind::kNonFinite:
            return "NonFiniteEntry " + at(true);
    }
    return "unknown issue";
}

ValidationReport validate(GameModel& model) {
    ValidationReport report;
    const int n = model.num_states();
    const int m1 = model.num_actions1();
    const int m2 = model.num_actions2();

    for (int i = 0; i < n; ++i) {
        for (int u1 = 0; u1 < m1; ++u1) {
            for (int u2 = 0; u2 < m2; ++u2) {
                double row_sum = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double q = model.rate(i, j, u1, u2);
                    if (!std::isfinite(q)) {
                        report.issues.push_back({ValidationIssue::Kind::kNonFinite, i, j, u1, u2, q});
                        continue;
                    }
                    if (j != i && q < 0.0)
                        report.issues.push_back(
                            {ValidationIssue::Kind::kNegativeOffDiagonal, i, j, u1, u2, q});
                    row_sum += q;
                }
                report.worst_row_defect = std::max(report.worst_row_defect, std::abs(row_sum));
                if (std::abs(row_sum) > kRowRepairTol) {
                    report.issues.push_back(
                        {ValidationIssue::Kind::kNonConservativeRow, i, -1, u1, u2, row_sum});
                } else if (row_sum != 0.0) {
                    // Absorb the defect into the diagonal so downstream row
                    // sums are exact.
                    model.rate(i, i, u1, u2) -= row_sum;
                }
                const double c = model.cost(i, u1, u2);
                if (!std::isfinite(c) || c < 0.0)
                    report.issues.push_back({ValidationIssue::Kind::kNegativeCost, i, -1, u1, u2, c});
            }
        }
    }

    double max_exit = 0.0;
    double cost_sup = 0.0;
    for (int i = 0; i < n; ++i)
        for (int u1 = 0; u1 < m1; ++u1)
            for (int u2 = 0; u2 < m2; ++u2) {
                max_exit = std::max(max_exit, -model.rate(i, i, u1, u2));
                cost_sup = std::max(cost_sup, model.cost(i, u1, u2));
            }
    report.max_exit_rate = max_exit;
    report.cost_sup = cost_sup;
    report.ok = report.issues.empty() && model.alpha > 0.0 && model.theta_cap > 0.0 &&
                model.ref_state >= 0 && model.ref_state < n;

    if (report.ok) {
        model.max_exit_rate_ = max_exit;
        model.cost_sup_ = cost_sup;
        model.validated_ = true;
    }
    return report;
}

double bilinear_rate(const GameModel& model, int i, int j, const MixedAction& v1, const MixedAction& v2) {
    double acc = 0.0;
    for (int u1 = 0; u1 < model.num_actions1(); ++u1) {
        const double w1 = v1[u1];
        if (w1 == 0.0) continue;
        double inner = 0.0;
        for (int u2 = 0; u2 < model.num_actions2(); ++u2) inner += model.rate(i, j, u1, u2) * v2[u2];
        acc += w1 * inner;
    }
    return acc;
}

double bilinear_cost(const GameModel& model, int i, const MixedAction& v1, const MixedAction& v2) {
    double acc = 0.0;
    for (int u1 = 0; u1 < model.num_actions1(); ++u1) {
        const double w1 = v1[u1];
        if (w1 == 0.0) continue;
        double inner = 0.0;
        for (int u2 = 0; u2 < model.num_actions2(); ++u2) inner += model.cost(i, u1, u2) * v2[u2];
        acc += w1 * inner;
    }
    return acc;
}

double apply_generator(const GameModel& model, int i, const MixedAction& v1, const MixedAction& v2,
                       const std::vector<double>& f) {
    double acc = 0.0;
    for (int j = 0; j < model.num_states(); ++j) acc += bilinear_rate(model, i, j, v1, v2) * f[j];
    return acc;
}

GameModel truncate_cost(const GameModel& model, int n) {
    if (n < 1 || n > model.num_states()) throw BadTruncationLevel(n, model.num_states());
    GameModel out = model;
    for (int i = n; i < model.num_states(); ++i)
        for (int u1 = 0; u1 < model.num_actions1(); ++u1)
            for (int u2 = 0; u2 < model.num_actions2(); ++u2) out.cost(i, u1, u2) = 0.0;
    // Cost bound changes; the copied model must be re-validated before use.
    auto report = validate(out);
    if (!report.ok) throw ValidationError("truncated model failed validation");
    return out;
}

LyapunovReport check_lyapunov(const GameModel& model, const LyapunovCertificate& cert) {
    const int n = model.num_states();
    if (static_cast<int>(cert.W.size()) != n)
        throw ValidationError("certificate W has wrong length");
    for (double w : cert.W)
        if (!(w >= 1.0)) throw ValidationError("certificate requires W(i) >= 1");
    if (!(cert.delta > 0.0) || !(cert.b > 0.0))
        throw ValidationError("certificate requires delta > 0 and b > 0");

    std::vector<char> in_c(n, 0);
    for (int i : cert.C) {
        if (i < 0 || i >= n) throw ValidationError("certificate set C contains a bad state index");
        in_c[i] = 1;
    }

    LyapunovReport report;
    report.worst_slack.assign(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        for (int u1 = 0; u1 < model.num_actions1(); ++u1) {
            for (int u2 = 0; u2 < model.num_actions2(); ++u2) {
                double drift = 0.0;
                for (int j = 0; j < n; ++j) drift += model.rate(i, j, u1, u2) * cert.W[j];
                const double rhs = -2.0 * cert.delta * cert.W[i] + (in_c[i] ? cert.b : 0.0);
                const double slack = rhs - drift;
                report.worst_slack[i] = std::min(report.worst_slack[i], slack);
                if (slack < -1e-12) report.violations.push_back({i, u1, u2, slack});
            }
        }
    }
    report.ok = report.violations.empty();
    report.ref_state_weight_ok = cert.W[model.ref_state] >= 1.0 + cert.b / cert.delta;
    return report;
}

SmallCostReport check_small_cost(const GameModel& model, const LyapunovCertificate& cert, double theta) {
    SmallCostReport report;
    report.theta = theta;
    report.delta = cert.delta;
    report.cost_sup = model.validated() ? model.cost_sup() : [&] {
        double m = 0.0;
        for (double c : model.cost_tensor()) m = std::max(m, c);
        return m;
    }();
    report.max_admissible_theta = report.cost_sup > 0.0
                                      ? 0.5 * cert.delta / report.cost_sup
                                      : std::numeric_limits<double>::infinity();
    report.ok = theta * report.cost_sup < 0.5 * cert.delta;
    return report;
}

}  // namespace rsgame
