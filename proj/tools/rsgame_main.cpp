// Batch front end: loads model files, runs the solvers and the
// verification suites, and emits machine-readable JSON reports.
//
// Exit codes: 0 success, 1 parse/IO error, 2 gate failure,
// 3 solver non-convergence, 4 verification failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsgame/discounted.hpp"
#include "rsgame/ergodic.hpp"
#include "rsgame/errors.hpp"
#include "rsgame/feynman_kac.hpp"
#include "rsgame/model.hpp"
#include "rsgame/model_io.hpp"
#include "rsgame/parallel.hpp"
#include "rsgame/rng.hpp"
#include "rsgame/simulate.hpp"

namespace {

using nlohmann::json;
using namespace rsgame;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitGate = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

class Stopwatch {
  public:
    Stopwatch(json& sink, std::string label)
        : sink_(sink), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        sink_[label_] =
            std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() / 1000.0;
    }

  private:
    json& sink_;
    std::string label_;
    std::chrono::steady_clock::time_point start_;
};

json checked(double value, double tolerance, bool pass) {
    return json{{"value", value}, {"tolerance", tolerance}, {"pass", pass}};
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2);
    std::cout << text << '\n';
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open " + out_path + " for writing");
        out << text << '\n';
    }
}

json report_header(const std::string& command, const json& config, const json& model_doc) {
    json report;
    report["report_schema"] = 1;
    report["command"] = command;
    report["config"] = config;
    report["model_hash"] = content_hash(model_doc);
    return report;
}

json validation_to_json(const ValidationReport& v) {
    json doc;
    doc["ok"] = v.ok;
    doc["max_exit_rate"] = v.max_exit_rate;
    doc["cost_sup"] = v.cost_sup;
    doc["worst_row_defect"] = v.worst_row_defect;
    json issues = json::array();
    for (const auto& issue : v.issues) issues.push_back(issue.describe());
    doc["issues"] = std::move(issues);
    return doc;
}

json gates_to_json(const GameModel& model) {
    json gates;
    if (!model.certificate) {
        gates["certificate_present"] = false;
        return gates;
    }
    gates["certificate_present"] = true;
    const LyapunovReport lyap = check_lyapunov(model, *model.certificate);
    gates["lyapunov"] = json{{"ok", lyap.ok},
                             {"worst_slack", lyap.worst_slack},
                             {"violations", lyap.violations.size()},
                             {"ref_state_weight_ok", lyap.ref_state_weight_ok}};
    const SmallCostReport small = check_small_cost(model, *model.certificate);
    gates["small_cost"] = json{{"ok", small.ok},
                               {"theta", small.theta},
                               {"cost_sup", small.cost_sup},
                               {"delta", small.delta},
                               {"max_admissible_theta", small.max_admissible_theta}};
    return gates;
}

json mixed_list_to_json(const std::vector<MixedAction>& list) {
    json out = json::array();
    for (const auto& a : list) out.push_back(a.weights);
    return out;
}

GameModel load_and_validate(const std::string& path, json& validation_doc) {
    GameModel model = load_model(path);
    const ValidationReport v = validate(model);
    validation_doc = validation_to_json(v);
    if (!v.ok) throw GateFailed("model validation");
    return model;
}

int cmd_validate(const std::string& model_path, const std::string& out_path) {
    GameModel model = load_model(model_path);
    json report = report_header("validate", json{{"model", model_path}}, model_to_json(model));
    json timings;
    int exit_code = kExitOk;
    {
        Stopwatch watch(timings, "total");
        const ValidationReport v = validate(model);
        report["validation"] = validation_to_json(v);
        if (!v.ok) exit_code = kExitGate;
        report["gates"] = gates_to_json(model);
        if (model.certificate && exit_code == kExitOk &&
            (!report["gates"]["lyapunov"]["ok"].get<bool>() ||
             !report["gates"]["small_cost"]["ok"].get<bool>()))
            exit_code = kExitGate;
    }
    report["timings_ms"] = timings;
    report["exit_code"] = exit_code;
    emit(report, out_path);
    return exit_code;
}

int cmd_solve_discounted(const std::string& model_path, double theta, double epsilon, double tol,
                         double horizon, double dt, double picard_tol, double safety,
                         const std::string& out_path) {
    const json config{{"model", model_path}, {"theta", theta},     {"epsilon", epsilon},
                      {"tol", tol},          {"horizon", horizon}, {"dt", dt},
                      {"picard_tol", picard_tol}, {"safety", safety}};
    json validation_doc;
    GameModel model = load_and_validate(model_path, validation_doc);
    json report = report_header("solve-discounted", config, model_to_json(model));
    report["validation"] = validation_doc;

    DiscountedOptions dopts;
    dopts.picard_tol = picard_tol;
    dopts.safety = safety;
    json timings;
    {
        Stopwatch watch(timings, "solve");
        const EpsilonRefinement ref = refine_epsilon(model, theta, tol, epsilon, dopts);
        const DiscountedSolution& sol = ref.solution;

        json results;
        results["epsilon_final"] = sol.epsilon;
        results["epsilon_history"] = ref.epsilons;
        results["refinement_diffs"] = ref.diffs;
        results["grid_nodes"] = sol.theta_grid.size();
        results["residual"] =
            checked(sol.residual, sol.residual_bound, sol.residual <= sol.residual_bound);
        results["warnings"] = sol.warnings;

        const int node = sol.nearest_node(theta);
        json psi = json::array();
        for (int i = 0; i < model.num_states(); ++i) psi.push_back(sol.psi[node][i]);
        results["theta"] = sol.theta_grid[node];
        results["psi"] = std::move(psi);

        const double t_horizon =
            horizon > 0.0 ? horizon
                          : std::min(std::log(theta / sol.epsilon) / model.alpha, 10.0 / model.alpha);
        const double policy_dt = dt > 0.0 ? dt : t_horizon / 200.0;
        const MarkovPolicy policy = extract_markov_policy(sol, theta, t_horizon, policy_dt);
        json policy_doc;
        policy_doc["dt"] = policy.dt;
        policy_doc["steps"] = policy.steps();
        policy_doc["truncated"] = policy.truncated;
        if (policy.truncated) policy_doc["t_cutoff"] = policy.t_cutoff;
        json table = json::array();
        for (const auto& slice : policy.table) {
            json per_state = json::array();
            for (const auto& pair : slice)
                per_state.push_back(json::array({pair.v1.weights, pair.v2.weights}));
            table.push_back(std::move(per_state));
        }
        policy_doc["table"] = std::move(table);
        results["policy"] = std::move(policy_doc);
        report["results"] = std::move(results);
    }
    report["timings_ms"] = timings;
    report["exit_code"] = kExitOk;
    emit(report, out_path);
    return kExitOk;
}

int cmd_solve_ergodic(const std::string& model_path, std::vector<int> levels, double tmax,
                      double dt, double tol, double residual_tol, bool override_gates,
                      const std::string& out_path, const std::string& solution_out) {
    const json config{{"model", model_path}, {"levels", levels},
                      {"tmax", tmax},        {"dt", dt},
                      {"tol", tol},          {"residual_tol", residual_tol},
                      {"override_gates", override_gates}};
    json validation_doc;
    GameModel model = load_and_validate(model_path, validation_doc);
    json report = report_header("solve-ergodic", config, model_to_json(model));
    report["validation"] = validation_doc;
    report["gates"] = gates_to_json(model);
    if (!model.certificate && !override_gates) {
        report["exit_code"] = kExitGate;
        emit(report, out_path);
        std::cerr << "gate failure: no certificate in the model (use --override-gates to march "
                     "anyway)\n";
        return kExitGate;
    }

    if (levels.empty()) levels = {model.num_states()};
    const LyapunovCertificate cert =
        model.certificate ? *model.certificate
                          : LyapunovCertificate{std::vector<double>(model.num_states(), 1.0), 1.0,
                                                2.0, {model.ref_state}};
    ErgodicOptions opts;
    opts.march.t_max = tmax;
    opts.march.dt = dt;
    opts.march.tol = tol;
    opts.residual_tol = residual_tol;
    opts.override_gates = override_gates || !model.certificate;

    json timings;
    {
        Stopwatch watch(timings, "solve");
        const ErgodicSolution sol = solve_ergodic(model, cert, levels, opts);

        json results;
        results["rho"] = sol.rho;
        results["psi_hat"] = sol.psi_hat.values;
        results["v1_star"] = mixed_list_to_json(sol.v1_star);
        results["v2_star"] = mixed_list_to_json(sol.v2_star);
        results["level_rhos"] = sol.level_rhos;
        results["truncation_level"] = sol.truncation_level;
        results["march_time"] = sol.march_time;
        results["polish_rounds"] = sol.polish_rounds;
        results["gate_overridden"] = sol.gate_overridden;
        results["residual"] =
            checked(sol.residual, sol.residual_bound, sol.residual <= sol.residual_bound);

        // Independent eigen-oracle at the returned saddle pair.
        const PerronResult pf = perron_value(model, sol.v1_star, sol.v2_star);
        double vec_gap = 0.0;
        for (int i = 0; i < model.num_states(); ++i)
            vec_gap = std::max(vec_gap, std::abs(sol.psi_hat[i] - pf.eigenvector[i]) /
                                            std::max(1.0, std::abs(pf.eigenvector[i])));
        results["perron_cross_check"] =
            json{{"lambda", pf.lambda},
                 {"rho_gap",
                  checked(std::abs(sol.rho - pf.lambda), 1e-6, std::abs(sol.rho - pf.lambda) <= 1e-6)},
                 {"eigvec_gap", checked(vec_gap, 1e-6, vec_gap <= 1e-6)}};
        report["results"] = std::move(results);

        if (!solution_out.empty()) save_solution(sol, solution_out);
        report["solution"] = solution_to_json(sol);
    }
    report["timings_ms"] = timings;
    report["exit_code"] = kExitOk;
    emit(report, out_path);
    return kExitOk;
}

int cmd_verify(const std::string& model_path, const std::string& solution_path, int n_paths,
               std::uint64_t seed, int n_deviations, const std::string& out_path) {
    const json config{{"model", model_path},
                      {"solution", solution_path},
                      {"paths", n_paths},
                      {"seed", seed},
                      {"deviations", n_deviations}};
    json validation_doc;
    GameModel model = load_and_validate(model_path, validation_doc);
    json report = report_header("verify", config, model_to_json(model));
    report["validation"] = validation_doc;
    report["gates"] = gates_to_json(model);

    // Accept a bare solution document or a solver report carrying one.
    const ErgodicSolution sol = [&] {
        std::ifstream in(solution_path);
        if (!in) throw Error("cannot open " + solution_path);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ValidationError(std::string("cannot parse solution: ") + e.what());
        }
        return solution_from_json(doc.contains("solution") ? doc["solution"] : doc);
    }();
    if (sol.psi_hat.size() != model.num_states())
        throw ValidationError("solution dimension does not match the model");

    json results;
    json timings;
    bool all_ok = true;
    auto record = [&](const std::string& name, json doc, bool ok) {
        doc["pass"] = ok;
        results[name] = std::move(doc);
        all_ok = all_ok && ok;
    };

    {
        Stopwatch watch(timings, "residual");
        const double res = ergodic_residual(model, sol.rho, sol.psi_hat);
        const double bound = 1e-6 * std::max(1.0, std::abs(sol.rho));
        record("stationary_residual", checked(res, bound, res <= bound), res <= bound);
    }
    {
        Stopwatch watch(timings, "saddle");
        SaddleCheckOptions sopts;
        sopts.n_mixed = n_deviations;
        sopts.seed = seed;
        const SaddleReport saddle = verify_saddle(model, sol, sopts);
        record("saddle",
               json{{"worst_p2_excess", saddle.worst_p2_excess},
                    {"worst_p1_shortfall", saddle.worst_p1_shortfall},
                    {"pure_checked", saddle.pure_checked_p1 + saddle.pure_checked_p2},
                    {"mixed_checked", saddle.mixed_checked_p1 + saddle.mixed_checked_p2},
                    {"pure_exhaustive", saddle.pure_exhaustive},
                    {"tolerance", sopts.tol},
                    {"violations", saddle.violations.size()}},
               saddle.ok);
    }
    {
        Stopwatch watch(timings, "twisted");
        // Return-functional bound at the solved value: the saddle opponent
        // first, then random stationary deviations.
        CounterRng rng(CounterRng::derive_stream(seed, 41));
        json dvals = json::array();
        bool d_ok = true;
        const int dev_cases = std::max(1, n_deviations / 10);
        for (int k = 0; k <= dev_cases; ++k) {
            std::vector<MixedAction> v2 = sol.v2_star;
            if (k > 0) {
                for (auto& a : v2) {
                    for (double& w : a.weights) w = -std::log1p(-rng.next_uniform());
                    a.normalize();
                }
            }
            const TwistedChain chain = build_twisted_chain(model, sol.v1_star, v2);
            const DRhoResult d = d_of_rho(chain, sol.rho, model.ref_state);
            d_ok = d_ok && d.value <= 1.0 + 1e-6;
            dvals.push_back(json{{"value", d.value}, {"exact", d.exact}});
        }
        record("d_of_rho", json{{"tolerance", 1e-6}, {"cases", std::move(dvals)}}, d_ok);

        if (model.certificate) {
            const TwistedChain chain = build_twisted_chain(model, sol.v1_star, sol.v2_star);
            const TkepReport tkep = tkep_check(chain, *model.certificate);
            double worst = std::numeric_limits<double>::infinity();
            for (double margin : tkep.margins) worst = std::min(worst, margin);
            record("tkep",
                   json{{"c0_size", tkep.c0.size()},
                        {"threshold", tkep.threshold},
                        {"worst_margin", tkep.margins.empty() ? 0.0 : worst},
                        {"tolerance", -1e-9}},
                   tkep.ok);

            bool moment_ok = true;
            double worst_gap = std::numeric_limits<double>::infinity();
            const auto u = exp_hitting_moment(model, sol.v1_star, sol.v2_star, model.ref_state,
                                              model.certificate->delta);
            for (int i = 0; i < model.num_states(); ++i) {
                moment_ok = moment_ok && u[i] <= model.certificate->W[i] + 1e-9;
                worst_gap = std::min(worst_gap, model.certificate->W[i] - u[i]);
            }
            record("exp_hitting_moment",
                   json{{"u", u}, {"worst_gap_to_W", worst_gap}, {"tolerance", 1e-9}}, moment_ok);
        }
    }
    {
        Stopwatch watch(timings, "dpp");
        const double t = 3.0;
        const ValueTable table =
            ValueTable::from_stationary(model, sol.v1_star, sol.v2_star, t, 2048);
        std::vector<int> starts(model.num_states());
        std::iota(starts.begin(), starts.end(), 0);
        std::vector<int> lower;
        for (int i = 0; i < (model.num_states() + 1) / 2; ++i) lower.push_back(i);
        bool dpp_ok = true;
        json dpp_cases = json::array();
        int which = 0;
        for (const std::vector<int>& hit_set :
             {std::vector<int>{model.ref_state}, lower, std::vector<int>{}}) {
            const DppReport dpp = multiplicative_dpp_check(
                model, stationary_profile(sol.v1_star, sol.v2_star), table, hit_set, t, starts,
                n_paths, CounterRng::derive_stream(seed, 600 + which++));
            double worst_z = 0.0;
            for (const auto& entry : dpp.entries) worst_z = std::max(worst_z, entry.z);
            dpp_ok = dpp_ok && dpp.ok;
            dpp_cases.push_back(json{{"hit_set_size", hit_set.size()}, {"worst_z", worst_z}});
        }
        record("multiplicative_dpp", json{{"tolerance_sigma", 3.0}, {"cases", dpp_cases}}, dpp_ok);
    }
    {
        Stopwatch watch(timings, "mc_growth");
        const double horizon = 40.0;
        const GrowthEstimate est =
            estimate_ergodic_growth(model, sol.v1_star, sol.v2_star, model.ref_state, horizon,
                                    n_paths, CounterRng::derive_stream(seed, 700));
        // The finite-horizon offset is deterministic and computable from the
        // semigroup; fold it in so the 3-sigma band tests the sampling alone.
        const Matrix kt = feynman_kac(model, sol.v1_star, sol.v2_star, horizon);
        double mass = 0.0;
        for (int j = 0; j < model.num_states(); ++j) mass += kt(model.ref_state, j);
        const double bias = std::log(mass) / horizon - sol.rho;
        const double gap = std::abs(est.rho_hat - sol.rho);
        const double band = 3.0 * est.stderr_rho + std::abs(bias) + 1e-12;
        record("mc_growth",
               json{{"rho_hat", est.rho_hat},
                    {"stderr", est.stderr_rho},
                    {"finite_horizon_offset", bias},
                    {"gap", gap},
                    {"band", band}},
               gap <= band);
    }

    report["results"] = std::move(results);
    report["timings_ms"] = timings;
    const int exit_code = all_ok ? kExitOk : kExitVerify;
    report["exit_code"] = exit_code;
    emit(report, out_path);
    return exit_code;
}

int cmd_simulate(const std::string& model_path, const std::string& profile_path, double horizon,
                 int n_paths, std::uint64_t seed, double theta, int start_state,
                 const std::string& out_path) {
    const json config{{"model", model_path}, {"profile", profile_path}, {"T", horizon},
                      {"paths", n_paths},    {"seed", seed},            {"theta", theta},
                      {"start", start_state}};
    json validation_doc;
    GameModel model = load_and_validate(model_path, validation_doc);
    json report = report_header("simulate", config, model_to_json(model));
    report["validation"] = validation_doc;

    const StrategyProfile profile = load_profile(profile_path);
    const int start = start_state >= 1 ? start_state - 1 : model.ref_state;
    if (start < 0 || start >= model.num_states()) throw Error("start state outside the model");

    json results;
    json timings;
    {
        Stopwatch watch(timings, "discounted");
        const McEstimate est =
            estimate_discounted(model, profile, theta, start, horizon, n_paths, seed);
        results["discounted"] = json{{"theta", theta},
                                     {"mean", est.mean},
                                     {"stderr", est.stderr_mean},
                                     {"tail_factor", est.tail_factor},
                                     {"paths", est.n_paths}};
    }
    if (profile.is_stationary()) {
        Stopwatch watch(timings, "growth");
        std::vector<MixedAction> v1, v2;
        for (const auto& pair : profile.stationary) {
            v1.push_back(pair.v1);
            v2.push_back(pair.v2);
        }
        const GrowthEstimate est = estimate_ergodic_growth(model, v1, v2, start, horizon, n_paths,
                                                           CounterRng::derive_stream(seed, 1));
        results["growth"] = json{{"rho_hat", est.rho_hat},
                                 {"stderr", est.stderr_rho},
                                 {"mean_functional", est.mean_functional},
                                 {"paths", est.n_paths}};
    }
    report["results"] = std::move(results);
    report["timings_ms"] = timings;
    report["exit_code"] = kExitOk;
    emit(report, out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk-sensitive zero-sum game solver suite for controlled Markov chains"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap on worker threads")->envname("RSGAME_THREADS");

    std::string model_path, out_path;

    auto* validate_cmd = app.add_subcommand("validate", "check model invariants and gates");
    validate_cmd->add_option("model", model_path, "model file")->required();
    validate_cmd->add_option("--out", out_path, "also write the report here");

    auto* disc_cmd = app.add_subcommand("solve-discounted", "solve the risk-parameter ODE");
    double theta = 0.0, epsilon = -1.0, tol = 1e-8, horizon = -1.0, dt = -1.0;
    double picard_tol = 1e-10, safety = 0.5;
    disc_cmd->add_option("model", model_path, "model file")->required();
    disc_cmd->add_option("--theta", theta, "risk parameter to solve for")->required();
    disc_cmd->add_option("--epsilon", epsilon, "initial left endpoint (default 1e-3 * theta_cap)");
    disc_cmd->add_option("--tol", tol, "epsilon-refinement tolerance")->capture_default_str();
    disc_cmd->add_option("--horizon", horizon, "policy horizon (default min(T_eps, 10/alpha))");
    disc_cmd->add_option("--dt", dt, "policy time step (default horizon/200)");
    disc_cmd->add_option("--picard-tol", picard_tol, "fixed-point sweep tolerance")
        ->capture_default_str();
    disc_cmd->add_option("--safety", safety, "contraction target per interval")
        ->capture_default_str();
    disc_cmd->add_option("--out", out_path, "also write the report here");

    auto* erg_cmd = app.add_subcommand("solve-ergodic", "solve the stationary equation");
    std::vector<int> levels;
    double tmax = 500.0, march_dt = -1.0, march_tol = 1e-9, residual_tol = 1e-6;
    bool override_gates = false;
    std::string solution_out;
    erg_cmd->add_option("model", model_path, "model file")->required();
    erg_cmd->add_option("--levels", levels, "ascending cost-truncation levels (default N)")
        ->delimiter(',');
    erg_cmd->add_option("--tmax", tmax, "march horizon cap")->capture_default_str();
    erg_cmd->add_option("--dt", march_dt, "march step (default from the stability bound)");
    erg_cmd->add_option("--tol", march_tol, "march convergence tolerance")->capture_default_str();
    erg_cmd->add_option("--residual-tol", residual_tol, "stationary-equation residual gate")
        ->capture_default_str();
    erg_cmd->add_flag("--override-gates", override_gates,
                      "run despite failed certificate/small-cost gates (recorded in output)");
    erg_cmd->add_option("--out", out_path, "also write the report here");
    erg_cmd->add_option("--solution-out", solution_out, "write the bare solution document here");

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites on a solution");
    std::string solution_path;
    int n_paths = 10000, deviations = 100;
    std::uint64_t seed = 20240601;
    verify_cmd->add_option("model", model_path, "model file")->required();
    verify_cmd->add_option("--solution", solution_path, "solution or solver-report file")
        ->required();
    verify_cmd->add_option("--paths", n_paths, "Monte Carlo paths per check")->capture_default_str();
    verify_cmd->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    verify_cmd->add_option("--deviations", deviations, "random mixed deviations per player")
        ->capture_default_str();
    verify_cmd->add_option("--out", out_path, "also write the report here");

    auto* sim_cmd = app.add_subcommand("simulate", "run the Monte Carlo estimators only");
    std::string profile_path;
    double sim_horizon = 20.0, sim_theta = 1.0;
    int sim_paths = 10000, sim_start = 0;
    std::uint64_t sim_seed = 20240601;
    sim_cmd->add_option("model", model_path, "model file")->required();
    sim_cmd->add_option("--profile", profile_path, "strategy profile file")->required();
    sim_cmd->add_option("--T", sim_horizon, "simulation horizon")->capture_default_str();
    sim_cmd->add_option("--paths", sim_paths, "Monte Carlo paths")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "64-bit seed")->capture_default_str();
    sim_cmd->add_option("--theta", sim_theta, "risk parameter for the discounted estimator")
        ->capture_default_str();
    sim_cmd->add_option("--start", sim_start, "1-based start state (default: reference state)");
    sim_cmd->add_option("--out", out_path, "also write the report here");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_max_threads(threads);

    try {
        if (validate_cmd->parsed()) return cmd_validate(model_path, out_path);
        if (disc_cmd->parsed())
            return cmd_solve_discounted(model_path, theta, epsilon, tol, horizon, dt, picard_tol,
                                        safety, out_path);
        if (erg_cmd->parsed())
            return cmd_solve_ergodic(model_path, levels, tmax, march_dt, march_tol, residual_tol,
                                     override_gates, out_path, solution_out);
        if (verify_cmd->parsed())
            return cmd_verify(model_path, solution_path, n_paths, seed, deviations, out_path);
        if (sim_cmd->parsed())
            return cmd_simulate(model_path, profile_path, sim_horizon, sim_paths, sim_seed,
                                sim_theta, sim_start, out_path);
    } catch (const GateFailed& e) {
        std::cerr << "gate failure: " << e.what() << '\n';
        return kExitGate;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const NotIrreducible& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return kExitParse;
}
