#include "rsgame/model_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "rsgame/errors.hpp"

namespace rsgame {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("cannot parse " + path + ": " + e.what());
    }
    return doc;
}

void write_json_file(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << doc.dump(2) << '\n';
}

void require_schema(const json& doc, int expected, const std::string& what) {
    if (!doc.is_object() || !doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != expected)
        throw ValidationError(what + " document must carry schema: " + std::to_string(expected));
}

json mixed_to_json(const MixedAction& a) { return json(a.weights); }

MixedAction mixed_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + " must be an array of weights");
    MixedAction a;
    a.weights = j.get<std::vector<double>>();
    if (!a.is_valid(1e-9)) throw ValidationError(where + " is not a probability vector");
    return a;
}

std::vector<MixedAction> mixed_list_from_json(const json& j, const std::string& where) {
    std::vector<MixedAction> list;
    for (std::size_t i = 0; i < j.size(); ++i)
        list.push_back(mixed_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return list;
}

}  // namespace

void reject_unknown_keys(const json& object, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError("unknown field \"" + key + "\" in " + where);
    }
}

json model_to_json(const GameModel& model) {
    const int n = model.num_states();
    const int m1 = model.num_actions1();
    const int m2 = model.num_actions2();
    json doc;
    doc["schema"] = kModelSchema;
    if (!model.name.empty()) doc["name"] = model.name;
    doc["states"] = n;
    doc["actions1"] = m1;
    doc["actions2"] = m2;
    doc["alpha"] = model.alpha;
    doc["theta_cap"] = model.theta_cap;
    doc["ref_state"] = model.ref_state + 1;

    json rate = json::array();
    for (int i = 0; i < n; ++i) {
        json per_j = json::array();
        for (int j = 0; j < n; ++j) {
            json per_u1 = json::array();
            for (int u1 = 0; u1 < m1; ++u1) {
                json per_u2 = json::array();
                for (int u2 = 0; u2 < m2; ++u2) per_u2.push_back(model.rate(i, j, u1, u2));
                per_u1.push_back(std::move(per_u2));
            }
            per_j.push_back(std::move(per_u1));
        }
        rate.push_back(std::move(per_j));
    }
    doc["rate"] = std::move(rate);

    json cost = json::array();
    for (int i = 0; i < n; ++i) {
        json per_u1 = json::array();
        for (int u1 = 0; u1 < m1; ++u1) {
            json per_u2 = json::array();
            for (int u2 = 0; u2 < m2; ++u2) per_u2.push_back(model.cost(i, u1, u2));
            per_u1.push_back(std::move(per_u2));
        }
        cost.push_back(std::move(per_u1));
    }
    doc["cost"] = std::move(cost);

    if (model.certificate) {
        json cert;
        cert["W"] = model.certificate->W;
        cert["delta"] = model.certificate->delta;
        cert["b"] = model.certificate->b;
        json c_states = json::array();
        for (int i : model.certificate->C) c_states.push_back(i + 1);
        cert["C"] = std::move(c_states);
        doc["lyapunov"] = std::move(cert);
    }
    return doc;
}

GameModel model_from_json(const json& doc) {
    require_schema(doc, kModelSchema, "model");
    reject_unknown_keys(doc,
                        {"schema", "name", "states", "actions1", "actions2", "alpha", "theta_cap",
                         "ref_state", "rate", "cost", "lyapunov"},
                        "model");
    for (const char* key : {"states", "actions1", "actions2", "alpha", "theta_cap", "rate", "cost"})
        if (!doc.contains(key)) throw ValidationError(std::string("model is missing \"") + key + "\"");

    const int n = doc["states"].get<int>();
    const int m1 = doc["actions1"].get<int>();
    const int m2 = doc["actions2"].get<int>();
    GameModel model(n, m1, m2);
    model.alpha = doc["alpha"].get<double>();
    model.theta_cap = doc["theta_cap"].get<double>();
    model.ref_state = doc.value("ref_state", 1) - 1;
    model.name = doc.value("name", std::string{});
    if (model.ref_state < 0 || model.ref_state >= n)
        throw ValidationError("ref_state outside 1.." + std::to_string(n));

    const json& rate = doc["rate"];
    if (static_cast<int>(rate.size()) != n) throw ValidationError("rate tensor has wrong first dimension");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rate[i].size()) != n)
            throw ValidationError("rate tensor has wrong second dimension");
        for (int j = 0; j < n; ++j) {
            if (static_cast<int>(rate[i][j].size()) != m1)
                throw ValidationError("rate tensor has wrong action1 dimension");
            for (int u1 = 0; u1 < m1; ++u1) {
                if (static_cast<int>(rate[i][j][u1].size()) != m2)
                    throw ValidationError("rate tensor has wrong action2 dimension");
                for (int u2 = 0; u2 < m2; ++u2)
                    model.rate(i, j, u1, u2) = rate[i][j][u1][u2].get<double>();
            }
        }
    }

    const json& cost = doc["cost"];
    if (static_cast<int>(cost.size()) != n) throw ValidationError("cost tensor has wrong first dimension");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(cost[i].size()) != m1)
            throw ValidationError("cost tensor has wrong action1 dimension");
        for (int u1 = 0; u1 < m1; ++u1) {
            if (static_cast<int>(cost[i][u1].size()) != m2)
                throw ValidationError("cost tensor has wrong action2 dimension");
            for (int u2 = 0; u2 < m2; ++u2) model.cost(i, u1, u2) = cost[i][u1][u2].get<double>();
        }
    }

    if (doc.contains("lyapunov")) {
        const json& cert_doc = doc["lyapunov"];
        reject_unknown_keys(cert_doc, {"W", "delta", "b", "C"}, "lyapunov");
        LyapunovCertificate cert;
        cert.W = cert_doc.at("W").get<std::vector<double>>();
        cert.delta = cert_doc.at("delta").get<double>();
        cert.b = cert_doc.at("b").get<double>();
        for (const auto& s : cert_doc.at("C")) cert.C.push_back(s.get<int>() - 1);
        if (static_cast<int>(cert.W.size()) != n)
            throw ValidationError("lyapunov W has wrong length");
        model.certificate = std::move(cert);
    }
    return model;
}

GameModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

void save_model(const GameModel& model, const std::string& path) {
    write_json_file(model_to_json(model), path);
}

json solution_to_json(const ErgodicSolution& solution) {
    json doc;
    doc["schema"] = kSolutionSchema;
    doc["kind"] = "ergodic_solution";
    doc["rho"] = solution.rho;
    doc["psi_hat"] = solution.psi_hat.values;
    json v1 = json::array(), v2 = json::array();
    for (const auto& a : solution.v1_star) v1.push_back(mixed_to_json(a));
    for (const auto& a : solution.v2_star) v2.push_back(mixed_to_json(a));
    doc["v1_star"] = std::move(v1);
    doc["v2_star"] = std::move(v2);
    doc["truncation_level"] = solution.truncation_level;
    doc["residual"] = solution.residual;
    doc["residual_bound"] = solution.residual_bound;
    doc["level_rhos"] = solution.level_rhos;
    doc["gate_overridden"] = solution.gate_overridden;
    return doc;
}

ErgodicSolution solution_from_json(const json& doc) {
    require_schema(doc, kSolutionSchema, "solution");
    reject_unknown_keys(doc,
                        {"schema", "kind", "rho", "psi_hat", "v1_star", "v2_star",
                         "truncation_level", "residual", "residual_bound", "level_rhos",
                         "gate_overridden"},
                        "solution");
    if (doc.value("kind", "") != "ergodic_solution")
        throw ValidationError("solution document kind must be \"ergodic_solution\"");
    ErgodicSolution sol;
    sol.rho = doc.at("rho").get<double>();
    sol.psi_hat = ValueFunction(doc.at("psi_hat").get<std::vector<double>>());
    sol.v1_star = mixed_list_from_json(doc.at("v1_star"), "v1_star");
    sol.v2_star = mixed_list_from_json(doc.at("v2_star"), "v2_star");
    sol.truncation_level = doc.value("truncation_level", 0);
    sol.residual = doc.value("residual", 0.0);
    sol.residual_bound = doc.value("residual_bound", 0.0);
    if (doc.contains("level_rhos")) sol.level_rhos = doc["level_rhos"].get<std::vector<double>>();
    sol.gate_overridden = doc.value("gate_overridden", false);
    return sol;
}

ErgodicSolution load_solution(const std::string& path) {
    return solution_from_json(read_json_file(path));
}

void save_solution(const ErgodicSolution& solution, const std::string& path) {
    write_json_file(solution_to_json(solution), path);
}

json profile_to_json(const StrategyProfile& profile) {
    json doc;
    doc["schema"] = kProfileSchema;
    if (profile.is_stationary()) {
        doc["kind"] = "stationary";
        json v1 = json::array(), v2 = json::array();
        for (const auto& pair : profile.stationary) {
            v1.push_back(mixed_to_json(pair.v1));
            v2.push_back(mixed_to_json(pair.v2));
        }
        doc["stationary"] = {{"v1", std::move(v1)}, {"v2", std::move(v2)}};
    } else {
        doc["kind"] = "markov";
        json table = json::array();
        for (const auto& slice : profile.markov.table) {
            json per_state = json::array();
            for (const auto& pair : slice)
                per_state.push_back(json::array({mixed_to_json(pair.v1), mixed_to_json(pair.v2)}));
            table.push_back(std::move(per_state));
        }
        doc["markov"] = {{"dt", profile.markov.dt},
                         {"table", std::move(table)},
                         {"truncated", profile.markov.truncated},
                         {"t_cutoff", profile.markov.t_cutoff}};
    }
    return doc;
}

StrategyProfile profile_from_json(const json& doc) {
    require_schema(doc, kProfileSchema, "profile");
    reject_unknown_keys(doc, {"schema", "kind", "stationary", "markov"}, "profile");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "stationary") {
        const json& body = doc.at("stationary");
        reject_unknown_keys(body, {"v1", "v2"}, "profile.stationary");
        const auto v1 = mixed_list_from_json(body.at("v1"), "v1");
        const auto v2 = mixed_list_from_json(body.at("v2"), "v2");
        if (v1.size() != v2.size()) throw ValidationError("v1/v2 lengths differ");
        std::vector<MixedPair> pairs(v1.size());
        for (std::size_t i = 0; i < v1.size(); ++i) pairs[i] = {v1[i], v2[i]};
        return StrategyProfile::make_stationary(std::move(pairs));
    }
    if (kind == "markov") {
        const json& body = doc.at("markov");
        reject_unknown_keys(body, {"dt", "table", "truncated", "t_cutoff"}, "profile.markov");
        MarkovPolicy policy;
        policy.dt = body.at("dt").get<double>();
        policy.truncated = body.value("truncated", false);
        policy.t_cutoff = body.value("t_cutoff", std::numeric_limits<double>::infinity());
        for (const auto& slice : body.at("table")) {
            std::vector<MixedPair> per_state;
            for (const auto& pair : slice)
                per_state.push_back({mixed_from_json(pair.at(0), "markov v1"),
                                     mixed_from_json(pair.at(1), "markov v2")});
            policy.table.push_back(std::move(per_state));
        }
        if (policy.table.empty()) throw ValidationError("markov profile has an empty table");
        return StrategyProfile::make_markov(std::move(policy));
    }
    throw ValidationError("profile kind must be \"stationary\" or \"markov\"");
}

StrategyProfile load_profile(const std::string& path) {
    return profile_from_json(read_json_file(path));
}

void save_profile(const StrategyProfile& profile, const std::string& path) {
    write_json_file(profile_to_json(profile), path);
}

std::string content_hash(const json& doc) {
    const std::string dump = doc.dump();
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char ch : dump) {
        hash ^= ch;
        hash *= 0x100000001B3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a:") + buf;
}

}  // namespace rsgame
