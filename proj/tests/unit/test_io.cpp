#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "rsgame/errors.hpp"
#include "rsgame/model_io.hpp"
#include "rsgame/simulate.hpp"
#include "test_models.hpp"

using namespace rsgame;
using nlohmann::json;
using rsgame::testing::birth_death_two_state;
using rsgame::testing::constant_profile;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("/tmp/rsgame_test_") + std::to_string(::getpid()) + "_" + name;
}

struct CliResult {
    int exit_code;
    json report;
};

// Runs the CLI binary, capturing the JSON it prints.
CliResult run_cli(const std::string& args) {
    const std::string out = temp_path("cli_stdout.json");
    const std::string cmd = std::string(RSGAME_CLI_PATH) + " " + args + " > " + out + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    if (in.peek() != std::ifstream::traits_type::eof()) {
        try {
            in >> result.report;
        } catch (const json::exception&) {
        }
    }
    std::remove(out.c_str());
    return result;
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("model files round trip") {
    GameModel model = birth_death_two_state();
    model.name = "two-state";
    const std::string path = temp_path("model.json");
    save_model(model, path);
    const GameModel loaded = load_model(path);
    CHECK(loaded.num_states() == 2);
    CHECK(loaded.name == "two-state");
    CHECK(loaded.rate_tensor() == model.rate_tensor());
    CHECK(loaded.cost_tensor() == model.cost_tensor());
    CHECK(loaded.alpha == model.alpha);
    REQUIRE(loaded.certificate.has_value());
    CHECK(loaded.certificate->W == model.certificate->W);
    CHECK(loaded.certificate->C == model.certificate->C);
    CHECK(content_hash(model_to_json(loaded)) == content_hash(model_to_json(model)));
    std::remove(path.c_str());
}

TEST_CASE("random models survive a save/load/save cycle byte-for-byte") {
    for (std::uint64_t seed : {51, 52, 53, 54, 55}) {
        GameModel model = rsgame::testing::random_model(seed, 3 + seed % 4, 2, 3);
        const json once = model_to_json(model);
        GameModel loaded = model_from_json(once);
        CHECK(model_to_json(loaded).dump() == once.dump());
    }
}

TEST_CASE("loader rejects unknown fields and bad schemas") {
    GameModel model = birth_death_two_state();
    json doc = model_to_json(model);
    SUBCASE("unknown top-level field") {
        doc["surprise"] = 1;
        CHECK_THROWS_AS(model_from_json(doc), ValidationError);
    }
    SUBCASE("unknown certificate field") {
        doc["lyapunov"]["extra"] = 2;
        CHECK_THROWS_AS(model_from_json(doc), ValidationError);
    }
    SUBCASE("missing schema") {
        doc.erase("schema");
        CHECK_THROWS_AS(model_from_json(doc), ValidationError);
    }
    SUBCASE("wrong schema version") {
        doc["schema"] = 99;
        CHECK_THROWS_AS(model_from_json(doc), ValidationError);
    }
    SUBCASE("dimension mismatch") {
        doc["states"] = 3;
        CHECK_THROWS_AS(model_from_json(doc), ValidationError);
    }
}

TEST_CASE("profile files round trip") {
    SUBCASE("stationary") {
        const StrategyProfile profile = stationary_profile(
            constant_profile(2, MixedAction::uniform(2)),
            constant_profile(2, MixedAction::point_mass(2, 1)));
        const StrategyProfile loaded = profile_from_json(profile_to_json(profile));
        CHECK(loaded.is_stationary());
        CHECK(loaded.stationary[0].v1.weights == profile.stationary[0].v1.weights);
        CHECK(loaded.stationary[1].v2.weights == profile.stationary[1].v2.weights);
    }
    SUBCASE("markov") {
        MarkovPolicy policy;
        policy.dt = 0.25;
        policy.table = {{{MixedAction::uniform(2), MixedAction::point_mass(2, 0)}},
                        {{MixedAction::point_mass(2, 1), MixedAction::uniform(2)}}};
        policy.truncated = true;
        policy.t_cutoff = 0.5;
        const StrategyProfile profile = StrategyProfile::make_markov(policy);
        const StrategyProfile loaded = profile_from_json(profile_to_json(profile));
        CHECK_FALSE(loaded.is_stationary());
        CHECK(loaded.markov.dt == 0.25);
        CHECK(loaded.markov.truncated);
        CHECK(loaded.markov.table.size() == 2);
        CHECK(loaded.markov.table[1][0].v1.weights == policy.table[1][0].v1.weights);
    }
    SUBCASE("non-probability weights are rejected") {
        json doc{{"schema", 1},
                 {"kind", "stationary"},
                 {"stationary", {{"v1", {{0.5, 0.6}}}, {"v2", {{1.0, 0.0}}}}}};
        CHECK_THROWS_AS(profile_from_json(doc), ValidationError);
    }
}

TEST_CASE("cli validate") {
    GameModel model = birth_death_two_state();
    const std::string path = temp_path("cli_model.json");
    save_model(model, path);
    SUBCASE("valid gated model exits 0") {
        const CliResult r = run_cli("validate " + path);
        CHECK(r.exit_code == 0);
        CHECK(r.report["validation"]["ok"] == true);
        CHECK(r.report["gates"]["lyapunov"]["ok"] == true);
        CHECK(r.report["gates"]["small_cost"]["ok"] == true);
    }
    SUBCASE("broken certificate exits 2") {
        GameModel bad = model;
        bad.certificate->delta = 3.0;  // drift can no longer cover 2*delta*W
        const std::string bad_path = temp_path("cli_bad.json");
        save_model(bad, bad_path);
        const CliResult r = run_cli("validate " + bad_path);
        CHECK(r.exit_code == 2);
        std::remove(bad_path.c_str());
    }
    SUBCASE("unparseable file exits 1") {
        const std::string garbled = temp_path("cli_garbled.json");
        std::ofstream(garbled) << "{not json";
        const CliResult r = run_cli("validate " + garbled);
        CHECK(r.exit_code == 1);
        std::remove(garbled.c_str());
    }
    SUBCASE("hopeless march horizon exits 3") {
        const CliResult r = run_cli("solve-ergodic " + path + " --tmax 0.05");
        CHECK(r.exit_code == 3);
    }
    std::remove(path.c_str());
}

TEST_CASE("cli solve and verify round trip") {
    GameModel model = birth_death_two_state();
    const std::string model_path = temp_path("cli_model2.json");
    const std::string solution_path = temp_path("cli_solution.json");
    save_model(model, model_path);

    const CliResult solve = run_cli("solve-ergodic " + model_path + " --solution-out " +
                                    solution_path);
    REQUIRE(solve.exit_code == 0);
    CHECK(solve.report["results"]["residual"]["pass"] == true);
    CHECK(solve.report["results"]["perron_cross_check"]["rho_gap"]["pass"] == true);

    SUBCASE("verify accepts the fresh solution") {
        const CliResult verify =
            run_cli("verify " + model_path + " --solution " + solution_path + " --paths 2000");
        CHECK(verify.exit_code == 0);
        CHECK(verify.report["results"]["stationary_residual"]["pass"] == true);
        CHECK(verify.report["results"]["saddle"]["pass"] == true);
    }
    SUBCASE("a corrupted rho is caught with exit 4") {
        json doc;
        std::ifstream(solution_path) >> doc;
        doc["rho"] = doc["rho"].get<double>() + 0.1;
        const std::string corrupt_path = temp_path("cli_corrupt.json");
        std::ofstream(corrupt_path) << doc.dump(2);
        const CliResult verify =
            run_cli("verify " + model_path + " --solution " + corrupt_path + " --paths 500");
        CHECK(verify.exit_code == 4);
        CHECK(verify.report["results"]["stationary_residual"]["pass"] == false);
        std::remove(corrupt_path.c_str());
    }
    std::remove(model_path.c_str());
    std::remove(solution_path.c_str());
}

TEST_CASE("cli solve-discounted and simulate") {
    GameModel model = birth_death_two_state();
    const std::string model_path = temp_path("cli_model3.json");
    save_model(model, model_path);

    const CliResult solve = run_cli("solve-discounted " + model_path + " --theta 0.5 --tol 1e-6");
    REQUIRE(solve.exit_code == 0);
    CHECK(solve.report["results"]["psi"].size() == 2);
    const double psi0 = solve.report["results"]["psi"][0].get<double>();
    CHECK(psi0 >= 1.0);
    CHECK(psi0 <= std::exp(0.5 * model.cost_sup() / model.alpha));
    CHECK(solve.report["results"]["residual"]["pass"] == true);
    CHECK(solve.report["results"]["policy"]["steps"].get<int>() >= 1);

    const std::string profile_path = temp_path("cli_profile.json");
    save_profile(stationary_profile(constant_profile(2, MixedAction::uniform(2)),
                                    constant_profile(2, MixedAction::uniform(2))),
                 profile_path);
    const CliResult sim = run_cli("simulate " + model_path + " --profile " + profile_path +
                                  " --T 5 --paths 500 --theta 0.5 --seed 99");
    CHECK(sim.exit_code == 0);
    CHECK(sim.report["results"]["discounted"]["mean"].get<double>() >= 1.0);
    CHECK(sim.report["results"]["growth"]["rho_hat"].get<double>() >= 0.0);
    std::remove(model_path.c_str());
    std::remove(profile_path.c_str());
}

TEST_CASE("cli reports are deterministic given the seed") {
    GameModel model = birth_death_two_state();
    const std::string model_path = temp_path("cli_model4.json");
    const std::string solution_path = temp_path("cli_solution4.json");
    save_model(model, model_path);
    REQUIRE(run_cli("solve-ergodic " + model_path + " --solution-out " + solution_path).exit_code ==
            0);

    CliResult a = run_cli("verify " + model_path + " --solution " + solution_path +
                          " --paths 1000 --seed 4242");
    CliResult b = run_cli("verify " + model_path + " --solution " + solution_path +
                          " --paths 1000 --seed 4242");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    a.report.erase("timings_ms");
    b.report.erase("timings_ms");
    CHECK(a.report.dump() == b.report.dump());

    CliResult c = run_cli("verify " + model_path + " --solution " + solution_path +
                          " --paths 1000 --seed 77");
    c.report.erase("timings_ms");
    CHECK(a.report.dump() != c.report.dump());
    std::remove(model_path.c_str());
    std::remove(solution_path.c_str());
}

}  // TEST_SUITE
