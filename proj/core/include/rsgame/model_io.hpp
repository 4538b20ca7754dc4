#pragma once

#include <string>

#include <json.hpp>

#include "rsgame/ergodic.hpp"
#include "rsgame/model.hpp"
#include "rsgame/types.hpp"

namespace rsgame {

// All on-disk documents are JSON with a required integer "schema" field
// (currently 1) and 1-based state labels. Loaders reject unknown keys.
inline constexpr int kModelSchema = 1;
inline constexpr int kSolutionSchema = 1;
inline constexpr int kProfileSchema = 1;

nlohmann::json model_to_json(const GameModel& model);
GameModel model_from_json(const nlohmann::json& doc);
GameModel load_model(const std::string& path);
void save_model(const GameModel& model, const std::string& path);

nlohmann::json solution_to_json(const ErgodicSolution& solution);
ErgodicSolution solution_from_json(const nlohmann::json& doc);
ErgodicSolution load_solution(const std::string& path);
void save_solution(const ErgodicSolution& solution, const std::string& path);

nlohmann::json profile_to_json(const StrategyProfile& profile);
StrategyProfile profile_from_json(const nlohmann::json& doc);
StrategyProfile load_profile(const std::string& path);
void save_profile(const StrategyProfile& profile, const std::string& path);

// FNV-1a 64-bit over the canonical (sorted-key) dump, as "fnv1a:<hex>".
std::string content_hash(const nlohmann::json& doc);

// Throws ValidationError naming the first key outside the allowed set.
void reject_unknown_keys(const nlohmann::json& object, const std::vector<std::string>& allowed,
                         const std::string& where);

}  // namespace rsgame
