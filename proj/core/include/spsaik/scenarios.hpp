#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spsaik/kinematics.hpp"
#include "spsaik/objective.hpp"

namespace spsaik {

/// An IK problem instance plus the reference numbers it is expected to reproduce.
struct Scenario {
    std::string id;
    ChainModel chain;
    ObjectiveSpec spec;
    std::optional<Pose> expected_initial_pose;
    std::optional<double> expected_initial_loss;
    std::optional<double> reported_final_loss;  ///< informational only

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr double kPoseTolerance = 1e-9;
inline constexpr double kInitialLossTolerance = 5e-5;

/// Ids of the built-in validation problems, in table order.
const std::vector<std::string>& builtin_ids();

/// Throws ScenarioError naming the valid ids when @p id is unknown.
Scenario builtin(std::string_view id);

/// Throws ScenarioError unless FK(reference) and the initial loss match the recorded expectations.
void check_consistency(const Scenario& scenario);

/**
 * JSON scenario document:
 *
 *   {
 *     "id": "1.1",
 *     "link_lengths": [1, 1, ...],
 *     "q0_deg": [0, 0, ...],
 *     "target": {"x": 4, "y": 3, "theta_deg": 180},
 *     "r_ee_diag": [..3..]          or "r_ee": [[..], [..], [..]],
 *     "q_jmc_diag": [..n..]         or "q_jmc": [[..n..], ...],
 *     "w_jmc": 1, "w_ee": 50,
 *     "joint_limits": {"min_deg": [..], "max_deg": [..]},           (optional)
 *     "expected": {"initial_pose": {"x":..,"y":..,"theta_deg":..},   (optional)
 *                  "initial_loss": .., "reported_final_loss": ..}
 *   }
 *
 * Parse problems raise ParseError; documents that parse but break an invariant raise
 * ScenarioError.
 */
Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// A built-in id, or else a path to a scenario file.
Scenario resolve_scenario(std::string_view id_or_path);

}  // namespace spsaik
