#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gathersim/adversary.hpp"
#include "gathersim/analysis.hpp"
#include "gathersim/engine.hpp"
#include "gathersim/multirobot.hpp"
#include "gathersim/policies.hpp"

namespace gathersim {

enum class ScenarioMode { TwoRobot, Lemma1Projection, Multirobot };

std::string_view scenario_mode_name(ScenarioMode mode) noexcept;

struct RobotDescriptor {
    Rat position;
    Rat speed = 1;
    std::string policy = "default";
    friend bool operator==(const RobotDescriptor&, const RobotDescriptor&) = default;
};

/// Counts the looks of `robot` before the first move of `other` and compares
/// them with the geometric repeat count for speed ratio alpha.
struct HalvingCheck {
    RobotId robot = 0;
    RobotId other = 1;
    Rat alpha = 1;
    std::optional<Rat> configured_gap;  // W + C the prediction is reported for
    friend bool operator==(const HalvingCheck&, const HalvingCheck&) = default;
};

struct AnalysisToggles {
    bool attempts = false;
    MoveSwitch move_switch = MoveSwitch::MoveStart;
    bool straddle = false;
    std::optional<HalvingCheck> halving;
    friend bool operator==(const AnalysisToggles&, const AnalysisToggles&) = default;
};

struct MultirobotParams {
    std::size_t n = 8;
    Rat tau_fraction = Rat(1, 10);
    std::size_t max_tie_rounds = 1000;
    Activation activation = Activation::All;
    bool engineered_ties = true;  // also run tie-breaking on eight tied antipodal pairs
    friend bool operator==(const MultirobotParams&, const MultirobotParams&) = default;
};

struct Scenario {
    std::string name;
    ScenarioMode mode = ScenarioMode::TwoRobot;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    Budgets budgets;
    std::map<std::string, LambdaPolicy> policies;
    std::vector<RobotDescriptor> robots;
    AdversaryPolicy adversary;
    AnalysisToggles analysis;
    MultirobotParams multirobot;

    /// Robot specs with policies resolved.
    std::vector<RobotSpec> robot_specs() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates a scenario; failures raise VALIDATION with the JSON
/// path of the offending field. Rationals must be strings ("p/q" or exact
/// decimals) or integers.
Scenario parse_scenario(std::string_view text);
Scenario parse_scenario_json(const nlohmann::json& doc);
void validate(const Scenario& scenario);

nlohmann::json to_json(const Scenario& scenario);
nlohmann::json to_json(const LambdaPolicy& policy);
nlohmann::json to_json(const AdversaryPolicy& policy);
LambdaPolicy parse_policy(const nlohmann::json& j, const std::string& path);
AdversaryPolicy parse_adversary(const nlohmann::json& j, const std::string& path);

}  // namespace gathersim
