#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gathersim/analysis.hpp"
#include "gathersim/scenario.hpp"

namespace gathersim {

inline constexpr const char* kVersion = "1.0.0";

enum class TraceMode { None, Failed, All };

struct RunOptions {
    std::size_t workers = 1;
    TraceMode traces = TraceMode::None;
};

struct ExperimentResult {
    StatsReport report;
    std::vector<TrialSummary> trials;
    std::vector<std::pair<std::size_t, Trace>> traces;  // kept per RunOptions::traces
};

/// One trial with its own random streams derived from (master_seed, trial).
TrialSummary run_trial(const Scenario& scenario, std::size_t trial, Trace* trace_out = nullptr);

/// Runs all trials (in parallel when workers > 1). The result does not depend
/// on the worker count.
ExperimentResult run_experiment(const Scenario& scenario, const RunOptions& options = {});

nlohmann::json report_to_json(const StatsReport& report);
StatsReport report_from_json(const nlohmann::json& j);

/// Full JSON document: version, scenario echo, seed and statistics.
std::string emit_json(const Scenario& scenario, const StatsReport& report);
/// Header plus one row per trial.
std::string emit_csv(const std::vector<TrialSummary>& trials);
nlohmann::json trace_to_json(std::size_t trial, const Trace& trace);

enum class OutputFormat { Json, Csv, Both };

/// Writes report.json / trials.csv (and traces/trial_<i>.json) under dir.
void write_outputs(const std::filesystem::path& dir, const Scenario& scenario, const ExperimentResult& result,
                   OutputFormat format);

}  // namespace gathersim
