#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gathersim/engine.hpp"
#include "gathersim/rat.hpp"

namespace gathersim {

/// Which instant of a cycle decides the "robot that moved later".
enum class MoveSwitch { MoveStart, MoveEnd };

struct LookRef {
    RobotId robot = 0;
    std::size_t cycle = 0;
    Rat time;
    friend bool operator==(const LookRef&, const LookRef&) = default;
};

struct AttemptRecord {
    LookRef later_look;   // look of the robot whose move comes later
    LookRef paired_look;  // the other robot's latest look up to that move
    std::size_t all_looks_in_window = 0;
    Rat t_begin;
    Rat t_end;
    Rat max_dist_before;
    Rat max_dist_after;
    bool successful = false;
    friend bool operator==(const AttemptRecord&, const AttemptRecord&) = default;
};

struct PhaseRecord {
    std::vector<AttemptRecord> attempts;
    std::size_t total_looks = 0;
    bool terminal = false;
};

/// Distance between robots 0 and 1 as a function of time, with suffix maxima
/// over the breakpoints of the piecewise-linear motion.
class DistanceProfile {
public:
    explicit DistanceProfile(const Trace& trace);
    Rat distance_at(const Rat& t) const;
    /// Supremum of the distance over [t, horizon].
    Rat max_from(const Rat& t) const;
    const Rat& horizon() const noexcept { return horizon_; }

private:
    const Trace* trace_;
    Rat horizon_;
    std::vector<Rat> times_;
    std::vector<Rat> suffix_max_;
};

Rat max_distance_from(const Trace& trace, const Rat& t);

/// Splits a two-robot trace into consecutive attempts. Only attempts whose
/// window closes inside the run are returned; for runs that did not gather
/// both robots must also complete two more cycles after the window.
std::vector<AttemptRecord> segment_attempts(const Trace& trace, MoveSwitch which = MoveSwitch::MoveStart);

bool classify_success(const AttemptRecord& attempt);

std::vector<PhaseRecord> segment_phases(const std::vector<AttemptRecord>& attempts);

/// 18 (log2(delta / tau) + 1); the log term is clamped at 0.
double theorem5_bound(const Rat& delta, const Rat& tau);

/// Smallest k >= 1 with delta (1 - shrink^k) > gamma0. shrink = 1/2 gives the
/// halving series delta/2 + delta/4 + ...; speed ratio alpha uses
/// alpha / (alpha + 1).
std::size_t geometric_repeat_count(const Rat& gamma0, const Rat& delta, const Rat& shrink = Rat(1, 2));

/// Looks (after the chronologically first look instant) at which the other
/// robot is not strictly inside a move.
std::size_t straddle_violations(const Trace& trace);

/// Number of looks of `robot` at or before the first move start of `other`.
std::size_t looks_before_first_move(const Trace& trace, RobotId robot, RobotId other);

// ---------------------------------------------------------------------------
// Monte Carlo aggregation
// ---------------------------------------------------------------------------

struct TrialSummary {
    std::size_t trial = 0;
    bool gathered = false;
    std::size_t total_looks = 0;
    std::optional<Rat> gather_time;
    std::size_t attempts = 0;            // completed attempts
    std::size_t successful_attempts = 0;
    std::size_t phases = 0;              // completed (terminal) phases
    std::vector<std::size_t> phase_looks;
    std::optional<std::size_t> observed_k;
    std::optional<std::size_t> predicted_k;
    std::map<std::string, std::int64_t> counters;
};

struct Estimate {
    double mean = 0;
    double halfwidth_3sigma = 0;
    friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct StatsReport {
    std::size_t trials = 0;
    std::size_t gathered = 0;
    Rat gathered_fraction;
    double gathered_halfwidth_3sigma = 0;
    Estimate total_looks;
    std::size_t attempts = 0;
    std::size_t successful_attempts = 0;
    Estimate attempt_success_rate;
    std::size_t phases = 0;
    Estimate looks_per_phase;
    std::optional<double> theorem5_bound;
    std::map<std::size_t, std::size_t> k_histogram;
    std::optional<std::size_t> predicted_k;
    std::map<std::string, std::int64_t> counters;
    friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

struct AnalysisOptions {
    bool attempts = false;
    MoveSwitch move_switch = MoveSwitch::MoveStart;
};

TrialSummary summarize_trial(std::size_t trial, const Trace& trace, const AnalysisOptions& options);

/// Throws INVALID_ARGUMENT for zero trials. Reals are rounded to 12
/// significant digits.
StatsReport aggregate(const std::vector<TrialSummary>& trials);

/// Rounds to 12 significant digits.
double round12(double x);

}  // namespace gathersim
