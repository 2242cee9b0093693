#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gathersim/rat.hpp"

namespace gathersim {

using RobotId = std::size_t;

/// Wait time W and computation delay C of one wait-look-compute-move cycle.
struct Delays {
    Rat wait;
    Rat compute;
    friend bool operator==(const Delays&, const Delays&) = default;
};

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

struct AdversaryPolicy;

/// Per-robot explicit (W, C) lists.
struct ObliviousExplicit {
    std::vector<std::vector<Delays>> per_robot;
    friend bool operator==(const ObliviousExplicit&, const ObliviousExplicit&) = default;
};

/// A finite prefix followed by an endlessly repeated cycle (empty cycle means
/// the schedule ends after the prefix).
struct DelaySequence {
    std::vector<Delays> prefix;
    std::vector<Delays> repeat;
    friend bool operator==(const DelaySequence&, const DelaySequence&) = default;
};

struct RatRange {
    Rat lo;
    Rat hi;
    friend bool operator==(const RatRange&, const RatRange&) = default;
};

/// Generated oblivious schedules.
///   sequence  : per-robot DelaySequence
///   uniform   : W and C drawn independently on 2^-53 grids of the ranges
///   per_robot : one single-robot oblivious policy per robot
struct GeneratedSequence {
    std::vector<DelaySequence> per_robot;
    friend bool operator==(const GeneratedSequence&, const GeneratedSequence&) = default;
};
struct GeneratedUniform {
    RatRange wait;
    RatRange compute;
    friend bool operator==(const GeneratedUniform&, const GeneratedUniform&) = default;
};
struct GeneratedPerRobot {
    std::vector<AdversaryPolicy> per_robot;
    friend bool operator==(const GeneratedPerRobot&, const GeneratedPerRobot&);
};

struct ObliviousGenerated {
    std::variant<GeneratedSequence, GeneratedUniform, GeneratedPerRobot> generator;
    friend bool operator==(const ObliviousGenerated&, const ObliviousGenerated&) = default;
};

/// W + C uniform on (tau, 2 tau], look offset W uniform on [0, W + C].
struct TauBounded {
    Rat tau;
    friend bool operator==(const TauBounded&, const TauBounded&) = default;
};

/// Wait generator for the zero-computation-delay model.
struct AsyncIc {
    std::variant<Rat, RatRange, std::vector<DelaySequence>> wait;  // constant | uniform | per-robot sequence
    friend bool operator==(const AsyncIc&, const AsyncIc&) = default;
};

/// Adaptive adversary that keeps every look after the first one inside the
/// other robot's move interval.
struct AdaptiveThm6 {
    std::vector<Rat> initial_waits;
    friend bool operator==(const AdaptiveThm6&, const AdaptiveThm6&) = default;
};

/// Semi-synchronous rounds simulated on the continuous clock: a robot active
/// in round j looks at time j * round_length with C = 0.
struct SsyncRounds {
    enum class Pattern { Alternate, All };
    Rat round_length;
    Pattern pattern = Pattern::Alternate;
    friend bool operator==(const SsyncRounds&, const SsyncRounds&) = default;
};

enum class AdversaryKind {
    ObliviousExplicit,
    ObliviousGenerated,
    TauBounded,
    AsyncIc,
    AdaptiveThm6,
    SsyncRounds,
};

std::string_view adversary_kind_name(AdversaryKind kind) noexcept;

struct AdversaryPolicy {
    using Variant =
        std::variant<ObliviousExplicit, ObliviousGenerated, TauBounded, AsyncIc, AdaptiveThm6, SsyncRounds>;

    Variant kind;
    /// Fixed adversary seed; when empty a seed is derived from the run seed.
    std::optional<std::uint64_t> seed;

    AdversaryKind tag() const noexcept { return static_cast<AdversaryKind>(kind.index()); }
    bool is_oblivious() const noexcept {
        const auto t = tag();
        return t != AdversaryKind::AdaptiveThm6 && t != AdversaryKind::SsyncRounds;
    }

    friend bool operator==(const AdversaryPolicy&, const AdversaryPolicy&) = default;
};

inline bool operator==(const GeneratedPerRobot& a, const GeneratedPerRobot& b) { return a.per_robot == b.per_robot; }

/// Validates the descriptor (positive tau, non-negative delays, ...).
void validate(const AdversaryPolicy& policy);

/// The (W, C) pair of an oblivious policy. Pure in (policy, robot, cycle,
/// seed); throws SCHEDULE_UNDERRUN past the end of a finite schedule.
Delays next_delays_oblivious(const AdversaryPolicy& policy, RobotId robot, std::size_t cycle,
                             std::uint64_t adversary_seed);

// ---------------------------------------------------------------------------
// Runtime interface used by the engine
// ---------------------------------------------------------------------------

/// Timing of a robot's current cycle as seen by a scheduler.
struct RobotTiming {
    std::size_t cycle = 0;
    Rat cycle_start;
    Rat look_time;
    bool looked = false;   // the current cycle's look has happened
    bool decided = false;  // the robot decided it has gathered
    Rat move_start;        // valid once the compute delay is fixed
    Rat move_end;
};

/// Read access to the running execution.
class ScheduleView {
public:
    virtual ~ScheduleView() = default;
    virtual std::size_t robot_count() const = 0;
    virtual RobotTiming timing(RobotId robot) const = 0;
    /// Offset after move start at which `mover`'s current (planned) move passes
    /// through the point where `resting` will be at rest once its own current
    /// move is over; empty unless strictly inside the move.
    virtual std::optional<Rat> pass_offset(RobotId mover, RobotId resting) const = 0;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    /// W for `cycle`, asked when the cycle starts.
    virtual Rat wait(const ScheduleView& view, RobotId robot, std::size_t cycle, const Rat& cycle_start) = 0;
    /// C for `cycle`, asked right after the look, once lambda is known.
    virtual Rat compute_delay(const ScheduleView& view, RobotId robot, std::size_t cycle, const Rat& lambda,
                              const Rat& move_duration) = 0;
};

std::unique_ptr<Adversary> make_adversary(const AdversaryPolicy& policy, std::uint64_t run_seed);

/// The adaptive rule in closed form. Given the look instant, the move the
/// robot just committed to, and the other robot's already committed next
/// look time, returns (C_current, W_next).
struct AdaptiveInputs {
    Rat look_time;
    Rat lambda;
    Rat move_duration;
    Rat other_next_look;
    /// If set, the move passes the other robot's rest point this long after
    /// it starts; that C would make the other robot see a zero distance.
    std::optional<Rat> pass_offset;
};

std::pair<Rat, Rat> adaptive_decide(const AdaptiveInputs& in);

/// Adaptive scheduler state (exposed for tests).
class AdaptiveAdversary final : public Adversary {
public:
    explicit AdaptiveAdversary(AdaptiveThm6 params);
    Rat wait(const ScheduleView& view, RobotId robot, std::size_t cycle, const Rat& cycle_start) override;
    Rat compute_delay(const ScheduleView& view, RobotId robot, std::size_t cycle, const Rat& lambda,
                      const Rat& move_duration) override;

private:
    AdaptiveThm6 params_;
    std::vector<std::optional<Rat>> next_wait_;
};

}  // namespace gathersim
