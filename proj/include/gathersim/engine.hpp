#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gathersim/adversary.hpp"
#include "gathersim/errors.hpp"
#include "gathersim/geometry.hpp"
#include "gathersim/policies.hpp"
#include "gathersim/rat.hpp"
#include "gathersim/rng.hpp"

namespace gathersim {

/// Declaration order doubles as the processing order of simultaneous events:
/// looks first, then move completions, then move starts.
enum class EventKind { Look, MoveEnd, MoveStart, DecideGathered };

enum class RunStatus { Gathered, LookBudgetExhausted, TimeBudgetExhausted };

std::string_view event_kind_name(EventKind kind) noexcept;
std::string_view run_status_name(RunStatus status) noexcept;

template <class Point>
struct BasicRobotSpec {
    RobotId id = 0;
    Point start{};
    Rat speed = 1;
    std::string policy_ref;
    LambdaPolicy policy;
};

/// One wait-look-compute-move cycle.
///
/// The robot rests at `origin` on [cycle_start, move_start], moves linearly to
/// `destination` on [move_start, move_end] and rests there until the next
/// cycle begins at move_end. Before the look has happened only cycle_start,
/// wait and look_time are meaningful.
template <class Point>
struct BasicCycleSegment {
    std::size_t cycle_index = 0;
    Rat cycle_start;
    Rat wait;
    Rat look_time;
    bool looked = false;
    bool decided = false;  // the look found another robot on the same spot
    Rat compute;
    std::optional<Rat> lambda;
    Rat move_start;
    Rat move_end;
    Point origin{};
    Point destination{};

    bool moving_at(const Rat& t) const { return looked && !decided && move_start < t && t < move_end; }
};

template <class Point>
struct BasicRobotRun {
    BasicRobotSpec<Point> spec;
    std::vector<BasicCycleSegment<Point>> segments;
    Rat horizon;  // positions are defined on [0, horizon]
};

template <class Point>
struct BasicSnapshot {
    Rat time;
    RobotId observer = 0;
    Point own{};
    std::vector<Point> observed;  // anonymous: sorted positions of the others
};

template <class Point>
struct BasicEvent {
    Rat time;
    RobotId robot = 0;
    EventKind kind = EventKind::Look;
    std::size_t cycle = 0;
    std::vector<Point> observed;       // Look only
    std::optional<Rat> lambda;         // Look with a move
    std::optional<Point> destination;  // Look with a move
};

template <class Point>
struct BasicTrace {
    std::vector<BasicEvent<Point>> events;
    std::vector<BasicRobotRun<Point>> robots;
    RunStatus status = RunStatus::LookBudgetExhausted;
    std::vector<std::size_t> look_count;
    Rat end_time;
    std::optional<Rat> gather_time;

    std::size_t total_looks() const {
        std::size_t n = 0;
        for (auto c : look_count) n += c;
        return n;
    }
};

struct Budgets {
    std::size_t max_total_looks = 10000;
    Rat max_time = Rat(1000000000);
    friend bool operator==(const Budgets&, const Budgets&) = default;
};

/// Maps (robot, own position, snapshot, lambda) to a destination.
template <class Point>
using BasicDestinationRule =
    std::function<Point(RobotId robot, const Point& own, const std::vector<Point>& observed, const Rat& lambda)>;

/// The closest observed robot; ties go to the smallest position.
template <class Point>
const Point& nearest_observed(const Point& own, const std::vector<Point>& observed) {
    const Point* best = &observed.front();
    Rat best_d2 = PointOps<Point>::distance2(own, *best);
    for (const auto& p : observed) {
        Rat d2 = PointOps<Point>::distance2(own, p);
        if (d2 < best_d2 || (d2 == best_d2 && p < *best)) {
            best = &p;
            best_d2 = std::move(d2);
        }
    }
    return *best;
}

/// Exact position of a robot at time t. Throws SCHEDULE_UNDERRUN beyond the
/// run horizon.
template <class Point>
Point position_at(const BasicRobotRun<Point>& run, const Rat& t) {
    if (t > run.horizon) {
        throw Error(ErrorCode::ScheduleUnderrun,
                    "t = " + t.str() + " is beyond the simulated horizon " + run.horizon.str());
    }
    if (run.segments.empty()) return run.spec.start;
    auto it = std::upper_bound(run.segments.begin(), run.segments.end(), t,
                               [](const Rat& time, const auto& seg) { return time < seg.cycle_start; });
    if (it == run.segments.begin()) return run.spec.start;
    const auto& seg = *std::prev(it);
    if (!seg.looked || seg.decided || t <= seg.move_start) return seg.origin;
    if (t >= seg.move_end) return seg.destination;
    const Rat fraction = (t - seg.move_start) / (seg.move_end - seg.move_start);
    return seg.origin + fraction * (seg.destination - seg.origin);
}

template <class Point>
BasicSnapshot<Point> observe(const std::vector<BasicRobotRun<Point>>& world, RobotId observer, const Rat& t) {
    BasicSnapshot<Point> snap;
    snap.time = t;
    snap.observer = observer;
    for (RobotId r = 0; r < world.size(); ++r) {
        if (r == observer) {
            snap.own = position_at(world[r], t);
        } else {
            snap.observed.push_back(position_at(world[r], t));
        }
    }
    std::sort(snap.observed.begin(), snap.observed.end());
    return snap;
}

namespace detail {

template <class Point>
class EngineRun final : public ScheduleView {
public:
    EngineRun(const std::vector<BasicRobotSpec<Point>>& robots, Adversary& adversary, std::uint64_t seed,
              const Budgets& budgets, const BasicDestinationRule<Point>& rule)
        : adversary_(adversary), budgets_(budgets), rule_(rule) {
        if (robots.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two robots");
        if (budgets.max_total_looks == 0 || budgets.max_time.sign() <= 0) {
            throw Error(ErrorCode::InvalidArgument, "budgets must be positive");
        }
        trace_.robots.reserve(robots.size());
        for (RobotId r = 0; r < robots.size(); ++r) {
            if (robots[r].speed.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "robot speed must be > 0");
            BasicRobotRun<Point> run;
            run.spec = robots[r];
            trace_.robots.push_back(std::move(run));
            streams_.emplace_back(robots[r].policy);
            rngs_.emplace_back(derive_seed(seed, 0x10000 + robots[r].id));
        }
        trace_.look_count.assign(robots.size(), 0);
        pending_.resize(robots.size());
    }

    std::size_t robot_count() const override { return trace_.robots.size(); }

    RobotTiming timing(RobotId robot) const override {
        const auto& seg = trace_.robots.at(robot).segments.back();
        RobotTiming t;
        t.cycle = seg.cycle_index;
        t.cycle_start = seg.cycle_start;
        t.look_time = seg.look_time;
        t.looked = seg.looked;
        t.decided = seg.decided;
        t.move_start = seg.move_start;
        t.move_end = seg.move_end;
        return t;
    }

    std::optional<Rat> pass_offset(RobotId mover, RobotId resting) const override {
        const auto& m = trace_.robots.at(mover).segments.back();
        const auto& s = trace_.robots.at(resting).segments.back();
        if (!m.looked || m.decided) return std::nullopt;
        const Point& rest = (s.looked && !s.decided) ? s.destination : s.origin;
        const Point path = m.destination - m.origin;
        const Rat len2 = PointOps<Point>::dot(path, path);
        if (len2.is_zero()) return std::nullopt;
        const Point rel = rest - m.origin;
        if (!PointOps<Point>::collinear(rel, path)) return std::nullopt;
        const Rat f = PointOps<Point>::dot(rel, path) / len2;
        if (f.sign() <= 0 || f >= Rat(1)) return std::nullopt;
        return f * planned_duration_.at(mover);
    }

    BasicTrace<Point> execute() {
        for (RobotId r = 0; r < trace_.robots.size(); ++r) start_cycle(r, 0, Rat(0));
        std::size_t total_looks = 0;
        std::size_t decided = 0;
        Rat now = 0;
        for (;;) {
            const auto next = earliest();
            if (!next) break;
            const RobotId r = *next;
            const Pending ev = *pending_[r];
            if (ev.time > budgets_.max_time) {
                trace_.status = RunStatus::TimeBudgetExhausted;
                break;
            }
            if (ev.kind == EventKind::Look && total_looks >= budgets_.max_total_looks) {
                trace_.status = RunStatus::LookBudgetExhausted;
                break;
            }
            now = ev.time;
            auto& run = trace_.robots[r];
            auto& seg = run.segments.back();
            switch (ev.kind) {
                case EventKind::Look: {
                    ++total_looks;
                    ++trace_.look_count[r];
                    if (look(r, now)) {
                        pending_[r].reset();
                        if (++decided == trace_.robots.size()) {
                            trace_.status = RunStatus::Gathered;
                            trace_.gather_time = now;
                        }
                    }
                    break;
                }
                case EventKind::MoveStart:
                    push_event(now, r, EventKind::MoveStart, seg.cycle_index);
                    pending_[r] = Pending{seg.move_end, EventKind::MoveEnd};
                    break;
                case EventKind::MoveEnd:
                    push_event(now, r, EventKind::MoveEnd, seg.cycle_index);
                    start_cycle(r, seg.cycle_index + 1, now);
                    break;
                case EventKind::DecideGathered:
                    break;
            }
            if (trace_.status == RunStatus::Gathered) break;
        }
        trace_.end_time = now;
        for (auto& run : trace_.robots) run.horizon = now;
        return std::move(trace_);
    }

private:
    struct Pending {
        Rat time;
        EventKind kind;
    };

    std::optional<RobotId> earliest() const {
        std::optional<RobotId> best;
        for (RobotId r = 0; r < pending_.size(); ++r) {
            if (!pending_[r]) continue;
            if (!best) {
                best = r;
                continue;
            }
            const auto& a = *pending_[r];
            const auto& b = *pending_[*best];
            if (a.time < b.time || (a.time == b.time && a.kind < b.kind)) best = r;
        }
        return best;
    }

    Point current_position(RobotId robot, const Rat& t) const {
        const auto& seg = trace_.robots[robot].segments.back();
        if (!seg.looked || seg.decided || t <= seg.move_start) return seg.origin;
        if (t >= seg.move_end) return seg.destination;
        const Rat fraction = (t - seg.move_start) / (seg.move_end - seg.move_start);
        return seg.origin + fraction * (seg.destination - seg.origin);
    }

    void start_cycle(RobotId r, std::size_t cycle, const Rat& now) {
        auto& run = trace_.robots[r];
        BasicCycleSegment<Point> seg;
        seg.cycle_index = cycle;
        seg.cycle_start = now;
        seg.origin = run.segments.empty() ? run.spec.start : run.segments.back().destination;
        seg.destination = seg.origin;
        run.segments.push_back(std::move(seg));
        Rat w = adversary_.wait(*this, r, cycle, now);
        if (w.sign() < 0) throw Error(ErrorCode::InvalidArgument, "adversary produced a negative wait " + w.str());
        auto& cur = run.segments.back();
        cur.look_time = now + w;
        cur.wait = std::move(w);
        pending_[r] = Pending{cur.look_time, EventKind::Look};
    }

    /// Returns true when the robot decided it has gathered.
    bool look(RobotId r, const Rat& now) {
        auto& run = trace_.robots[r];
        std::vector<Point> observed;
        observed.reserve(trace_.robots.size() - 1);
        for (RobotId o = 0; o < trace_.robots.size(); ++o) {
            if (o != r) observed.push_back(current_position(o, now));
        }
        std::sort(observed.begin(), observed.end());
        auto& seg = run.segments.back();
        const Point own = seg.origin;
        const bool collocated = std::find(observed.begin(), observed.end(), own) != observed.end();
        if (collocated) {
            seg.looked = true;
            seg.decided = true;
            seg.compute = 0;
            seg.move_start = now;
            seg.move_end = now;
            push_event(now, r, EventKind::Look, seg.cycle_index, std::move(observed));
            push_event(now, r, EventKind::DecideGathered, seg.cycle_index);
            return true;
        }
        Rat lambda = streams_[r].next(rngs_[r]);
        Point target = rule_ ? rule_(run.spec.id, own, observed, lambda)
                             : destination(own, nearest_observed(own, observed), lambda);
        const Rat duration = PointOps<Point>::distance(own, target) / run.spec.speed;
        seg.looked = true;
        seg.lambda = lambda;
        seg.destination = target;
        planned_duration_.resize(trace_.robots.size());
        planned_duration_[r] = duration;
        Rat c = adversary_.compute_delay(*this, r, seg.cycle_index, lambda, duration);
        if (c.sign() < 0) {
            throw Error(ErrorCode::InvalidArgument, "adversary produced a negative computation delay " + c.str());
        }
        seg.move_start = now + c;
        seg.move_end = seg.move_start + duration;
        seg.compute = std::move(c);
        push_event(now, r, EventKind::Look, seg.cycle_index, std::move(observed), std::move(lambda),
                   std::move(target));
        pending_[r] = Pending{seg.move_start, EventKind::MoveStart};
        return false;
    }

    void push_event(const Rat& now, RobotId r, EventKind kind, std::size_t cycle, std::vector<Point> observed = {},
                    std::optional<Rat> lambda = std::nullopt, std::optional<Point> dest = std::nullopt) {
        BasicEvent<Point> ev;
        ev.time = now;
        ev.robot = r;
        ev.kind = kind;
        ev.cycle = cycle;
        ev.observed = std::move(observed);
        ev.lambda = std::move(lambda);
        ev.destination = std::move(dest);
        trace_.events.push_back(std::move(ev));
    }

    Adversary& adversary_;
    Budgets budgets_;
    const BasicDestinationRule<Point>& rule_;
    BasicTrace<Point> trace_;
    std::vector<LambdaStream> streams_;
    std::vector<Rng> rngs_;
    std::vector<std::optional<Pending>> pending_;
    std::vector<Rat> planned_duration_;
};

}  // namespace detail

/// Event-driven execution of wait-look-compute-move cycles. Deterministic in
/// (robots, adversary, seed, budgets).
template <class Point>
BasicTrace<Point> run_engine(const std::vector<BasicRobotSpec<Point>>& robots, Adversary& adversary,
                             std::uint64_t seed, const Budgets& budgets,
                             const BasicDestinationRule<Point>& rule = {}) {
    detail::EngineRun<Point> engine(robots, adversary, seed, budgets, rule);
    return engine.execute();
}

template <class Point>
BasicTrace<Point> run_engine(const std::vector<BasicRobotSpec<Point>>& robots, const AdversaryPolicy& policy,
                             std::uint64_t seed, const Budgets& budgets,
                             const BasicDestinationRule<Point>& rule = {}) {
    auto adversary = make_adversary(policy, seed);
    return run_engine(robots, *adversary, seed, budgets, rule);
}

// Robots on a line.
using RobotSpec = BasicRobotSpec<Rat>;
using CycleSegment = BasicCycleSegment<Rat>;
using RobotRun = BasicRobotRun<Rat>;
using Snapshot = BasicSnapshot<Rat>;
using Event = BasicEvent<Rat>;
using Trace = BasicTrace<Rat>;

// Robots in the plane.
using PlaneRobotSpec = BasicRobotSpec<Vec2>;
using PlaneTrace = BasicTrace<Vec2>;

extern template class detail::EngineRun<Rat>;
extern template class detail::EngineRun<Vec2>;

Trace run(const std::vector<RobotSpec>& robots, const AdversaryPolicy& adversary, std::uint64_t seed,
          const Budgets& budgets);

/// Signed look gap L_0(k) - L_1(k) between robots 0 and 1.
Rat gap(const Trace& trace, std::size_t cycle_index);

/// Frame on the line through p1 and p2: the midpoint is the origin, p1 sits at
/// +1 and p2 at -1 (coordinates are in units of half the separation, which
/// keeps them rational for any rational input).
class LineFrame {
public:
    LineFrame(const Vec2& p1, const Vec2& p2);
    Rat coordinate(const Vec2& p) const;  // coordinate of the orthogonal projection
    Vec2 point(const Rat& coordinate) const;
    /// Squared length of one coordinate unit.
    const Rat& unit2() const noexcept { return unit2_; }

private:
    Vec2 origin_;
    Vec2 axis_;
    Rat unit2_;
};

/// 1D coordinates (in the frame above) of the projections of each destination
/// onto the line through the first two positions.
std::vector<Rat> project_scenario_to_line(const std::vector<Vec2>& positions_2d,
                                          const std::vector<Vec2>& destinations_2d);

}  // namespace gathersim
