#include "gathersim/engine.hpp"

namespace gathersim {

template class detail::EngineRun<Rat>;
template class detail::EngineRun<Vec2>;

std::string_view event_kind_name(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::Look: return "LOOK";
        case EventKind::MoveStart: return "MOVE_START";
        case EventKind::MoveEnd: return "MOVE_END";
        case EventKind::DecideGathered: return "DECIDE_GATHERED";
    }
    return "UNKNOWN";
}

std::string_view run_status_name(RunStatus status) noexcept {
    switch (status) {
        case RunStatus::Gathered: return "GATHERED";
        case RunStatus::LookBudgetExhausted: return "LOOK_BUDGET_EXHAUSTED";
        case RunStatus::TimeBudgetExhausted: return "TIME_BUDGET_EXHAUSTED";
    }
    return "UNKNOWN";
}

Trace run(const std::vector<RobotSpec>& robots, const AdversaryPolicy& adversary, std::uint64_t seed,
          const Budgets& budgets) {
    return run_engine<Rat>(robots, adversary, seed, budgets);
}

Rat gap(const Trace& trace, std::size_t cycle_index) {
    if (trace.robots.size() < 2) throw Error(ErrorCode::InvalidArgument, "gap needs two robots");
    const auto look_of = [&](RobotId r) -> const Rat& {
        const auto& segs = trace.robots[r].segments;
        if (cycle_index >= segs.size() || !segs[cycle_index].looked) {
            throw Error(ErrorCode::InvalidArgument,
                        "robot " + std::to_string(r) + " has no look in cycle " + std::to_string(cycle_index));
        }
        return segs[cycle_index].look_time;
    };
    return look_of(0) - look_of(1);
}

LineFrame::LineFrame(const Vec2& p1, const Vec2& p2) {
    if (p1 == p2) throw Error(ErrorCode::DegenerateLine, "the two initial positions coincide");
    origin_ = Rat(1, 2) * (p1 + p2);
    axis_ = p1 - origin_;
    unit2_ = norm2(axis_);
}

Rat LineFrame::coordinate(const Vec2& p) const { return dot(p - origin_, axis_) / unit2_; }

Vec2 LineFrame::point(const Rat& coordinate) const { return origin_ + coordinate * axis_; }

std::vector<Rat> project_scenario_to_line(const std::vector<Vec2>& positions_2d,
                                          const std::vector<Vec2>& destinations_2d) {
    if (positions_2d.size() < 2) throw Error(ErrorCode::InvalidArgument, "need the two initial positions");
    const LineFrame frame(positions_2d[0], positions_2d[1]);
    std::vector<Rat> out;
    out.reserve(destinations_2d.size());
    for (const auto& d : destinations_2d) out.push_back(frame.coordinate(d));
    return out;
}

}  // namespace gathersim
