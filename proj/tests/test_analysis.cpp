#include "doctest.h"

#include <cmath>

#include "gathersim/analysis.hpp"

using namespace gathersim;

namespace {

CycleSegment moving(Rat origin, Rat dest, Rat start, Rat end, std::size_t cycle = 0) {
    CycleSegment s;
    s.cycle_index = cycle;
    s.cycle_start = 0;
    s.look_time = start;
    s.looked = true;
    s.move_start = start;
    s.move_end = end;
    s.origin = origin;
    s.destination = dest;
    return s;
}

Trace two_runs(std::vector<CycleSegment> a, std::vector<CycleSegment> b, Rat start_a, Rat start_b, Rat horizon) {
    Trace t;
    t.robots.resize(2);
    t.robots[0].spec.start = start_a;
    t.robots[1].spec.start = start_b;
    t.robots[0].segments = std::move(a);
    t.robots[1].segments = std::move(b);
    for (auto& r : t.robots) r.horizon = horizon;
    t.end_time = horizon;
    t.look_count = {0, 0};
    return t;
}

std::vector<RobotSpec> pair(LambdaPolicy p0, LambdaPolicy p1) {
    return {RobotSpec{0, Rat(0), Rat(1), "a", std::move(p0)}, RobotSpec{1, Rat(1), Rat(1), "b", std::move(p1)}};
}

// ---------------------------------------------------------------------------
// Reference segmenter working from the event log alone.

struct RefCycle {
    Rat look;
    Rat move_start;
    Rat move_end;
    bool has_move = false;
    bool decided = false;
};

struct RefAttempt {
    RobotId later;
    std::size_t later_cycle;
    std::size_t paired_cycle;
    std::size_t looks;
    Rat before;
    Rat after;
};

Rat ref_position(const Trace& tr, RobotId r, const Rat& t) {
    Rat pos = tr.robots[r].spec.start;
    // replay the events of robot r up to time t
    std::optional<Rat> start, from, to, end;
    for (const auto& e : tr.events) {
        if (e.robot != r || e.time > t) continue;
        if (e.kind == EventKind::Look && e.destination) {
            from = pos;
            to = *e.destination;
        }
        if (e.kind == EventKind::MoveStart) start = e.time;
        if (e.kind == EventKind::MoveEnd) {
            pos = *to;
            start.reset();
        }
    }
    if (start && *to != *from) {
        // mid-move: find the end time of this move
        for (const auto& e : tr.events) {
            if (e.robot == r && e.kind == EventKind::MoveEnd && e.time >= *start) {
                end = e.time;
                break;
            }
        }
        if (end && t > *start) return *from + (*to - *from) * (t - *start) / (*end - *start);
    }
    return pos;
}

Rat ref_max_distance(const Trace& tr, const Rat& t) {
    Rat best = abs(ref_position(tr, 0, t) - ref_position(tr, 1, t));
    for (const auto& e : tr.events) {
        if (e.time < t) continue;
        best = max(best, abs(ref_position(tr, 0, e.time) - ref_position(tr, 1, e.time)));
    }
    return best;
}

std::vector<RefAttempt> reference_attempts(const Trace& tr, MoveSwitch which) {
    std::vector<RefCycle> cyc[2];
    for (const auto& e : tr.events) {
        auto& c = cyc[e.robot];
        if (e.kind == EventKind::Look) c.push_back(RefCycle{e.time, {}, {}, false, false});
        if (e.kind == EventKind::DecideGathered) c.back().decided = true;
        if (e.kind == EventKind::MoveStart) c.back().move_start = e.time;
        if (e.kind == EventKind::MoveEnd) {
            c.back().move_end = e.time;
            c.back().has_move = true;
        }
    }
    const bool gathered = tr.status == RunStatus::Gathered;
    auto margin_ok = [&](const Rat& t) {
        for (auto& c : cyc) {
            int complete = 0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (c[k].decided) complete = 2;
                // a cycle starts where the previous one ended
                const Rat begin = k == 0 ? Rat(0) : c[k - 1].move_end;
                if (begin >= t && c[k].has_move) ++complete;
            }
            if (complete < 2) return false;
        }
        return true;
    };
    std::vector<RefAttempt> out;
    std::size_t cur[2] = {0, 0};
    for (;;) {
        // every ordering of the two candidate cycles is considered explicitly
        bool ok = true;
        for (RobotId r = 0; r < 2; ++r) {
            ok = ok && cur[r] < cyc[r].size() && !cyc[r][cur[r]].decided && cyc[r][cur[r]].has_move;
        }
        if (!ok) break;
        const auto key = [&](RobotId r) {
            const auto& c = cyc[r][cur[r]];
            return which == MoveSwitch::MoveStart ? c.move_start : c.move_end;
        };
        RobotId x = 0;
        if (key(1) > key(0)) x = 1;
        if (key(1) == key(0)) x = 1;
        const RobotId y = 1 - x;
        const Rat t = key(x);
        std::optional<std::size_t> best;
        for (std::size_t j = cur[y]; j < cyc[y].size(); ++j) {
            if (cyc[y][j].look <= t && (!best || cyc[y][j].look >= cyc[y][*best].look)) best = j;
        }
        if (!best || cyc[y][*best].decided || !cyc[y][*best].has_move) break;
        const Rat t_begin = min(cyc[x][cur[x]].look, cyc[y][cur[y]].look);
        const Rat t_end = max(cyc[x][cur[x]].move_end, cyc[y][*best].move_end);
        if (t_end > tr.end_time || (!gathered && !margin_ok(t_end))) break;
        out.push_back(RefAttempt{x, cur[x], *best, 1 + (*best - cur[y] + 1), ref_max_distance(tr, t_begin),
                                 ref_max_distance(tr, t_end)});
        cur[x] += 1;
        cur[y] = *best + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("maximum distance of idle robots") {
    CycleSegment idle_a, idle_b;
    idle_a.origin = idle_a.destination = 0;
    idle_b.origin = idle_b.destination = 1;
    const auto tr = two_runs({idle_a}, {idle_b}, 0, 1, 10);
    CHECK(max_distance_from(tr, 0) == 1);
    CHECK(max_distance_from(tr, 5) == 1);
}

TEST_CASE("a crossing does not count as the maximum distance") {
    const auto tr = two_runs({moving(0, Rat(3, 4), 0, Rat(3, 4))}, {moving(1, Rat(1, 4), 0, Rat(3, 4))}, 0, 1, 10);
    const DistanceProfile profile(tr);
    CHECK(profile.distance_at(Rat(1, 2)) == 0);
    CHECK(max_distance_from(tr, Rat(1, 2)) == Rat(1, 2));
    CHECK(max_distance_from(tr, 0) == 1);
}

TEST_CASE("monotone approach keeps the initial distance as maximum") {
    CycleSegment idle;
    idle.origin = idle.destination = 1;
    const auto tr = two_runs({moving(0, 1, 0, 1)}, {idle}, 0, 1, 5);
    CHECK(max_distance_from(tr, 0) == 1);
    CHECK(max_distance_from(tr, Rat(1, 2)) == Rat(1, 2));
    CHECK(max_distance_from(tr, 2) == 0);
}

TEST_CASE("maximum distance is nonincreasing and attained at breakpoints") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto tr = run(pair(LambdaPolicy::three_choice(), LambdaPolicy::three_choice()),
                            AdversaryPolicy{TauBounded{Rat(1, 5)}, std::nullopt}, seed, Budgets{30, Rat(100000)});
        const DistanceProfile p(tr);
        Rng rng(seed);
        std::vector<Rat> ts;
        for (int i = 0; i < 40; ++i) ts.push_back(tr.end_time * rng.open_unit());
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 1; i < ts.size(); ++i) CHECK(p.max_from(ts[i]) <= p.max_from(ts[i - 1]));
        for (const auto& t : ts) {
            const Rat m = p.max_from(t);
            CHECK(m >= p.distance_at(t));
            CHECK(m == ref_max_distance(tr, t));
        }
    }
}

TEST_CASE("simultaneous looks form one attempt of two looks") {
    const AdversaryPolicy sched{ObliviousGenerated{GeneratedSequence{{DelaySequence{{}, {{1, 0}}}, DelaySequence{{}, {{1, 0}}}}}},
                                std::nullopt};
    const auto tr = run(pair(LambdaPolicy::deterministic(Rat(1, 4)), LambdaPolicy::deterministic(Rat(1, 4))), sched, 1,
                        Budgets{20, Rat(1000)});
    const auto attempts = segment_attempts(tr);
    REQUIRE(!attempts.empty());
    CHECK(attempts[0].later_look == LookRef{1, 0, Rat(1)});
    CHECK(attempts[0].paired_look == LookRef{0, 0, Rat(1)});
    CHECK(attempts[0].all_looks_in_window == 2);
    CHECK(attempts[0].max_dist_before == 1);
    CHECK(attempts[0].max_dist_after == Rat(1, 2));
    CHECK(attempts[0].successful);
}

TEST_CASE("only the latest of several earlier looks is paired") {
    std::vector<Rat> script(3, Rat(0));
    script.resize(30, Rat(1, 2));
    const AdversaryPolicy sched{
        ObliviousGenerated{GeneratedSequence{{DelaySequence{{}, {{1, 0}}},
                                              DelaySequence{{{Rat(1, 10), 0}, {Rat(1, 10), 0}, {Rat(1, 10), 0}}, {{5, 0}}}}}},
        std::nullopt};
    const auto tr = run(pair(LambdaPolicy::deterministic(Rat(1, 2)), LambdaPolicy::oracle(script)), sched, 1,
                        Budgets{20, Rat(1000)});
    const auto attempts = segment_attempts(tr);
    REQUIRE(!attempts.empty());
    CHECK(attempts[0].later_look.robot == 0);
    CHECK(attempts[0].paired_look == LookRef{1, 2, Rat(3, 10)});
    CHECK(attempts[0].all_looks_in_window == 4);
}

TEST_CASE("segmentation matches the reference on short traces") {
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const AdversaryPolicy adv = seed % 2 ? AdversaryPolicy{TauBounded{Rat(1, 3)}, std::nullopt}
                                             : AdversaryPolicy{ObliviousGenerated{GeneratedUniform{{Rat(0), Rat(1)}, {Rat(0), Rat(1)}}},
                                                               std::nullopt};
        const auto policy = seed % 3 ? LambdaPolicy::tau_triple() : LambdaPolicy::three_choice();
        const auto tr = run(pair(policy, policy), adv, seed, Budgets{8, Rat(100000)});
        for (auto which : {MoveSwitch::MoveStart, MoveSwitch::MoveEnd}) {
            const auto got = segment_attempts(tr, which);
            const auto want = reference_attempts(tr, which);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].later_look.robot == want[i].later);
                CHECK(got[i].later_look.cycle == want[i].later_cycle);
                CHECK(got[i].paired_look.cycle == want[i].paired_cycle);
                CHECK(got[i].all_looks_in_window == want[i].looks);
                CHECK(got[i].max_dist_before == want[i].before);
                CHECK(got[i].max_dist_after == want[i].after);
                ++compared;
            }
        }
    }
    CHECK(compared > 100);
}

TEST_CASE("success means the maximum distance at least halves") {
    AttemptRecord a;
    a.max_dist_before = 1;
    a.max_dist_after = Rat(1, 2);
    CHECK(classify_success(a));
    a.max_dist_after = Rat(3, 5);
    CHECK_FALSE(classify_success(a));
    a.max_dist_after = 0;
    CHECK(classify_success(a));
}

TEST_CASE("phases split greedily after each success") {
    auto attempts_of = [](std::vector<bool> outcomes) {
        std::vector<AttemptRecord> out;
        std::size_t looks = 2;
        for (bool s : outcomes) {
            AttemptRecord a;
            a.successful = s;
            a.all_looks_in_window = looks++;
            out.push_back(a);
        }
        return out;
    };
    const auto phases = segment_phases(attempts_of({false, false, true, true, false}));
    REQUIRE(phases.size() == 3);
    CHECK(phases[0].attempts.size() == 3);
    CHECK(phases[0].terminal);
    CHECK(phases[0].total_looks == 2 + 3 + 4);
    CHECK(phases[1].attempts.size() == 1);
    CHECK(phases[1].terminal);
    CHECK(phases[2].attempts.size() == 1);
    CHECK_FALSE(phases[2].terminal);
    CHECK(segment_phases({}).empty());
    const auto single = segment_phases(attempts_of({true}));
    REQUIRE(single.size() == 1);
    CHECK(single[0].terminal);
}

TEST_CASE("phases partition attempts and halve the maximum distance") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto tr = run(pair(LambdaPolicy::tau_triple(), LambdaPolicy::tau_triple()),
                            AdversaryPolicy{TauBounded{Rat(1, 10)}, std::nullopt}, seed, Budgets{100000, Rat(1000000)});
        const auto attempts = segment_attempts(tr);
        const auto phases = segment_phases(attempts);
        std::size_t n = 0, looks = 0, attempt_looks = 0;
        for (const auto& a : attempts) attempt_looks += a.all_looks_in_window;
        for (const auto& p : phases) {
            REQUIRE(!p.attempts.empty());
            n += p.attempts.size();
            looks += p.total_looks;
            for (std::size_t i = 0; i + 1 < p.attempts.size(); ++i) CHECK_FALSE(p.attempts[i].successful);
            CHECK(p.terminal == p.attempts.back().successful);
            if (p.terminal) CHECK(p.attempts.back().max_dist_after * Rat(2) <= p.attempts.front().max_dist_before);
        }
        CHECK(n == attempts.size());
        CHECK(looks == attempt_looks);
    }
}

TEST_CASE("look bound for tau-bounded gathering") {
    CHECK(theorem5_bound(Rat(1024), Rat(1)) == doctest::Approx(198.0));
    CHECK(theorem5_bound(Rat(1), Rat(1)) == doctest::Approx(18.0));
    CHECK(theorem5_bound(Rat(1), Rat(1, 8)) == doctest::Approx(72.0));
    CHECK(theorem5_bound(Rat(1), Rat(2)) == doctest::Approx(18.0));
    CHECK(theorem5_bound(Rat(3), Rat(1)) == doctest::Approx(18.0 * (std::log2(3.0) + 1)));
}

TEST_CASE("geometric repeat count") {
    CHECK(geometric_repeat_count(Rat(2, 5), Rat(1)) == 1);
    CHECK(geometric_repeat_count(Rat(3, 5), Rat(1)) == 2);
    CHECK(geometric_repeat_count(Rat(99, 100), Rat(1)) == 7);
    CHECK(geometric_repeat_count(Rat(1, 2), Rat(1)) == 2);
    CHECK(geometric_repeat_count(Rat(6, 5), Rat(2)) == 2);
    CHECK(geometric_repeat_count(Rat(1, 2), Rat(1), Rat(2, 3)) == 2);
    CHECK_THROWS_AS(geometric_repeat_count(Rat(1), Rat(1)), Error);
    CHECK_THROWS_AS(geometric_repeat_count(Rat(3, 2), Rat(1)), Error);
}

TEST_CASE("aggregate statistics") {
    std::vector<TrialSummary> two(2);
    two[0].total_looks = 2;
    two[1].total_looks = 4;
    const auto r = aggregate(two);
    CHECK(r.total_looks.mean == doctest::Approx(3.0));
    CHECK(r.gathered_fraction == 0);
    CHECK((r.gathered_fraction * Rat(static_cast<std::int64_t>(r.trials))).is_integer());
    CHECK_THROWS_AS(aggregate({}), Error);

    Rng rng(29);
    TrialSummary bern;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) bern.successful_attempts += rng.below(9) < 2;
    bern.attempts = n;
    const auto rb = aggregate({bern});
    CHECK(std::abs(rb.attempt_success_rate.mean - 2.0 / 9.0) <= 0.0125);
    CHECK(rb.attempt_success_rate.halfwidth_3sigma == doctest::Approx(0.0125).epsilon(0.02));
}

TEST_CASE("reals are rounded to twelve significant digits") {
    CHECK(round12(1.0 / 3.0) == 0.333333333333);
    CHECK(round12(0) == 0);
    CHECK(round12(123456789.123456789) == 123456789.123);
}
