#include "doctest.h"

#include "gathersim/adversary.hpp"
#include "gathersim/analysis.hpp"
#include "gathersim/engine.hpp"

using namespace gathersim;

namespace {

AdversaryPolicy tau_bounded(Rat tau, std::optional<std::uint64_t> seed = std::nullopt) {
    return AdversaryPolicy{TauBounded{std::move(tau)}, seed};
}

std::vector<RobotSpec> pair(LambdaPolicy p0, LambdaPolicy p1) {
    return {RobotSpec{0, Rat(0), Rat(1), "a", std::move(p0)}, RobotSpec{1, Rat(1), Rat(1), "b", std::move(p1)}};
}

}  // namespace

TEST_CASE("explicit schedules return their entries and then underrun") {
    const AdversaryPolicy p{ObliviousExplicit{{{{1, 0}, {0, 0}}, {{Rat(1, 2), Rat(1, 3)}}}}, std::nullopt};
    CHECK(next_delays_oblivious(p, 0, 0, 0) == Delays{1, 0});
    CHECK(next_delays_oblivious(p, 0, 1, 0) == Delays{0, 0});
    CHECK(next_delays_oblivious(p, 1, 0, 0) == Delays{Rat(1, 2), Rat(1, 3)});
    try {
        next_delays_oblivious(p, 1, 1, 0);
        FAIL("expected an underrun");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ScheduleUnderrun);
    }
}

TEST_CASE("tau-bounded pairs always exceed tau and stay within 2 tau") {
    const Rat tau(1);
    const auto p = tau_bounded(tau);
    for (std::size_t i = 0; i < 10000; ++i) {
        const auto d = next_delays_oblivious(p, i % 2, i / 2, 12345);
        REQUIRE(d.wait.sign() >= 0);
        REQUIRE(d.compute.sign() >= 0);
        REQUIRE(d.wait + d.compute > tau);
        REQUIRE(d.wait + d.compute <= Rat(2) * tau);
    }
}

TEST_CASE("tau-bounded look offsets spread over the whole cycle") {
    const auto p = tau_bounded(Rat(1, 10));
    std::size_t early = 0;
    const std::size_t n = 4000;
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = next_delays_oblivious(p, 0, i, 9);
        early += d.wait * Rat(2) < d.wait + d.compute;
    }
    CHECK(early > n * 45 / 100);
    CHECK(early < n * 55 / 100);
}

TEST_CASE("zero computation delay model") {
    for (const AsyncIc& a : {AsyncIc{Rat(3, 4)}, AsyncIc{RatRange{Rat(0), Rat(2)}},
                             AsyncIc{std::vector<DelaySequence>{{{{Rat(1), Rat(0)}}, {{Rat(0), Rat(0)}}},
                                                                 {{}, {{Rat(1, 3), Rat(0)}}}}}}) {
        const AdversaryPolicy p{a, std::nullopt};
        for (std::size_t c = 0; c < 50; ++c) {
            for (RobotId r = 0; r < 2; ++r) CHECK(next_delays_oblivious(p, r, c, 7).compute == 0);
        }
    }
}

TEST_CASE("generated schedules") {
    const AdversaryPolicy seq{ObliviousGenerated{GeneratedSequence{{DelaySequence{{{5, 0}}, {{1, 2}, {3, 4}}}}}},
                              std::nullopt};
    CHECK(next_delays_oblivious(seq, 0, 0, 0) == Delays{5, 0});
    CHECK(next_delays_oblivious(seq, 0, 1, 0) == Delays{1, 2});
    CHECK(next_delays_oblivious(seq, 0, 2, 0) == Delays{3, 4});
    CHECK(next_delays_oblivious(seq, 0, 3, 0) == Delays{1, 2});
    CHECK_THROWS_AS(next_delays_oblivious(seq, 1, 0, 0), Error);

    const AdversaryPolicy uni{ObliviousGenerated{GeneratedUniform{{Rat(1), Rat(2)}, {Rat(0), Rat(1, 2)}}}, std::nullopt};
    for (std::size_t c = 0; c < 200; ++c) {
        const auto d = next_delays_oblivious(uni, 1, c, 3);
        CHECK(d.wait >= 1);
        CHECK(d.wait <= 2);
        CHECK(d.compute >= 0);
        CHECK(d.compute <= Rat(1, 2));
    }

    const AdversaryPolicy mixed{
        ObliviousGenerated{GeneratedPerRobot{{AdversaryPolicy{AsyncIc{Rat(0)}, std::nullopt}, tau_bounded(Rat(1, 5))}}},
        std::nullopt};
    for (std::size_t c = 0; c < 100; ++c) {
        CHECK(next_delays_oblivious(mixed, 0, c, 1) == Delays{0, 0});
        const auto d = next_delays_oblivious(mixed, 1, c, 1);
        CHECK(d.wait + d.compute > Rat(1, 5));
    }
}

TEST_CASE("oblivious schedules ignore the robots' random bits") {
    for (const auto& adv : {tau_bounded(Rat(1, 3), 77),
                            AdversaryPolicy{ObliviousGenerated{GeneratedUniform{{Rat(0), Rat(1)}, {Rat(0), Rat(1)}}}, 5}}) {
        const auto a = run(pair(LambdaPolicy::three_choice(), LambdaPolicy::three_choice()), adv, 1, Budgets{200, Rat(100000)});
        const auto b = run(pair(LambdaPolicy::tau_triple(), LambdaPolicy::three_choice()), adv, 2, Budgets{200, Rat(100000)});
        for (RobotId r = 0; r < 2; ++r) {
            const auto& sa = a.robots[r].segments;
            const auto& sb = b.robots[r].segments;
            const std::size_t n = std::min(sa.size(), sb.size());
            REQUIRE(n > 3);
            for (std::size_t k = 0; k + 1 < n; ++k) {
                CHECK(sa[k].wait == sb[k].wait);
                CHECK(sa[k].compute == sb[k].compute);
            }
        }
    }
}

TEST_CASE("descriptor validation") {
    CHECK_THROWS_AS(validate(tau_bounded(Rat(0))), Error);
    CHECK_THROWS_AS(validate(AdversaryPolicy{AsyncIc{Rat(-1)}, std::nullopt}), Error);
    CHECK_THROWS_AS(validate(AdversaryPolicy{AdaptiveThm6{{Rat(1), Rat(1)}}, std::nullopt}), Error);
    CHECK_THROWS_AS(validate(AdversaryPolicy{ObliviousExplicit{{{{Rat(-1), Rat(0)}}}}, std::nullopt}), Error);
    CHECK_THROWS_AS(validate(AdversaryPolicy{SsyncRounds{Rat(0)}, std::nullopt}), Error);
    CHECK_NOTHROW(validate(AdversaryPolicy{AdaptiveThm6{{Rat(2), Rat(1)}}, std::nullopt}));
}

TEST_CASE("adaptive rule places the other look inside the move") {
    // R2 looks at 1 and moves 1/2; R1 looks at 2.
    const auto [c2, w2] = adaptive_decide(AdaptiveInputs{Rat(1), Rat(1, 2), Rat(1, 2), Rat(2), std::nullopt});
    CHECK(c2 == Rat(3, 4));
    CHECK(w2 == Rat(1, 4));
    // R1 looks at 2, moves 3/4; R2 finishes at 9/4 and looks again 1/4 later.
    const auto [c1, w1] = adaptive_decide(AdaptiveInputs{Rat(2), Rat(1), Rat(3, 4), Rat(5, 2), std::nullopt});
    CHECK(c1 == Rat(1, 4));
    CHECK(Rat(2) + c1 < Rat(5, 2));
    CHECK(Rat(5, 2) < Rat(2) + c1 + Rat(3, 4));
    (void)w1;
    // Staying put means an immediate new look.
    const auto [c0, w0] = adaptive_decide(AdaptiveInputs{Rat(1), Rat(0), Rat(0), Rat(2), std::nullopt});
    CHECK(c0 == 0);
    CHECK(w0 == 0);
    // The midpoint would make the other robot look exactly at the crossing.
    const auto [cx, wx] = adaptive_decide(AdaptiveInputs{Rat(0), Rat(1), Rat(1), Rat(1), Rat(1, 2)});
    CHECK(cx == Rat(1, 4));
    (void)wx;
    try {
        adaptive_decide(AdaptiveInputs{Rat(3), Rat(1), Rat(1), Rat(2), std::nullopt});
        FAIL("expected infeasible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Infeasible);
    }
}

TEST_CASE("adaptive scheduler reproduces the hand-solved opening") {
    std::vector<RobotSpec> robots{RobotSpec{0, Rat(0), Rat(1), "r1", LambdaPolicy::oracle({Rat(1), Rat(1), Rat(1)})},
                                  RobotSpec{1, Rat(1), Rat(1), "r2", LambdaPolicy::oracle({Rat(1, 2), Rat(1), Rat(1)})}};
    const auto tr = run(robots, AdversaryPolicy{AdaptiveThm6{{Rat(2), Rat(1)}}, std::nullopt}, 1, Budgets{3, Rat(100)});
    const auto& r2 = tr.robots[1].segments;
    const auto& r1 = tr.robots[0].segments;
    CHECK(r2[0].look_time == 1);
    CHECK(r2[0].compute == Rat(3, 4));
    CHECK(r2[0].move_start == Rat(7, 4));
    CHECK(r2[0].move_end == Rat(9, 4));
    CHECK(r1[0].look_time == 2);
    CHECK(position_at(tr.robots[1], Rat(2)) == Rat(3, 4));
    CHECK(r1[0].destination == Rat(3, 4));
    CHECK(r1[0].compute == Rat(1, 4));
    CHECK(r2[1].wait == Rat(1, 4));
    CHECK(r2[1].look_time == Rat(5, 2));
}

TEST_CASE("adaptive runs never gather and every later look sees a moving robot") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (const auto& policy : {LambdaPolicy::tau_triple(), LambdaPolicy::three_choice()}) {
            const auto tr = run(pair(policy, policy), AdversaryPolicy{AdaptiveThm6{{Rat(2), Rat(1)}}, std::nullopt},
                                seed, Budgets{200, Rat(1000000)});
            CHECK(tr.status != RunStatus::Gathered);
            CHECK(straddle_violations(tr) == 0);
            for (const auto& e : tr.events) {
                if (e.kind == EventKind::Look) CHECK(e.observed[0] != tr.robots[e.robot].segments[e.cycle].origin);
            }
        }
    }
}

TEST_CASE("semi-synchronous rounds activate one robot at a time") {
    const auto tr = run(pair(LambdaPolicy::deterministic(Rat(1, 2)), LambdaPolicy::deterministic(Rat(1, 2))),
                        AdversaryPolicy{SsyncRounds{Rat(1), SsyncRounds::Pattern::Alternate}, std::nullopt}, 1,
                        Budgets{10, Rat(100)});
    Rat last = -1;
    RobotId expected = 0;
    for (const auto& e : tr.events) {
        if (e.kind != EventKind::Look) continue;
        CHECK(e.robot == expected);
        CHECK(e.time > last);
        last = e.time;
        expected = 1 - expected;
    }
}
