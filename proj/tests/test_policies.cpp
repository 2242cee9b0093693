#include "doctest.h"

#include <cmath>
#include <map>

#include "gathersim/engine.hpp"
#include "gathersim/policies.hpp"

using namespace gathersim;

namespace {

// Upper 0.001 quantiles of the chi-square distribution, by degrees of freedom.
double chi2_critical(std::size_t df) {
    static const double q[] = {0, 10.828, 13.816, 16.266, 18.467, 20.515};
    return q[df];
}

/// Chi-square statistic of draws against the policy's atoms; any draw that is
/// not an atom lands in a single "continuous" bucket with the leftover mass.
double chi2(const LambdaPolicy& policy, std::size_t n, std::uint64_t seed, std::size_t& df) {
    const auto atoms = policy.atoms();
    std::map<Rat, std::size_t> hits;
    std::size_t other = 0;
    Rng rng(seed);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Rat v = sample_lambda(policy, rng, cursor);
        bool atom = false;
        for (const auto& a : atoms) atom = atom || a.lambda == v;
        if (atom) ++hits[v];
        else ++other;
    }
    Rat atom_mass = 0;
    double stat = 0;
    for (const auto& a : atoms) {
        atom_mass += a.probability;
        const double expected = a.probability.to_double() * static_cast<double>(n);
        const double diff = static_cast<double>(hits[a.lambda]) - expected;
        stat += diff * diff / expected;
    }
    std::size_t cells = atoms.size();
    const Rat rest = Rat(1) - atom_mass;
    if (rest.sign() > 0) {
        const double expected = rest.to_double() * static_cast<double>(n);
        const double diff = static_cast<double>(other) - expected;
        stat += diff * diff / expected;
        ++cells;
    } else {
        CHECK(other == 0);
    }
    df = cells - 1;
    return stat;
}

}  // namespace

TEST_CASE("three-choice frequency of lambda = 1 over 3e5 draws") {
    const std::size_t n = 300000;
    Rng rng(2024);
    std::size_t cursor = 0, ones = 0;
    const auto policy = LambdaPolicy::three_choice();
    for (std::size_t i = 0; i < n; ++i) ones += sample_lambda(policy, rng, cursor) == Rat(1);
    const double p = 1.0 / 3.0;
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(ones) / n - p) <= 3 * sigma);
}

TEST_CASE("finite-support policies pass a chi-square test at 0.001") {
    const std::vector<LambdaPolicy> policies{
        LambdaPolicy::tau_triple(),
        LambdaPolicy::three_choice(),
        LambdaPolicy::known_alpha(Rat(2)),
        LambdaPolicy::known_alpha(Rat(5, 3), {Rat(1, 2), Rat(1, 6), Rat(1, 6), Rat(1, 6)}),
        LambdaPolicy::finite_mixture({{Rat(0), Rat(1, 7)}, {Rat(1, 2), Rat(2, 7)}, {Rat(2), Rat(4, 7)}}),
        LambdaPolicy::finite_mixture({{Rat(-1), Rat(1, 2)}, {Rat(2), Rat(1, 2)}}),
    };
    std::uint64_t seed = 100;
    for (const auto& p : policies) {
        std::size_t df = 0;
        const double stat = chi2(p, 100000, ++seed, df);
        CAPTURE(policy_kind_name(p.kind()));
        CAPTURE(stat);
        CHECK(stat < chi2_critical(df));
    }
}

TEST_CASE("deterministic and oracle policies") {
    Rng rng(1);
    std::size_t cursor = 0;
    const auto half = LambdaPolicy::deterministic(Rat(1, 2));
    for (int i = 0; i < 10; ++i) CHECK(sample_lambda(half, rng, cursor) == Rat(1, 2));

    LambdaStream stream(LambdaPolicy::oracle({Rat(1), Rat(-3, 2)}));
    CHECK(stream.next(rng) == Rat(1));
    CHECK(stream.next(rng) == Rat(-3, 2));
    try {
        stream.next(rng);
        FAIL("expected exhaustion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OracleExhausted);
    }
}

TEST_CASE("known-alpha support contains both speed-ratio values") {
    const auto atoms = LambdaPolicy::known_alpha(Rat(2)).atoms();
    auto has = [&](const Rat& v) {
        for (const auto& a : atoms) {
            if (a.lambda == v) return true;
        }
        return false;
    };
    CHECK(has(Rat(1, 3)));
    CHECK(has(Rat(2, 3)));
    CHECK(has(Rat(1)));
}

TEST_CASE("mixture probabilities are validated") {
    CHECK_THROWS_AS(LambdaPolicy::finite_mixture({{Rat(0), Rat(1, 2)}}), Error);
    CHECK_THROWS_AS(LambdaPolicy::finite_mixture({{Rat(0), Rat(3, 2)}, {Rat(1), Rat(-1, 2)}}), Error);
    CHECK_THROWS_AS(LambdaPolicy::finite_mixture({}), Error);
    CHECK_THROWS_AS(LambdaPolicy::known_alpha(Rat(0)), Error);
}

TEST_CASE("destination moves lambda of the way to the observed robot") {
    CHECK(destination(Rat(0), Rat(1), Rat(1, 2)) == Rat(1, 2));
    CHECK(destination(Rat(0), Rat(1), Rat(1)) == Rat(1));
    CHECK(destination(Rat(0), Rat(1), Rat(0)) == Rat(0));
    CHECK(destination(Rat(0), Rat(1), Rat(2)) == Rat(2));
    CHECK(destination(Rat(0), Rat(1), Rat(-1)) == Rat(-1));
}

TEST_CASE("destination with a shared lambda is symmetric about the midpoint") {
    Rng rng(77);
    for (int i = 0; i < 500; ++i) {
        const Rat a(static_cast<std::int64_t>(rng.below(2001)) - 1000, 1 + static_cast<std::int64_t>(rng.below(50)));
        const Rat b(static_cast<std::int64_t>(rng.below(2001)) - 1000, 1 + static_cast<std::int64_t>(rng.below(50)));
        const Rat l(static_cast<std::int64_t>(rng.below(601)) - 300, 1 + static_cast<std::int64_t>(rng.below(100)));
        CHECK(destination(a, b, l) + destination(b, a, l) == a + b);
    }
}

TEST_CASE("catch-up lambda values") {
    CHECK(gather_lambda_oracle(Rat(1), CatchupGeometry::OppositeDirections) == Rat(1, 2));
    CHECK(gather_lambda_oracle(Rat(3), CatchupGeometry::SameDirection) == Rat(1, 2));
    CHECK(gather_lambda_oracle(Rat(2), CatchupGeometry::OppositeDirections) == Rat(1, 3));
    try {
        gather_lambda_oracle(Rat(1), CatchupGeometry::SameDirection);
        FAIL("expected no catch-up");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoCatchup);
    }
    CHECK(oracle_move_coefficient(Rat(3), CatchupGeometry::SameDirection) == Rat(-1, 2));
    CHECK(oracle_move_coefficient(Rat(2), CatchupGeometry::OppositeDirections) == Rat(1, 3));
}

namespace {

/// Robot 0 (speed alpha) starts moving at time 0 with coefficient `first`; the
/// unit-speed robot 1 looks at 1/(4 alpha) and uses `chooser`.
Trace catchup_run(const Rat& alpha, const Rat& first, const Rat& chooser) {
    std::vector<RobotSpec> robots{
        RobotSpec{0, Rat(0), alpha, "mover", LambdaPolicy::oracle({first, 1, 1, 1, 1})},
        RobotSpec{1, Rat(1), Rat(1), "chooser", LambdaPolicy::oracle({chooser, 1, 1, 1, 1})},
    };
    const AdversaryPolicy sched{
        ObliviousGenerated{GeneratedSequence{{DelaySequence{{}, {{0, 0}}},
                                              DelaySequence{{{Rat(1) / (Rat(4) * alpha), 0}}, {{0, 0}}}}}},
        std::nullopt};
    return run(robots, sched, 1, Budgets{20, Rat(100)});
}

}  // namespace

TEST_CASE("oracle lambda lands the chooser on the moving robot at arrival") {
    struct Case {
        Rat alpha;
        Rat first;
        CatchupGeometry geometry;
    };
    const std::vector<Case> cases{{Rat(1), Rat(1), CatchupGeometry::OppositeDirections},
                                  {Rat(2), Rat(1), CatchupGeometry::OppositeDirections},
                                  {Rat(5, 3), Rat(1), CatchupGeometry::OppositeDirections},
                                  {Rat(3), Rat(3), CatchupGeometry::SameDirection},
                                  {Rat(5, 3), Rat(4), CatchupGeometry::SameDirection}};
    for (const auto& c : cases) {
        CAPTURE(c.alpha);
        const auto tr = catchup_run(c.alpha, c.first, oracle_move_coefficient(c.alpha, c.geometry));
        const auto& chooser_move = tr.robots[1].segments[0];
        CHECK(position_at(tr.robots[0], chooser_move.move_end) == chooser_move.destination);
        CHECK(tr.status == RunStatus::Gathered);
    }
}
