#include "doctest.h"

#include <set>

#include "gathersim/geometry.hpp"
#include "gathersim/rat.hpp"
#include "gathersim/rng.hpp"

using namespace gathersim;

TEST_CASE("parsing accepts integers, fractions and exact decimals") {
    CHECK(Rat::parse("1/2") == Rat(1, 2));
    CHECK(Rat::parse("-3") == Rat(-3));
    CHECK(Rat::parse("0.25") == Rat(1, 4));
    CHECK(Rat::parse("010") == Rat(10));
    CHECK(Rat::parse("08/012") == Rat(2, 3));
    CHECK(Rat::parse("+.5") == Rat(1, 2));
    CHECK(Rat::parse(" 6/4 ").str() == "3/2");
    CHECK(Rat::parse("-0.001") == Rat(-1, 1000));
    CHECK(Rat::parse("123456789012345678901234567890").str() == "123456789012345678901234567890");
}

TEST_CASE("parsing rejects anything that is not an exact rational") {
    for (const char* bad : {"", "abc", "1/0", "1e5", "0.1.2", "1/-2", "/3", "sqrt(2)", "."}) {
        CAPTURE(bad);
        CHECK_FALSE(Rat::try_parse(bad).has_value());
        CHECK_THROWS_AS(Rat::parse(bad), Error);
    }
}

TEST_CASE("values are kept in lowest terms with a positive denominator") {
    const Rat r(6, -4);
    CHECK(r.str() == "-3/2");
    CHECK(r.denominator_string() == "2");
    CHECK(Rat(0, 5).str() == "0");
}

TEST_CASE("arithmetic is exact and division by zero is an error") {
    const Rat third(1, 3);
    CHECK(third + third + third == Rat(1));
    CHECK(Rat(1, 10) * Rat(10) == Rat(1));
    CHECK(Rat(2, 3) / Rat(4, 9) == Rat(3, 2));
    CHECK(-Rat(1, 2) == Rat(-1, 2));
    try {
        (void)(Rat(1) / Rat(0));
        FAIL("expected division by zero");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivisionByZero);
    }
    CHECK_THROWS_AS(Rat(1, 0), Error);
}

TEST_CASE("comparisons and helpers") {
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(max(Rat(1, 3), Rat(1, 2)) == Rat(1, 2));
    CHECK(min(Rat(-1), Rat(1, 2)) == Rat(-1));
    CHECK(abs(Rat(-7, 3)) == Rat(7, 3));
    CHECK(Rat::pow2(-3) == Rat(1, 8));
    CHECK(Rat::pow2(4) == Rat(16));
    CHECK(Rat(5).is_integer());
    CHECK_FALSE(Rat(5, 2).is_integer());
}

TEST_CASE("exact square roots of perfect squares only") {
    CHECK(exact_sqrt(Rat(9, 16)) == Rat(3, 4));
    CHECK_FALSE(exact_sqrt(Rat(2)).has_value());
    CHECK(PointOps<Vec2>::distance(Vec2{0, 0}, Vec2{3, 4}) == Rat(5));
    try {
        PointOps<Vec2>::distance(Vec2{0, 0}, Vec2{1, 1});
        FAIL("expected an irrational distance error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IrrationalValue);
    }
}

TEST_CASE("uniform draws lie on the open 2^-53 grid") {
    Rng rng(5);
    const Rat step = Rat::pow2(-kUnitBits);
    for (int i = 0; i < 2000; ++i) {
        const Rat u = rng.open_unit();
        CHECK(u.sign() > 0);
        CHECK(u < Rat(1));
        CHECK((u / step).is_integer());
    }
}

TEST_CASE("uniform_below is unbiased enough and stays in range") {
    SplitMix64 gen(1);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto v = uniform_below(gen, 7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (int c : counts) CHECK(std::abs(c - 10000) < 400);
}

TEST_CASE("derived seeds are deterministic and spread") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
    CHECK(seen.size() == 1000);
    Rng a(9), b(9);
    for (int i = 0; i < 10; ++i) CHECK(a() == b());
}

TEST_CASE("orthogonal projection onto a line") {
    CHECK(project_on_line(Vec2{1, 2}, Vec2{0, 0}, Vec2{4, 0}) == Vec2{1, 0});
    CHECK(project_on_line(Vec2{0, 3}, Vec2{1, 0}, Vec2{-1, 0}) == Vec2{0, 0});
    CHECK_THROWS_AS(project_on_line(Vec2{0, 3}, Vec2{1, 1}, Vec2{1, 1}), Error);
}
