#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gathersim/rat.hpp"
#include "gathersim/rng.hpp"

namespace gathersim {

// The lambda-class family: a robot that observes the other robot at distance d
// moves lambda * d towards the observed position.

struct DeterministicLambda {
    Rat lambda;
    friend bool operator==(const DeterministicLambda&, const DeterministicLambda&) = default;
};

struct MixtureChoice {
    Rat lambda;
    Rat probability;
    friend bool operator==(const MixtureChoice&, const MixtureChoice&) = default;
};

struct FiniteMixtureLambda {
    std::vector<MixtureChoice> choices;
    friend bool operator==(const FiniteMixtureLambda&, const FiniteMixtureLambda&) = default;
};

/// {1, 1/2, U(0,1)}, each with probability 1/3.
struct ThreeChoiceLambda {
    friend bool operator==(const ThreeChoiceLambda&, const ThreeChoiceLambda&) = default;
};

/// {1, 1/2, 0}, each with probability 1/3.
struct TauTripleLambda {
    friend bool operator==(const TauTripleLambda&, const TauTripleLambda&) = default;
};

/// {1/(alpha+1), alpha/(alpha+1), 1, U(0,1)} with the given weights
/// (uniform by default).
struct KnownAlphaLambda {
    Rat alpha;
    std::array<Rat, 4> weights{Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)};
    friend bool operator==(const KnownAlphaLambda&, const KnownAlphaLambda&) = default;
};

/// Scripted sequence of lambda values, consumed in order.
struct OracleLambda {
    std::vector<Rat> script;
    friend bool operator==(const OracleLambda&, const OracleLambda&) = default;
};

enum class PolicyKind { Deterministic, FiniteMixture, ThreeChoice, TauTriple, KnownAlpha, Oracle };

std::string_view policy_kind_name(PolicyKind kind) noexcept;

class LambdaPolicy {
public:
    using Variant = std::variant<DeterministicLambda, FiniteMixtureLambda, ThreeChoiceLambda, TauTripleLambda,
                                 KnownAlphaLambda, OracleLambda>;

    LambdaPolicy() : value_(ThreeChoiceLambda{}) {}

    static LambdaPolicy deterministic(Rat lambda) { return LambdaPolicy(DeterministicLambda{std::move(lambda)}); }
    static LambdaPolicy finite_mixture(std::vector<MixtureChoice> choices);
    static LambdaPolicy three_choice() { return LambdaPolicy(ThreeChoiceLambda{}); }
    static LambdaPolicy tau_triple() { return LambdaPolicy(TauTripleLambda{}); }
    static LambdaPolicy known_alpha(Rat alpha);
    static LambdaPolicy known_alpha(Rat alpha, std::array<Rat, 4> weights);
    static LambdaPolicy oracle(std::vector<Rat> script) { return LambdaPolicy(OracleLambda{std::move(script)}); }

    PolicyKind kind() const noexcept { return static_cast<PolicyKind>(value_.index()); }
    const Variant& value() const noexcept { return value_; }

    /// The finitely many lambda values this policy can return together with
    /// their probabilities; continuous components are omitted.
    std::vector<MixtureChoice> atoms() const;

    friend bool operator==(const LambdaPolicy&, const LambdaPolicy&) = default;

private:
    explicit LambdaPolicy(Variant v) : value_(std::move(v)) {}
    Variant value_;
};

/// Draws lambda. `cursor` is the ORACLE read position and is ignored (but
/// kept) by every other kind. Throws ORACLE_EXHAUSTED past the script end.
Rat sample_lambda(const LambdaPolicy& policy, Rng& rng, std::size_t& cursor);

/// Per-robot sampling state: the policy plus its oracle cursor.
class LambdaStream {
public:
    explicit LambdaStream(LambdaPolicy policy) : policy_(std::move(policy)) {}
    Rat next(Rng& rng) { return sample_lambda(policy_, rng, cursor_); }
    const LambdaPolicy& policy() const noexcept { return policy_; }

private:
    LambdaPolicy policy_;
    std::size_t cursor_ = 0;
};

/// own + lambda * (other_observed - own). Works for any position type with
/// the usual affine operations.
template <class Point>
Point destination(const Point& own, const Point& other_observed, const Rat& lambda) {
    return own + lambda * (other_observed - own);
}

enum class CatchupGeometry { OppositeDirections, SameDirection };

/// The lambda at which two robots with speed ratio alpha collocate exactly
/// when one of them moves while the other is already in motion:
/// 1/(alpha+1) when they approach each other, 1/(alpha-1) when both travel
/// the same way. Throws NO_CATCHUP for equal speeds in the same direction.
Rat gather_lambda_oracle(const Rat& alpha, CatchupGeometry geometry);

/// The signed coefficient to feed into destination() for the same catch-up.
/// Same-direction catch-up means the chooser moves away from the observed
/// robot, so the coefficient is -gather_lambda_oracle(alpha, SameDirection).
Rat oracle_move_coefficient(const Rat& alpha, CatchupGeometry geometry);

}  // namespace gathersim
