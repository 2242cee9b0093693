#include "gathersim/policies.hpp"

#include <string>

#include "gathersim/errors.hpp"

namespace gathersim {

namespace {

mpz_class uniform_below_big(Rng& rng, const mpz_class& bound) {
    // Rejection sampling on ceil(log2(bound)) random bits.
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
        mpz_class x = 0;
        std::size_t have = 0;
        while (have < bits) {
            mpz_class chunk;
            const std::uint64_t r = rng();
            mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
            x <<= 64;
            x += chunk;
            have += 64;
        }
        if (have > bits) x >>= static_cast<mp_bitcnt_t>(have - bits);
        if (x < bound) return x;
    }
}

/// Picks index i with probability weights[i] (weights sum to 1).
std::size_t pick_weighted(Rng& rng, const std::vector<Rat>& weights) {
    mpz_class common = 1;
    for (const auto& w : weights) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), w.raw().get_den_mpz_t());
    mpz_class draw;
    if (mpz_fits_ulong_p(common.get_mpz_t())) {
        draw = static_cast<unsigned long>(rng.below(mpz_get_ui(common.get_mpz_t())));
    } else {
        draw = uniform_below_big(rng, common);
    }
    mpz_class acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i].raw().get_num() * (common / weights[i].raw().get_den());
        if (draw < acc) return i;
    }
    return weights.size() - 1;
}

void validate_probabilities(const std::vector<Rat>& probs, const char* what) {
    Rat total = 0;
    for (const auto& p : probs) {
        if (p.sign() <= 0) throw Error(ErrorCode::Validation, std::string(what) + ": probabilities must be positive");
        total += p;
    }
    if (total != Rat(1)) throw Error(ErrorCode::Validation, std::string(what) + ": probabilities sum to " + total.str());
}

}  // namespace

std::string_view policy_kind_name(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::Deterministic: return "DETERMINISTIC";
        case PolicyKind::FiniteMixture: return "FINITE_MIXTURE";
        case PolicyKind::ThreeChoice: return "THREE_CHOICE";
        case PolicyKind::TauTriple: return "TAU_TRIPLE";
        case PolicyKind::KnownAlpha: return "KNOWN_ALPHA";
        case PolicyKind::Oracle: return "ORACLE";
    }
    return "UNKNOWN";
}

LambdaPolicy LambdaPolicy::finite_mixture(std::vector<MixtureChoice> choices) {
    if (choices.empty()) throw Error(ErrorCode::Validation, "FINITE_MIXTURE needs at least one choice");
    std::vector<Rat> probs;
    for (const auto& c : choices) probs.push_back(c.probability);
    validate_probabilities(probs, "FINITE_MIXTURE");
    return LambdaPolicy(FiniteMixtureLambda{std::move(choices)});
}

LambdaPolicy LambdaPolicy::known_alpha(Rat alpha) { return known_alpha(std::move(alpha), KnownAlphaLambda{}.weights); }

LambdaPolicy LambdaPolicy::known_alpha(Rat alpha, std::array<Rat, 4> weights) {
    if (alpha.sign() <= 0) throw Error(ErrorCode::Validation, "KNOWN_ALPHA needs alpha > 0");
    validate_probabilities({weights.begin(), weights.end()}, "KNOWN_ALPHA");
    return LambdaPolicy(KnownAlphaLambda{std::move(alpha), std::move(weights)});
}

std::vector<MixtureChoice> LambdaPolicy::atoms() const {
    struct Visitor {
        std::vector<MixtureChoice> operator()(const DeterministicLambda& p) const { return {{p.lambda, 1}}; }
        std::vector<MixtureChoice> operator()(const FiniteMixtureLambda& p) const { return p.choices; }
        std::vector<MixtureChoice> operator()(const ThreeChoiceLambda&) const {
            return {{1, Rat(1, 3)}, {Rat(1, 2), Rat(1, 3)}};
        }
        std::vector<MixtureChoice> operator()(const TauTripleLambda&) const {
            return {{1, Rat(1, 3)}, {Rat(1, 2), Rat(1, 3)}, {0, Rat(1, 3)}};
        }
        std::vector<MixtureChoice> operator()(const KnownAlphaLambda& p) const {
            const Rat one = 1;
            return {{one / (p.alpha + one), p.weights[0]},
                    {p.alpha / (p.alpha + one), p.weights[1]},
                    {one, p.weights[2]}};
        }
        std::vector<MixtureChoice> operator()(const OracleLambda&) const { return {}; }
    };
    return std::visit(Visitor{}, value_);
}

Rat sample_lambda(const LambdaPolicy& policy, Rng& rng, std::size_t& cursor) {
    struct Visitor {
        Rng& rng;
        std::size_t& cursor;

        Rat operator()(const DeterministicLambda& p) const { return p.lambda; }
        Rat operator()(const FiniteMixtureLambda& p) const {
            std::vector<Rat> w;
            w.reserve(p.choices.size());
            for (const auto& c : p.choices) w.push_back(c.probability);
            return p.choices[pick_weighted(rng, w)].lambda;
        }
        Rat operator()(const ThreeChoiceLambda&) const {
            switch (rng.below(3)) {
                case 0: return Rat(1);
                case 1: return Rat(1, 2);
                default: return rng.open_unit();
            }
        }
        Rat operator()(const TauTripleLambda&) const {
            switch (rng.below(3)) {
                case 0: return Rat(1);
                case 1: return Rat(1, 2);
                default: return Rat(0);
            }
        }
        Rat operator()(const KnownAlphaLambda& p) const {
            const Rat one = 1;
            switch (pick_weighted(rng, {p.weights.begin(), p.weights.end()})) {
                case 0: return one / (p.alpha + one);
                case 1: return p.alpha / (p.alpha + one);
                case 2: return one;
                default: return rng.open_unit();
            }
        }
        Rat operator()(const OracleLambda& p) const {
            if (cursor >= p.script.size()) {
                throw Error(ErrorCode::OracleExhausted,
                            "oracle script of length " + std::to_string(p.script.size()) + " exhausted");
            }
            return p.script[cursor++];
        }
    };
    return std::visit(Visitor{rng, cursor}, policy.value());
}

Rat gather_lambda_oracle(const Rat& alpha, CatchupGeometry geometry) {
    if (alpha.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "speed ratio must be positive");
    const Rat one = 1;
    if (geometry == CatchupGeometry::OppositeDirections) return one / (alpha + one);
    if (alpha == one) throw Error(ErrorCode::NoCatchup, "equal speeds travelling the same way never meet");
    return one / (alpha - one);
}

Rat oracle_move_coefficient(const Rat& alpha, CatchupGeometry geometry) {
    const Rat lambda = gather_lambda_oracle(alpha, geometry);
    return geometry == CatchupGeometry::OppositeDirections ? lambda : -lambda;
}

}  // namespace gathersim
