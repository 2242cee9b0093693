#include "gathersim/adversary.hpp"

#include <string>

#include "gathersim/errors.hpp"
#include "gathersim/rng.hpp"

namespace gathersim {

namespace {

constexpr std::uint64_t kAdversarySalt = 0xad7e5a41ULL;

Rat ceil_div(const Rat& value, const Rat& unit) {
    const Rat q = value / unit;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
    return Rat(mpq_class(c));
}

std::uint64_t cell_seed(std::uint64_t seed, RobotId robot, std::size_t cycle) {
    return derive_seed(derive_seed(seed, robot), cycle);
}

Rat in_range(SplitMix64& gen, const RatRange& range) { return range.lo + (range.hi - range.lo) * uniform_closed_unit(gen); }

const Delays& from_sequence(const DelaySequence& seq, RobotId robot, std::size_t cycle) {
    if (cycle < seq.prefix.size()) return seq.prefix[cycle];
    if (seq.repeat.empty()) {
        throw Error(ErrorCode::ScheduleUnderrun,
                    "schedule for robot " + std::to_string(robot) + " ends after " + std::to_string(seq.prefix.size()) +
                        " cycles");
    }
    return seq.repeat[(cycle - seq.prefix.size()) % seq.repeat.size()];
}

const DelaySequence& robot_sequence(const std::vector<DelaySequence>& seqs, RobotId robot) {
    if (robot >= seqs.size()) {
        throw Error(ErrorCode::ScheduleUnderrun, "no schedule for robot " + std::to_string(robot));
    }
    return seqs[robot];
}

void require_non_negative(const Rat& v, const char* what) {
    if (v.sign() < 0) throw Error(ErrorCode::Validation, std::string(what) + " must be >= 0, got " + v.str());
}

void validate_range(const RatRange& r, const char* what) {
    require_non_negative(r.lo, what);
    if (r.hi < r.lo) throw Error(ErrorCode::Validation, std::string(what) + " range is empty");
}

void validate_sequence(const DelaySequence& s) {
    for (const auto* part : {&s.prefix, &s.repeat}) {
        for (const auto& d : *part) {
            require_non_negative(d.wait, "wait");
            require_non_negative(d.compute, "compute delay");
        }
    }
}

class ObliviousAdversary final : public Adversary {
public:
    ObliviousAdversary(AdversaryPolicy policy, std::uint64_t seed) : policy_(std::move(policy)), seed_(seed) {}

    Rat wait(const ScheduleView&, RobotId robot, std::size_t cycle, const Rat&) override {
        return next_delays_oblivious(policy_, robot, cycle, seed_).wait;
    }
    Rat compute_delay(const ScheduleView&, RobotId robot, std::size_t cycle, const Rat&, const Rat&) override {
        return next_delays_oblivious(policy_, robot, cycle, seed_).compute;
    }

private:
    AdversaryPolicy policy_;
    std::uint64_t seed_;
};

class SsyncAdversary final : public Adversary {
public:
    explicit SsyncAdversary(SsyncRounds params) : params_(std::move(params)) {}

    Rat wait(const ScheduleView& view, RobotId robot, std::size_t, const Rat& cycle_start) override {
        const std::size_t n = view.robot_count();
        if (last_round_.size() < n) last_round_.resize(n, -1);
        std::int64_t round = ceil_div(cycle_start, params_.round_length).raw().get_num().get_si();
        if (round <= last_round_[robot]) round = last_round_[robot] + 1;
        if (params_.pattern == SsyncRounds::Pattern::Alternate) {
            const auto slot = static_cast<std::int64_t>(robot);
            const auto width = static_cast<std::int64_t>(n);
            while (round % width != slot) ++round;
        }
        last_round_[robot] = round;
        return Rat(round) * params_.round_length - cycle_start;
    }

    Rat compute_delay(const ScheduleView&, RobotId, std::size_t, const Rat&, const Rat&) override { return 0; }

private:
    SsyncRounds params_;
    std::vector<std::int64_t> last_round_;
};

}  // namespace

std::string_view adversary_kind_name(AdversaryKind kind) noexcept {
    switch (kind) {
        case AdversaryKind::ObliviousExplicit: return "OBLIVIOUS_EXPLICIT";
        case AdversaryKind::ObliviousGenerated: return "OBLIVIOUS_GENERATED";
        case AdversaryKind::TauBounded: return "TAU_BOUNDED";
        case AdversaryKind::AsyncIc: return "ASYNC_IC";
        case AdversaryKind::AdaptiveThm6: return "ADAPTIVE_THM6";
        case AdversaryKind::SsyncRounds: return "SSYNC_ROUNDS";
    }
    return "UNKNOWN";
}

void validate(const AdversaryPolicy& policy) {
    struct Visitor {
        void operator()(const ObliviousExplicit& p) const {
            for (const auto& robot : p.per_robot) validate_sequence(DelaySequence{robot, {}});
        }
        void operator()(const ObliviousGenerated& p) const {
            std::visit(*this, p.generator);
        }
        void operator()(const GeneratedSequence& g) const {
            for (const auto& s : g.per_robot) validate_sequence(s);
        }
        void operator()(const GeneratedUniform& g) const {
            validate_range(g.wait, "wait");
            validate_range(g.compute, "compute delay");
        }
        void operator()(const GeneratedPerRobot& g) const {
            for (const auto& sub : g.per_robot) {
                if (!sub.is_oblivious()) throw Error(ErrorCode::Validation, "per_robot entries must be oblivious");
                validate(sub);
            }
        }
        void operator()(const TauBounded& p) const {
            if (p.tau.sign() <= 0) throw Error(ErrorCode::Validation, "tau must be > 0");
        }
        void operator()(const AsyncIc& p) const {
            if (const auto* c = std::get_if<Rat>(&p.wait)) require_non_negative(*c, "wait");
            if (const auto* r = std::get_if<RatRange>(&p.wait)) validate_range(*r, "wait");
            if (const auto* s = std::get_if<std::vector<DelaySequence>>(&p.wait)) {
                for (const auto& seq : *s) validate_sequence(seq);
            }
        }
        void operator()(const AdaptiveThm6& p) const {
            if (p.initial_waits.size() != 2) throw Error(ErrorCode::Validation, "ADAPTIVE_THM6 needs two initial waits");
            for (const auto& w : p.initial_waits) require_non_negative(w, "initial wait");
            if (p.initial_waits[0] == p.initial_waits[1]) {
                throw Error(ErrorCode::Validation, "ADAPTIVE_THM6 initial waits must differ");
            }
        }
        void operator()(const SsyncRounds& p) const {
            if (p.round_length.sign() <= 0) throw Error(ErrorCode::Validation, "round_length must be > 0");
        }
    };
    std::visit(Visitor{}, policy.kind);
}

Delays next_delays_oblivious(const AdversaryPolicy& policy, RobotId robot, std::size_t cycle,
                             std::uint64_t adversary_seed) {
    const std::uint64_t seed = policy.seed.value_or(adversary_seed);
    struct Visitor {
        RobotId robot;
        std::size_t cycle;
        std::uint64_t seed;

        Delays operator()(const ObliviousExplicit& p) const {
            if (robot >= p.per_robot.size() || cycle >= p.per_robot[robot].size()) {
                throw Error(ErrorCode::ScheduleUnderrun, "explicit schedule exhausted for robot " +
                                                             std::to_string(robot) + " at cycle " +
                                                             std::to_string(cycle));
            }
            return p.per_robot[robot][cycle];
        }
        Delays operator()(const ObliviousGenerated& p) const { return std::visit(*this, p.generator); }
        Delays operator()(const GeneratedSequence& g) const {
            return from_sequence(robot_sequence(g.per_robot, robot), robot, cycle);
        }
        Delays operator()(const GeneratedUniform& g) const {
            SplitMix64 gen(cell_seed(seed, robot, cycle));
            Rat w = in_range(gen, g.wait);
            Rat c = in_range(gen, g.compute);
            return {std::move(w), std::move(c)};
        }
        Delays operator()(const GeneratedPerRobot& g) const {
            if (robot >= g.per_robot.size()) {
                throw Error(ErrorCode::ScheduleUnderrun, "no schedule for robot " + std::to_string(robot));
            }
            return next_delays_oblivious(g.per_robot[robot], 0, cycle, derive_seed(seed, robot + 1));
        }
        Delays operator()(const TauBounded& p) const {
            SplitMix64 gen(cell_seed(seed, robot, cycle));
            constexpr std::uint64_t steps = std::uint64_t{1} << kUnitBits;
            const Rat k = Rat(static_cast<std::int64_t>(1 + uniform_below(gen, steps)));
            const Rat total = p.tau + p.tau * k * Rat::pow2(-kUnitBits);  // (tau, 2 tau]
            Rat w = total * uniform_closed_unit(gen);
            Rat c = total - w;
            return {std::move(w), std::move(c)};
        }
        Delays operator()(const AsyncIc& p) const {
            if (const auto* c = std::get_if<Rat>(&p.wait)) return {*c, 0};
            if (const auto* r = std::get_if<RatRange>(&p.wait)) {
                SplitMix64 gen(cell_seed(seed, robot, cycle));
                return {in_range(gen, *r), 0};
            }
            const auto& seqs = std::get<std::vector<DelaySequence>>(p.wait);
            return {from_sequence(robot_sequence(seqs, robot), robot, cycle).wait, 0};
        }
        Delays operator()(const AdaptiveThm6&) const {
            throw Error(ErrorCode::InvalidArgument, "ADAPTIVE_THM6 has no oblivious schedule");
        }
        Delays operator()(const SsyncRounds&) const {
            throw Error(ErrorCode::InvalidArgument, "SSYNC_ROUNDS has no oblivious schedule");
        }
    };
    return std::visit(Visitor{robot, cycle, seed}, policy.kind);
}

std::pair<Rat, Rat> adaptive_decide(const AdaptiveInputs& in) {
    if (in.lambda.is_zero() || in.move_duration.is_zero()) {
        // A robot that stays put gets to look again immediately.
        return {Rat(0), Rat(0)};
    }
    // Need move_start < other_next_look < move_start + duration.
    const Rat hi = in.other_next_look - in.look_time;
    const Rat lo = max(Rat(0), hi - in.move_duration);
    if (hi.sign() <= 0 || !(lo < hi)) {
        throw Error(ErrorCode::Infeasible, "no computation delay places the other look inside the move (window " +
                                               lo.str() + ", " + hi.str() + ")");
    }
    Rat compute = lo + (hi - lo) / Rat(2);
    if (in.pass_offset && compute == hi - *in.pass_offset) compute = lo + (hi - lo) / Rat(4);
    return {std::move(compute), in.move_duration / Rat(2)};
}

AdaptiveAdversary::AdaptiveAdversary(AdaptiveThm6 params) : params_(std::move(params)) {
    next_wait_.resize(params_.initial_waits.size());
}

Rat AdaptiveAdversary::wait(const ScheduleView&, RobotId robot, std::size_t cycle, const Rat&) {
    if (robot >= params_.initial_waits.size()) {
        throw Error(ErrorCode::InvalidArgument, "ADAPTIVE_THM6 drives exactly two robots");
    }
    if (cycle == 0) return params_.initial_waits[robot];
    if (!next_wait_[robot]) {
        throw Error(ErrorCode::ScheduleUnderrun, "no committed wait for robot " + std::to_string(robot));
    }
    Rat w = std::move(*next_wait_[robot]);
    next_wait_[robot].reset();
    return w;
}

Rat AdaptiveAdversary::compute_delay(const ScheduleView& view, RobotId robot, std::size_t, const Rat& lambda,
                                     const Rat& move_duration) {
    if (view.robot_count() != 2) throw Error(ErrorCode::InvalidArgument, "ADAPTIVE_THM6 drives exactly two robots");
    const RobotId other = 1 - robot;
    const RobotTiming self = view.timing(robot);
    const RobotTiming them = view.timing(other);
    if (them.decided) throw Error(ErrorCode::Infeasible, "other robot already decided it gathered");

    AdaptiveInputs in;
    in.look_time = self.look_time;
    in.lambda = lambda;
    in.move_duration = move_duration;
    if (them.looked) {
        if (!next_wait_[other]) throw Error(ErrorCode::Infeasible, "other robot has no committed next wait");
        in.other_next_look = them.move_end + *next_wait_[other];
    } else {
        in.other_next_look = them.look_time;
    }
    in.pass_offset = view.pass_offset(robot, other);
    auto [compute, next_wait] = adaptive_decide(in);
    next_wait_[robot] = std::move(next_wait);
    return compute;
}

std::unique_ptr<Adversary> make_adversary(const AdversaryPolicy& policy, std::uint64_t run_seed) {
    validate(policy);
    const std::uint64_t seed = policy.seed.value_or(derive_seed(run_seed, kAdversarySalt));
    switch (policy.tag()) {
        case AdversaryKind::AdaptiveThm6: return std::make_unique<AdaptiveAdversary>(std::get<AdaptiveThm6>(policy.kind));
        case AdversaryKind::SsyncRounds: return std::make_unique<SsyncAdversary>(std::get<SsyncRounds>(policy.kind));
        default: return std::make_unique<ObliviousAdversary>(policy, seed);
    }
}

}  // namespace gathersim
