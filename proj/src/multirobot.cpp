#include "gathersim/multirobot.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gathersim {

Configuration::Configuration(std::vector<Entity> entities) {
    std::map<Vec2, std::size_t> merged;
    for (auto& e : entities) {
        if (e.multiplicity == 0) throw Error(ErrorCode::InvalidArgument, "multiplicity must be positive");
        merged[e.position] += e.multiplicity;
    }
    for (auto& [p, m] : merged) entities_.push_back(Entity{p, m});
}

Configuration Configuration::from_points(const std::vector<Vec2>& points) {
    std::vector<Entity> es;
    for (const auto& p : points) es.push_back(Entity{p, 1});
    return Configuration(std::move(es));
}

std::size_t Configuration::total_multiplicity() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entities_) n += e.multiplicity;
    return n;
}

bool Configuration::collinear() const {
    if (entities_.size() < 3) return true;
    const Vec2& a = entities_[0].position;
    const Vec2 dir = entities_[1].position - a;
    for (std::size_t i = 2; i < entities_.size(); ++i) {
        if (!cross(dir, entities_[i].position - a).is_zero()) return false;
    }
    return true;
}

Rat Configuration::max_distance2() const {
    Rat best = 0;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        for (std::size_t j = i + 1; j < entities_.size(); ++j) {
            best = max(best, norm2(entities_[i].position - entities_[j].position));
        }
    }
    return best;
}

std::string Configuration::to_csv() const {
    std::ostringstream os;
    for (const auto& e : entities_) os << e.position.x << ',' << e.position.y << ',' << e.multiplicity << '\n';
    return os.str();
}

std::vector<EntityPair> farthest_pairs(const Configuration& config) {
    std::vector<EntityPair> out;
    const auto& es = config.entities();
    Rat best = -1;
    for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            Rat d2 = norm2(es[i].position - es[j].position);
            if (d2 > best) {
                best = std::move(d2);
                out.clear();
                out.emplace_back(i, j);
            } else if (d2 == best) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

namespace {

/// participant index -> partner index (from its smallest farthest pair)
std::vector<std::pair<std::size_t, std::size_t>> participants_with_partner(const Configuration& config) {
    std::map<std::size_t, std::size_t> partner;
    for (const auto& [i, j] : farthest_pairs(config)) {
        partner.try_emplace(i, j);
        partner.try_emplace(j, i);
    }
    return {partner.begin(), partner.end()};
}

}  // namespace

std::vector<std::size_t> tie_break_participants(const Configuration& config) {
    std::vector<std::size_t> out;
    for (const auto& [i, partner] : participants_with_partner(config)) out.push_back(i);
    return out;
}

Configuration tie_break_step(const Configuration& config, const std::vector<int>& draws) {
    const auto parts = participants_with_partner(config);
    if (draws.size() != parts.size()) throw Error(ErrorCode::InvalidArgument, "one draw per participant expected");
    std::vector<Entity> es = config.entities();
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (draws[k] != 0 && draws[k] != 1) throw Error(ErrorCode::InvalidArgument, "tie-break draws are 0 or 1");
        if (draws[k] == 0) continue;
        const auto [i, partner] = parts[k];
        const Vec2& p = config.entities()[i].position;
        const Vec2& q = config.entities()[partner].position;
        es[i].position = p + Rat(1, 100) * (p - q);
    }
    return Configuration(std::move(es));
}

Configuration tie_break_step(const Configuration& config, Rng& rng) {
    std::vector<int> draws(tie_break_participants(config).size());
    for (auto& d : draws) d = rng.coin() ? 1 : 0;
    return tie_break_step(config, draws);
}

ReduceResult reduce_to_line(const Configuration& config, Rng& rng, std::size_t max_tie_rounds,
                            Activation activation) {
    ReduceResult out;
    out.config = config;
    if (config.size() < 2 || config.collinear()) return out;
    auto pairs = farthest_pairs(out.config);
    while (pairs.size() > 1) {
        if (out.tie_rounds == max_tie_rounds) {
            out.partial = true;
            return out;
        }
        std::vector<int> draws(tie_break_participants(out.config).size());
        for (auto& d : draws) {
            const bool active = activation == Activation::All || rng.coin();
            d = active && rng.coin() ? 1 : 0;
        }
        out.config = tie_break_step(out.config, draws);
        ++out.tie_rounds;
        pairs = farthest_pairs(out.config);
    }
    const Vec2 a = out.config.entities()[pairs[0].first].position;
    const Vec2 b = out.config.entities()[pairs[0].second].position;
    std::vector<Entity> es;
    for (const auto& e : out.config.entities()) es.push_back(Entity{project_on_line(e.position, a, b), e.multiplicity});
    out.config = Configuration(std::move(es));
    out.line = std::make_pair(a, b);
    return out;
}

Configuration line_gather_step(const Configuration& config) {
    if (config.size() < 3) return config;
    if (!config.collinear()) throw Error(ErrorCode::InvalidArgument, "line gathering needs a collinear configuration");
    // Entities are sorted lexicographically, which orders any collinear set
    // along its line.
    std::vector<Entity> es = config.entities();
    es[0].position = es[1].position;
    es.back().position = es[es.size() - 2].position;
    return Configuration(std::move(es));
}

bool three_point_direct_check(const Rat& arrival_a, const Rat& arrival_c, const Rat& activation_b) {
    const Rat& lo = min(arrival_a, arrival_c);
    const Rat& hi = max(arrival_a, arrival_c);
    return !(lo < activation_b && activation_b < hi);
}

namespace {

struct LineStage {
    Vec2 origin;
    Vec2 axis;
    Rat coordinate(const Vec2& p) const { return dot(p - origin, axis) / norm2(axis); }
    Vec2 point(const Rat& u) const { return origin + u * axis; }
};

LineStage frame_of(const Configuration& config) {
    const auto& es = config.entities();
    return LineStage{es.front().position, es.back().position - es.front().position};
}

/// Two positions (coordinates u0 != u1) gathered by the two-robot engine.
std::optional<Rat> two_robot_gather(const Rat& u0, const Rat& u1, std::uint64_t seed, const PipelineOptions& options,
                                    std::size_t& looks) {
    const Rat tau = abs(u1 - u0) * options.tau_fraction;
    std::vector<RobotSpec> robots{RobotSpec{0, u0, 1, "tau_triple", LambdaPolicy::tau_triple()},
                                  RobotSpec{1, u1, 1, "tau_triple", LambdaPolicy::tau_triple()}};
    const auto trace = run(robots, AdversaryPolicy{TauBounded{tau}, std::nullopt}, seed, options.two_robot_budgets);
    looks = trace.total_looks();
    if (trace.status != RunStatus::Gathered) return std::nullopt;
    return trace.robots[0].segments.back().origin;
}

}  // namespace

PipelineResult gather_with_merging(const Configuration& config, std::uint64_t seed, const PipelineOptions& options) {
    PipelineResult out;
    Rng rng(derive_seed(seed, 0x7265647563650001ULL));
    const Rat before_max = config.max_distance2();
    auto reduced = reduce_to_line(config, rng, options.max_tie_rounds, options.activation);
    out.tie_rounds = reduced.tie_rounds;
    if (reduced.partial) {
        out.partial = true;
        out.final_config = reduced.config;
        return out;
    }
    Configuration cur = reduced.config;
    out.collinear_after_reduce = cur.collinear();
    out.farthest_preserved = cur.max_distance2() >= before_max && farthest_pairs(cur).size() == 1;
    while (cur.size() >= 4) {
        cur = line_gather_step(cur);
        ++out.line_steps;
    }
    const std::size_t total = cur.total_multiplicity();
    if (cur.size() == 3) {
        const LineStage frame = frame_of(cur);
        const auto& es = cur.entities();
        const Rat ua = frame.coordinate(es[0].position);
        const Rat ub = frame.coordinate(es[1].position);
        const Rat uc = frame.coordinate(es[2].position);
        // Unit line coordinates travel at unit speed; schedules are tau-bounded
        // relative to the current extent.
        const AdversaryPolicy sched{TauBounded{(uc - ua) * options.tau_fraction}, std::nullopt};
        const std::uint64_t sseed = derive_seed(seed, 0x7468726565ULL);
        const auto da = next_delays_oblivious(sched, 0, 0, sseed);
        const auto db = next_delays_oblivious(sched, 1, 0, sseed);
        const auto dc = next_delays_oblivious(sched, 2, 0, sseed);
        const Rat start_a = da.wait + da.compute, start_c = dc.wait + dc.compute;
        const Rat arrive_a = start_a + (ub - ua);
        const Rat arrive_c = start_c + (uc - ub);
        const Rat look_b = db.wait;
        if (three_point_direct_check(arrive_a, arrive_c, look_b)) {
            out.three_point_direct = true;
            out.gathered = true;
            out.final_config = Configuration({Entity{es[1].position, total}});
            return out;
        }
        // The earlier arrival has merged into the middle; the other robot is
        // observed mid-move (or still waiting) when the middle one activates.
        const bool a_first = arrive_a < arrive_c;
        const Rat& start = a_first ? start_c : start_a;
        const Rat& from = a_first ? uc : ua;
        const Rat progress = look_b <= start ? Rat(0) : look_b - start;
        const Rat other = a_first ? from - progress : from + progress;
        cur = Configuration({Entity{es[1].position, es[1].multiplicity + (a_first ? es[0].multiplicity : es[2].multiplicity)},
                             Entity{frame.point(other), a_first ? es[2].multiplicity : es[0].multiplicity}});
    }
    if (cur.size() == 2) {
        out.two_robot_stage = true;
        const LineStage frame = frame_of(cur);
        const Rat u0 = frame.coordinate(cur.entities()[0].position);
        const Rat u1 = frame.coordinate(cur.entities()[1].position);
        const auto meet = two_robot_gather(u0, u1, derive_seed(seed, 0x74776fULL), options, out.two_robot_looks);
        if (!meet) {
            out.final_config = cur;
            return out;
        }
        cur = Configuration({Entity{frame.point(*meet), total}});
    }
    out.gathered = cur.size() == 1;
    out.final_config = cur;
    return out;
}

Configuration engineered_ties_k8() {
    // Rational points on the circle of radius 85 from t -> ((1-t^2), 2t)/(1+t^2).
    const std::vector<Rat> ts{Rat(0), Rat(1, 5), Rat(2, 5), Rat(3, 4), Rat(-1, 5), Rat(-2, 5), Rat(-3, 4), Rat(1, 9)};
    std::vector<Vec2> pts;
    for (const auto& t : ts) {
        const Rat den = Rat(1) + t * t;
        const Vec2 p{Rat(85) * (Rat(1) - t * t) / den, Rat(85) * Rat(2) * t / den};
        pts.push_back(p);
        pts.push_back(Vec2{-p.x, -p.y});
    }
    return Configuration::from_points(pts);
}

Configuration random_configuration(std::size_t n, Rng& rng) {
    std::vector<Vec2> pts;
    while (pts.size() < n) {
        const Vec2 p{Rat(static_cast<std::int64_t>(rng.below(2001)), static_cast<std::int64_t>(1 + rng.below(16))),
                     Rat(static_cast<std::int64_t>(rng.below(2001)), static_cast<std::int64_t>(1 + rng.below(16)))};
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    return Configuration::from_points(pts);
}

}  // namespace gathersim
