#include "gathersim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gathersim {

DistanceProfile::DistanceProfile(const Trace& trace) : trace_(&trace), horizon_(trace.end_time) {
    if (trace.robots.size() != 2) throw Error(ErrorCode::InvalidArgument, "distance profile needs two robots");
    times_.push_back(Rat(0));
    times_.push_back(horizon_);
    for (const auto& run : trace.robots) {
        for (const auto& seg : run.segments) {
            if (!seg.looked || seg.decided) continue;
            if (seg.move_start <= horizon_) times_.push_back(seg.move_start);
            if (seg.move_end <= horizon_) times_.push_back(seg.move_end);
        }
    }
    std::sort(times_.begin(), times_.end());
    times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
    suffix_max_.resize(times_.size());
    Rat best = 0;
    for (std::size_t i = times_.size(); i-- > 0;) {
        best = max(best, distance_at(times_[i]));
        suffix_max_[i] = best;
    }
}

Rat DistanceProfile::distance_at(const Rat& t) const {
    return abs(position_at(trace_->robots[0], t) - position_at(trace_->robots[1], t));
}

Rat DistanceProfile::max_from(const Rat& t) const {
    if (t > horizon_) throw Error(ErrorCode::ScheduleUnderrun, "t = " + t.str() + " is beyond the trace horizon");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    Rat best = distance_at(t);
    if (it != times_.end()) best = max(best, suffix_max_[static_cast<std::size_t>(it - times_.begin())]);
    return best;
}

Rat max_distance_from(const Trace& trace, const Rat& t) { return DistanceProfile(trace).max_from(t); }

namespace {

const Rat& key_time(const CycleSegment& seg, MoveSwitch which) {
    return which == MoveSwitch::MoveStart ? seg.move_start : seg.move_end;
}

bool usable(const std::vector<CycleSegment>& segs, std::size_t cycle) {
    return cycle < segs.size() && segs[cycle].looked && !segs[cycle].decided;
}

/// Both robots finish two more cycles after t inside the run. A robot that
/// has decided never moves again and needs no margin.
bool has_margin(const Trace& trace, const Rat& t) {
    for (const auto& run : trace.robots) {
        std::size_t complete = 0;
        for (const auto& seg : run.segments) {
            if (seg.decided) complete = 2;
            else if (seg.cycle_start >= t && seg.looked && seg.move_end <= trace.end_time) ++complete;
        }
        if (complete < 2) return false;
    }
    return true;
}

}  // namespace

std::vector<AttemptRecord> segment_attempts(const Trace& trace, MoveSwitch which) {
    if (trace.robots.size() != 2) throw Error(ErrorCode::InvalidArgument, "attempts are defined for two robots");
    std::vector<AttemptRecord> out;
    const DistanceProfile profile(trace);
    const bool gathered = trace.status == RunStatus::Gathered;
    std::size_t cursor[2] = {0, 0};
    for (;;) {
        const auto& s0 = trace.robots[0].segments;
        const auto& s1 = trace.robots[1].segments;
        if (!usable(s0, cursor[0]) || !usable(s1, cursor[1])) break;
        const RobotId x = key_time(s1[cursor[1]], which) >= key_time(s0[cursor[0]], which) ? 1 : 0;
        const RobotId y = 1 - x;
        const auto& sx = trace.robots[x].segments;
        const auto& sy = trace.robots[y].segments;
        const CycleSegment& later = sx[cursor[x]];
        const Rat& t = key_time(later, which);

        std::size_t j = cursor[y];
        while (j + 1 < sy.size() && sy[j + 1].looked && sy[j + 1].look_time <= t) ++j;
        if (sy[j].decided) break;

        AttemptRecord a;
        a.later_look = LookRef{x, cursor[x], later.look_time};
        a.paired_look = LookRef{y, j, sy[j].look_time};
        a.all_looks_in_window = 1 + (j - cursor[y] + 1);
        a.t_begin = min(later.look_time, sy[cursor[y]].look_time);
        a.t_end = max(later.move_end, sy[j].move_end);
        if (a.t_end > trace.end_time) break;
        if (!gathered && !has_margin(trace, a.t_end)) break;
        a.max_dist_before = profile.max_from(a.t_begin);
        a.max_dist_after = profile.max_from(a.t_end);
        a.successful = classify_success(a);
        out.push_back(std::move(a));
        cursor[x] += 1;
        cursor[y] = j + 1;
    }
    return out;
}

bool classify_success(const AttemptRecord& attempt) {
    return attempt.max_dist_after * Rat(2) <= attempt.max_dist_before;
}

std::vector<PhaseRecord> segment_phases(const std::vector<AttemptRecord>& attempts) {
    std::vector<PhaseRecord> phases;
    PhaseRecord current;
    for (const auto& a : attempts) {
        current.attempts.push_back(a);
        current.total_looks += a.all_looks_in_window;
        if (a.successful) {
            current.terminal = true;
            phases.push_back(std::move(current));
            current = PhaseRecord{};
        }
    }
    if (!current.attempts.empty()) phases.push_back(std::move(current));
    return phases;
}

namespace {

double log2_rat(const Rat& x) {
    const mpz_class& num = x.raw().get_num();
    const mpz_class& den = x.raw().get_den();
    long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
    return std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
}

}  // namespace

double theorem5_bound(const Rat& delta, const Rat& tau) {
    if (delta.sign() <= 0 || tau.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "delta and tau must be > 0");
    if (delta <= tau) return 18.0;
    return 18.0 * (log2_rat(delta / tau) + 1.0);
}

std::size_t geometric_repeat_count(const Rat& gamma0, const Rat& delta, const Rat& shrink) {
    if (delta.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "delta must be > 0");
    if (gamma0 >= delta) throw Error(ErrorCode::InvalidArgument, "gamma0 must be smaller than delta");
    if (shrink.sign() <= 0 || shrink >= Rat(1)) throw Error(ErrorCode::InvalidArgument, "shrink must be in (0, 1)");
    std::size_t k = 1;
    Rat power = shrink;
    while (!(delta * (Rat(1) - power) > gamma0)) {
        power *= shrink;
        ++k;
    }
    return k;
}

std::size_t straddle_violations(const Trace& trace) {
    std::optional<Rat> first;
    std::size_t violations = 0;
    for (const auto& ev : trace.events) {
        if (ev.kind != EventKind::Look) continue;
        if (!first) first = ev.time;
        if (ev.time == *first) continue;
        for (RobotId r = 0; r < trace.robots.size(); ++r) {
            if (r == ev.robot) continue;
            const auto& segs = trace.robots[r].segments;
            auto it = std::upper_bound(segs.begin(), segs.end(), ev.time,
                                       [](const Rat& time, const CycleSegment& s) { return time < s.cycle_start; });
            const bool inside = it != segs.begin() && std::prev(it)->moving_at(ev.time);
            if (!inside) ++violations;
        }
    }
    return violations;
}

std::size_t looks_before_first_move(const Trace& trace, RobotId robot, RobotId other) {
    std::optional<Rat> first_move;
    for (const auto& ev : trace.events) {
        if (ev.robot == other && ev.kind == EventKind::MoveStart) {
            first_move = ev.time;
            break;
        }
    }
    std::size_t n = 0;
    for (const auto& ev : trace.events) {
        if (ev.robot != robot || ev.kind != EventKind::Look) continue;
        if (first_move && ev.time > *first_move) break;
        ++n;
    }
    return n;
}

TrialSummary summarize_trial(std::size_t trial, const Trace& trace, const AnalysisOptions& options) {
    TrialSummary s;
    s.trial = trial;
    s.gathered = trace.status == RunStatus::Gathered;
    s.total_looks = trace.total_looks();
    s.gather_time = trace.gather_time;
    if (options.attempts && trace.robots.size() == 2) {
        const auto attempts = segment_attempts(trace, options.move_switch);
        s.attempts = attempts.size();
        for (const auto& a : attempts) s.successful_attempts += a.successful;
        for (const auto& p : segment_phases(attempts)) {
            if (!p.terminal) continue;
            ++s.phases;
            s.phase_looks.push_back(p.total_looks);
        }
    }
    return s;
}

double round12(double x) {
    if (!std::isfinite(x) || x == 0) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

namespace {

Estimate mean_estimate(const Rat& sum, const Rat& sum_sq, std::size_t n) {
    Estimate e;
    if (n == 0) return e;
    const Rat count(static_cast<std::int64_t>(n));
    const Rat mean = sum / count;
    e.mean = round12(mean.to_double());
    if (n > 1) {
        const Rat var = (sum_sq - count * mean * mean) / Rat(static_cast<std::int64_t>(n - 1));
        e.halfwidth_3sigma = round12(3.0 * std::sqrt(var.to_double() / static_cast<double>(n)));
    }
    return e;
}

Estimate proportion_estimate(std::size_t hits, std::size_t n) {
    Estimate e;
    if (n == 0) return e;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    e.mean = round12(p);
    e.halfwidth_3sigma = round12(3.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
    return e;
}

}  // namespace

StatsReport aggregate(const std::vector<TrialSummary>& trials) {
    if (trials.empty()) throw Error(ErrorCode::InvalidArgument, "aggregate needs at least one trial");
    StatsReport r;
    r.trials = trials.size();
    Rat look_sum = 0, look_sq = 0, phase_sum = 0, phase_sq = 0;
    std::size_t predicted_hist_best = 0;
    std::map<std::size_t, std::size_t> predicted_hist;
    for (const auto& t : trials) {
        r.gathered += t.gathered;
        const Rat looks(static_cast<std::int64_t>(t.total_looks));
        look_sum += looks;
        look_sq += looks * looks;
        r.attempts += t.attempts;
        r.successful_attempts += t.successful_attempts;
        r.phases += t.phases;
        for (auto pl : t.phase_looks) {
            const Rat v(static_cast<std::int64_t>(pl));
            phase_sum += v;
            phase_sq += v * v;
        }
        if (t.observed_k) ++r.k_histogram[*t.observed_k];
        if (t.predicted_k) ++predicted_hist[*t.predicted_k];
        for (const auto& [name, value] : t.counters) r.counters[name] += value;
    }
    r.gathered_fraction = Rat(static_cast<std::int64_t>(r.gathered), static_cast<std::int64_t>(r.trials));
    r.gathered_halfwidth_3sigma = proportion_estimate(r.gathered, r.trials).halfwidth_3sigma;
    r.total_looks = mean_estimate(look_sum, look_sq, r.trials);
    r.attempt_success_rate = proportion_estimate(r.successful_attempts, r.attempts);
    r.looks_per_phase = mean_estimate(phase_sum, phase_sq, r.phases);
    for (const auto& [k, n] : predicted_hist) {
        if (n > predicted_hist_best) {
            predicted_hist_best = n;
            r.predicted_k = k;
        }
    }
    return r;
}

}  // namespace gathersim
