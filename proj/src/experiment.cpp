#include "gathersim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace gathersim {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTrialSalt = 0x7472690000000000ULL;

std::uint64_t trial_seed(const Scenario& s, std::size_t trial) { return derive_seed(s.master_seed ^ kTrialSalt, trial); }

void halving_counts(const Scenario& s, const Trace& trace, TrialSummary& out) {
    const auto& h = *s.analysis.halving;
    out.observed_k = looks_before_first_move(trace, h.robot, h.other);
    const Rat delta = abs(s.robots[h.other].position - s.robots[h.robot].position);
    const Rat shrink = h.alpha / (h.alpha + Rat(1));
    const auto& first = trace.robots[h.other].segments.front();
    if (first.looked && first.move_start < delta) {
        out.predicted_k = geometric_repeat_count(first.move_start, delta, shrink);
        out.counters["k_mismatches"] += *out.observed_k != *out.predicted_k;
    }
}

TrialSummary two_robot_trial(const Scenario& s, std::size_t trial, Trace* trace_out) {
    Trace trace = run(s.robot_specs(), s.adversary, trial_seed(s, trial), s.budgets);
    TrialSummary out = summarize_trial(trial, trace, AnalysisOptions{s.analysis.attempts, s.analysis.move_switch});
    if (s.analysis.straddle) out.counters["straddle_violations"] += static_cast<std::int64_t>(straddle_violations(trace));
    if (s.analysis.halving) halving_counts(s, trace, out);
    if (trace_out) *trace_out = std::move(trace);
    return out;
}

Rat small_rat(Rng& rng, std::int64_t span, std::int64_t max_den) {
    const auto num = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * span + 1))) - span;
    return Rat(num, 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_den))));
}

TrialSummary projection_trial(const Scenario& s, std::size_t trial, Trace* trace_out) {
    static const std::int64_t triples[][3] = {{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {7, 24, 25}, {20, 21, 29}, {9, 40, 41}};
    const std::uint64_t seed = trial_seed(s, trial);
    Rng rng(derive_seed(seed, 0x9e0));
    const auto& t = triples[rng.below(6)];
    Rat a(t[0]), b(t[1]);
    if (rng.coin()) std::swap(a, b);
    if (rng.coin()) a = -a;
    if (rng.coin()) b = -b;
    const Rat scale(1 + static_cast<std::int64_t>(rng.below(5)), 1 + static_cast<std::int64_t>(rng.below(3)));
    const Vec2 p1{small_rat(rng, 50, 4), small_rat(rng, 50, 4)};
    const Vec2 p2 = p1 + scale * Vec2{a, b};
    const Rat half = scale * Rat(t[2]) / Rat(2);
    const LineFrame frame(p1, p2);

    const auto specs = s.robot_specs();
    std::vector<PlaneRobotSpec> plane;
    std::vector<RobotSpec> line;
    for (std::size_t i = 0; i < 2; ++i) {
        plane.push_back(PlaneRobotSpec{i, i == 0 ? p1 : p2, specs[i].speed, specs[i].policy_ref, specs[i].policy});
        line.push_back(RobotSpec{i, i == 0 ? Rat(1) : Rat(-1), specs[i].speed / half, specs[i].policy_ref, specs[i].policy});
    }
    // Destinations are computed off the line and replaced by their projections.
    const BasicDestinationRule<Vec2> rule = [&frame](RobotId, const Vec2& own, const std::vector<Vec2>& observed,
                                                     const Rat& lambda) {
        const Vec2& other = observed.front();
        const Vec2 off = destination(own, other, lambda) + (lambda + Rat(1)) * perp(other - own);
        return frame.point(frame.coordinate(off));
    };
    const auto t2 = run_engine<Vec2>(plane, s.adversary, seed, s.budgets, rule);
    Trace t1 = run(line, s.adversary, seed, s.budgets);

    std::int64_t mismatches = 0, checks = 0;
    if (t1.events.size() != t2.events.size() || t1.end_time != t2.end_time || t1.status != t2.status) ++mismatches;
    const Rat half2 = half * half;
    for (const auto& ev : t2.events) {
        if (ev.time > t1.end_time) {
            ++mismatches;
            continue;
        }
        ++checks;
        const Rat d2 = norm2(position_at(t2.robots[0], ev.time) - position_at(t2.robots[1], ev.time));
        const Rat du = position_at(t1.robots[0], ev.time) - position_at(t1.robots[1], ev.time);
        if (d2 != half2 * du * du) ++mismatches;
    }
    TrialSummary out = summarize_trial(trial, t1, AnalysisOptions{s.analysis.attempts, s.analysis.move_switch});
    out.gathered = t2.status == RunStatus::Gathered;
    out.gather_time = t2.gather_time;
    out.total_looks = t2.total_looks();
    out.counters["projection_mismatches"] += mismatches;
    out.counters["projection_event_checks"] += checks;
    if (trace_out) *trace_out = std::move(t1);
    return out;
}

TrialSummary multirobot_trial(const Scenario& s, std::size_t trial) {
    const std::uint64_t seed = trial_seed(s, trial);
    const auto& m = s.multirobot;
    Rng rng(derive_seed(seed, 1));
    const Configuration config = random_configuration(m.n, rng);
    PipelineOptions opts;
    opts.max_tie_rounds = m.max_tie_rounds;
    opts.activation = m.activation;
    opts.tau_fraction = m.tau_fraction;
    opts.two_robot_budgets = s.budgets;
    const auto res = gather_with_merging(config, seed, opts);

    TrialSummary out;
    out.trial = trial;
    out.gathered = res.gathered && res.final_config.size() == 1 && res.final_config.total_multiplicity() == m.n;
    out.total_looks = res.two_robot_looks;
    out.counters["not_collinear"] += !res.collinear_after_reduce;
    out.counters["farthest_not_preserved"] += !res.farthest_preserved;
    out.counters["partial"] += res.partial;
    out.counters["tie_rounds"] += static_cast<std::int64_t>(res.tie_rounds);
    out.counters["three_point_direct"] += res.three_point_direct;
    out.counters["two_robot_stage"] += res.two_robot_stage;
    if (m.engineered_ties) {
        Rng tie_rng(derive_seed(seed, 2));
        const auto tie = reduce_to_line(engineered_ties_k8(), tie_rng, m.max_tie_rounds, m.activation);
        out.counters["engineered_tie_rounds"] += static_cast<std::int64_t>(tie.tie_rounds);
        // 10 log2(8) rounds
        out.counters["engineered_within_30"] += !tie.partial && tie.tie_rounds <= 30;
    }
    return out;
}

std::string annotate(std::size_t trial, const std::exception& e) {
    return "trial " + std::to_string(trial) + ": " + e.what();
}

}  // namespace

TrialSummary run_trial(const Scenario& scenario, std::size_t trial, Trace* trace_out) {
    switch (scenario.mode) {
        case ScenarioMode::TwoRobot: return two_robot_trial(scenario, trial, trace_out);
        case ScenarioMode::Lemma1Projection: return projection_trial(scenario, trial, trace_out);
        case ScenarioMode::Multirobot: return multirobot_trial(scenario, trial);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown scenario mode");
}

ExperimentResult run_experiment(const Scenario& scenario, const RunOptions& options) {
    validate(scenario);
    const std::size_t n = scenario.trials;
    std::vector<TrialSummary> summaries(n);
    std::vector<std::optional<Trace>> traces(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const bool keep = options.traces != TraceMode::None && scenario.mode != ScenarioMode::Multirobot;

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                Trace trace;
                summaries[i] = run_trial(scenario, i, keep ? &trace : nullptr);
                if (keep && (options.traces == TraceMode::All || !summaries[i].gathered)) traces[i] = std::move(trace);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, n));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.code(), annotate(i, e));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::InvalidArgument, annotate(i, e));
        }
    }

    ExperimentResult result;
    result.report = aggregate(summaries);
    if (scenario.mode == ScenarioMode::TwoRobot && scenario.robots.size() == 2) {
        if (const auto* tb = std::get_if<TauBounded>(&scenario.adversary.kind)) {
            result.report.theorem5_bound =
                round12(theorem5_bound(abs(scenario.robots[1].position - scenario.robots[0].position), tb->tau));
        }
    }
    if (scenario.analysis.halving && scenario.analysis.halving->configured_gap) {
        const auto& h = *scenario.analysis.halving;
        const Rat delta = abs(scenario.robots[h.other].position - scenario.robots[h.robot].position);
        result.report.predicted_k = geometric_repeat_count(*h.configured_gap, delta, h.alpha / (h.alpha + Rat(1)));
    }
    result.trials = std::move(summaries);
    for (std::size_t i = 0; i < n; ++i) {
        if (traces[i]) result.traces.emplace_back(i, std::move(*traces[i]));
    }
    return result;
}

namespace {

json estimate_json(const Estimate& e) { return json{{"mean", e.mean}, {"halfwidth_3sigma", e.halfwidth_3sigma}}; }

Estimate estimate_from(const json& j) { return Estimate{j.at("mean").get<double>(), j.at("halfwidth_3sigma").get<double>()}; }

}  // namespace

json report_to_json(const StatsReport& r) {
    json j;
    j["trials"] = r.trials;
    j["gathered"] = r.gathered;
    j["gathered_fraction"] = r.gathered_fraction.str();
    j["gathered_fraction_decimal"] = round12(r.gathered_fraction.to_double());
    j["gathered_halfwidth_3sigma"] = r.gathered_halfwidth_3sigma;
    j["total_looks"] = estimate_json(r.total_looks);
    j["attempts"] = r.attempts;
    j["successful_attempts"] = r.successful_attempts;
    j["attempt_success_rate"] = estimate_json(r.attempt_success_rate);
    j["phases"] = r.phases;
    j["looks_per_phase"] = estimate_json(r.looks_per_phase);
    j["theorem5_bound"] = r.theorem5_bound ? json(*r.theorem5_bound) : json(nullptr);
    json hist = json::object();
    for (const auto& [k, n] : r.k_histogram) hist[std::to_string(k)] = n;
    j["k_histogram"] = hist;
    j["predicted_k"] = r.predicted_k ? json(*r.predicted_k) : json(nullptr);
    json counters = json::object();
    for (const auto& [name, v] : r.counters) counters[name] = v;
    j["counters"] = counters;
    return j;
}

StatsReport report_from_json(const json& j) {
    StatsReport r;
    r.trials = j.at("trials").get<std::size_t>();
    r.gathered = j.at("gathered").get<std::size_t>();
    r.gathered_fraction = Rat::parse(j.at("gathered_fraction").get<std::string>());
    r.gathered_halfwidth_3sigma = j.at("gathered_halfwidth_3sigma").get<double>();
    r.total_looks = estimate_from(j.at("total_looks"));
    r.attempts = j.at("attempts").get<std::size_t>();
    r.successful_attempts = j.at("successful_attempts").get<std::size_t>();
    r.attempt_success_rate = estimate_from(j.at("attempt_success_rate"));
    r.phases = j.at("phases").get<std::size_t>();
    r.looks_per_phase = estimate_from(j.at("looks_per_phase"));
    if (!j.at("theorem5_bound").is_null()) r.theorem5_bound = j["theorem5_bound"].get<double>();
    for (const auto& [k, n] : j.at("k_histogram").items()) r.k_histogram[std::stoul(k)] = n.get<std::size_t>();
    if (!j.at("predicted_k").is_null()) r.predicted_k = j["predicted_k"].get<std::size_t>();
    for (const auto& [name, v] : j.at("counters").items()) r.counters[name] = v.get<std::int64_t>();
    return r;
}

std::string emit_json(const Scenario& scenario, const StatsReport& report) {
    json doc;
    doc["version"] = kVersion;
    doc["scenario"] = to_json(scenario);
    doc["seed"] = scenario.master_seed;
    doc["report"] = report_to_json(report);
    return doc.dump(2) + "\n";
}

std::string emit_csv(const std::vector<TrialSummary>& trials) {
    std::ostringstream os;
    os << "trial,gathered,total_looks,phases,attempts,first_gather_time\n";
    for (const auto& t : trials) {
        os << t.trial << ',' << (t.gathered ? 1 : 0) << ',' << t.total_looks << ',' << t.phases << ',' << t.attempts
           << ',' << (t.gather_time ? t.gather_time->str() : "") << '\n';
    }
    return os.str();
}

json trace_to_json(std::size_t trial, const Trace& trace) {
    json events = json::array();
    for (const auto& e : trace.events) {
        json ev{{"time", e.time.str()}, {"robot", e.robot}, {"kind", std::string(event_kind_name(e.kind))}, {"cycle", e.cycle}};
        if (e.kind == EventKind::Look) {
            json obs = json::array();
            for (const auto& p : e.observed) obs.push_back(p.str());
            ev["observed"] = obs;
            if (e.lambda) ev["lambda"] = e.lambda->str();
            if (e.destination) ev["destination"] = e.destination->str();
        }
        events.push_back(std::move(ev));
    }
    json looks = json::array();
    for (auto c : trace.look_count) looks.push_back(c);
    return json{{"trial", trial},
                {"status", std::string(run_status_name(trace.status))},
                {"end_time", trace.end_time.str()},
                {"gather_time", trace.gather_time ? json(trace.gather_time->str()) : json(nullptr)},
                {"look_count", looks},
                {"events", events}};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace

void write_outputs(const std::filesystem::path& dir, const Scenario& scenario, const ExperimentResult& result,
                   OutputFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    if (format != OutputFormat::Csv) write_file(dir / "report.json", emit_json(scenario, result.report));
    if (format != OutputFormat::Json) write_file(dir / "trials.csv", emit_csv(result.trials));
    if (!result.traces.empty()) {
        std::filesystem::create_directories(dir / "traces", ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create " + (dir / "traces").string());
        for (const auto& [i, tr] : result.traces) {
            write_file(dir / "traces" / ("trial_" + std::to_string(i) + ".json"), trace_to_json(i, tr).dump(1) + "\n");
        }
    }
}

}  // namespace gathersim
