#include "gathersim/scenario.hpp"

#include <set>

namespace gathersim {

using nlohmann::json;

std::string_view scenario_mode_name(ScenarioMode mode) noexcept {
    switch (mode) {
        case ScenarioMode::TwoRobot: return "two_robot";
        case ScenarioMode::Lemma1Projection: return "lemma1_projection";
        case ScenarioMode::Multirobot: return "multirobot";
    }
    return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::Validation, path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || k == key;
        if (!ok) fail(path + "." + key, "unknown field");
    }
}

Rat rat(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        return Rat(mpq_class(mpz_class(std::to_string(v), 10)));
    }
    if (j.is_number_float()) fail(path, "floating-point numbers are not exact; write the value as a string");
    if (!j.is_string()) fail(path, "expected a rational string such as \"1/2\"");
    if (auto r = Rat::try_parse(j.get<std::string>())) return *r;
    fail(path, "'" + j.get<std::string>() + "' is not an exact rational");
}

std::uint64_t uint(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        const auto v = j.get<std::int64_t>();
        if (v < 0) fail(path, "expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }
    fail(path, "expected a non-negative integer");
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

json rat_json(const Rat& r) { return r.str(); }

// --- delays -----------------------------------------------------------------

Delays delays(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected a [wait, compute] pair");
    return Delays{rat(j[0], idx(path, 0)), rat(j[1], idx(path, 1))};
}

std::vector<Delays> delay_list(const json& j, const std::string& path) {
    std::vector<Delays> out;
    const auto& a = array(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(delays(a[i], idx(path, i)));
    return out;
}

json delays_json(const std::vector<Delays>& ds) {
    json a = json::array();
    for (const auto& d : ds) a.push_back(json::array({rat_json(d.wait), rat_json(d.compute)}));
    return a;
}

DelaySequence delay_sequence(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"prefix", "repeat"});
    DelaySequence s;
    if (j.contains("prefix")) s.prefix = delay_list(j["prefix"], path + ".prefix");
    if (j.contains("repeat")) s.repeat = delay_list(j["repeat"], path + ".repeat");
    return s;
}

json sequence_json(const DelaySequence& s) { return json{{"prefix", delays_json(s.prefix)}, {"repeat", delays_json(s.repeat)}}; }

/// Wait-only sequences (computation delay fixed at 0).
DelaySequence wait_sequence(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"prefix", "repeat"});
    DelaySequence s;
    for (const char* part : {"prefix", "repeat"}) {
        if (!j.contains(part)) continue;
        const auto p = path + "." + part;
        const auto& a = array(j[part], p);
        auto& dst = std::string_view(part) == "prefix" ? s.prefix : s.repeat;
        for (std::size_t i = 0; i < a.size(); ++i) dst.push_back(Delays{rat(a[i], idx(p, i)), Rat(0)});
    }
    return s;
}

json wait_sequence_json(const DelaySequence& s) {
    json out = json::object();
    for (const auto& [name, part] : {std::pair{"prefix", &s.prefix}, std::pair{"repeat", &s.repeat}}) {
        json a = json::array();
        for (const auto& d : *part) a.push_back(rat_json(d.wait));
        out[name] = a;
    }
    return out;
}

RatRange range(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected a [lo, hi] pair");
    return RatRange{rat(j[0], idx(path, 0)), rat(j[1], idx(path, 1))};
}

json range_json(const RatRange& r) { return json::array({rat_json(r.lo), rat_json(r.hi)}); }

}  // namespace

// --- policies ---------------------------------------------------------------

LambdaPolicy parse_policy(const json& j, const std::string& path) {
    require_object(j, path);
    const std::string kind = string(field(j, "kind", path), path + ".kind");
    if (kind == "DETERMINISTIC") {
        reject_unknown(j, path, {"kind", "lambda"});
        return LambdaPolicy::deterministic(rat(field(j, "lambda", path), path + ".lambda"));
    }
    if (kind == "FINITE_MIXTURE") {
        reject_unknown(j, path, {"kind", "choices"});
        std::vector<MixtureChoice> choices;
        const auto p = path + ".choices";
        const auto& a = array(field(j, "choices", path), p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto pi = idx(p, i);
            require_object(a[i], pi);
            reject_unknown(a[i], pi, {"lambda", "probability"});
            choices.push_back(MixtureChoice{rat(field(a[i], "lambda", pi), pi + ".lambda"),
                                            rat(field(a[i], "probability", pi), pi + ".probability")});
        }
        try {
            return LambdaPolicy::finite_mixture(std::move(choices));
        } catch (const Error& e) {
            fail(p, e.what());
        }
    }
    if (kind == "THREE_CHOICE") {
        reject_unknown(j, path, {"kind"});
        return LambdaPolicy::three_choice();
    }
    if (kind == "TAU_TRIPLE") {
        reject_unknown(j, path, {"kind"});
        return LambdaPolicy::tau_triple();
    }
    if (kind == "KNOWN_ALPHA") {
        reject_unknown(j, path, {"kind", "alpha", "weights"});
        Rat alpha = rat(field(j, "alpha", path), path + ".alpha");
        try {
            if (!j.contains("weights")) return LambdaPolicy::known_alpha(std::move(alpha));
            const auto p = path + ".weights";
            const auto& a = array(j["weights"], p);
            if (a.size() != 4) fail(p, "expected four weights");
            std::array<Rat, 4> w;
            for (std::size_t i = 0; i < 4; ++i) w[i] = rat(a[i], idx(p, i));
            return LambdaPolicy::known_alpha(std::move(alpha), std::move(w));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Validation) throw;
            fail(path, e.what());
        }
    }
    if (kind == "ORACLE") {
        reject_unknown(j, path, {"kind", "script"});
        std::vector<Rat> script;
        const auto p = path + ".script";
        const auto& a = array(field(j, "script", path), p);
        for (std::size_t i = 0; i < a.size(); ++i) script.push_back(rat(a[i], idx(p, i)));
        return LambdaPolicy::oracle(std::move(script));
    }
    fail(path + ".kind", "unknown policy kind '" + kind + "'");
}

json to_json(const LambdaPolicy& policy) {
    json j;
    j["kind"] = std::string(policy_kind_name(policy.kind()));
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DeterministicLambda>) {
                j["lambda"] = rat_json(v.lambda);
            } else if constexpr (std::is_same_v<T, FiniteMixtureLambda>) {
                json a = json::array();
                for (const auto& c : v.choices) a.push_back({{"lambda", rat_json(c.lambda)}, {"probability", rat_json(c.probability)}});
                j["choices"] = a;
            } else if constexpr (std::is_same_v<T, KnownAlphaLambda>) {
                j["alpha"] = rat_json(v.alpha);
                json a = json::array();
                for (const auto& w : v.weights) a.push_back(rat_json(w));
                j["weights"] = a;
            } else if constexpr (std::is_same_v<T, OracleLambda>) {
                json a = json::array();
                for (const auto& x : v.script) a.push_back(rat_json(x));
                j["script"] = a;
            }
        },
        policy.value());
    return j;
}

// --- adversaries ------------------------------------------------------------

AdversaryPolicy parse_adversary(const json& j, const std::string& path) {
    require_object(j, path);
    const std::string kind = string(field(j, "kind", path), path + ".kind");
    AdversaryPolicy out;
    if (j.contains("seed")) out.seed = uint(j["seed"], path + ".seed");
    if (kind == "OBLIVIOUS_EXPLICIT") {
        reject_unknown(j, path, {"kind", "seed", "per_robot"});
        ObliviousExplicit e;
        const auto p = path + ".per_robot";
        const auto& a = array(field(j, "per_robot", path), p);
        for (std::size_t i = 0; i < a.size(); ++i) e.per_robot.push_back(delay_list(a[i], idx(p, i)));
        out.kind = std::move(e);
    } else if (kind == "OBLIVIOUS_GENERATED") {
        const std::string gen = string(field(j, "generator", path), path + ".generator");
        if (gen == "sequence") {
            reject_unknown(j, path, {"kind", "seed", "generator", "per_robot"});
            GeneratedSequence g;
            const auto p = path + ".per_robot";
            const auto& a = array(field(j, "per_robot", path), p);
            for (std::size_t i = 0; i < a.size(); ++i) g.per_robot.push_back(delay_sequence(a[i], idx(p, i)));
            out.kind = ObliviousGenerated{std::move(g)};
        } else if (gen == "uniform") {
            reject_unknown(j, path, {"kind", "seed", "generator", "wait", "compute"});
            out.kind = ObliviousGenerated{GeneratedUniform{range(field(j, "wait", path), path + ".wait"),
                                                           range(field(j, "compute", path), path + ".compute")}};
        } else if (gen == "per_robot") {
            reject_unknown(j, path, {"kind", "seed", "generator", "per_robot"});
            GeneratedPerRobot g;
            const auto p = path + ".per_robot";
            const auto& a = array(field(j, "per_robot", path), p);
            for (std::size_t i = 0; i < a.size(); ++i) g.per_robot.push_back(parse_adversary(a[i], idx(p, i)));
            out.kind = ObliviousGenerated{std::move(g)};
        } else {
            fail(path + ".generator", "unknown generator '" + gen + "' (sequence, uniform or per_robot)");
        }
    } else if (kind == "TAU_BOUNDED") {
        reject_unknown(j, path, {"kind", "seed", "tau"});
        out.kind = TauBounded{rat(field(j, "tau", path), path + ".tau")};
    } else if (kind == "ASYNC_IC") {
        reject_unknown(j, path, {"kind", "seed", "wait"});
        const auto& w = field(j, "wait", path);
        const auto p = path + ".wait";
        AsyncIc a;
        if (w.is_array()) {
            a.wait = range(w, p);
        } else if (w.is_object()) {
            reject_unknown(w, p, {"per_robot"});
            std::vector<DelaySequence> seqs;
            const auto pp = p + ".per_robot";
            const auto& arr = array(field(w, "per_robot", p), pp);
            for (std::size_t i = 0; i < arr.size(); ++i) seqs.push_back(wait_sequence(arr[i], idx(pp, i)));
            a.wait = std::move(seqs);
        } else {
            a.wait = rat(w, p);
        }
        out.kind = std::move(a);
    } else if (kind == "ADAPTIVE_THM6") {
        reject_unknown(j, path, {"kind", "seed", "initial_waits"});
        AdaptiveThm6 a;
        const auto p = path + ".initial_waits";
        const auto& arr = array(field(j, "initial_waits", path), p);
        for (std::size_t i = 0; i < arr.size(); ++i) a.initial_waits.push_back(rat(arr[i], idx(p, i)));
        out.kind = std::move(a);
    } else if (kind == "SSYNC_ROUNDS") {
        reject_unknown(j, path, {"kind", "seed", "round_length", "pattern"});
        SsyncRounds s;
        s.round_length = rat(field(j, "round_length", path), path + ".round_length");
        if (j.contains("pattern")) {
            const auto p = string(j["pattern"], path + ".pattern");
            if (p == "alternate") s.pattern = SsyncRounds::Pattern::Alternate;
            else if (p == "all") s.pattern = SsyncRounds::Pattern::All;
            else fail(path + ".pattern", "expected 'alternate' or 'all'");
        }
        out.kind = std::move(s);
    } else {
        fail(path + ".kind", "unknown adversary kind '" + kind + "'");
    }
    try {
        validate(out);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return out;
}

json to_json(const AdversaryPolicy& policy) {
    json j;
    j["kind"] = std::string(adversary_kind_name(policy.tag()));
    if (policy.seed) j["seed"] = *policy.seed;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ObliviousExplicit>) {
                json a = json::array();
                for (const auto& r : v.per_robot) a.push_back(delays_json(r));
                j["per_robot"] = a;
            } else if constexpr (std::is_same_v<T, ObliviousGenerated>) {
                std::visit(
                    [&](const auto& g) {
                        using G = std::decay_t<decltype(g)>;
                        if constexpr (std::is_same_v<G, GeneratedSequence>) {
                            j["generator"] = "sequence";
                            json a = json::array();
                            for (const auto& s : g.per_robot) a.push_back(sequence_json(s));
                            j["per_robot"] = a;
                        } else if constexpr (std::is_same_v<G, GeneratedUniform>) {
                            j["generator"] = "uniform";
                            j["wait"] = range_json(g.wait);
                            j["compute"] = range_json(g.compute);
                        } else {
                            j["generator"] = "per_robot";
                            json a = json::array();
                            for (const auto& s : g.per_robot) a.push_back(to_json(s));
                            j["per_robot"] = a;
                        }
                    },
                    v.generator);
            } else if constexpr (std::is_same_v<T, TauBounded>) {
                j["tau"] = rat_json(v.tau);
            } else if constexpr (std::is_same_v<T, AsyncIc>) {
                if (const auto* c = std::get_if<Rat>(&v.wait)) {
                    j["wait"] = rat_json(*c);
                } else if (const auto* r = std::get_if<RatRange>(&v.wait)) {
                    j["wait"] = range_json(*r);
                } else {
                    json a = json::array();
                    for (const auto& s : std::get<std::vector<DelaySequence>>(v.wait)) a.push_back(wait_sequence_json(s));
                    j["wait"] = json{{"per_robot", a}};
                }
            } else if constexpr (std::is_same_v<T, AdaptiveThm6>) {
                json a = json::array();
                for (const auto& w : v.initial_waits) a.push_back(rat_json(w));
                j["initial_waits"] = a;
            } else if constexpr (std::is_same_v<T, SsyncRounds>) {
                j["round_length"] = rat_json(v.round_length);
                j["pattern"] = v.pattern == SsyncRounds::Pattern::All ? "all" : "alternate";
            }
        },
        policy.kind);
    return j;
}

// --- scenario ---------------------------------------------------------------

std::vector<RobotSpec> Scenario::robot_specs() const {
    std::vector<RobotSpec> out;
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const auto& d = robots[i];
        auto it = policies.find(d.policy);
        LambdaPolicy p = it != policies.end() ? it->second : LambdaPolicy::three_choice();
        out.push_back(RobotSpec{i, d.position, d.speed, d.policy, std::move(p)});
    }
    return out;
}

void validate(const Scenario& s) {
    if (s.trials < 1) fail("$.trials", "trials >= 1 required");
    if (s.budgets.max_total_looks < 1) fail("$.budgets.max_total_looks", "must be >= 1");
    if (s.budgets.max_time.sign() <= 0) fail("$.budgets.max_time", "must be > 0");
    if (s.mode == ScenarioMode::Multirobot) {
        if (s.multirobot.n < 2) fail("$.multirobot.n", "need at least two robots");
        if (s.multirobot.tau_fraction.sign() <= 0) fail("$.multirobot.tau_fraction", "must be > 0");
        return;
    }
    if (s.robots.size() < 2) fail("$.robots", "need at least two robots");
    if (s.mode == ScenarioMode::Lemma1Projection && s.robots.size() != 2) fail("$.robots", "projection runs use two robots");
    for (std::size_t i = 0; i < s.robots.size(); ++i) {
        const auto& r = s.robots[i];
        if (r.speed.sign() <= 0) fail(idx("$.robots", i) + ".speed", "must be > 0");
        if (r.policy != "default" && !s.policies.count(r.policy)) {
            fail(idx("$.robots", i) + ".policy", "undefined policy '" + r.policy + "'");
        }
    }
    if (s.analysis.halving) {
        const auto& h = *s.analysis.halving;
        if (h.robot >= s.robots.size() || h.other >= s.robots.size() || h.robot == h.other) {
            fail("$.analysis.halving", "robot and other must name two different robots");
        }
        if (h.alpha.sign() <= 0) fail("$.analysis.halving.alpha", "must be > 0");
    }
    if (auto* a = std::get_if<AdaptiveThm6>(&s.adversary.kind); a && a->initial_waits.size() != s.robots.size()) {
        fail("$.adversary.initial_waits", "one initial wait per robot expected");
    }
}

Scenario parse_scenario_json(const json& doc) {
    const std::string root = "$";
    require_object(doc, root);
    reject_unknown(doc, root,
                   {"name", "mode", "trials", "master_seed", "budgets", "policies", "robots", "adversary", "analysis",
                    "multirobot", "description"});
    Scenario s;
    s.name = string(field(doc, "name", root), "$.name");
    if (doc.contains("mode")) {
        const auto m = string(doc["mode"], "$.mode");
        if (m == "two_robot") s.mode = ScenarioMode::TwoRobot;
        else if (m == "lemma1_projection") s.mode = ScenarioMode::Lemma1Projection;
        else if (m == "multirobot") s.mode = ScenarioMode::Multirobot;
        else fail("$.mode", "expected two_robot, lemma1_projection or multirobot");
    }
    if (doc.contains("trials")) s.trials = uint(doc["trials"], "$.trials");
    if (doc.contains("master_seed")) s.master_seed = uint(doc["master_seed"], "$.master_seed");
    if (doc.contains("budgets")) {
        const auto& b = doc["budgets"];
        require_object(b, "$.budgets");
        reject_unknown(b, "$.budgets", {"max_total_looks", "max_time"});
        if (b.contains("max_total_looks")) s.budgets.max_total_looks = uint(b["max_total_looks"], "$.budgets.max_total_looks");
        if (b.contains("max_time")) s.budgets.max_time = rat(b["max_time"], "$.budgets.max_time");
    }
    if (doc.contains("policies")) {
        require_object(doc["policies"], "$.policies");
        for (const auto& [name, p] : doc["policies"].items()) s.policies.emplace(name, parse_policy(p, "$.policies." + name));
    }
    if (doc.contains("robots")) {
        const auto& a = array(doc["robots"], "$.robots");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto p = idx("$.robots", i);
            require_object(a[i], p);
            reject_unknown(a[i], p, {"position", "speed", "policy"});
            RobotDescriptor r;
            if (a[i].contains("position")) r.position = rat(a[i]["position"], p + ".position");
            else if (s.mode != ScenarioMode::Lemma1Projection) fail(p + ".position", "missing required field");
            if (a[i].contains("speed")) r.speed = rat(a[i]["speed"], p + ".speed");
            if (a[i].contains("policy")) r.policy = string(a[i]["policy"], p + ".policy");
            s.robots.push_back(std::move(r));
        }
    }
    if (s.mode != ScenarioMode::Multirobot) s.adversary = parse_adversary(field(doc, "adversary", root), "$.adversary");
    if (doc.contains("analysis")) {
        const auto& a = doc["analysis"];
        const std::string p = "$.analysis";
        require_object(a, p);
        reject_unknown(a, p, {"attempts", "move_switch", "straddle", "halving"});
        if (a.contains("attempts")) s.analysis.attempts = boolean(a["attempts"], p + ".attempts");
        if (a.contains("straddle")) s.analysis.straddle = boolean(a["straddle"], p + ".straddle");
        if (a.contains("move_switch")) {
            const auto m = string(a["move_switch"], p + ".move_switch");
            if (m == "move_start") s.analysis.move_switch = MoveSwitch::MoveStart;
            else if (m == "move_end") s.analysis.move_switch = MoveSwitch::MoveEnd;
            else fail(p + ".move_switch", "expected move_start or move_end");
        }
        if (a.contains("halving")) {
            const auto& h = a["halving"];
            const auto hp = p + ".halving";
            require_object(h, hp);
            reject_unknown(h, hp, {"robot", "other", "alpha", "configured_gap"});
            HalvingCheck hc;
            if (h.contains("robot")) hc.robot = uint(h["robot"], hp + ".robot");
            if (h.contains("other")) hc.other = uint(h["other"], hp + ".other");
            if (h.contains("alpha")) hc.alpha = rat(h["alpha"], hp + ".alpha");
            if (h.contains("configured_gap")) hc.configured_gap = rat(h["configured_gap"], hp + ".configured_gap");
            s.analysis.halving = hc;
        }
    }
    if (doc.contains("multirobot")) {
        const auto& m = doc["multirobot"];
        const std::string p = "$.multirobot";
        require_object(m, p);
        reject_unknown(m, p, {"n", "tau_fraction", "max_tie_rounds", "activation", "engineered_ties"});
        if (m.contains("n")) s.multirobot.n = uint(m["n"], p + ".n");
        if (m.contains("tau_fraction")) s.multirobot.tau_fraction = rat(m["tau_fraction"], p + ".tau_fraction");
        if (m.contains("max_tie_rounds")) s.multirobot.max_tie_rounds = uint(m["max_tie_rounds"], p + ".max_tie_rounds");
        if (m.contains("engineered_ties")) s.multirobot.engineered_ties = boolean(m["engineered_ties"], p + ".engineered_ties");
        if (m.contains("activation")) {
            const auto a = string(m["activation"], p + ".activation");
            if (a == "all") s.multirobot.activation = Activation::All;
            else if (a == "random_subset") s.multirobot.activation = Activation::RandomSubset;
            else fail(p + ".activation", "expected all or random_subset");
        }
    }
    validate(s);
    return s;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Validation, std::string("$: malformed JSON: ") + e.what());
    }
    return parse_scenario_json(doc);
}

json to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["mode"] = std::string(scenario_mode_name(s.mode));
    j["trials"] = s.trials;
    j["master_seed"] = s.master_seed;
    j["budgets"] = {{"max_total_looks", s.budgets.max_total_looks}, {"max_time", rat_json(s.budgets.max_time)}};
    json a = {{"attempts", s.analysis.attempts},
              {"move_switch", s.analysis.move_switch == MoveSwitch::MoveStart ? "move_start" : "move_end"},
              {"straddle", s.analysis.straddle}};
    if (s.analysis.halving) {
        const auto& h = *s.analysis.halving;
        json hj = {{"robot", h.robot}, {"other", h.other}, {"alpha", rat_json(h.alpha)}};
        if (h.configured_gap) hj["configured_gap"] = rat_json(*h.configured_gap);
        a["halving"] = hj;
    }
    j["analysis"] = a;
    if (s.mode == ScenarioMode::Multirobot) {
        j["multirobot"] = {{"n", s.multirobot.n},
                           {"tau_fraction", rat_json(s.multirobot.tau_fraction)},
                           {"max_tie_rounds", s.multirobot.max_tie_rounds},
                           {"activation", s.multirobot.activation == Activation::All ? "all" : "random_subset"},
                           {"engineered_ties", s.multirobot.engineered_ties}};
        return j;
    }
    json pols = json::object();
    for (const auto& [name, p] : s.policies) pols[name] = to_json(p);
    j["policies"] = pols;
    json robots = json::array();
    for (const auto& r : s.robots) {
        robots.push_back({{"position", rat_json(r.position)}, {"speed", rat_json(r.speed)}, {"policy", r.policy}});
    }
    j["robots"] = robots;
    j["adversary"] = to_json(s.adversary);
    return j;
}

}  // namespace gathersim
