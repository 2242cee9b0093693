#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "gathersim/experiment.hpp"

using namespace gathersim;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Validation, "cannot read scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_summary(const Scenario& s, const StatsReport& r) {
    std::printf("%s: %zu trials, gathered %zu (%s), mean looks %.6g +- %.3g\n", s.name.c_str(), r.trials, r.gathered,
                r.gathered_fraction.str().c_str(), r.total_looks.mean, r.total_looks.halfwidth_3sigma);
    if (r.attempts) {
        std::printf("  attempts %zu, success rate %.6g +- %.3g\n", r.attempts, r.attempt_success_rate.mean,
                    r.attempt_success_rate.halfwidth_3sigma);
    }
    if (r.phases) {
        std::printf("  phases %zu, looks per phase %.6g +- %.3g\n", r.phases, r.looks_per_phase.mean,
                    r.looks_per_phase.halfwidth_3sigma);
    }
    if (r.theorem5_bound) std::printf("  look bound 18(log2(delta/tau)+1) = %.6g\n", *r.theorem5_bound);
    for (const auto& [name, v] : r.counters) std::printf("  %s = %lld\n", name.c_str(), static_cast<long long>(v));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic simulator for randomized gathering of mobile robots"};
    app.require_subcommand(1);
    auto* run_cmd = app.add_subcommand("run", "run the trials of a scenario file");

    std::string scenario_file;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format = "both";
    std::string traces = "none";
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());

    run_cmd->add_option("scenario", scenario_file, "scenario JSON file")->required();
    run_cmd->add_option("--trials", trials, "override the number of trials");
    run_cmd->add_option("--seed", seed, "override the master seed");
    run_cmd->add_option("--out", out_dir, "output directory (report.json, trials.csv, traces/)");
    run_cmd->add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
    run_cmd->add_option("--traces", traces, "none, failed or all")->check(CLI::IsMember({"none", "failed", "all"}));
    run_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    Scenario scenario;
    try {
        scenario = parse_scenario(read_file(scenario_file));
        if (trials) scenario.trials = *trials;
        if (seed) scenario.master_seed = *seed;
        validate(scenario);
    } catch (const Error& e) {
        std::cerr << "gathersim: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        RunOptions opts;
        opts.workers = workers;
        opts.traces = traces == "all" ? TraceMode::All : traces == "failed" ? TraceMode::Failed : TraceMode::None;
        const auto result = run_experiment(scenario, opts);
        print_summary(scenario, result.report);
        if (!out_dir.empty()) {
            const OutputFormat fmt =
                format == "json" ? OutputFormat::Json : format == "csv" ? OutputFormat::Csv : OutputFormat::Both;
            write_outputs(out_dir, scenario, result, fmt);
        }
    } catch (const Error& e) {
        std::cerr << "gathersim: " << e.what() << '\n';
        return e.code() == ErrorCode::Validation ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "gathersim: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
