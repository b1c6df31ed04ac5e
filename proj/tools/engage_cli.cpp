// engage: replay traces, generate synthetic scenarios, benchmark inference
// latency and print the effective configuration.

#include "engage/bench.hpp"
#include "engage/config.hpp"
#include "engage/errors.hpp"
#include "engage/scenario.hpp"
#include "engage/session.hpp"
#include "engage/trace.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace engage;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

/// Raised for bad arguments detected after CLI11 parsing.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ConfigOptions
{
    std::string path;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App& app, ConfigOptions& opts)
{
    app.add_option("-c,--config", opts.path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", opts.overrides, "Override one value, e.g. fusion.alpha=0.5")
        ->take_all();
}

EngineConfig resolve_config(const ConfigOptions& opts)
{
    nlohmann::json doc = nlohmann::json::object();
    if (!opts.path.empty()) {
        std::ifstream in(opts.path);
        if (!in)
            throw ConfigError(fmt::format("cannot open config '{}'", opts.path));
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(fmt::format("config '{}': {}", opts.path, e.what()));
        }
    }
    for (const auto& assignment : opts.overrides)
        apply_override(doc, assignment);
    return config_from_json(doc);
}

/// Writes through a sibling temp file so a failure never leaves a partial
/// output behind.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        body(out);
        out.flush();
        if (!out)
            throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
    }
    fs::rename(tmp, path);
}

fs::path sibling(const fs::path& trace, std::string_view suffix)
{
    fs::path p = trace;
    p.replace_extension();
    p += suffix;
    return p;
}

Catalog resolve_catalog(const std::string& flag, const Trace& trace, const fs::path& trace_path)
{
    if (!flag.empty())
        return load_catalog(flag);
    const auto& ref = trace.header.exhibit_catalog_ref;
    if (ref.empty())
        return {};
    fs::path candidate = ref;
    if (candidate.is_relative())
        candidate = trace_path.parent_path() / candidate;
    if (fs::exists(candidate))
        return load_catalog(candidate.string());
    std::cerr << fmt::format("warning: catalog '{}' not found; running without exhibit content\n",
                             candidate.string());
    return {};
}

struct ReplayOptions
{
    ConfigOptions config;
    std::string trace;
    std::string catalog;
    std::string timeline;
    std::string report;
    std::string cache_file;
    bool quiet = false;
};

int run_replay(const ReplayOptions& opts)
{
    EngineConfig config = resolve_config(opts.config);
    const fs::path trace_path = opts.trace;
    const Trace trace = load_trace(opts.trace);
    const Catalog catalog = resolve_catalog(opts.catalog, trace, trace_path);

    auto cache = std::make_shared<ContentCache>();
    const std::string cache_path = opts.cache_file.empty() ? config.cache_path : opts.cache_file;
    if (!cache_path.empty())
        cache->load_file(cache_path);

    const auto result =
        replay(trace, config, catalog, make_provider(config), make_executor(config), cache);

    const fs::path timeline_path =
        opts.timeline.empty() ? sibling(trace_path, ".timeline.csv") : fs::path(opts.timeline);
    const fs::path report_path =
        opts.report.empty() ? sibling(trace_path, ".report.json") : fs::path(opts.report);

    write_file(timeline_path, [&](std::ostream& out) { write_timeline(out, result.timeline); });
    write_file(report_path, [&](std::ostream& out) { out << report_record(result.metrics) << '\n'; });
    if (!cache_path.empty())
        cache->save_file(cache_path);

    if (!opts.quiet) {
        std::cout << report_table(result.metrics);
        std::cout << fmt::format("timeline: {}\nreport:   {}\n", timeline_path.string(),
                                 report_path.string());
    }
    return kExitOk;
}

struct SimulateOptions
{
    std::string kind;
    double duration = 60.0;
    std::uint64_t seed = 1;
    double rate = 90.0;
    std::optional<double> velocity;
    std::string exhibit = "copper_brazier";
    std::vector<std::string> targets{"tide_clock", "glass_lens", "star_chart"};
    double glance = 0.6;
    std::string segments = "focused-reader:20,scanner:10,walker:10,runner:10";
    std::string catalog_ref = "catalog.jsonl";
    std::string out;
};

Scenario build_scenario(const SimulateOptions& opts)
{
    if (opts.kind == "focused-reader")
        return FocusedReader{opts.exhibit};
    if (opts.kind == "scanner")
        return Scanner{opts.targets, opts.glance};
    if (opts.kind == "walker")
        return Walker{opts.velocity.value_or(Walker{}.velocity)};
    if (opts.kind == "runner")
        return Runner{opts.velocity.value_or(Runner{}.velocity)};
    return parse_segments(opts.segments, opts.exhibit, opts.targets);
}

int run_simulate(const SimulateOptions& opts)
{
    Scenario scenario;
    try {
        scenario = build_scenario(opts);
        validate_scenario(scenario);
        if (!(opts.duration > 0.0) || !(opts.rate > 0.0))
            throw ConfigError("duration and rate must be positive");
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }

    Trace trace = generate_trace(scenario, opts.duration, opts.seed, opts.rate);
    trace.header.exhibit_catalog_ref = opts.catalog_ref;
    if (opts.out.empty() || opts.out == "-")
        write_trace(std::cout, trace);
    else
        write_file(opts.out, [&](std::ostream& out) { write_trace(out, trace); });
    return kExitOk;
}

struct BenchOptions
{
    ConfigOptions config;
    double duration = 60.0;
    std::uint64_t seed = 1;
    std::optional<int> pin;
    bool json = false;
};

int run_bench_command(const BenchOptions& opts)
{
    const EngineConfig config = resolve_config(opts.config);
    if (!(opts.duration > 0.0))
        throw UsageError("--duration must be positive");
    if (opts.pin && !pin_current_thread(*opts.pin))
        std::cerr << fmt::format("warning: could not pin to cpu {}\n", *opts.pin);

    const BenchReport report = run_bench(config, opts.duration, opts.seed);
    std::cout << (opts.json ? bench_record(report) + "\n" : format_bench(report));
    return kExitOk;
}

int print_config(const ConfigOptions& opts)
{
    std::cout << to_json(resolve_config(opts)).dump(2) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Engagement-adaptive exhibit content engine"};
    app.require_subcommand(0, 1);

    ConfigOptions top_config;
    bool top_print = false;
    app.add_flag("--print-config", top_print, "Print the effective configuration and exit");
    add_config_options(app, top_config);

    ReplayOptions replay_opts;
    auto* replay_cmd = app.add_subcommand("replay", "Run the closed loop over a recorded trace");
    replay_cmd->add_option("trace", replay_opts.trace, "Trace file (JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    add_config_options(*replay_cmd, replay_opts.config);
    replay_cmd->add_option("--catalog", replay_opts.catalog, "Exhibit catalog (JSON lines)")
        ->check(CLI::ExistingFile);
    replay_cmd->add_option("--timeline", replay_opts.timeline,
                           "Timeline CSV path (default: next to the trace)");
    replay_cmd->add_option("--report", replay_opts.report,
                           "Metrics report path (default: next to the trace)");
    replay_cmd->add_option("--cache-file", replay_opts.cache_file,
                           "Content cache file, overrides cache_path");
    replay_cmd->add_flag("-q,--quiet", replay_opts.quiet, "Do not print the summary table");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic scenario trace");
    sim_cmd->add_option("kind", sim.kind, "Scenario kind")
        ->required()
        ->check(CLI::IsMember({"focused-reader", "scanner", "walker", "runner", "mixed"}));
    sim_cmd->add_option("--duration", sim.duration, "Seconds of telemetry")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    sim_cmd->add_option("--rate", sim.rate, "Frame rate in Hz")->capture_default_str();
    sim_cmd->add_option("--velocity", sim.velocity, "Walker or runner speed in m/s");
    sim_cmd->add_option("--exhibit", sim.exhibit, "Exhibit read by focused-reader")
        ->capture_default_str();
    sim_cmd->add_option("--targets", sim.targets, "Scanner glance targets")
        ->delimiter(',')
        ->capture_default_str();
    sim_cmd->add_option("--glance", sim.glance, "Scanner glance length in s")->capture_default_str();
    sim_cmd->add_option("--segments", sim.segments, "Mixed segments, kind[@velocity]:seconds,...")
        ->capture_default_str();
    sim_cmd->add_option("--catalog-ref", sim.catalog_ref, "Catalog reference in the header")
        ->capture_default_str();
    sim_cmd->add_option("-o,--out", sim.out, "Output path (default: stdout)");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Measure per-frame inference latency");
    add_config_options(*bench_cmd, bench.config);
    bench_cmd->add_option("--duration", bench.duration, "Workload seconds")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Workload seed")->capture_default_str();
    bench_cmd->add_option("--pin", bench.pin, "Pin the measuring thread to this CPU");
    bench_cmd->add_flag("--json", bench.json, "Emit one JSON record");

    ConfigOptions print_opts;
    auto* print_cmd = app.add_subcommand("print-config", "Print the effective configuration");
    add_config_options(*print_cmd, print_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (top_print)
            return print_config(top_config);
        if (*replay_cmd)
            return run_replay(replay_opts);
        if (*sim_cmd)
            return run_simulate(sim);
        if (*bench_cmd)
            return run_bench_command(bench);
        if (*print_cmd)
            return print_config(print_opts);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
