#include "engage/bench.hpp"

#include "engage/engine.hpp"
#include "engage/scenario.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

#if defined(__linux__)
#include <pthread.h>
#include <sched.h>
#endif

namespace engage {

namespace {

double nearest_rank(const std::vector<double>& sorted, double p)
{
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(p * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

} // namespace

LatencySummary summarize_latency(std::vector<double> samples_ns)
{
    LatencySummary s;
    s.samples = samples_ns.size();
    if (samples_ns.empty())
        return s;
    std::sort(samples_ns.begin(), samples_ns.end());
    s.min_us = samples_ns.front() / 1e3;
    s.median_us = nearest_rank(samples_ns, 0.5) / 1e3;
    s.p99_us = nearest_rank(samples_ns, 0.99) / 1e3;
    s.max_us = samples_ns.back() / 1e3;
    return s;
}

std::string config_fingerprint(const EngineConfig& config)
{
    // FNV-1a over the canonical JSON dump.
    const std::string text = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

Trace bench_workload(double duration, std::uint64_t seed, double rate)
{
    Mixed mixed;
    mixed.segments = {
        {FocusedReader{"copper_brazier"}, 12.0},
        {Scanner{{"tide_clock", "glass_lens", "star_chart"}, 0.6}, 10.0},
        {Walker{1.6}, 8.0},
        {Runner{2.6}, 6.0},
        {FocusedReader{"star_chart"}, 10.0},
    };
    return generate_trace(mixed, duration, seed, rate);
}

std::vector<double> time_inference(const EngineConfig& config, const Trace& trace)
{
    using Clock = std::chrono::steady_clock;

    InferenceConfig inference = config.inference;
    inference.nominal_rate = trace.header.nominal_rate;

    {
        // Warm-up pass so first-touch allocation is not measured.
        InferenceEngine warm(inference);
        for (const auto& f : trace.frames)
            warm.push(f);
    }

    InferenceEngine engine(inference);
    std::vector<double> samples;
    samples.reserve(trace.frames.size());
    for (const auto& f : trace.frames) {
        const auto t0 = Clock::now();
        const auto result = engine.push(f);
        const auto t1 = Clock::now();
        samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
        (void)result;
    }
    return samples;
}

BenchReport run_bench(const EngineConfig& config, double duration, std::uint64_t seed)
{
    const Trace trace = bench_workload(duration, seed, config.inference.nominal_rate);
    BenchReport report;
    report.latency = summarize_latency(time_inference(config, trace));
    report.ticks = report.latency.samples;
    report.config_fingerprint = config_fingerprint(config);
    return report;
}

std::string format_bench(const BenchReport& report)
{
    const auto& l = report.latency;
    return fmt::format("ticks      {}\n"
                       "min        {:.3f} us\n"
                       "median     {:.3f} us\n"
                       "p99        {:.3f} us\n"
                       "max        {:.3f} us\n"
                       "config     {}\n",
                       report.ticks, l.min_us, l.median_us, l.p99_us, l.max_us,
                       report.config_fingerprint);
}

std::string bench_record(const BenchReport& report)
{
    const auto& l = report.latency;
    nlohmann::json j = {
        {"ticks", report.ticks},
        {"min_us", l.min_us},
        {"median_us", l.median_us},
        {"p99_us", l.p99_us},
        {"max_us", l.max_us},
        {"config_fingerprint", report.config_fingerprint},
    };
    return j.dump();
}

bool pin_current_thread(int cpu)
{
#if defined(__linux__)
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(cpu, &set);
    return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
#else
    (void)cpu;
    return false;
#endif
}

} // namespace engage
