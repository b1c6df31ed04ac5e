#pragma once

#include "engage/config.hpp"
#include "engage/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace engage {

struct LatencySummary
{
    double min_us = 0.0;
    double median_us = 0.0;
    double p99_us = 0.0;
    double max_us = 0.0;
    std::size_t samples = 0;
};

/// Nearest-rank order statistics over nanosecond samples.
LatencySummary summarize_latency(std::vector<double> samples_ns);

struct BenchReport
{
    LatencySummary latency;
    std::size_t ticks = 0;
    std::string config_fingerprint;
};

std::string config_fingerprint(const EngineConfig& config);

/// Synthetic mixed workload covering every scenario kind.
Trace bench_workload(double duration, std::uint64_t seed, double rate = 90.0);

/// Wall-clock cost of InferenceEngine::push per frame, provider excluded.
std::vector<double> time_inference(const EngineConfig& config, const Trace& trace);

BenchReport run_bench(const EngineConfig& config, double duration, std::uint64_t seed = 1);

std::string format_bench(const BenchReport& report);
std::string bench_record(const BenchReport& report);

/// Pins the calling thread to one CPU. Returns false when unsupported.
bool pin_current_thread(int cpu);

} // namespace engage
