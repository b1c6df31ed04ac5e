#include "engage/bench.hpp"
#include "engage/engine.hpp"

#include "support/oracles.hpp"

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <deque>

using namespace engage;

namespace {

double min_median_us(const EngineConfig& cfg, const Trace& trace, int rounds)
{
    double best = 1e300;
    for (int i = 0; i < rounds; ++i)
        best = std::min(best, summarize_latency(time_inference(cfg, trace)).median_us);
    return best;
}

/// Per-frame cost of a window that evicts old samples but re-sums every
/// retained one.
double naive_median_us(const Trace& trace, double window)
{
    std::deque<std::pair<double, double>> retained;
    std::vector<double> samples;
    double sink = 0.0;
    for (const auto& f : trace.frames) {
        const auto t0 = std::chrono::steady_clock::now();
        retained.emplace_back(f.timestamp, f.locomotion_velocity);
        while (retained.front().first < f.timestamp - window)
            retained.pop_front();
        double sum = 0.0;
        for (const auto& [t, v] : retained)
            sum += v;
        sink += sum / static_cast<double>(retained.size());
        samples.push_back(
            std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count());
    }
    EXPECT_GE(sink, 0.0);
    return summarize_latency(samples).median_us;
}

} // namespace

TEST(Bench, NearestRankSummary)
{
    std::vector<double> ns;
    for (int i = 1; i <= 100; ++i)
        ns.push_back(i * 1000.0);
    std::reverse(ns.begin(), ns.end());
    const auto s = summarize_latency(ns);
    EXPECT_EQ(s.samples, 100u);
    EXPECT_DOUBLE_EQ(s.min_us, 1.0);
    EXPECT_DOUBLE_EQ(s.median_us, 50.0);
    EXPECT_DOUBLE_EQ(s.p99_us, 99.0);
    EXPECT_DOUBLE_EQ(s.max_us, 100.0);
    EXPECT_EQ(summarize_latency({}).samples, 0u);
    const auto one = summarize_latency({2500.0});
    EXPECT_DOUBLE_EQ(one.median_us, 2.5);
    EXPECT_DOUBLE_EQ(one.p99_us, 2.5);
}

TEST(Bench, ReportIsOrderedAndCoversWorkload)
{
    const auto r = run_bench(EngineConfig{}, 60.0);
    EXPECT_EQ(r.ticks, 5400u);
    EXPECT_LE(r.latency.min_us, r.latency.median_us);
    EXPECT_LE(r.latency.median_us, r.latency.p99_us);
    EXPECT_LE(r.latency.p99_us, r.latency.max_us);
    EXPECT_LT(r.latency.p99_us, 1000.0);
    const auto j = nlohmann::json::parse(bench_record(r));
    EXPECT_EQ(j["ticks"], 5400);
    EXPECT_NE(format_bench(r).find("p99"), std::string::npos);
}

TEST(Bench, FingerprintTracksConfig)
{
    EngineConfig a, b;
    EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
    b.inference.alpha = 0.4;
    EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
}

TEST(Bench, WorkloadIsDeterministicAndMixed)
{
    const auto a = bench_workload(60.0, 3);
    EXPECT_EQ(a, bench_workload(60.0, 3));
    bool fast = false, reading = false;
    for (const auto& f : a.frames) {
        fast = fast || f.locomotion_velocity > 2.0;
        reading = reading || f.gaze_is_text;
    }
    EXPECT_TRUE(fast);
    EXPECT_TRUE(reading);
}

TEST(Bench, TenfoldWindowStaysBounded)
{
    const auto trace = bench_workload(120.0, 1);
    EngineConfig narrow;
    EngineConfig wide;
    wide.inference.window_duration = 40.0;
    const double narrow_us = min_median_us(narrow, trace, 5);
    const double wide_us = min_median_us(wide, trace, 5);
    // A rescanning window would cost roughly ten times more per frame.
    const double naive_narrow = naive_median_us(trace, 4.0);
    const double naive_wide = naive_median_us(trace, 40.0);
    EXPECT_GT(naive_wide, 3.0 * naive_narrow);
    EXPECT_LT(wide_us, 2.0 * narrow_us + 0.2)
        << "narrow " << narrow_us << " us, wide " << wide_us << " us";
}
