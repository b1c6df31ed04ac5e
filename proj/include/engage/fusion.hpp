#pragma once

#include "engage/telemetry.hpp"

#include <cstddef>
#include <deque>

namespace engage {

/// Fusion weights. Physical/reading weights sum to 1, and so do the three
/// physical sub-weights.
struct FusionWeights
{
    double physical = 0.75;
    double reading = 0.25;
    double head = 0.35;
    double gaze = 0.30;
    double locomotion = 0.35;

    /// Throws ConfigError unless every weight is in [0,1] and both groups sum
    /// to 1 within 1e-9.
    void validate() const;
};

double physical_score(const NormalizedSignals& signals, const FusionWeights& weights);

/// physical_weight * physical + reading_weight * reading.
double fuse(double physical, int reading, const FusionWeights& weights);

/// Time-based rolling mean over the last `duration` seconds.
///
/// Samples with timestamp >= newest - duration are retained. The running sum
/// is Neumaier-compensated so the streaming mean tracks a full rescan.
class RollingWindow
{
public:
    struct Sample
    {
        double timestamp;
        double value;
    };

    explicit RollingWindow(double duration = 4.0);

    /// Inserts a sample, evicts expired ones and returns the new mean.
    /// Throws OrderingError if `timestamp` precedes the newest sample.
    double push(double timestamp, double value);

    /// Mean of the retained samples; 0 when empty.
    double mean() const noexcept;

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    double duration() const noexcept { return duration_; }
    const std::deque<Sample>& samples() const noexcept { return samples_; }

private:
    void add(double x) noexcept;

    double duration_;
    std::deque<Sample> samples_;
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// previous + alpha * (target - previous).
constexpr double smooth(double previous, double target, double alpha) noexcept
{
    return previous + alpha * (target - previous);
}

} // namespace engage
