#include "engage/fusion.hpp"

#include "engage/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace engage {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

void require_unit(double w, const char* name)
{
    if (!std::isfinite(w) || w < 0.0 || w > 1.0)
        throw ConfigError(fmt::format("fusion.{} must be in [0,1], got {}", name, w));
}

} // namespace

void FusionWeights::validate() const
{
    require_unit(physical, "w_phys");
    require_unit(reading, "w_read");
    require_unit(head, "w_head");
    require_unit(gaze, "w_gaze");
    require_unit(locomotion, "w_loco");
    if (std::abs(physical + reading - 1.0) > kWeightSumTolerance)
        throw ConfigError(fmt::format("fusion weights w_phys + w_read = {}, expected 1",
                                      physical + reading));
    if (std::abs(head + gaze + locomotion - 1.0) > kWeightSumTolerance)
        throw ConfigError(fmt::format("fusion sub-weights w_head + w_gaze + w_loco = {}, expected 1",
                                      head + gaze + locomotion));
}

double physical_score(const NormalizedSignals& s, const FusionWeights& w)
{
    return w.head * s.head_stability + w.gaze * s.gaze_dwell + w.locomotion * s.locomotion;
}

double fuse(double physical, int reading, const FusionWeights& w)
{
    return w.physical * physical + w.reading * static_cast<double>(reading);
}

RollingWindow::RollingWindow(double duration) : duration_(duration)
{
    if (!std::isfinite(duration) || duration <= 0.0)
        throw ConfigError(fmt::format("window duration must be > 0, got {}", duration));
}

void RollingWindow::add(double x) noexcept
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

double RollingWindow::push(double timestamp, double value)
{
    if (!samples_.empty() && timestamp < samples_.back().timestamp)
        throw OrderingError(fmt::format("window sample at t={} precedes newest t={}", timestamp,
                                        samples_.back().timestamp));

    samples_.push_back({timestamp, value});
    add(value);

    const double horizon = timestamp - duration_;
    while (samples_.front().timestamp < horizon) {
        add(-samples_.front().value);
        samples_.pop_front();
    }
    if (samples_.size() == 1) {
        sum_ = value;
        compensation_ = 0.0;
    }
    return mean();
}

double RollingWindow::mean() const noexcept
{
    if (samples_.empty())
        return 0.0;
    return (sum_ + compensation_) / static_cast<double>(samples_.size());
}

} // namespace engage
