#include "engage/normalization.hpp"

#include "engage/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace engage {

namespace {

void require_signal(double value, const char* name)
{
    if (!std::isfinite(value) || value < 0.0)
        throw InvalidSignalError(fmt::format("{} must be finite and >= 0, got {}", name, value));
}

void require_positive(double value, const char* name)
{
    if (!std::isfinite(value) || value <= 0.0)
        throw ConfigError(fmt::format("normalization.{} must be > 0, got {}", name, value));
}

} // namespace

void NormalizationConfig::validate() const
{
    require_positive(head_threshold, "head_threshold");
    require_positive(gaze_dwell_threshold, "gaze_dwell_threshold");
    require_positive(locomotion_baseline, "locomotion_baseline");
    require_positive(reading_dwell, "reading_dwell");
    require_positive(max_step_factor, "max_step_factor");
    if (!std::isfinite(gaze_grace) || gaze_grace < 0.0)
        throw ConfigError("normalization.gaze_grace must be >= 0");
}

double normalize_head(double degrees_per_second, double threshold)
{
    require_signal(degrees_per_second, "head angular velocity");
    return std::clamp(1.0 - degrees_per_second / threshold, 0.0, 1.0);
}

double normalize_locomotion(double meters_per_second, double baseline)
{
    require_signal(meters_per_second, "locomotion velocity");
    return std::clamp(1.0 - meters_per_second / baseline, 0.0, 1.0);
}

DwellTracker update_dwell(DwellTracker tracker, const TelemetryFrame& frame, double dt, double grace)
{
    if (frame.gaze_target) {
        if (tracker.current_target == frame.gaze_target) {
            tracker.dwell_elapsed += dt;
            if (frame.gaze_is_text)
                tracker.text_dwell_elapsed += dt;
        } else {
            tracker.current_target = frame.gaze_target;
            tracker.dwell_elapsed = 0.0;
            tracker.text_dwell_elapsed = 0.0;
        }
        tracker.miss_elapsed = 0.0;
        return tracker;
    }

    if (!tracker.current_target)
        return tracker;

    tracker.miss_elapsed += dt;
    if (tracker.miss_elapsed > grace)
        tracker = DwellTracker{};
    return tracker;
}

double normalize_gaze(const DwellTracker& tracker, double threshold)
{
    if (!tracker.current_target)
        return 0.0;
    return std::clamp(tracker.dwell_elapsed / threshold, 0.0, 1.0);
}

int reading_context(const DwellTracker& tracker, double threshold)
{
    return tracker.text_dwell_elapsed > threshold ? 1 : 0;
}

NormalizedSignals normalize(const TelemetryFrame& frame, const DwellTracker& tracker,
                            const NormalizationConfig& config)
{
    return NormalizedSignals{
        .head_stability = normalize_head(frame.head_angular_velocity, config.head_threshold),
        .gaze_dwell = normalize_gaze(tracker, config.gaze_dwell_threshold),
        .locomotion = normalize_locomotion(frame.locomotion_velocity, config.locomotion_baseline),
        .reading = reading_context(tracker, config.reading_dwell),
    };
}

} // namespace engage
