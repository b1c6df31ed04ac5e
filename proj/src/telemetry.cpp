#include "engage/telemetry.hpp"

#include "engage/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace engage {

void validate_frame(const TelemetryFrame& frame)
{
    if (!std::isfinite(frame.timestamp))
        throw InvalidSignalError("timestamp is not finite");
    if (!std::isfinite(frame.head_angular_velocity) || frame.head_angular_velocity < 0.0)
        throw InvalidSignalError(
            fmt::format("head_angular_velocity {} at t={} must be finite and >= 0",
                        frame.head_angular_velocity, frame.timestamp));
    if (!std::isfinite(frame.locomotion_velocity) || frame.locomotion_velocity < 0.0)
        throw InvalidSignalError(
            fmt::format("locomotion_velocity {} at t={} must be finite and >= 0",
                        frame.locomotion_velocity, frame.timestamp));
    if (frame.gaze_is_text && !frame.gaze_target)
        throw InvalidSignalError(
            fmt::format("gaze_is_text set without a gaze_target at t={}", frame.timestamp));
}

} // namespace engage
