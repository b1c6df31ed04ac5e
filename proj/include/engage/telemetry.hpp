#pragma once

#include <optional>
#include <string>

namespace engage {

/// One headset sample. Angular velocity arrives pre-computed.
struct TelemetryFrame
{
    double timestamp = 0.0;             // seconds, strictly increasing within a trace
    double head_angular_velocity = 0.0; // deg/s
    double locomotion_velocity = 0.0;   // m/s
    std::optional<std::string> gaze_target;
    bool gaze_is_text = false;
    std::optional<std::string> card_id; // pickup event on this frame, if any

    bool operator==(const TelemetryFrame&) const = default;
};

/// Throws InvalidSignalError if velocities are non-finite or negative, the
/// timestamp is non-finite, or gaze_is_text is set without a gaze target.
void validate_frame(const TelemetryFrame& frame);

/// Unit-scaled signals feeding the fusion stage.
struct NormalizedSignals
{
    double head_stability = 0.0; // [0,1]
    double gaze_dwell = 0.0;     // [0,1]
    double locomotion = 0.0;     // [0,1]
    int reading = 0;             // {0,1}
};

} // namespace engage
