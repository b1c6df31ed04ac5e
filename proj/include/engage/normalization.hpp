#pragma once

#include "engage/telemetry.hpp"

#include <optional>
#include <string>

namespace engage {

struct NormalizationConfig
{
    double head_threshold = 30.0;        // deg/s; at or above maps to 0
    double gaze_dwell_threshold = 1.0;   // s; at or above maps to 1
    double locomotion_baseline = 1.2;    // m/s; at or above maps to 0
    double reading_dwell = 2.0;          // s; reading context requires strictly more
    double gaze_grace = 0.25;            // s of raycast miss tolerated before a dwell resets
    double max_step_factor = 3.0;        // per-frame dt cap, in multiples of the nominal period

    void validate() const;
};

/// clamp(1 - omega / threshold, 0, 1). Throws InvalidSignalError on
/// non-finite or negative input.
double normalize_head(double degrees_per_second, double threshold = 30.0);

/// clamp(1 - v / baseline, 0, 1). Throws InvalidSignalError on non-finite or
/// negative input.
double normalize_locomotion(double meters_per_second, double baseline = 1.2);

/// Per-session gaze dwell bookkeeping.
///
/// Invariants: dwell_elapsed resets whenever the target changes and
/// text_dwell_elapsed <= dwell_elapsed.
struct DwellTracker
{
    std::optional<std::string> current_target;
    double dwell_elapsed = 0.0;
    double text_dwell_elapsed = 0.0;
    double miss_elapsed = 0.0;

    bool operator==(const DwellTracker&) const = default;
};

/// Advances the tracker by one frame covering `dt` seconds (dt >= 0).
///
/// - Same target: dwell grows by dt, text dwell too when the hit is a text panel.
/// - New target: acquired with all counters at zero.
/// - Miss: dwell is frozen; after more than `grace` seconds of continuous miss
///   the tracker drops its target and clears.
DwellTracker update_dwell(DwellTracker tracker, const TelemetryFrame& frame, double dt,
                          double grace = 0.25);

/// clamp(dwell / threshold, 0, 1) while a target is held, else 0.
double normalize_gaze(const DwellTracker& tracker, double threshold = 1.0);

/// 1 iff text dwell is strictly greater than `threshold`.
int reading_context(const DwellTracker& tracker, double threshold = 2.0);

NormalizedSignals normalize(const TelemetryFrame& frame, const DwellTracker& tracker,
                            const NormalizationConfig& config);

} // namespace engage
