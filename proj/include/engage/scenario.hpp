#pragma once

#include "engage/trace.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace engage {

/// Still, reading one exhibit's text panel.
struct FocusedReader
{
    std::string exhibit;
};

/// Short glances hopping across targets while ambling.
struct Scanner
{
    std::vector<std::string> targets;
    double glance_duration = 0.6; // s
};

/// Brisk walking; velocity in (1.2, 2.0] m/s.
struct Walker
{
    double velocity = 1.6;
};

/// Running; velocity above 2.0 m/s.
struct Runner
{
    double velocity = 2.5;
};

using SegmentKind = std::variant<FocusedReader, Scanner, Walker, Runner>;

struct Segment
{
    SegmentKind kind;
    double duration = 0.0; // s
};

/// Segments played in order and cycled until the requested duration.
struct Mixed
{
    std::vector<Segment> segments;
};

using Scenario = std::variant<FocusedReader, Scanner, Walker, Runner, Mixed>;

/// Throws ConfigError for non-positive durations or velocities, a runner at
/// or below 2.0 m/s, a walker outside (1.2, 2.0], or empty target lists.
void validate_scenario(const Scenario& scenario);

std::string scenario_name(const Scenario& scenario);

/// Frames at t = k / rate for k in [0, floor(duration * rate)). Deterministic
/// for a fixed seed; jitter is bounded uniform noise.
std::vector<TelemetryFrame> generate_scenario(const Scenario& scenario, double duration,
                                              std::uint64_t seed, double rate = 90.0);

Trace generate_trace(const Scenario& scenario, double duration, std::uint64_t seed,
                     double rate = 90.0);

/// Parses "focused-reader:20,scanner:10,walker:10,runner:10" into a Mixed
/// scenario using default parameters for each kind.
Mixed parse_segments(const std::string& spec, const std::string& exhibit,
                     const std::vector<std::string>& scan_targets);

} // namespace engage
