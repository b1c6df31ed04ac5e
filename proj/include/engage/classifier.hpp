#pragma once

#include "engage/state.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace engage {

struct GateConfig
{
    double walk_threshold = 1.2; // m/s
    double run_threshold = 2.0;  // m/s
    double sustain = 0.5;        // s above threshold before a gate engages
    double release = 0.5;        // s below (threshold - release_margin) before it lets go
    double release_margin = 0.1; // m/s

    void validate() const;
};

enum class Gate : std::uint8_t { None, WalkCap, RunForce };

std::string_view to_string(Gate g) noexcept;

struct GateState
{
    double walk_sustain_elapsed = 0.0;
    double run_sustain_elapsed = 0.0;
    double walk_release_elapsed = 0.0;
    double run_release_elapsed = 0.0;
    bool walk_active = false;
    bool run_active = false;

    /// The run gate dominates the walk gate.
    Gate active_gate() const noexcept
    {
        if (run_active)
            return Gate::RunForce;
        return walk_active ? Gate::WalkCap : Gate::None;
    }

    bool operator==(const GateState&) const = default;
};

/// Advances both gate timers by one frame of `dt` seconds at `velocity`.
GateState apply_gates(GateState state, double velocity, double dt, const GateConfig& config);

/// Highest state a gate admits: HighlyEngaged, Neutral, or Disengaged.
EngagementState gate_ceiling(Gate gate) noexcept;

/// Walk gate caps at Neutral; run gate forces exactly Disengaged.
EngagementState apply_gate(EngagementState inferred, Gate gate) noexcept;

/// Score-to-state partition of [0,1] with hysteresis.
///
/// `cuts` are the four interior boundaries in ascending order; band i is
/// [cuts[i-1], cuts[i]) and the top band is closed at 1.
struct ClassifierBands
{
    std::array<double, 4> cuts{0.2, 0.4, 0.6, 0.8};
    double hysteresis_margin = 0.05;

    void validate() const;

    EngagementState band_of(double score) const noexcept;
    double lower(EngagementState s) const noexcept;
    double upper(EngagementState s) const noexcept;
};

/// Maps a score to a state. Without a previous state this is the plain band
/// lookup; otherwise the previous state holds until the score leaves its band
/// by more than the hysteresis margin.
EngagementState classify(double score, const ClassifierBands& bands,
                         std::optional<EngagementState> previous = std::nullopt);

} // namespace engage
