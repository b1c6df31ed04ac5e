#pragma once

#include "engage/classifier.hpp"
#include "engage/fusion.hpp"
#include "engage/normalization.hpp"
#include "engage/state.hpp"
#include "engage/telemetry.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace engage {

/// Composition order of the two temporal filters.
enum class PipelineOrder : std::uint8_t {
    WindowThenSmooth, ///< rolling mean per frame, interpolation per state tick
    SmoothThenWindow, ///< interpolation per state tick, rolling mean over smoothed ticks
};

std::string_view to_string(PipelineOrder order) noexcept;
std::optional<PipelineOrder> parse_pipeline_order(std::string_view name) noexcept;

struct InferenceConfig
{
    NormalizationConfig normalization;
    FusionWeights weights;
    double alpha = 0.35;
    double window_duration = 4.0; // s
    double state_rate = 10.0;     // Hz, smoothing and classification cadence
    PipelineOrder order = PipelineOrder::WindowThenSmooth;
    ClassifierBands bands;
    GateConfig gates;
    double nominal_rate = 90.0; // Hz, telemetry frame rate

    void validate() const;
};

struct EngagementEstimate
{
    double timestamp = 0.0;
    double raw = 0.0;
    double windowed = 0.0;
    double smoothed = 0.0;
    double final_score = 0.0; // the score handed to the classifier

    bool operator==(const EngagementEstimate&) const = default;
};

/// One state-update tick.
struct TickOutput
{
    EngagementEstimate estimate;
    Gate gate = Gate::None;
    EngagementState inferred = EngagementState::HighlyDisengaged; // before gating
    EngagementState state = EngagementState::HighlyDisengaged;    // emitted
    std::uint64_t state_seq = 0; // number of emitted-state transitions so far
    bool transitioned = false;

    bool operator==(const TickOutput&) const = default;
};

struct FrameResult
{
    NormalizedSignals signals;
    double raw = 0.0;
    double dt = 0.0;           // actual time since the previous frame
    double effective_dt = 0.0; // dt capped for dwell and gate integration
    std::optional<TickOutput> tick;
};

/// Per-session inference state machine: normalization, fusion, rolling
/// window, smoothing, gates and classification.
///
/// Deterministic: time comes only from frame timestamps.
class InferenceEngine
{
public:
    explicit InferenceEngine(InferenceConfig config = {});

    /// Processes one frame. Throws InvalidSignalError or OrderingError; the
    /// engine state is unchanged when it throws.
    FrameResult push(const TelemetryFrame& frame);

    const InferenceConfig& config() const noexcept { return config_; }
    const DwellTracker& dwell() const noexcept { return dwell_; }
    const GateState& gates() const noexcept { return gates_; }
    const RollingWindow& window() const noexcept { return window_; }

    /// Emitted state in force; HighlyDisengaged before the first tick.
    EngagementState state() const noexcept { return state_; }
    std::uint64_t state_seq() const noexcept { return state_seq_; }
    double smoothed() const noexcept { return smoothed_; }
    std::uint64_t frames() const noexcept { return frames_; }

private:
    InferenceConfig config_;
    DwellTracker dwell_;
    GateState gates_;
    RollingWindow window_;

    std::optional<double> first_timestamp_;
    double last_timestamp_ = 0.0;
    std::uint64_t next_tick_ = 0;
    std::uint64_t frames_ = 0;

    double smoothed_ = 0.0;
    double windowed_ = 0.0;
    std::optional<EngagementState> inferred_;
    EngagementState state_ = EngagementState::HighlyDisengaged;
    std::uint64_t state_seq_ = 0;
};

} // namespace engage
