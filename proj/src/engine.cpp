#include "engage/engine.hpp"

#include "engage/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace engage {

namespace {

// Frame timestamps and tick instants are both built from k / rate; allow for
// the last-bit disagreement between the two.
constexpr double kTickEpsilon = 1e-9;

} // namespace

std::string_view to_string(PipelineOrder order) noexcept
{
    return order == PipelineOrder::WindowThenSmooth ? "window_then_smooth" : "smooth_then_window";
}

std::optional<PipelineOrder> parse_pipeline_order(std::string_view name) noexcept
{
    if (name == "window_then_smooth")
        return PipelineOrder::WindowThenSmooth;
    if (name == "smooth_then_window")
        return PipelineOrder::SmoothThenWindow;
    return std::nullopt;
}

void InferenceConfig::validate() const
{
    normalization.validate();
    weights.validate();
    bands.validate();
    gates.validate();
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0)
        throw ConfigError(fmt::format("fusion.alpha must be in (0,1], got {}", alpha));
    if (!std::isfinite(window_duration) || window_duration <= 0.0)
        throw ConfigError("fusion.window_s must be > 0");
    if (!std::isfinite(state_rate) || state_rate <= 0.0)
        throw ConfigError("fusion.state_rate_hz must be > 0");
    if (!std::isfinite(nominal_rate) || nominal_rate <= 0.0)
        throw ConfigError("nominal_rate must be > 0");
}

InferenceEngine::InferenceEngine(InferenceConfig config)
    : config_(std::move(config)), window_(config_.window_duration)
{
    config_.validate();
}

FrameResult InferenceEngine::push(const TelemetryFrame& frame)
{
    validate_frame(frame);
    if (first_timestamp_ && frame.timestamp <= last_timestamp_)
        throw OrderingError(fmt::format("frame timestamp {} does not follow {}", frame.timestamp,
                                        last_timestamp_));

    const double t = frame.timestamp;
    FrameResult result;
    result.dt = first_timestamp_ ? t - last_timestamp_ : 0.0;
    result.effective_dt =
        std::min(result.dt, config_.normalization.max_step_factor / config_.nominal_rate);

    const auto& norm = config_.normalization;
    dwell_ = update_dwell(std::move(dwell_), frame, result.effective_dt, norm.gaze_grace);
    result.signals = normalize(frame, dwell_, norm);
    result.raw = fuse(physical_score(result.signals, config_.weights), result.signals.reading,
                      config_.weights);

    if (config_.order == PipelineOrder::WindowThenSmooth)
        windowed_ = window_.push(t, result.raw);

    gates_ = apply_gates(gates_, frame.locomotion_velocity, result.effective_dt, config_.gates);

    if (!first_timestamp_)
        first_timestamp_ = t;
    last_timestamp_ = t;
    ++frames_;

    const double period = 1.0 / config_.state_rate;
    std::uint64_t due = 0;
    while (t + kTickEpsilon >= *first_timestamp_ + static_cast<double>(next_tick_) * period) {
        ++next_tick_;
        ++due;
    }
    if (due == 0)
        return result;

    // The first tick seeds the smoother with its target.
    EngagementEstimate estimate{.timestamp = t, .raw = result.raw};
    const bool seed = !inferred_.has_value();
    if (config_.order == PipelineOrder::WindowThenSmooth) {
        smoothed_ = seed ? windowed_ : smoothed_;
        for (std::uint64_t i = seed ? 1 : 0; i < due; ++i)
            smoothed_ = smooth(smoothed_, windowed_, config_.alpha);
        estimate.final_score = smoothed_;
    } else {
        smoothed_ = seed ? result.raw : smoothed_;
        for (std::uint64_t i = seed ? 1 : 0; i < due; ++i)
            smoothed_ = smooth(smoothed_, result.raw, config_.alpha);
        windowed_ = window_.push(t, smoothed_);
        estimate.final_score = windowed_;
    }
    estimate.windowed = windowed_;
    estimate.smoothed = smoothed_;

    TickOutput tick;
    tick.estimate = estimate;
    tick.gate = gates_.active_gate();
    tick.inferred = classify(estimate.final_score, config_.bands, inferred_);
    tick.state = apply_gate(tick.inferred, tick.gate);
    tick.transitioned = inferred_.has_value() && tick.state != state_;
    if (tick.transitioned)
        ++state_seq_;
    tick.state_seq = state_seq_;

    inferred_ = tick.inferred;
    state_ = tick.state;
    result.tick = tick;
    return result;
}

} // namespace engage
