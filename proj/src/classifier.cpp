#include "engage/classifier.hpp"

#include "engage/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace engage {

namespace {

// Slack for timers that sum many 1/rate steps.
constexpr double kTimerEpsilon = 1e-9;

struct GateTimers
{
    double& sustain;
    double& release;
    bool& active;
};

void step_gate(GateTimers g, double velocity, double dt, double threshold, const GateConfig& config)
{
    if (velocity > threshold)
        g.sustain += dt;
    else
        g.sustain = 0.0;

    if (!g.active) {
        if (g.sustain > 0.0 && g.sustain >= config.sustain - kTimerEpsilon) {
            g.active = true;
            g.release = 0.0;
        }
        return;
    }

    if (velocity < threshold - config.release_margin)
        g.release += dt;
    else
        g.release = 0.0;

    if (g.release >= config.release - kTimerEpsilon) {
        g.active = false;
        g.release = 0.0;
    }
}

} // namespace

void GateConfig::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(walk_threshold) || !positive(run_threshold))
        throw ConfigError("gate thresholds must be > 0");
    if (run_threshold <= walk_threshold)
        throw ConfigError(fmt::format("run threshold {} must exceed walk threshold {}", run_threshold,
                                      walk_threshold));
    if (!positive(sustain) || !positive(release))
        throw ConfigError("gate sustain and release durations must be > 0");
    if (!std::isfinite(release_margin) || release_margin < 0.0 || release_margin >= walk_threshold)
        throw ConfigError("gate release margin must be in [0, walk threshold)");
}

std::string_view to_string(Gate g) noexcept
{
    switch (g) {
    case Gate::None: return "none";
    case Gate::WalkCap: return "walk_cap";
    case Gate::RunForce: return "run_force";
    }
    return "?";
}

GateState apply_gates(GateState state, double velocity, double dt, const GateConfig& config)
{
    step_gate({state.walk_sustain_elapsed, state.walk_release_elapsed, state.walk_active}, velocity,
              dt, config.walk_threshold, config);
    step_gate({state.run_sustain_elapsed, state.run_release_elapsed, state.run_active}, velocity, dt,
              config.run_threshold, config);
    return state;
}

EngagementState gate_ceiling(Gate gate) noexcept
{
    switch (gate) {
    case Gate::WalkCap: return EngagementState::Neutral;
    case Gate::RunForce: return EngagementState::Disengaged;
    case Gate::None: break;
    }
    return EngagementState::HighlyEngaged;
}

EngagementState apply_gate(EngagementState inferred, Gate gate) noexcept
{
    switch (gate) {
    case Gate::RunForce: return EngagementState::Disengaged;
    case Gate::WalkCap: return std::min(inferred, EngagementState::Neutral);
    case Gate::None: break;
    }
    return inferred;
}

void ClassifierBands::validate() const
{
    double previous = 0.0;
    double narrowest = 1.0;
    for (double cut : cuts) {
        if (!std::isfinite(cut) || cut <= previous || cut >= 1.0)
            throw ConfigError("classifier band cuts must be strictly increasing inside (0,1)");
        narrowest = std::min(narrowest, cut - previous);
        previous = cut;
    }
    narrowest = std::min(narrowest, 1.0 - previous);
    if (!std::isfinite(hysteresis_margin) || hysteresis_margin < 0.0 ||
        hysteresis_margin >= narrowest)
        throw ConfigError(fmt::format("hysteresis margin {} must be in [0, {})", hysteresis_margin,
                                      narrowest));
}

EngagementState ClassifierBands::band_of(double score) const noexcept
{
    std::size_t band = 0;
    for (double cut : cuts) {
        if (score >= cut)
            ++band;
    }
    return state_at(band);
}

double ClassifierBands::lower(EngagementState s) const noexcept
{
    const auto i = index_of(s);
    return i == 0 ? 0.0 : cuts[i - 1];
}

double ClassifierBands::upper(EngagementState s) const noexcept
{
    const auto i = index_of(s);
    return i == cuts.size() ? 1.0 : cuts[i];
}

EngagementState classify(double score, const ClassifierBands& bands,
                         std::optional<EngagementState> previous)
{
    const auto raw = bands.band_of(score);
    if (!previous || raw == *previous)
        return raw;

    const double margin = bands.hysteresis_margin;
    if (score - bands.upper(*previous) > margin || bands.lower(*previous) - score > margin)
        return raw;
    return *previous;
}

} // namespace engage
