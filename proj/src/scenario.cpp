#include "engage/scenario.hpp"

#include "engage/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace engage {

namespace {

constexpr double kScanGap = 0.3; // s without a hit between glances, longer than the gaze grace
constexpr std::array<const char*, 4> kAmbientTargets{"ambient_wall", "ambient_floor",
                                                     "ambient_window", "ambient_door"};

/// Bounded uniform jitter from a fixed-width engine; the mapping to [0,1) is
/// spelled out so output does not depend on the standard library's
/// distributions.
class Jitter
{
public:
    explicit Jitter(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

private:
    std::mt19937_64 engine_;
};

struct FrameMaker
{
    Jitter& rng;
    double t;
    double local; // seconds since the segment started

    TelemetryFrame operator()(const FocusedReader& s) const
    {
        TelemetryFrame f;
        f.timestamp = t;
        f.head_angular_velocity = rng.uniform(0.0, 4.0);
        f.locomotion_velocity = rng.uniform(0.0, 0.05);
        f.gaze_target = s.exhibit;
        f.gaze_is_text = true;
        return f;
    }

    TelemetryFrame operator()(const Scanner& s) const
    {
        TelemetryFrame f;
        f.timestamp = t;
        f.head_angular_velocity = rng.uniform(25.0, 60.0);
        f.locomotion_velocity = rng.uniform(0.4, 0.9);
        const double cycle = s.glance_duration + kScanGap;
        const auto glance = static_cast<std::size_t>(std::floor(local / cycle));
        if (local - static_cast<double>(glance) * cycle < s.glance_duration) {
            f.gaze_target = s.targets[glance % s.targets.size()];
            f.gaze_is_text = glance % 2 == 0;
        }
        return f;
    }

    TelemetryFrame operator()(const Walker& s) const
    {
        TelemetryFrame f;
        f.timestamp = t;
        const double j = std::min(0.05, (s.velocity - 1.2) / 2.0);
        f.locomotion_velocity = std::min(2.0, s.velocity + rng.uniform(-j, j));
        f.head_angular_velocity = rng.uniform(10.0, 40.0);
        ambient_glance(f, 0.8, 0.4);
        return f;
    }

    TelemetryFrame operator()(const Runner& s) const
    {
        TelemetryFrame f;
        f.timestamp = t;
        const double j = std::min(0.1, (s.velocity - 2.0) / 2.0);
        f.locomotion_velocity = s.velocity + rng.uniform(-j, j);
        f.head_angular_velocity = rng.uniform(20.0, 60.0);
        ambient_glance(f, 0.6, 0.25);
        return f;
    }

    void ambient_glance(TelemetryFrame& f, double cycle, double on) const
    {
        const auto k = static_cast<std::size_t>(std::floor(local / cycle));
        if (local - static_cast<double>(k) * cycle < on)
            f.gaze_target = kAmbientTargets[k % kAmbientTargets.size()];
    }
};

void validate_kind(const SegmentKind& kind)
{
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FocusedReader>) {
                if (s.exhibit.empty())
                    throw ConfigError("focused-reader needs an exhibit id");
            } else if constexpr (std::is_same_v<T, Scanner>) {
                if (s.targets.empty())
                    throw ConfigError("scanner needs at least one target");
                if (!(s.glance_duration > 0.0) || !std::isfinite(s.glance_duration))
                    throw ConfigError("scanner glance duration must be > 0");
            } else if constexpr (std::is_same_v<T, Walker>) {
                if (!(s.velocity > 1.2 && s.velocity <= 2.0))
                    throw ConfigError(
                        fmt::format("walker velocity must be in (1.2, 2.0] m/s, got {}", s.velocity));
            } else if constexpr (std::is_same_v<T, Runner>) {
                if (!(s.velocity > 2.0) || !std::isfinite(s.velocity))
                    throw ConfigError(
                        fmt::format("runner velocity must be > 2.0 m/s, got {}", s.velocity));
            }
        },
        kind);
}

std::string kind_name(const SegmentKind& kind)
{
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FocusedReader>)
                return "focused-reader";
            else if constexpr (std::is_same_v<T, Scanner>)
                return "scanner";
            else if constexpr (std::is_same_v<T, Walker>)
                return "walker";
            else
                return "runner";
        },
        kind);
}

} // namespace

void validate_scenario(const Scenario& scenario)
{
    if (const auto* mixed = std::get_if<Mixed>(&scenario)) {
        if (mixed->segments.empty())
            throw ConfigError("mixed scenario needs at least one segment");
        for (const auto& seg : mixed->segments) {
            if (!(seg.duration > 0.0) || !std::isfinite(seg.duration))
                throw ConfigError("segment durations must be > 0");
            validate_kind(seg.kind);
        }
        return;
    }
    std::visit(
        [](const auto& s) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, Mixed>)
                validate_kind(SegmentKind{s});
        },
        scenario);
}

std::string scenario_name(const Scenario& scenario)
{
    if (std::holds_alternative<Mixed>(scenario))
        return "mixed";
    return std::visit(
        [](const auto& s) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Mixed>)
                return "mixed";
            else
                return kind_name(SegmentKind{s});
        },
        scenario);
}

std::vector<TelemetryFrame> generate_scenario(const Scenario& scenario, double duration,
                                              std::uint64_t seed, double rate)
{
    validate_scenario(scenario);
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw ConfigError("scenario duration must be > 0");
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ConfigError("frame rate must be > 0");

    std::vector<Segment> segments;
    if (const auto* mixed = std::get_if<Mixed>(&scenario)) {
        segments = mixed->segments;
    } else {
        std::visit(
            [&](const auto& s) {
                if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, Mixed>)
                    segments.push_back({s, duration});
            },
            scenario);
    }
    double cycle = 0.0;
    for (const auto& s : segments)
        cycle += s.duration;

    Jitter rng(seed);
    const auto count = static_cast<std::size_t>(std::floor(duration * rate + 1e-9));
    std::vector<TelemetryFrame> frames;
    frames.reserve(count);

    std::size_t previous_segment = segments.size();
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / rate;
        double offset = std::fmod(t, cycle);
        std::size_t seg = 0;
        while (seg + 1 < segments.size() && offset >= segments[seg].duration) {
            offset -= segments[seg].duration;
            ++seg;
        }
        auto frame = std::visit(FrameMaker{rng, t, offset}, segments[seg].kind);
        if (seg != previous_segment) {
            if (const auto* reader = std::get_if<FocusedReader>(&segments[seg].kind))
                frame.card_id = "card-" + reader->exhibit;
        }
        previous_segment = seg;
        frames.push_back(std::move(frame));
    }
    return frames;
}

Trace generate_trace(const Scenario& scenario, double duration, std::uint64_t seed, double rate)
{
    Trace trace;
    trace.header.nominal_rate = rate;
    trace.header.session_id = fmt::format("{}-seed{}", scenario_name(scenario), seed);
    trace.frames = generate_scenario(scenario, duration, seed, rate);
    return trace;
}

Mixed parse_segments(const std::string& spec, const std::string& exhibit,
                     const std::vector<std::string>& scan_targets)
{
    Mixed mixed;
    std::istringstream in(spec);
    for (std::string item; std::getline(in, item, ',');) {
        const auto first = item.find_first_not_of(" \t");
        item = first == std::string::npos
                   ? std::string{}
                   : item.substr(first, item.find_last_not_of(" \t") - first + 1);
        const auto colon = item.rfind(':');
        if (colon == std::string::npos)
            throw ConfigError(fmt::format("segment '{}' must look like kind[@velocity]:seconds", item));
        std::string kind = item.substr(0, colon);
        double duration = 0.0;
        std::optional<double> velocity;
        try {
            duration = std::stod(item.substr(colon + 1));
            if (const auto at = kind.find('@'); at != std::string::npos) {
                velocity = std::stod(kind.substr(at + 1));
                kind.resize(at);
            }
        } catch (const std::logic_error&) {
            throw ConfigError(fmt::format("segment '{}' has a malformed number", item));
        }

        SegmentKind k;
        if (kind == "focused-reader")
            k = FocusedReader{exhibit};
        else if (kind == "scanner")
            k = Scanner{scan_targets, 0.6};
        else if (kind == "walker")
            k = Walker{velocity.value_or(1.6)};
        else if (kind == "runner")
            k = Runner{velocity.value_or(2.5)};
        else
            throw ConfigError(fmt::format("unknown segment kind '{}'", kind));
        mixed.segments.push_back({std::move(k), duration});
    }
    validate_scenario(mixed);
    return mixed;
}

} // namespace engage
