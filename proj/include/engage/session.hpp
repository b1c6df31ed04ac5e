#pragma once

#include "engage/config.hpp"
#include "engage/content_pipeline.hpp"
#include "engage/engine.hpp"
#include "engage/metrics.hpp"
#include "engage/trace.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace engage {

/// One visitor session: inference engine, content pipeline and metrics wired
/// into the closed loop, driven frame by frame.
class Session
{
public:
    Session(const EngineConfig& config, Catalog catalog, std::shared_ptr<ContentProvider> provider,
            std::unique_ptr<Executor> executor,
            std::shared_ptr<ContentCache> cache = std::make_shared<ContentCache>());

    /// Runs one frame through the loop. Throws what the engine throws.
    const FrameResult& push(const TelemetryFrame& frame);

    const std::vector<TickOutput>& timeline() const noexcept { return timeline_; }
    const SessionMetrics& metrics() const noexcept { return metrics_; }
    const InferenceEngine& engine() const noexcept { return engine_; }
    ContentPipeline& content() noexcept { return pipeline_; }
    const ContentPipeline& content() const noexcept { return pipeline_; }
    const std::vector<ContentRecord>& displayed() const noexcept { return displayed_; }

private:
    void show(const ContentRecord& record, std::vector<std::size_t>& word_counts);

    EngineConfig config_;
    InferenceEngine engine_;
    ContentPipeline pipeline_;
    SessionMetrics metrics_;
    std::vector<TickOutput> timeline_;
    std::vector<ContentRecord> displayed_;
    std::optional<std::string> open_panel_;
    bool reading_ = false;
    FrameResult last_;
};

/// Builds the provider selected by the configuration.
std::shared_ptr<ContentProvider> make_provider(const EngineConfig& config);

/// Inline executor for the mock provider unless async is requested.
std::unique_ptr<Executor> make_executor(const EngineConfig& config);

struct ReplayResult
{
    std::vector<TickOutput> timeline;
    SessionMetrics metrics;
    PipelineStats content;
};

/// Replays a whole trace. The trace header's nominal rate overrides the
/// configured one.
ReplayResult replay(const Trace& trace, const EngineConfig& config, const Catalog& catalog,
                    std::shared_ptr<ContentProvider> provider, std::unique_ptr<Executor> executor,
                    std::shared_ptr<ContentCache> cache = std::make_shared<ContentCache>());

/// CSV: timestamp,e_raw,e_windowed,e_smoothed,gate,state
void write_timeline(std::ostream& out, const std::vector<TickOutput>& timeline);

struct TimelineRow
{
    double timestamp = 0.0;
    double raw = 0.0;
    double windowed = 0.0;
    double smoothed = 0.0;
    Gate gate = Gate::None;
    EngagementState state = EngagementState::Neutral;
};

std::vector<TimelineRow> read_timeline(std::istream& in);

/// Per-state time recomputed from timeline rows, each row holding until the
/// next one; the last row holds until `end_time`.
std::array<double, kStateCount> state_time_from_timeline(const std::vector<TimelineRow>& rows,
                                                         double end_time);

} // namespace engage
