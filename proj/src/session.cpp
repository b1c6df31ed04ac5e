#include "engage/session.hpp"

#include "engage/errors.hpp"
#include "engage/http_provider.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace engage {

Session::Session(const EngineConfig& config, Catalog catalog,
                 std::shared_ptr<ContentProvider> provider, std::unique_ptr<Executor> executor,
                 std::shared_ptr<ContentCache> cache)
    : config_(config),
      engine_(config.inference),
      pipeline_(std::move(catalog), config.content, std::move(provider), std::move(executor),
                std::move(cache))
{
}

void Session::show(const ContentRecord& record, std::vector<std::size_t>& word_counts)
{
    word_counts.push_back(record.word_count);
    displayed_.push_back(record);
}

const FrameResult& Session::push(const TelemetryFrame& frame)
{
    const double text_before = engine_.dwell().text_dwell_elapsed;
    const auto state_before = engine_.state();
    const bool reading_before = reading_;

    last_ = engine_.push(frame);
    const double now = frame.timestamp;
    const auto& dwell = engine_.dwell();

    if (last_.tick) {
        timeline_.push_back(*last_.tick);
        pipeline_.observe_state(last_.tick->state, last_.tick->state_seq, now);
        if (dwell.current_target)
            pipeline_.on_focus(*dwell.current_target, now);
    }
    const auto applied = pipeline_.poll(now);

    FrameEvent event;
    event.dt = last_.dt;
    event.state = state_before;
    event.reading = reading_before;
    event.card_id = frame.card_id;

    if (open_panel_ && dwell.current_target != open_panel_)
        open_panel_.reset();

    const double threshold = config_.metrics.reading_event_dwell;
    event.reading_event = text_before < threshold && dwell.text_dwell_elapsed >= threshold;
    if (event.reading_event && pipeline_.catalog().contains(*dwell.current_target)) {
        show(pipeline_.display(*dwell.current_target, now), event.displayed_word_counts);
        open_panel_ = dwell.current_target;
    }

    if (config_.content.live_swap && open_panel_) {
        for (const auto& a : applied) {
            if (a.outcome == ResponseOutcome::Accepted && a.record.exhibit_id == *open_panel_ &&
                pipeline_.level() == a.record.level)
                show(a.record, event.displayed_word_counts);
        }
    }

    accumulate(metrics_, event);
    reading_ = last_.signals.reading != 0;
    return last_;
}

std::shared_ptr<ContentProvider> make_provider(const EngineConfig& config)
{
    if (config.provider.kind == ProviderKind::Mock)
        return std::make_shared<MockProvider>();

    RemoteProviderConfig remote;
    remote.endpoint = config.provider.endpoint;
    remote.model = config.provider.model;
    remote.timeout = config.content.timeout;
    if (const char* key = std::getenv(config.provider.api_key_env.c_str()))
        remote.api_key = key;
    return std::make_shared<RemoteProvider>(std::move(remote));
}

std::unique_ptr<Executor> make_executor(const EngineConfig& config)
{
    if (config.provider.kind == ProviderKind::Remote || config.provider.async)
        return std::make_unique<ThreadExecutor>(1);
    return std::make_unique<InlineExecutor>();
}

ReplayResult replay(const Trace& trace, const EngineConfig& config, const Catalog& catalog,
                    std::shared_ptr<ContentProvider> provider, std::unique_ptr<Executor> executor,
                    std::shared_ptr<ContentCache> cache)
{
    EngineConfig effective = config;
    effective.inference.nominal_rate = trace.header.nominal_rate;

    Session session(effective, catalog, std::move(provider), std::move(executor), std::move(cache));
    for (const auto& frame : trace.frames)
        session.push(frame);
    return {session.timeline(), session.metrics(), session.content().stats()};
}

void write_timeline(std::ostream& out, const std::vector<TickOutput>& timeline)
{
    out << "timestamp,e_raw,e_windowed,e_smoothed,gate,state\n";
    for (const auto& t : timeline) {
        const auto& e = t.estimate;
        out << fmt::format("{},{},{},{},{},{}\n", e.timestamp, e.raw, e.windowed, e.smoothed,
                           to_string(t.gate), to_string(t.state));
    }
}

std::vector<TimelineRow> read_timeline(std::istream& in)
{
    std::vector<TimelineRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty())
            continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            cells.push_back(cell);
        if (cells.size() != 6)
            throw ParseError(line_no, "timeline row needs 6 columns");

        TimelineRow row;
        try {
            row.timestamp = std::stod(cells[0]);
            row.raw = std::stod(cells[1]);
            row.windowed = std::stod(cells[2]);
            row.smoothed = std::stod(cells[3]);
        } catch (const std::logic_error&) {
            throw ParseError(line_no, "timeline row has a malformed number");
        }
        if (cells[4] == "none")
            row.gate = Gate::None;
        else if (cells[4] == "walk_cap")
            row.gate = Gate::WalkCap;
        else if (cells[4] == "run_force")
            row.gate = Gate::RunForce;
        else
            throw ParseError(line_no, fmt::format("unknown gate '{}'", cells[4]));
        const auto state = parse_state(cells[5]);
        if (!state)
            throw ParseError(line_no, fmt::format("unknown state '{}'", cells[5]));
        row.state = *state;
        rows.push_back(row);
    }
    return rows;
}

std::array<double, kStateCount> state_time_from_timeline(const std::vector<TimelineRow>& rows,
                                                         double end_time)
{
    std::array<double, kStateCount> out{};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double next = i + 1 < rows.size() ? rows[i + 1].timestamp : end_time;
        if (next > rows[i].timestamp)
            out[index_of(rows[i].state)] += next - rows[i].timestamp;
    }
    return out;
}

} // namespace engage
