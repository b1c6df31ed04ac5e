#include "engage/metrics.hpp"

#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace engage {

std::size_t SessionMetrics::cards_collected() const noexcept
{
    return std::min(cards.size(), kMaxCards);
}

std::optional<std::array<double, kStateCount>> SessionMetrics::state_distribution() const
{
    if (!(session_duration > 0.0))
        return std::nullopt;
    std::array<double, kStateCount> out{};
    for (std::size_t i = 0; i < kStateCount; ++i)
        out[i] = state_time[i] / session_duration;
    return out;
}

SessionMetrics& accumulate(SessionMetrics& m, const FrameEvent& e)
{
    if (!std::isfinite(e.dt) || e.dt < 0.0)
        throw std::invalid_argument(fmt::format("frame dt must be finite and >= 0, got {}", e.dt));

    m.session_duration += e.dt;
    m.state_time[index_of(e.state)] += e.dt;
    if (e.reading)
        m.reading_view_time += e.dt;
    if (e.reading_event)
        ++m.reading_events;
    for (auto words : e.displayed_word_counts) {
        m.words_exposed += words;
        ++m.displays;
    }
    if (e.card_id && m.cards.size() < kMaxCards)
        m.cards.insert(*e.card_id);
    return m;
}

std::string report_record(const SessionMetrics& m)
{
    nlohmann::json state_time = nlohmann::json::object();
    for (auto s : kReportOrder)
        state_time[std::string(to_string(s))] = m.state_time[index_of(s)];

    nlohmann::json distribution = nullptr;
    if (const auto d = m.state_distribution()) {
        distribution = nlohmann::json::object();
        for (auto s : kReportOrder)
            distribution[std::string(to_string(s))] = (*d)[index_of(s)];
    }

    const nlohmann::json record = {
        {"session_duration", m.session_duration},
        {"reading_events", m.reading_events},
        {"reading_view_time", m.reading_view_time},
        {"words_exposed", m.words_exposed},
        {"displays", m.displays},
        {"cards_collected", m.cards_collected()},
        {"state_time", state_time},
        {"distribution_defined", distribution.is_object()},
        {"state_distribution", distribution},
    };
    return record.dump();
}

std::string report_table(const SessionMetrics& m)
{
    std::string out;
    out += fmt::format("{:<22}{:>12.1f}\n", "Session Duration (s)", m.session_duration);
    out += fmt::format("{:<22}{:>12.1f}\n", "Reading View Time (s)", m.reading_view_time);
    out += fmt::format("{:<22}{:>12}\n", "Reading Events", m.reading_events);
    out += fmt::format("{:<22}{:>12}\n", "Words Exposed", m.words_exposed);
    out += fmt::format("{:<22}{:>12}\n", "Cards Collected", m.cards_collected());
    out += '\n';
    out += "Engagement State Distribution (% of Session Time)\n";

    std::string header = fmt::format("{:<10}", "");
    for (auto s : kReportOrder)
        header += fmt::format("{:>13}", column_label(s));
    out += header + '\n';

    std::string row = fmt::format("{:<10}", "Session");
    if (const auto d = m.state_distribution()) {
        for (auto s : kReportOrder)
            row += fmt::format("{:>13}", fmt::format("{:.1f}%", 100.0 * (*d)[index_of(s)]));
    } else {
        for (std::size_t i = 0; i < kStateCount; ++i)
            row += fmt::format("{:>13}", "n/a");
        row += "  (empty session: distribution undefined)";
    }
    out += row + '\n';
    return out;
}

} // namespace engage
