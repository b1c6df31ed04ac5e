#pragma once

#include "engage/state.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace engage {

inline constexpr std::size_t kMaxCards = 18;

/// Everything that happened during one frame interval.
struct FrameEvent
{
    double dt = 0.0;                                    // s covered by this frame
    EngagementState state = EngagementState::Neutral;   // state in force over dt
    bool reading = false;                               // reading context in force over dt
    bool reading_event = false;                         // a text dwell crossed the event threshold
    std::vector<std::size_t> displayed_word_counts;     // records shown on this frame
    std::optional<std::string> card_id;
};

struct SessionMetrics
{
    double session_duration = 0.0;
    std::size_t reading_events = 0;
    double reading_view_time = 0.0;
    std::size_t words_exposed = 0;
    std::size_t displays = 0;
    std::set<std::string> cards;
    std::array<double, kStateCount> state_time{};

    std::size_t cards_collected() const noexcept;

    /// Fractions of session time per state; nullopt for an empty session.
    std::optional<std::array<double, kStateCount>> state_distribution() const;

    bool operator==(const SessionMetrics&) const = default;
};

/// Adds one frame. Throws std::invalid_argument for negative or non-finite dt.
SessionMetrics& accumulate(SessionMetrics& metrics, const FrameEvent& event);

/// Single-line JSON record.
std::string report_record(const SessionMetrics& metrics);

/// Human-readable table; distribution columns use one decimal ("24.3%").
std::string report_table(const SessionMetrics& metrics);

} // namespace engage
