#include "engage/state.hpp"

namespace engage {

std::string_view to_string(EngagementState s) noexcept
{
    switch (s) {
    case EngagementState::HighlyDisengaged: return "HighlyDisengaged";
    case EngagementState::Disengaged: return "Disengaged";
    case EngagementState::Neutral: return "Neutral";
    case EngagementState::Engaged: return "Engaged";
    case EngagementState::HighlyEngaged: return "HighlyEngaged";
    }
    return "?";
}

std::string_view column_label(EngagementState s) noexcept
{
    switch (s) {
    case EngagementState::HighlyDisengaged: return "Highly Dis.";
    case EngagementState::Disengaged: return "Disengaged";
    case EngagementState::Neutral: return "Neutral";
    case EngagementState::Engaged: return "Engaged";
    case EngagementState::HighlyEngaged: return "Highly Eng.";
    }
    return "?";
}

std::optional<EngagementState> parse_state(std::string_view name) noexcept
{
    for (auto s : kAscendingStates) {
        if (to_string(s) == name)
            return s;
    }
    return std::nullopt;
}

} // namespace engage
