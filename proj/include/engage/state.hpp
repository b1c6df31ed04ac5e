#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace engage {

/// Discrete engagement level. Declaration order is the total order used for
/// caps and comparisons: HighlyDisengaged is lowest.
enum class EngagementState : std::uint8_t {
    HighlyDisengaged = 0,
    Disengaged = 1,
    Neutral = 2,
    Engaged = 3,
    HighlyEngaged = 4,
};

inline constexpr std::size_t kStateCount = 5;

inline constexpr std::array<EngagementState, kStateCount> kAscendingStates{
    EngagementState::HighlyDisengaged, EngagementState::Disengaged, EngagementState::Neutral,
    EngagementState::Engaged, EngagementState::HighlyEngaged};

/// Column order of the state distribution table (highest first).
inline constexpr std::array<EngagementState, kStateCount> kReportOrder{
    EngagementState::HighlyEngaged, EngagementState::Engaged, EngagementState::Neutral,
    EngagementState::Disengaged, EngagementState::HighlyDisengaged};

constexpr std::size_t index_of(EngagementState s) noexcept
{
    return static_cast<std::size_t>(s);
}

constexpr EngagementState state_at(std::size_t i) noexcept
{
    return static_cast<EngagementState>(i);
}

std::string_view to_string(EngagementState s) noexcept;

/// Short column label, e.g. "Highly Eng.".
std::string_view column_label(EngagementState s) noexcept;

std::optional<EngagementState> parse_state(std::string_view name) noexcept;

} // namespace engage
