#pragma once

#include "engage/state.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace engage {

struct Exhibit
{
    std::string id;
    std::string title;
    std::string base_facts; // curated grounding text, also the static fallback
};

/// Exhibits keyed by id. Ids are unique.
class Catalog
{
public:
    Catalog() = default;
    explicit Catalog(std::vector<Exhibit> exhibits);

    /// Throws ConfigError on a duplicate id or empty base_facts.
    void add(Exhibit exhibit);

    const Exhibit* find(std::string_view id) const noexcept;
    bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }
    std::size_t size() const noexcept { return exhibits_.size(); }
    std::vector<std::string> ids() const;

private:
    std::map<std::string, Exhibit, std::less<>> exhibits_;
};

/// Reads line-delimited {"exhibit_id","title","base_facts"} records.
Catalog parse_catalog(std::istream& in);
Catalog load_catalog(const std::string& path);
void write_catalog(std::ostream& out, const Catalog& catalog);

enum class Provenance : std::uint8_t { Mock, Remote, StaticFallback };

std::string_view to_string(Provenance p) noexcept;
std::optional<Provenance> parse_provenance(std::string_view name) noexcept;

struct ContentRecord
{
    std::string exhibit_id;
    EngagementState level = EngagementState::Neutral;
    std::string text;
    std::size_t word_count = 0;
    Provenance provenance = Provenance::Mock;
    double generated_at = 0.0; // trace seconds

    bool operator==(const ContentRecord&) const = default;
};

/// Builds a record with word_count derived from `text`. Throws ProviderError
/// if the text is blank.
ContentRecord make_record(std::string exhibit_id, EngagementState level, std::string text,
                          Provenance provenance, double generated_at);

/// Number of whitespace-separated tokens.
std::size_t word_count(std::string_view text) noexcept;

/// Non-empty lines of `text` with a leading "-", "*" or bullet marker removed.
std::vector<std::string> bullet_lines(std::string_view text);

struct WordBudget
{
    int min = 0;
    int max = 0;

    bool contains(std::size_t words) const noexcept
    {
        return words >= static_cast<std::size_t>(min) && words <= static_cast<std::size_t>(max);
    }
    bool operator==(const WordBudget&) const = default;
};

struct LevelTemplate
{
    std::string strategy; // style instruction appended to the user prompt
    WordBudget budget;
    bool bullets = false;
};

struct PromptSpec
{
    EngagementState level = EngagementState::Neutral;
    std::string system_instruction;
    std::string user_prompt;
    WordBudget word_budget;
    bool bullets = false;
};

struct ContentConfig
{
    std::string system_instruction;
    std::map<EngagementState, LevelTemplate> templates;
    double debounce = 2.0; // s a level must hold before a request is issued
    double timeout = 4.0;  // s before a request resolves to the static fallback
    bool live_swap = false;

    /// Defaults with templates for all five levels.
    static ContentConfig defaults();

    void validate() const;
};

/// Throws ConfigError when no template exists for `level`.
PromptSpec build_prompt(const Exhibit& exhibit, EngagementState level, const ContentConfig& config);

} // namespace engage
