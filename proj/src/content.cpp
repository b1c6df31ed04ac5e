#include "engage/content.hpp"

#include "engage/errors.hpp"

#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>

namespace engage {

namespace {

bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

} // namespace

Catalog::Catalog(std::vector<Exhibit> exhibits)
{
    for (auto& e : exhibits)
        add(std::move(e));
}

void Catalog::add(Exhibit exhibit)
{
    if (exhibit.id.empty())
        throw ConfigError("exhibit id must not be empty");
    if (trim(exhibit.base_facts).empty())
        throw ConfigError(fmt::format("exhibit '{}' has empty base_facts", exhibit.id));
    auto id = exhibit.id;
    if (!exhibits_.emplace(id, std::move(exhibit)).second)
        throw ConfigError(fmt::format("duplicate exhibit id '{}'", id));
}

const Exhibit* Catalog::find(std::string_view id) const noexcept
{
    auto it = exhibits_.find(id);
    return it == exhibits_.end() ? nullptr : &it->second;
}

std::vector<std::string> Catalog::ids() const
{
    std::vector<std::string> out;
    out.reserve(exhibits_.size());
    for (const auto& [id, _] : exhibits_)
        out.push_back(id);
    return out;
}

Catalog parse_catalog(std::istream& in)
{
    Catalog catalog;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        try {
            const auto j = nlohmann::json::parse(line);
            catalog.add(Exhibit{j.at("exhibit_id").get<std::string>(), j.value("title", std::string{}),
                                j.at("base_facts").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        } catch (const ConfigError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return catalog;
}

Catalog load_catalog(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open catalog '{}'", path));
    return parse_catalog(in);
}

void write_catalog(std::ostream& out, const Catalog& catalog)
{
    for (const auto& id : catalog.ids()) {
        const auto* e = catalog.find(id);
        out << nlohmann::json{{"exhibit_id", e->id}, {"title", e->title}, {"base_facts", e->base_facts}}
                   .dump()
            << '\n';
    }
}

std::string_view to_string(Provenance p) noexcept
{
    switch (p) {
    case Provenance::Mock: return "mock";
    case Provenance::Remote: return "remote";
    case Provenance::StaticFallback: return "static-fallback";
    }
    return "?";
}

std::optional<Provenance> parse_provenance(std::string_view name) noexcept
{
    for (auto p : {Provenance::Mock, Provenance::Remote, Provenance::StaticFallback}) {
        if (to_string(p) == name)
            return p;
    }
    return std::nullopt;
}

std::size_t word_count(std::string_view text) noexcept
{
    std::size_t words = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++words;
        }
    }
    return words;
}

std::vector<std::string> bullet_lines(std::string_view text)
{
    std::vector<std::string> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (line.starts_with("\xE2\x80\xA2")) // U+2022
            line.remove_prefix(3);
        else if (line.starts_with("- ") || line.starts_with("* "))
            line.remove_prefix(2);
        line = trim(line);
        if (!line.empty())
            lines.emplace_back(line);
    }
    return lines;
}

ContentRecord make_record(std::string exhibit_id, EngagementState level, std::string text,
                          Provenance provenance, double generated_at)
{
    const auto words = word_count(text);
    if (words == 0)
        throw ProviderError(fmt::format("empty content for '{}' at level {}", exhibit_id,
                                        to_string(level)));
    return ContentRecord{std::move(exhibit_id), level,      std::move(text),
                         words,                 provenance, generated_at};
}

ContentConfig ContentConfig::defaults()
{
    ContentConfig c;
    c.system_instruction =
        "You write exhibit panel text for a virtual ethnographic museum. "
        "Keep strictly to the requested word range. "
        "Use only the source facts provided; do not invent dates, names or places.";

    using enum EngagementState;
    c.templates[HighlyDisengaged] = {
        "Reply with 2 terse bullet points of fewer than 10 words each. Name the object and nothing more.",
        {6, 20},
        true};
    c.templates[Disengaged] = {"Reply with 2-3 short bullet points of fewer than 10 words each.", {6, 30}, true};
    c.templates[Neutral] = {"State the key historical facts plainly and briefly.",
                            {25, 40},
                            false};
    c.templates[Engaged] = {
        "Give an informative description with historical context and one notable detail.",
        {35, 55},
        false};
    c.templates[HighlyEngaged] = {"Write in a scholarly register with rich detail and contextual anecdotes.",
                                  {40, 70},
                                  false};
    return c;
}

void ContentConfig::validate() const
{
    for (auto level : kAscendingStates) {
        auto it = templates.find(level);
        if (it == templates.end())
            throw ConfigError(fmt::format("no content template for level {}", to_string(level)));
        const auto& b = it->second.budget;
        if (b.min < 1 || b.min > b.max)
            throw ConfigError(fmt::format("word budget for {} must satisfy 1 <= min <= max",
                                          to_string(level)));
        if (it->second.bullets && (b.max < 2 || b.min > 27))
            throw ConfigError(fmt::format(
                "bullet budget for {} must allow 2-3 bullets of at most 9 words", to_string(level)));
    }
    if (!(debounce >= 0.0))
        throw ConfigError("content.debounce_s must be >= 0");
    if (!(timeout > 0.0))
        throw ConfigError("content.timeout_s must be > 0");
}

PromptSpec build_prompt(const Exhibit& exhibit, EngagementState level, const ContentConfig& config)
{
    auto it = config.templates.find(level);
    if (it == config.templates.end())
        throw ConfigError(fmt::format("no content template for level {}", to_string(level)));
    const auto& tpl = it->second;

    auto user = fmt::format("Exhibit: {}\nSource facts: {}\n\n{}\nLength: between {} and {} words.",
                            exhibit.title, exhibit.base_facts, tpl.strategy, tpl.budget.min,
                            tpl.budget.max);
    if (tpl.bullets)
        user += " Put each bullet on its own line.";

    return PromptSpec{level, config.system_instruction, std::move(user), tpl.budget, tpl.bullets};
}

} // namespace engage
