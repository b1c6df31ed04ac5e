#include "engage/content_cache.hpp"

#include "engage/errors.hpp"

#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>

namespace engage {

namespace {

nlohmann::json record_to_json(const ContentRecord& r)
{
    return {{"exhibit_id", r.exhibit_id},
            {"level", to_string(r.level)},
            {"text", r.text},
            {"word_count", r.word_count},
            {"provenance", to_string(r.provenance)},
            {"generated_at", r.generated_at}};
}

ContentRecord record_from_json(const nlohmann::json& j)
{
    const auto level = parse_state(j.at("level").get<std::string>());
    if (!level)
        throw std::invalid_argument("unknown level");
    const auto provenance = parse_provenance(j.at("provenance").get<std::string>());
    if (!provenance)
        throw std::invalid_argument("unknown provenance");
    auto record = make_record(j.at("exhibit_id").get<std::string>(), *level,
                              j.at("text").get<std::string>(), *provenance,
                              j.value("generated_at", 0.0));
    if (record.word_count != j.at("word_count").get<std::size_t>())
        throw std::invalid_argument("word_count does not match text");
    return record;
}

} // namespace

std::optional<ContentRecord> ContentCache::find(std::string_view exhibit_id,
                                                EngagementState level) const
{
    std::shared_lock lock(mutex_);
    auto it = records_.find(std::pair{std::string(exhibit_id), level});
    if (it == records_.end())
        return std::nullopt;
    return it->second;
}

bool ContentCache::contains(std::string_view exhibit_id, EngagementState level) const
{
    std::shared_lock lock(mutex_);
    return records_.contains(std::pair{std::string(exhibit_id), level});
}

bool ContentCache::insert(ContentRecord record)
{
    std::unique_lock lock(mutex_);
    Key key{record.exhibit_id, record.level};
    auto [it, inserted] = records_.try_emplace(std::move(key), record);
    if (!inserted)
        it->second = std::move(record);
    return inserted;
}

std::size_t ContentCache::size() const
{
    std::shared_lock lock(mutex_);
    return records_.size();
}

std::vector<ContentRecord> ContentCache::records() const
{
    std::shared_lock lock(mutex_);
    std::vector<ContentRecord> out;
    out.reserve(records_.size());
    for (const auto& [_, r] : records_)
        out.push_back(r);
    return out;
}

void ContentCache::load(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            insert(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw ParseError(line_no, fmt::format("bad cache record: {}", e.what()));
        }
    }
}

void ContentCache::save(std::ostream& out) const
{
    for (const auto& r : records())
        out << record_to_json(r).dump() << '\n';
}

void ContentCache::load_file(const std::string& path)
{
    if (!std::filesystem::exists(path))
        return;
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open cache file '{}'", path));
    load(in);
}

void ContentCache::save_file(const std::string& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ConfigError(fmt::format("cannot write cache file '{}'", path));
    save(out);
}

} // namespace engage
