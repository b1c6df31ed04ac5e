#pragma once

#include "engage/content.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace engage {

/// Generated content keyed by (exhibit id, level). Readers share, writers
/// are exclusive.
class ContentCache
{
public:
    using Key = std::pair<std::string, EngagementState>;

    std::optional<ContentRecord> find(std::string_view exhibit_id, EngagementState level) const;
    bool contains(std::string_view exhibit_id, EngagementState level) const;

    /// Inserts or replaces. Returns true when the key was new.
    bool insert(ContentRecord record);

    std::size_t size() const;
    std::vector<ContentRecord> records() const;

    /// Line-delimited (exhibit_id, level, text, word_count, provenance, generated_at).
    void load(std::istream& in);
    void save(std::ostream& out) const;
    void load_file(const std::string& path); // a missing file is an empty cache
    void save_file(const std::string& path) const;

private:
    mutable std::shared_mutex mutex_;
    std::map<Key, ContentRecord, std::less<>> records_;
};

} // namespace engage
