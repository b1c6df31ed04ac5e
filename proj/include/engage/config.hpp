#pragma once

#include "engage/content.hpp"
#include "engage/engine.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace engage {

enum class ProviderKind : std::uint8_t { Mock, Remote };

struct ProviderSettings
{
    ProviderKind kind = ProviderKind::Mock;
    std::string endpoint;
    std::string model = "gpt-4o";
    std::string api_key_env = "ENGAGE_API_KEY";
    bool async = false; // threaded executor; remote always runs async
};

struct MetricsConfig
{
    double reading_event_dwell = 1.0; // s of text dwell that counts as a reading event
};

/// Effective engine configuration. Defaults carry the published constants.
struct EngineConfig
{
    InferenceConfig inference;
    ContentConfig content = ContentConfig::defaults();
    MetricsConfig metrics;
    ProviderSettings provider;
    std::string cache_path;

    void validate() const;
};

nlohmann::json to_json(const EngineConfig& config);

/// Reads a (possibly partial) document over the defaults. Throws ConfigError.
EngineConfig config_from_json(const nlohmann::json& doc);

EngineConfig load_config(const std::string& path);

/// Applies "section.key=value" where value is JSON (bare words are taken as
/// strings). Throws ConfigError.
void apply_override(nlohmann::json& doc, std::string_view assignment);

} // namespace engage
