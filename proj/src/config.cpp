#include "engage/config.hpp"

#include "engage/errors.hpp"

#include <fmt/format.h>

#include <fstream>

namespace engage {

using nlohmann::json;

namespace {

void reject_unknown(const json& doc, const json& reference, const std::string& where)
{
    for (const auto& [key, value] : doc.items()) {
        const auto path = where.empty() ? key : where + "." + key;
        if (!reference.contains(key))
            throw ConfigError(fmt::format("unknown configuration key '{}'", path));
        if (value.is_object() && reference.at(key).is_object())
            reject_unknown(value, reference.at(key), path);
    }
}

std::string_view to_string(ProviderKind k) noexcept
{
    return k == ProviderKind::Mock ? "mock" : "remote";
}

} // namespace

void EngineConfig::validate() const
{
    inference.validate();
    content.validate();
    if (!(metrics.reading_event_dwell > 0.0))
        throw ConfigError("metrics.reading_event_dwell_s must be > 0");
    if (provider.kind == ProviderKind::Remote && provider.endpoint.empty())
        throw ConfigError("provider.endpoint is required for the remote provider");
}

json to_json(const EngineConfig& c)
{
    const auto& inf = c.inference;
    json levels = json::object();
    for (const auto& [level, tpl] : c.content.templates) {
        levels[std::string(to_string(level))] = {{"strategy", tpl.strategy},
                                                 {"min_words", tpl.budget.min},
                                                 {"max_words", tpl.budget.max},
                                                 {"bullets", tpl.bullets}};
    }

    return json{
        {"nominal_rate_hz", inf.nominal_rate},
        {"normalization",
         {{"head_threshold_deg_s", inf.normalization.head_threshold},
          {"gaze_dwell_threshold_s", inf.normalization.gaze_dwell_threshold},
          {"locomotion_baseline_m_s", inf.normalization.locomotion_baseline},
          {"reading_dwell_s", inf.normalization.reading_dwell},
          {"gaze_grace_s", inf.normalization.gaze_grace},
          {"max_step_factor", inf.normalization.max_step_factor}}},
        {"fusion",
         {{"w_phys", inf.weights.physical},
          {"w_read", inf.weights.reading},
          {"w_head", inf.weights.head},
          {"w_gaze", inf.weights.gaze},
          {"w_loco", inf.weights.locomotion},
          {"alpha", inf.alpha},
          {"window_s", inf.window_duration},
          {"state_rate_hz", inf.state_rate},
          {"order", to_string(inf.order)}}},
        {"classifier", {{"band_cuts", inf.bands.cuts}, {"hysteresis_margin", inf.bands.hysteresis_margin}}},
        {"gates",
         {{"walk_threshold_m_s", inf.gates.walk_threshold},
          {"run_threshold_m_s", inf.gates.run_threshold},
          {"sustain_s", inf.gates.sustain},
          {"release_s", inf.gates.release},
          {"release_margin_m_s", inf.gates.release_margin}}},
        {"content",
         {{"system_instruction", c.content.system_instruction},
          {"debounce_s", c.content.debounce},
          {"timeout_s", c.content.timeout},
          {"live_swap", c.content.live_swap},
          {"levels", levels}}},
        {"metrics", {{"reading_event_dwell_s", c.metrics.reading_event_dwell}}},
        {"provider",
         {{"kind", to_string(c.provider.kind)},
          {"endpoint", c.provider.endpoint},
          {"model", c.provider.model},
          {"api_key_env", c.provider.api_key_env},
          {"async", c.provider.async}}},
        {"cache_path", c.cache_path},
    };
}

EngineConfig config_from_json(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("configuration must be a JSON object");

    const json defaults = to_json(EngineConfig{});
    reject_unknown(doc, defaults, "");
    json d = defaults;
    d.merge_patch(doc);

    EngineConfig c;
    try {
        auto& inf = c.inference;
        inf.nominal_rate = d.at("nominal_rate_hz").get<double>();

        const auto& n = d.at("normalization");
        inf.normalization.head_threshold = n.at("head_threshold_deg_s").get<double>();
        inf.normalization.gaze_dwell_threshold = n.at("gaze_dwell_threshold_s").get<double>();
        inf.normalization.locomotion_baseline = n.at("locomotion_baseline_m_s").get<double>();
        inf.normalization.reading_dwell = n.at("reading_dwell_s").get<double>();
        inf.normalization.gaze_grace = n.at("gaze_grace_s").get<double>();
        inf.normalization.max_step_factor = n.at("max_step_factor").get<double>();

        const auto& f = d.at("fusion");
        inf.weights.physical = f.at("w_phys").get<double>();
        inf.weights.reading = f.at("w_read").get<double>();
        inf.weights.head = f.at("w_head").get<double>();
        inf.weights.gaze = f.at("w_gaze").get<double>();
        inf.weights.locomotion = f.at("w_loco").get<double>();
        inf.alpha = f.at("alpha").get<double>();
        inf.window_duration = f.at("window_s").get<double>();
        inf.state_rate = f.at("state_rate_hz").get<double>();
        const auto order = parse_pipeline_order(f.at("order").get<std::string>());
        if (!order)
            throw ConfigError(fmt::format("unknown fusion.order '{}'", f.at("order").get<std::string>()));
        inf.order = *order;

        const auto& cl = d.at("classifier");
        inf.bands.cuts = cl.at("band_cuts").get<std::array<double, 4>>();
        inf.bands.hysteresis_margin = cl.at("hysteresis_margin").get<double>();

        const auto& g = d.at("gates");
        inf.gates.walk_threshold = g.at("walk_threshold_m_s").get<double>();
        inf.gates.run_threshold = g.at("run_threshold_m_s").get<double>();
        inf.gates.sustain = g.at("sustain_s").get<double>();
        inf.gates.release = g.at("release_s").get<double>();
        inf.gates.release_margin = g.at("release_margin_m_s").get<double>();

        const auto& ct = d.at("content");
        c.content.system_instruction = ct.at("system_instruction").get<std::string>();
        c.content.debounce = ct.at("debounce_s").get<double>();
        c.content.timeout = ct.at("timeout_s").get<double>();
        c.content.live_swap = ct.at("live_swap").get<bool>();
        c.content.templates.clear();
        for (const auto& [name, tpl] : ct.at("levels").items()) {
            const auto level = parse_state(name);
            if (!level)
                throw ConfigError(fmt::format("unknown content level '{}'", name));
            c.content.templates[*level] = LevelTemplate{
                tpl.at("strategy").get<std::string>(),
                {tpl.at("min_words").get<int>(), tpl.at("max_words").get<int>()},
                tpl.at("bullets").get<bool>()};
        }

        c.metrics.reading_event_dwell = d.at("metrics").at("reading_event_dwell_s").get<double>();

        const auto& p = d.at("provider");
        const auto kind = p.at("kind").get<std::string>();
        if (kind == "mock")
            c.provider.kind = ProviderKind::Mock;
        else if (kind == "remote")
            c.provider.kind = ProviderKind::Remote;
        else
            throw ConfigError(fmt::format("unknown provider.kind '{}'", kind));
        c.provider.endpoint = p.at("endpoint").get<std::string>();
        c.provider.model = p.at("model").get<std::string>();
        c.provider.api_key_env = p.at("api_key_env").get<std::string>();
        c.provider.async = p.at("async").get<bool>();

        c.cache_path = d.at("cache_path").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("invalid configuration: {}", e.what()));
    }
    c.validate();
    return c;
}

EngineConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open config '{}'", path));
    const auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw ConfigError(fmt::format("config '{}' is not valid JSON", path));
    return config_from_json(doc);
}

void apply_override(json& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError(fmt::format("override '{}' must look like section.key=value", assignment));
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));

    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded())
        value = raw;

    if (!doc.is_object())
        doc = json::object();
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const auto part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ConfigError(fmt::format("override key '{}' has an empty segment", key));
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        auto& child = (*node)[part];
        if (!child.is_object())
            child = json::object();
        node = &child;
        start = dot + 1;
    }
}

} // namespace engage
