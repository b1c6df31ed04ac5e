#include "engage/http_provider.hpp"

#include "engage/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include <cmath>

namespace engage {

RemoteProvider::RemoteProvider(RemoteProviderConfig config) : config_(std::move(config))
{
    const auto& url = config_.endpoint;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError(fmt::format("provider endpoint '{}' must be an http(s) URL", url));
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw ConfigError(fmt::format("unsupported provider scheme '{}'", scheme));
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme == "https")
        throw ConfigError("https endpoints need a build with OpenSSL");
#endif
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (origin_.size() <= scheme_end + 3)
        throw ConfigError(fmt::format("provider endpoint '{}' has no host", url));
}

std::string chat_request_body(const PromptSpec& spec, std::string_view model)
{
    const nlohmann::json body = {
        {"model", model},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", spec.system_instruction}},
                                {{"role", "user"}, {"content", spec.user_prompt}}})},
    };
    return body.dump();
}

std::string parse_chat_response(std::string_view body)
{
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded())
        throw ProviderError("provider response is not JSON");
    try {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (!content.is_string())
            throw ProviderError("provider response content is not a string");
        auto text = content.get<std::string>();
        if (text.find_first_not_of(" \t\r\n") == std::string::npos)
            throw ProviderError("provider response content is empty");
        return text;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(fmt::format("malformed provider response: {}", e.what()));
    }
}

std::string RemoteProvider::generate(const PromptSpec& spec, const Exhibit&, std::stop_token stop)
{
    httplib::Client client(origin_);
    const auto secs = static_cast<time_t>(config_.timeout);
    const auto usecs = static_cast<time_t>((config_.timeout - std::floor(config_.timeout)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    if (stop.stop_requested())
        throw ProviderError("generation cancelled");
    auto res = client.Post(path_, headers, chat_request_body(spec, config_.model), "application/json");
    if (!res)
        throw ProviderError(fmt::format("request to {} failed: {}", origin_,
                                        httplib::to_string(res.error())));
    if (res->status != 200)
        throw ProviderError(fmt::format("provider returned HTTP {}", res->status));
    return parse_chat_response(res->body);
}

} // namespace engage
