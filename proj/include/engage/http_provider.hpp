#pragma once

#include "engage/provider.hpp"

#include <string>
#include <string_view>

namespace engage {

struct RemoteProviderConfig
{
    std::string endpoint; // e.g. https://api.openai.com/v1/chat/completions
    std::string model = "gpt-4o";
    std::string api_key;  // from the environment, never the config file
    double timeout = 4.0; // s, connect and read
};

/// Chat-completions style HTTP provider: one POST carrying a system and a
/// user message, text read from choices[0].message.content.
class RemoteProvider : public ContentProvider
{
public:
    explicit RemoteProvider(RemoteProviderConfig config);

    std::string generate(const PromptSpec& spec, const Exhibit& exhibit,
                         std::stop_token stop) override;

    Provenance provenance() const noexcept override { return Provenance::Remote; }

private:
    RemoteProviderConfig config_;
    std::string origin_; // scheme://host[:port]
    std::string path_;
};

std::string chat_request_body(const PromptSpec& spec, std::string_view model);

/// Throws ProviderError when the body is not a chat completion with text.
std::string parse_chat_response(std::string_view body);

} // namespace engage
