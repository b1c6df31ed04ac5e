#pragma once

#include "engage/content.hpp"

#include <chrono>
#include <memory>
#include <stop_token>
#include <string>

namespace engage {

/// Generates exhibit text for a prompt. Called off the inference path; may
/// block. Implementations throw ProviderError on failure.
class ContentProvider
{
public:
    virtual ~ContentProvider() = default;

    virtual std::string generate(const PromptSpec& spec, const Exhibit& exhibit,
                                 std::stop_token stop) = 0;

    virtual Provenance provenance() const noexcept = 0;
};

/// Deterministic stand-in for a remote model. Builds text from the exhibit's
/// base facts that lands on the middle of the word budget; bullet levels get
/// 2-3 lines of at most 9 words.
class MockProvider : public ContentProvider
{
public:
    std::string generate(const PromptSpec& spec, const Exhibit& exhibit,
                         std::stop_token stop) override;

    Provenance provenance() const noexcept override { return Provenance::Mock; }
};

/// Pure text synthesis behind MockProvider.
std::string mock_text(const PromptSpec& spec, const Exhibit& exhibit);

/// Wraps another provider and sleeps `delay` first. The sleep ends early when
/// stop is requested, in which case ProviderError is thrown.
class DelayedProvider : public ContentProvider
{
public:
    DelayedProvider(std::shared_ptr<ContentProvider> inner, std::chrono::milliseconds delay);

    std::string generate(const PromptSpec& spec, const Exhibit& exhibit,
                         std::stop_token stop) override;

    Provenance provenance() const noexcept override { return inner_->provenance(); }

private:
    std::shared_ptr<ContentProvider> inner_;
    std::chrono::milliseconds delay_;
};

} // namespace engage
