#include "engage/provider.hpp"

#include "engage/errors.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <mutex>
#include <sstream>
#include <vector>

namespace engage {

namespace {

constexpr int kMaxBulletWords = 9;

std::vector<std::string> tokens_of(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string w; in >> w;)
        out.push_back(std::move(w));
    return out;
}

std::string strip_trailing_punct(std::string w)
{
    while (w.size() > 1 && std::ispunct(static_cast<unsigned char>(w.back())))
        w.pop_back();
    return w;
}

std::string capitalized(std::string w)
{
    if (!w.empty())
        w.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(w.front())));
    return w;
}

// Joins `count` words from the cyclic stream starting at `pos` into a
// sentence-cased phrase ending with a full stop.
std::string phrase(const std::vector<std::string>& stream, std::size_t& pos, int count)
{
    std::string out;
    for (int i = 0; i < count; ++i) {
        auto w = stream[pos++ % stream.size()];
        if (i == 0)
            w = capitalized(std::move(w));
        if (i == count - 1)
            w = strip_trailing_punct(std::move(w)) + ".";
        if (!out.empty())
            out += ' ';
        out += w;
    }
    return out;
}

} // namespace

std::string mock_text(const PromptSpec& spec, const Exhibit& exhibit)
{
    auto stream = tokens_of(exhibit.base_facts);
    if (stream.empty())
        stream = tokens_of(exhibit.title);
    if (stream.empty())
        stream = {"exhibit"};

    const auto& budget = spec.word_budget;
    int target = budget.min + (budget.max - budget.min) / 2;
    std::size_t pos = 0;

    if (!spec.bullets)
        return phrase(stream, pos, std::max(target, 1));

    const int bullets = std::clamp((target + 6) / 7, 2, 3);
    target = std::clamp(target, bullets, bullets * kMaxBulletWords);
    std::string out;
    for (int b = 0; b < bullets; ++b) {
        const int words = target / bullets + (b < target % bullets ? 1 : 0);
        if (!out.empty())
            out += '\n';
        out += phrase(stream, pos, words);
    }
    return out;
}

std::string MockProvider::generate(const PromptSpec& spec, const Exhibit& exhibit, std::stop_token)
{
    return mock_text(spec, exhibit);
}

DelayedProvider::DelayedProvider(std::shared_ptr<ContentProvider> inner,
                                 std::chrono::milliseconds delay)
    : inner_(std::move(inner)), delay_(delay)
{
}

std::string DelayedProvider::generate(const PromptSpec& spec, const Exhibit& exhibit,
                                      std::stop_token stop)
{
    std::mutex m;
    std::condition_variable_any cv;
    std::unique_lock lock(m);
    cv.wait_for(lock, stop, delay_, [] { return false; });
    if (stop.stop_requested())
        throw ProviderError("generation cancelled");
    return inner_->generate(spec, exhibit, stop);
}

} // namespace engage
