#include "engage/content_pipeline.hpp"

#include "engage/errors.hpp"

#include <spdlog/spdlog.h>

#include <fmt/format.h>

namespace engage {

ThreadExecutor::ThreadExecutor(std::size_t workers)
{
    workers_.reserve(std::max<std::size_t>(workers, 1));
    for (std::size_t i = 0; i < std::max<std::size_t>(workers, 1); ++i)
        workers_.emplace_back([this](std::stop_token stop) { run(stop); });
}

ThreadExecutor::~ThreadExecutor()
{
    for (auto& w : workers_)
        w.request_stop();
    ready_.notify_all();
    workers_.clear(); // joins
}

void ThreadExecutor::submit(Job job)
{
    {
        std::lock_guard lock(mutex_);
        queue_.push_back(std::move(job));
    }
    ready_.notify_one();
}

void ThreadExecutor::run(std::stop_token stop)
{
    while (true) {
        Job job;
        {
            std::unique_lock lock(mutex_);
            if (!ready_.wait(lock, stop, [this] { return !queue_.empty(); }))
                return;
            job = std::move(queue_.front());
            queue_.pop_front();
        }
        job(stop);
    }
}

std::string_view to_string(ResponseOutcome outcome) noexcept
{
    switch (outcome) {
    case ResponseOutcome::Accepted: return "accepted";
    case ResponseOutcome::DiscardedStale: return "discarded-stale";
    case ResponseOutcome::Duplicate: return "duplicate";
    }
    return "?";
}

ContentPipeline::ContentPipeline(Catalog catalog, ContentConfig config,
                                 std::shared_ptr<ContentProvider> provider,
                                 std::unique_ptr<Executor> executor,
                                 std::shared_ptr<ContentCache> cache)
    : catalog_(std::move(catalog)),
      config_(std::move(config)),
      provider_(std::move(provider)),
      cache_(cache ? std::move(cache) : std::make_shared<ContentCache>()),
      completions_(std::make_shared<CompletionQueue>()),
      executor_(std::move(executor))
{
    config_.validate();
    if (!provider_)
        throw ConfigError("content pipeline needs a provider");
    if (!executor_)
        throw ConfigError("content pipeline needs an executor");
}

ContentPipeline::~ContentPipeline()
{
    executor_.reset();
}

void ContentPipeline::observe_state(EngagementState state, std::uint64_t state_seq, double now)
{
    if (!level_ || state_seq != state_seq_ || state != *level_) {
        level_ = state;
        state_seq_ = state_seq;
        level_since_ = now;
    }
}

bool ContentPipeline::level_stable(double now) const noexcept
{
    return level_.has_value() && now - level_since_ >= config_.debounce;
}

std::optional<ContentRecord> ContentPipeline::request_content(std::string_view exhibit_id,
                                                              EngagementState level, double now)
{
    const Exhibit* exhibit = catalog_.find(exhibit_id);
    if (!exhibit)
        throw ConfigError(fmt::format("exhibit '{}' is not in the catalog", exhibit_id));

    if (auto hit = cache_->find(exhibit_id, level)) {
        ++stats_.cache_hits;
        return hit;
    }
    for (const auto& [_, p] : in_flight_) {
        if (p.request.level == level && p.request.exhibit_id == exhibit_id)
            return std::nullopt;
    }

    ContentRequest request{next_request_id_++, std::string(exhibit_id), level, state_seq_, now};
    auto spec = build_prompt(*exhibit, level, config_);
    in_flight_.emplace(request.request_id, Pending{request, std::chrono::steady_clock::now()});
    ++stats_.provider_calls;

    executor_->submit([provider = provider_, queue = completions_, spec = std::move(spec),
                       exhibit = *exhibit, id = request.request_id](std::stop_token stop) {
        Completion done{id, {}};
        try {
            done.result.emplace<0>(provider->generate(spec, exhibit, stop));
        } catch (const std::exception& e) {
            done.result.emplace<1>(e.what());
        }
        std::lock_guard lock(queue->mutex);
        queue->items.push_back(std::move(done));
    });
    return std::nullopt;
}

std::optional<ContentRecord> ContentPipeline::on_focus(std::string_view exhibit_id, double now)
{
    if (!level_ || !catalog_.contains(exhibit_id) || !level_stable(now))
        return std::nullopt;
    return request_content(exhibit_id, *level_, now);
}

ContentRecord ContentPipeline::fallback(const Exhibit& exhibit, EngagementState level,
                                        double now) const
{
    return make_record(exhibit.id, level, exhibit.base_facts, Provenance::StaticFallback, now);
}

void ContentPipeline::resolve_with_fallback(const Pending& pending, double now,
                                            std::vector<AppliedResponse>& out)
{
    const auto& request = pending.request;
    auto record = fallback(*catalog_.find(request.exhibit_id), request.level, now);
    ++stats_.fallbacks;
    const auto outcome = apply_response(record, request, state_seq_);
    out.push_back({request, std::move(record), outcome});
}

std::vector<AppliedResponse> ContentPipeline::poll(double now)
{
    std::vector<AppliedResponse> applied;

    std::vector<Completion> done;
    {
        std::lock_guard lock(completions_->mutex);
        done.swap(completions_->items);
    }

    for (auto& c : done) {
        auto it = in_flight_.find(c.request_id);
        if (it == in_flight_.end()) {
            ++stats_.duplicates; // already resolved, e.g. by timeout
            continue;
        }
        const Pending pending = it->second;
        const auto& request = pending.request;

        if (c.result.index() == 1) {
            spdlog::error("content request {} ({}, {}) failed: {}", request.request_id,
                          request.exhibit_id, to_string(request.level), std::get<1>(c.result));
            resolve_with_fallback(pending, now, applied);
            continue;
        }
        try {
            auto record = make_record(request.exhibit_id, request.level,
                                      std::move(std::get<0>(c.result)), provider_->provenance(),
                                      request.issued_at);
            const auto outcome = apply_response(record, request, state_seq_);
            applied.push_back({request, std::move(record), outcome});
        } catch (const ProviderError& e) {
            spdlog::error("content request {} returned unusable text: {}", request.request_id,
                          e.what());
            resolve_with_fallback(pending, now, applied);
        }
    }

    if (in_flight_.empty() || now < next_expiry_check_)
        return applied;
    next_expiry_check_ = now + kExpiryCheckInterval;

    const auto deadline = std::chrono::duration<double>(config_.timeout);
    const auto wall = std::chrono::steady_clock::now();
    std::vector<Pending> expired;
    for (const auto& [_, p] : in_flight_) {
        if (wall - p.dispatched > deadline)
            expired.push_back(p);
    }
    for (const auto& p : expired) {
        spdlog::warn("content request {} ({}, {}) timed out after {} s; serving static text",
                     p.request.request_id, p.request.exhibit_id, to_string(p.request.level),
                     config_.timeout);
        ++stats_.timeouts;
        resolve_with_fallback(p, now, applied);
    }
    return applied;
}

ResponseOutcome ContentPipeline::apply_response(const ContentRecord& record,
                                                const ContentRequest& request,
                                                std::uint64_t current_state_seq)
{
    if (resolved_.contains(request.request_id)) {
        ++stats_.duplicates;
        return ResponseOutcome::Duplicate;
    }
    resolved_.insert(request.request_id);
    in_flight_.erase(request.request_id);
    cache_->insert(record);

    if (current_state_seq == request.issued_at_state_seq) {
        ++stats_.accepted;
        return ResponseOutcome::Accepted;
    }
    ++stats_.stale;
    return ResponseOutcome::DiscardedStale;
}

ContentRecord ContentPipeline::display(std::string_view exhibit_id, double now) const
{
    const Exhibit* exhibit = catalog_.find(exhibit_id);
    if (!exhibit)
        throw ConfigError(fmt::format("exhibit '{}' is not in the catalog", exhibit_id));
    const auto level = level_.value_or(EngagementState::Neutral);
    if (auto hit = cache_->find(exhibit_id, level))
        return *hit;
    return fallback(*exhibit, level, now);
}

} // namespace engage
