#pragma once

#include "engage/content.hpp"
#include "engage/content_cache.hpp"
#include "engage/provider.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stop_token>
#include <thread>
#include <variant>
#include <vector>

namespace engage {

/// Runs provider jobs. submit() must not wait on the job.
class Executor
{
public:
    using Job = std::function<void(std::stop_token)>;

    virtual ~Executor() = default;
    virtual void submit(Job job) = 0;
};

/// Runs each job inside submit(). Used for deterministic replays with the
/// mock provider; completions are still only observed on the next poll().
class InlineExecutor : public Executor
{
public:
    void submit(Job job) override { job(std::stop_token{}); }
};

/// Worker threads fed from a FIFO. Destruction requests stop on running jobs
/// and discards queued ones.
class ThreadExecutor : public Executor
{
public:
    explicit ThreadExecutor(std::size_t workers = 1);
    ~ThreadExecutor() override;

    ThreadExecutor(const ThreadExecutor&) = delete;
    ThreadExecutor& operator=(const ThreadExecutor&) = delete;

    void submit(Job job) override;

private:
    void run(std::stop_token stop);

    std::mutex mutex_;
    std::condition_variable_any ready_;
    std::deque<Job> queue_;
    std::vector<std::jthread> workers_;
};

struct ContentRequest
{
    std::uint64_t request_id = 0;
    std::string exhibit_id;
    EngagementState level = EngagementState::Neutral;
    std::uint64_t issued_at_state_seq = 0;
    double issued_at = 0.0; // trace seconds
};

enum class ResponseOutcome : std::uint8_t { Accepted, DiscardedStale, Duplicate };

std::string_view to_string(ResponseOutcome outcome) noexcept;

struct AppliedResponse
{
    ContentRequest request;
    ContentRecord record;
    ResponseOutcome outcome = ResponseOutcome::Accepted;
};

struct PipelineStats
{
    std::size_t provider_calls = 0;
    std::size_t cache_hits = 0;
    std::size_t accepted = 0;
    std::size_t stale = 0;
    std::size_t duplicates = 0;
    std::size_t fallbacks = 0;
    std::size_t timeouts = 0;
};

/// Turns engagement levels into cached, level-specific exhibit text without
/// blocking the caller.
///
/// Single writer: every member is called from the inference loop. Provider
/// work runs on the executor and comes back through a completion queue that
/// poll() drains.
class ContentPipeline
{
public:
    static constexpr double kExpiryCheckInterval = 0.1;

    ContentPipeline(Catalog catalog, ContentConfig config, std::shared_ptr<ContentProvider> provider,
                    std::unique_ptr<Executor> executor,
                    std::shared_ptr<ContentCache> cache = std::make_shared<ContentCache>());
    ~ContentPipeline();

    ContentPipeline(const ContentPipeline&) = delete;
    ContentPipeline& operator=(const ContentPipeline&) = delete;

    /// Feeds the emitted state of a tick. A new sequence number restarts the
    /// debounce clock.
    void observe_state(EngagementState state, std::uint64_t state_seq, double now);

    /// True once the current level has held for the debounce interval.
    bool level_stable(double now) const noexcept;

    std::optional<EngagementState> level() const noexcept { return level_; }
    std::uint64_t state_seq() const noexcept { return state_seq_; }

    /// Cache hit: returns the record, no provider call. Miss: dispatches a
    /// request (unless one is already in flight for the key) and returns
    /// nullopt. Throws ConfigError for an exhibit outside the catalog.
    std::optional<ContentRecord> request_content(std::string_view exhibit_id, EngagementState level,
                                                 double now);

    /// Debounced request for the current level. No-op for unknown exhibits or
    /// while the level is settling.
    std::optional<ContentRecord> on_focus(std::string_view exhibit_id, double now);

    /// Applies finished responses and expires requests older than the
    /// timeout with the static fallback. Expiry is checked at most every
    /// kExpiryCheckInterval seconds of trace time.
    std::vector<AppliedResponse> poll(double now);

    /// Caches the record. Accepted when no state transition happened since
    /// the request was issued, DiscardedStale otherwise, Duplicate when the
    /// request was already resolved (the cache is then left alone).
    ResponseOutcome apply_response(const ContentRecord& record, const ContentRequest& request,
                                   std::uint64_t current_state_seq);

    /// What the panel shows for `exhibit_id` at the current level: the cached
    /// record or, failing that, the exhibit's base facts.
    ContentRecord display(std::string_view exhibit_id, double now) const;

    ContentRecord fallback(const Exhibit& exhibit, EngagementState level, double now) const;

    std::size_t in_flight() const noexcept { return in_flight_.size(); }
    const PipelineStats& stats() const noexcept { return stats_; }
    const ContentCache& cache() const noexcept { return *cache_; }
    std::shared_ptr<ContentCache> shared_cache() const noexcept { return cache_; }
    const Catalog& catalog() const noexcept { return catalog_; }
    const ContentConfig& config() const noexcept { return config_; }

private:
    struct Completion
    {
        std::uint64_t request_id;
        std::variant<std::string, std::string> result; // index 0 text, index 1 error
    };

    struct CompletionQueue
    {
        std::mutex mutex;
        std::vector<Completion> items;
    };

    struct Pending
    {
        ContentRequest request;
        std::chrono::steady_clock::time_point dispatched;
    };

    void resolve_with_fallback(const Pending& pending, double now, std::vector<AppliedResponse>& out);

    Catalog catalog_;
    ContentConfig config_;
    std::shared_ptr<ContentProvider> provider_;
    std::shared_ptr<ContentCache> cache_;
    std::shared_ptr<CompletionQueue> completions_;
    std::unique_ptr<Executor> executor_;

    std::map<std::uint64_t, Pending> in_flight_;
    std::set<std::uint64_t> resolved_;
    std::uint64_t next_request_id_ = 1;

    std::optional<EngagementState> level_;
    std::uint64_t state_seq_ = 0;
    double level_since_ = 0.0;
    double next_expiry_check_ = 0.0; // trace seconds

    PipelineStats stats_;
};

} // namespace engage
