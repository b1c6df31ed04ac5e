#include "engage/content_pipeline.hpp"
#include "engage/errors.hpp"

#include "support/providers.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

using namespace engage;
using namespace testing_support;
using ES = EngagementState;

namespace {

Catalog catalog()
{
    Catalog c;
    c.add({"brazier", "Brazier", "A copper brazier that warmed a merchant hall."});
    c.add({"clock", "Tide Clock", "A clock whose hand follows the tide."});
    c.add({"lens", "Lens", "A lighthouse lens ring of stepped prisms."});
    return c;
}

struct Fixture
{
    std::shared_ptr<CountingProvider> provider = std::make_shared<CountingProvider>();
    std::shared_ptr<ManualExecutor::Queue> queue = std::make_shared<ManualExecutor::Queue>();
    ContentPipeline pipeline{catalog(), ContentConfig::defaults(), provider,
                             std::make_unique<ManualExecutor>(queue)};
};

ContentPipeline inline_pipeline(std::shared_ptr<ContentProvider> provider)
{
    return ContentPipeline(catalog(), ContentConfig::defaults(), std::move(provider),
                           std::make_unique<InlineExecutor>());
}

} // namespace

TEST(ContentPipeline, RepeatRequestIsCacheHit)
{
    auto provider = std::make_shared<CountingProvider>();
    auto p = inline_pipeline(provider);
    EXPECT_FALSE(p.request_content("brazier", ES::HighlyEngaged, 0.0));
    EXPECT_EQ(provider->calls, 1);
    const auto applied = p.poll(0.1);
    ASSERT_EQ(applied.size(), 1u);
    EXPECT_EQ(applied[0].outcome, ResponseOutcome::Accepted);

    const auto hit = p.request_content("brazier", ES::HighlyEngaged, 5.0);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->level, ES::HighlyEngaged);
    EXPECT_EQ(provider->calls, 1);
    EXPECT_EQ(p.stats().cache_hits, 1u);
}

TEST(ContentPipeline, InFlightRequestsAreShared)
{
    Fixture f;
    f.pipeline.request_content("brazier", ES::Neutral, 0.0);
    f.pipeline.request_content("brazier", ES::Neutral, 0.1);
    EXPECT_EQ(f.queue->jobs.size(), 1u);
    EXPECT_EQ(f.pipeline.in_flight(), 1u);
    run_all(*f.queue);
    f.pipeline.poll(0.2);
    EXPECT_EQ(f.pipeline.in_flight(), 0u);
    EXPECT_EQ(f.provider->calls, 1);
}

TEST(ContentPipeline, ResultsOnlyVisibleAfterPoll)
{
    Fixture f;
    f.pipeline.request_content("clock", ES::Neutral, 0.0);
    run_all(*f.queue);
    EXPECT_FALSE(f.pipeline.cache().contains("clock", ES::Neutral));
    f.pipeline.poll(0.1);
    EXPECT_TRUE(f.pipeline.cache().contains("clock", ES::Neutral));
}

TEST(ContentPipeline, FailingProviderFallsBack)
{
    auto p = inline_pipeline(std::make_shared<FailingProvider>());
    p.request_content("brazier", ES::Engaged, 0.0);
    const auto applied = p.poll(0.5);
    ASSERT_EQ(applied.size(), 1u);
    EXPECT_EQ(applied[0].record.provenance, Provenance::StaticFallback);
    EXPECT_EQ(applied[0].record.text, catalog().find("brazier")->base_facts);
    EXPECT_EQ(p.stats().fallbacks, 1u);
    EXPECT_EQ(p.in_flight(), 0u);
}

TEST(ContentPipeline, BlankResponseFallsBack)
{
    auto p = inline_pipeline(std::make_shared<BlankProvider>());
    p.request_content("lens", ES::Neutral, 0.0);
    const auto applied = p.poll(0.5);
    ASSERT_EQ(applied.size(), 1u);
    EXPECT_EQ(applied[0].record.provenance, Provenance::StaticFallback);
}

TEST(ContentPipeline, TimeoutFallsBackAndIgnoresLateReply)
{
    auto cfg = ContentConfig::defaults();
    cfg.timeout = 0.05;
    auto queue = std::make_shared<ManualExecutor::Queue>();
    ContentPipeline p(catalog(), cfg, std::make_shared<MockProvider>(),
                      std::make_unique<ManualExecutor>(queue));
    p.request_content("brazier", ES::Neutral, 0.0);
    EXPECT_TRUE(p.poll(0.01).empty());
    std::this_thread::sleep_for(std::chrono::milliseconds(80));
    EXPECT_TRUE(p.poll(0.05).empty()); // expiry is checked once per interval
    const auto applied = p.poll(0.2);
    ASSERT_EQ(applied.size(), 1u);
    EXPECT_EQ(applied[0].record.provenance, Provenance::StaticFallback);
    EXPECT_EQ(p.stats().timeouts, 1u);

    run_all(*queue); // the reply finally lands
    EXPECT_TRUE(p.poll(0.3).empty());
    EXPECT_EQ(p.cache().find("brazier", ES::Neutral)->provenance, Provenance::StaticFallback);
    EXPECT_EQ(p.stats().duplicates, 1u);
}

TEST(ContentPipeline, UnknownExhibit)
{
    Fixture f;
    EXPECT_THROW(f.pipeline.request_content("unicorn", ES::Neutral, 0.0), ConfigError);
    f.pipeline.observe_state(ES::Neutral, 0, 0.0);
    EXPECT_FALSE(f.pipeline.on_focus("unicorn", 10.0));
    EXPECT_THROW(f.pipeline.display("unicorn", 0.0), ConfigError);
}

TEST(ContentPipeline, ApplyResponseOutcomes)
{
    Fixture f;
    f.pipeline.observe_state(ES::Engaged, 4, 0.0);
    ContentRequest req{1, "brazier", ES::Engaged, 4, 0.0};
    const auto rec = make_record("brazier", ES::Engaged, "words here", Provenance::Mock, 0.0);
    EXPECT_EQ(f.pipeline.apply_response(rec, req, 4), ResponseOutcome::Accepted);
    EXPECT_EQ(f.pipeline.apply_response(rec, req, 4), ResponseOutcome::Duplicate);

    ContentRequest stale{2, "clock", ES::Engaged, 4, 0.0};
    const auto rec2 = make_record("clock", ES::Engaged, "more words", Provenance::Mock, 0.0);
    EXPECT_EQ(f.pipeline.apply_response(rec2, stale, 5), ResponseOutcome::DiscardedStale);
    EXPECT_TRUE(f.pipeline.cache().contains("clock", ES::Engaged));
}

TEST(ContentPipeline, StaleResponseIsCachedNotShown)
{
    Fixture f;
    f.pipeline.observe_state(ES::Engaged, 1, 0.0);
    ASSERT_TRUE(f.pipeline.level_stable(2.0));
    f.pipeline.on_focus("brazier", 2.0);
    ASSERT_EQ(f.queue->jobs.size(), 1u);
    f.pipeline.observe_state(ES::Neutral, 2, 2.1); // level changes while in flight
    run_all(*f.queue);
    const auto applied = f.pipeline.poll(2.2);
    ASSERT_EQ(applied.size(), 1u);
    EXPECT_EQ(applied[0].outcome, ResponseOutcome::DiscardedStale);
    EXPECT_TRUE(f.pipeline.cache().contains("brazier", ES::Engaged));

    const auto shown = f.pipeline.display("brazier", 2.3);
    EXPECT_EQ(shown.level, ES::Neutral);
    EXPECT_EQ(shown.provenance, Provenance::StaticFallback);
}

TEST(ContentPipeline, DebounceSuppressesFlicker)
{
    Fixture f;
    f.pipeline.observe_state(ES::Engaged, 0, 0.0);
    f.pipeline.on_focus("brazier", 0.5);
    f.pipeline.observe_state(ES::HighlyEngaged, 1, 0.6);
    f.pipeline.on_focus("brazier", 1.0);
    f.pipeline.observe_state(ES::Engaged, 2, 1.2);
    for (double t = 1.2; t < 3.19; t += 0.1)
        f.pipeline.on_focus("brazier", t);
    EXPECT_EQ(f.queue->jobs.size(), 0u);
    f.pipeline.on_focus("brazier", 3.2);
    EXPECT_LE(f.queue->jobs.size(), 1u);
    EXPECT_EQ(f.queue->jobs.size(), 1u);
}

TEST(ContentPipeline, DisplayLevelMatchesCurrentState)
{
    auto provider = std::make_shared<CountingProvider>();
    auto p = inline_pipeline(provider);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> level(0, 4), exhibit(0, 2);
    const std::array<std::string, 3> ids{"brazier", "clock", "lens"};
    std::uint64_t seq = 0;
    double t = 0.0;
    for (int i = 0; i < 500; ++i) {
        t += 0.7;
        const auto s = state_at(static_cast<std::size_t>(level(rng)));
        if (!p.level() || s != *p.level())
            ++seq;
        p.observe_state(s, seq, t);
        p.on_focus(ids[static_cast<std::size_t>(exhibit(rng))], t);
        p.poll(t);
        const auto shown = p.display(ids[static_cast<std::size_t>(exhibit(rng))], t);
        EXPECT_EQ(shown.level, s);
    }
}

TEST(ContentPipeline, CacheCoherenceUnderRandomRequests)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto provider = std::make_shared<CountingProvider>();
        auto p = inline_pipeline(provider);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> level(0, 4), exhibit(0, 2);
        const std::array<std::string, 3> ids{"brazier", "clock", "lens"};
        std::set<std::pair<std::string, int>> distinct;
        for (int i = 0; i < 300; ++i) {
            const auto& id = ids[static_cast<std::size_t>(exhibit(rng))];
            const int lv = level(rng);
            const bool seen = p.cache().contains(id, state_at(static_cast<std::size_t>(lv)));
            const int before = provider->calls;
            const auto hit = p.request_content(id, state_at(static_cast<std::size_t>(lv)), i);
            if (seen) {
                EXPECT_TRUE(hit);
                EXPECT_EQ(provider->calls, before);
            }
            distinct.emplace(id, lv);
            if (i % 3 == 0)
                p.poll(i);
        }
        p.poll(1000.0);
        EXPECT_LE(static_cast<std::size_t>(provider->calls.load()), distinct.size());
        EXPECT_EQ(p.in_flight(), 0u);
    }
}

TEST(ContentPipeline, ThreadedExecutorDeliversOnPoll)
{
    auto provider = std::make_shared<CountingProvider>();
    ContentPipeline p(catalog(), ContentConfig::defaults(), provider,
                      std::make_unique<ThreadExecutor>(2));
    for (const auto& id : {"brazier", "clock", "lens"})
        p.request_content(id, ES::Neutral, 0.0);
    std::size_t applied = 0;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
    while (applied < 3 && std::chrono::steady_clock::now() < deadline) {
        applied += p.poll(0.0).size();
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    EXPECT_EQ(applied, 3u);
    EXPECT_EQ(p.cache().size(), 3u);
}

TEST(ContentPipeline, DestructionDoesNotWaitForSlowProvider)
{
    const auto t0 = std::chrono::steady_clock::now();
    {
        ContentPipeline p(
            catalog(), ContentConfig::defaults(),
            std::make_shared<DelayedProvider>(std::make_shared<MockProvider>(),
                                              std::chrono::seconds(30)),
            std::make_unique<ThreadExecutor>(1));
        p.request_content("brazier", ES::Neutral, 0.0);
        p.request_content("clock", ES::Neutral, 0.0);
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(2));
}
