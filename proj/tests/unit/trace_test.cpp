#include "engage/errors.hpp"
#include "engage/scenario.hpp"
#include "engage/trace.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

using namespace engage;

namespace {

const char* kHeader =
    R"({"schema_version":1,"nominal_rate":90,"session_id":"s1","exhibit_catalog_ref":"catalog.jsonl"})";

Trace parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_trace(in);
}

} // namespace

TEST(TraceParse, HeaderOnly)
{
    const auto t = parse(std::string(kHeader) + "\n\n");
    EXPECT_TRUE(t.frames.empty());
    EXPECT_EQ(t.header.session_id, "s1");
    EXPECT_EQ(t.header.nominal_rate, 90.0);
    EXPECT_EQ(t.header.exhibit_catalog_ref, "catalog.jsonl");
}

TEST(TraceParse, Frames)
{
    const auto t = parse(std::string(kHeader) + R"(
{"timestamp":0.0,"head_angular_velocity":3.5,"locomotion_velocity":0.1,"gaze_target":"a","gaze_is_text":true}
{"timestamp":0.5,"head_angular_velocity":0,"locomotion_velocity":0,"gaze_target":null,"gaze_is_text":false,"card_id":"card-a"}
)");
    ASSERT_EQ(t.frames.size(), 2u);
    EXPECT_EQ(t.frames[0].gaze_target, "a");
    EXPECT_TRUE(t.frames[0].gaze_is_text);
    EXPECT_FALSE(t.frames[1].gaze_target);
    EXPECT_EQ(t.frames[1].card_id, "card-a");
}

TEST(TraceParse, NegativeVelocityNamesLine)
{
    try {
        parse(std::string(kHeader) + R"(
{"timestamp":0.0,"head_angular_velocity":1,"locomotion_velocity":0,"gaze_target":null,"gaze_is_text":false}
{"timestamp":0.1,"head_angular_velocity":1,"locomotion_velocity":-0.5,"gaze_target":null,"gaze_is_text":false}
)");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(TraceParse, Errors)
{
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("{oops"), ParseError);
    EXPECT_THROW(parse(R"({"schema_version":2,"nominal_rate":90,"session_id":"s","exhibit_catalog_ref":""})"),
                 VersionError);
    EXPECT_THROW(parse(std::string(kHeader) + "\n{\"timestamp\":0}"), ParseError);
    EXPECT_THROW(parse(std::string(kHeader) + R"(
{"timestamp":0.0,"head_angular_velocity":1,"locomotion_velocity":0,"gaze_target":null,"gaze_is_text":true}
)"),
                 ParseError);
    EXPECT_THROW(parse(std::string(kHeader) + R"(
{"timestamp":1.0,"head_angular_velocity":1,"locomotion_velocity":0,"gaze_target":null,"gaze_is_text":false}
{"timestamp":1.0,"head_angular_velocity":1,"locomotion_velocity":0,"gaze_target":null,"gaze_is_text":false}
)"),
                 OrderingError);
    EXPECT_THROW(load_trace("/nonexistent/trace.jsonl"), Error);
}

TEST(TraceRoundTrip, GenerateSerializeParse)
{
    Mixed mixed{{{FocusedReader{"a"}, 5.0},
                 {Scanner{{"a", "b", "c"}, 0.5}, 5.0},
                 {Walker{1.7}, 3.0},
                 {Runner{3.0}, 3.0}}};
    auto trace = generate_trace(mixed, 40.0, 99);
    trace.header.exhibit_catalog_ref = "cat.jsonl";
    const auto text = serialize_trace(trace);
    const auto back = parse(text);
    EXPECT_EQ(back, trace);
    EXPECT_EQ(serialize_trace(back), text);

    const auto path = std::filesystem::temp_directory_path() / "engage_roundtrip.jsonl";
    save_trace(path.string(), trace);
    EXPECT_EQ(load_trace(path.string()), trace);
    std::filesystem::remove(path);
}

TEST(Scenario, FocusedReaderPostconditions)
{
    const auto frames = generate_scenario(FocusedReader{"a"}, 60.0, 7);
    ASSERT_EQ(frames.size(), 5400u);
    for (const auto& f : frames) {
        EXPECT_TRUE(f.gaze_is_text);
        EXPECT_EQ(f.gaze_target, "a");
        EXPECT_LT(f.locomotion_velocity, 0.1);
        EXPECT_LT(f.head_angular_velocity, 30.0);
    }
}

TEST(Scenario, RunnerPostconditions)
{
    const auto frames = generate_scenario(Runner{2.5}, 30.0, 7);
    ASSERT_EQ(frames.size(), 2700u);
    for (const auto& f : frames) {
        EXPECT_GT(f.locomotion_velocity, 2.0);
        EXPECT_NEAR(f.locomotion_velocity, 2.5, 0.1 + 1e-12);
    }
}

TEST(Scenario, WalkerPostconditions)
{
    for (double v : {1.25, 1.6, 2.0}) {
        for (const auto& f : generate_scenario(Walker{v}, 20.0, 3)) {
            EXPECT_GT(f.locomotion_velocity, 1.2);
            EXPECT_LE(f.locomotion_velocity, 2.0);
        }
    }
}

TEST(Scenario, ScannerGlancesAcrossTargets)
{
    const auto frames = generate_scenario(Scanner{{"a", "b", "c"}, 0.6}, 30.0, 5);
    std::set<std::string> seen;
    std::size_t misses = 0;
    for (const auto& f : frames) {
        if (f.gaze_target)
            seen.insert(*f.gaze_target);
        else
            ++misses;
        EXPECT_GE(f.head_angular_velocity, 25.0);
    }
    EXPECT_EQ(seen.size(), 3u);
    EXPECT_GT(misses, 0u);
}

TEST(Scenario, TimestampsAndDeterminism)
{
    const auto a = generate_trace(Scanner{{"a", "b"}, 0.6}, 10.0, 42);
    const auto b = generate_trace(Scanner{{"a", "b"}, 0.6}, 10.0, 42);
    const auto c = generate_trace(Scanner{{"a", "b"}, 0.6}, 10.0, 43);
    EXPECT_EQ(serialize_trace(a), serialize_trace(b));
    EXPECT_NE(serialize_trace(a), serialize_trace(c));
    for (std::size_t k = 0; k < a.frames.size(); ++k)
        EXPECT_EQ(a.frames[k].timestamp, static_cast<double>(k) / 90.0);
}

TEST(Scenario, MixedEmitsCardPickups)
{
    Mixed mixed{{{FocusedReader{"a"}, 2.0}, {Walker{1.5}, 2.0}}};
    std::size_t cards = 0;
    for (const auto& f : generate_scenario(mixed, 12.0, 1)) {
        if (f.card_id) {
            EXPECT_EQ(*f.card_id, "card-a");
            ++cards;
        }
    }
    EXPECT_EQ(cards, 3u);
}

TEST(Scenario, InvalidParameters)
{
    EXPECT_THROW(validate_scenario(Runner{1.0}), ConfigError);
    EXPECT_THROW(validate_scenario(Runner{2.0}), ConfigError);
    EXPECT_THROW(validate_scenario(Walker{1.2}), ConfigError);
    EXPECT_THROW(validate_scenario(Walker{2.1}), ConfigError);
    EXPECT_THROW(validate_scenario(Scanner{{}, 0.6}), ConfigError);
    EXPECT_THROW(validate_scenario(Scanner{{"a"}, 0.0}), ConfigError);
    EXPECT_THROW(validate_scenario(FocusedReader{""}), ConfigError);
    EXPECT_THROW(validate_scenario(Mixed{}), ConfigError);
    EXPECT_THROW(generate_scenario(Walker{}, -1.0, 1), ConfigError);
    EXPECT_NO_THROW(validate_scenario(Runner{2.01}));
}

TEST(Scenario, ParseSegments)
{
    const auto m = parse_segments("focused-reader:20, scanner:10,walker@1.8:5,runner@3:4", "x",
                                  {"p", "q"});
    ASSERT_EQ(m.segments.size(), 4u);
    EXPECT_EQ(std::get<FocusedReader>(m.segments[0].kind).exhibit, "x");
    EXPECT_EQ(m.segments[0].duration, 20.0);
    EXPECT_EQ(std::get<Scanner>(m.segments[1].kind).targets.size(), 2u);
    EXPECT_EQ(std::get<Walker>(m.segments[2].kind).velocity, 1.8);
    EXPECT_EQ(std::get<Runner>(m.segments[3].kind).velocity, 3.0);
    EXPECT_THROW(parse_segments("dancer:3", "x", {"p"}), ConfigError);
    EXPECT_THROW(parse_segments("walker", "x", {"p"}), ConfigError);
    EXPECT_THROW(parse_segments("walker:abc", "x", {"p"}), ConfigError);
    EXPECT_THROW(parse_segments("", "x", {"p"}), ConfigError);
}
