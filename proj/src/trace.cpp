#include "engage/trace.hpp"

#include "engage/errors.hpp"

#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace engage {

namespace {

using nlohmann::json;

bool blank(const std::string& line)
{
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

double number_field(const json& j, const char* key, std::size_t line)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(line, fmt::format("missing field '{}'", key));
    if (!it->is_number())
        throw ParseError(line, fmt::format("field '{}' must be a number", key));
    return it->get<double>();
}

TraceHeader parse_header(const std::string& text, std::size_t line)
{
    const auto j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ParseError(line, "header is not a JSON object");
    auto version = j.find("schema_version");
    if (version == j.end() || !version->is_number_integer())
        throw ParseError(line, "header needs an integer 'schema_version'");
    if (version->get<int>() != kTraceSchemaVersion)
        throw VersionError(fmt::format("unsupported trace schema version {} (expected {})",
                                       version->get<int>(), kTraceSchemaVersion));

    TraceHeader h;
    h.schema_version = version->get<int>();
    h.nominal_rate = j.contains("nominal_rate") ? number_field(j, "nominal_rate", line) : 90.0;
    if (!(h.nominal_rate > 0.0))
        throw ParseError(line, "nominal_rate must be > 0");
    h.session_id = j.value("session_id", std::string{});
    h.exhibit_catalog_ref = j.value("exhibit_catalog_ref", std::string{});
    return h;
}

TelemetryFrame parse_frame(const std::string& text, std::size_t line)
{
    const auto j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ParseError(line, "frame is not a JSON object");

    TelemetryFrame f;
    f.timestamp = number_field(j, "timestamp", line);
    f.head_angular_velocity = number_field(j, "head_angular_velocity", line);
    f.locomotion_velocity = number_field(j, "locomotion_velocity", line);

    if (auto it = j.find("gaze_target"); it != j.end() && !it->is_null()) {
        if (!it->is_string())
            throw ParseError(line, "gaze_target must be a string or null");
        f.gaze_target = it->get<std::string>();
    }
    if (auto it = j.find("gaze_is_text"); it != j.end()) {
        if (!it->is_boolean())
            throw ParseError(line, "gaze_is_text must be a boolean");
        f.gaze_is_text = it->get<bool>();
    }
    if (auto it = j.find("card_id"); it != j.end() && !it->is_null()) {
        if (!it->is_string())
            throw ParseError(line, "card_id must be a string or null");
        f.card_id = it->get<std::string>();
    }

    try {
        validate_frame(f);
    } catch (const InvalidSignalError& e) {
        throw ParseError(line, e.what());
    }
    return f;
}

json frame_to_json(const TelemetryFrame& f)
{
    json j = {
        {"timestamp", f.timestamp},
        {"head_angular_velocity", f.head_angular_velocity},
        {"locomotion_velocity", f.locomotion_velocity},
        {"gaze_target", f.gaze_target ? json(*f.gaze_target) : json(nullptr)},
        {"gaze_is_text", f.gaze_is_text},
    };
    if (f.card_id)
        j["card_id"] = *f.card_id;
    return j;
}

} // namespace

Trace parse_trace(std::istream& in)
{
    Trace trace;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line))
            continue;
        if (!have_header) {
            trace.header = parse_header(line, line_no);
            have_header = true;
            continue;
        }
        auto frame = parse_frame(line, line_no);
        if (!trace.frames.empty() && frame.timestamp <= trace.frames.back().timestamp)
            throw OrderingError(fmt::format("line {}: timestamp {} does not follow {}", line_no,
                                            frame.timestamp, trace.frames.back().timestamp));
        trace.frames.push_back(std::move(frame));
    }
    if (!have_header)
        throw ParseError(line_no + 1, "missing trace header");
    return trace;
}

Trace load_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open trace '{}'", path));
    return parse_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace)
{
    const auto& h = trace.header;
    out << json{{"schema_version", h.schema_version},
                {"nominal_rate", h.nominal_rate},
                {"session_id", h.session_id},
                {"exhibit_catalog_ref", h.exhibit_catalog_ref}}
               .dump()
        << '\n';
    for (const auto& f : trace.frames)
        out << frame_to_json(f).dump() << '\n';
}

std::string serialize_trace(const Trace& trace)
{
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

void save_trace(const std::string& path, const Trace& trace)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ConfigError(fmt::format("cannot write trace '{}'", path));
    write_trace(out, trace);
}

} // namespace engage
