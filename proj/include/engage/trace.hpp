#pragma once

#include "engage/telemetry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace engage {

inline constexpr int kTraceSchemaVersion = 1;

struct TraceHeader
{
    int schema_version = kTraceSchemaVersion;
    double nominal_rate = 90.0; // Hz
    std::string session_id;
    std::string exhibit_catalog_ref;

    bool operator==(const TraceHeader&) const = default;
};

struct Trace
{
    TraceHeader header;
    std::vector<TelemetryFrame> frames;

    bool operator==(const Trace&) const = default;
};

/// Reads a JSON-lines trace: header record first, then one frame per line.
/// Blank lines are skipped.
///
/// Throws ParseError (with line number) for malformed lines or invalid
/// values, OrderingError for non-increasing timestamps and VersionError for
/// an unknown schema version.
Trace parse_trace(std::istream& in);
Trace load_trace(const std::string& path);

void write_trace(std::ostream& out, const Trace& trace);
std::string serialize_trace(const Trace& trace);
void save_trace(const std::string& path, const Trace& trace);

} // namespace engage
