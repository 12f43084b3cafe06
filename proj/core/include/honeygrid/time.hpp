#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace honeygrid {

/// UTC instant at second precision. Sub-second digits in inputs are parsed
/// and truncated.
using UtcSeconds = std::chrono::sys_seconds;

/// Parses an ISO-8601 instant: "2018-12-01T00:00:00Z", optional fractional
/// seconds, "Z" or a "+HH:MM"/"-HH:MM" offset (converted to UTC).
/// Throws Error("invalid-timestamp") on anything else.
UtcSeconds parse_utc(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(UtcSeconds instant);

} // namespace honeygrid
