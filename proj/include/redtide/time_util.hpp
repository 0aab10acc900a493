#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace redtide {

using Date = std::chrono::sys_days;
using UtcSeconds = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DD". Returns nullopt on malformed input or invalid
/// calendar dates (e.g. 2018-02-30).
std::optional<Date> parse_date(const std::string& s);

/// Parses an ISO-8601 timestamp: "YYYY-MM-DDTHH:MM:SS" with an optional
/// trailing "Z" or "+HH:MM"/"-HH:MM" offset. Naive timestamps are taken
/// as UTC. The result is always normalized to UTC.
std::optional<UtcSeconds> parse_iso8601(const std::string& s);

std::string format_date(Date d);
std::string format_iso8601(UtcSeconds t);

/// Civil date of a UTC instant after applying a fixed local offset.
Date local_date(UtcSeconds t, int utc_offset_hours);

}  // namespace redtide
