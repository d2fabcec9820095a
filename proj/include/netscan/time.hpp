#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace netscan {

// Integer hours since 1970-01-01T00:00Z.
using Hour = std::int64_t;

// Parses "YYYY-MM-DDTHH[:MM[:SS]]" with an optional "Z" or "+00:00" suffix.
// Minutes and seconds must be zero. Throws InvalidInput on anything else.
Hour parse_iso_hour(std::string_view text);

// Formats as "YYYY-MM-DDTHH:00:00Z".
std::string format_iso_hour(Hour hour);

// 0 = Sunday ... 6 = Saturday.
int weekday_of(Hour hour);

constexpr Hour hours_per_day = 24;
constexpr Hour hours_per_week = 168;

}  // namespace netscan
