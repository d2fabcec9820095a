#include "netscan/time.hpp"

#include <chrono>
#include <cstdio>

#include <fmt/format.h>

#include "netscan/error.hpp"

namespace netscan {

namespace {

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > text.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = text[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

}  // namespace

Hour parse_iso_hour(std::string_view text) {
    auto fail = [&]() -> Hour {
        throw InvalidInput("malformed hourly timestamp '" + std::string(text) + "'");
    };
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!read_digits(text, 0, 4, y) || text.size() < 13 || text[4] != '-' ||
        !read_digits(text, 5, 2, mo) || text[7] != '-' || !read_digits(text, 8, 2, d) ||
        (text[10] != 'T' && text[10] != ' ') || !read_digits(text, 11, 2, h)) {
        return fail();
    }
    std::size_t pos = 13;
    if (pos < text.size() && text[pos] == ':') {
        if (!read_digits(text, pos + 1, 2, mi)) return fail();
        pos += 3;
        if (pos < text.size() && text[pos] == ':') {
            if (!read_digits(text, pos + 1, 2, s)) return fail();
            pos += 3;
        }
    }
    const std::string_view rest = text.substr(pos);
    if (!(rest.empty() || rest == "Z" || rest == "+00:00")) return fail();
    if (mi != 0 || s != 0) {
        throw InvalidInput("timestamp '" + std::string(text) + "' is not on the hour");
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23) return fail();
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<Hour>(days) * hours_per_day + h;
}

std::string format_iso_hour(Hour hour) {
    using namespace std::chrono;
    Hour days = hour / hours_per_day;
    Hour rem = hour % hours_per_day;
    if (rem < 0) {
        rem += hours_per_day;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:00:00Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       rem);
}

int weekday_of(Hour hour) {
    Hour days = hour / hours_per_day;
    if (hour % hours_per_day < 0) --days;
    // 1970-01-01 was a Thursday.
    Hour w = (days + 4) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

}  // namespace netscan
