#include "honeygrid/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "honeygrid/error.hpp"

namespace honeygrid {

namespace {

bool read_int(std::string_view text, std::size_t& pos, int digits, int& out) {
    if (pos + digits > text.size()) return false;
    for (int i = 0; i < digits; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[pos + i]))) return false;
    }
    auto res = std::from_chars(text.data() + pos, text.data() + pos + digits, out);
    if (res.ec != std::errc{}) return false;
    pos += static_cast<std::size_t>(digits);
    return true;
}

bool expect(std::string_view text, std::size_t& pos, char c) {
    if (pos >= text.size() || text[pos] != c) return false;
    ++pos;
    return true;
}

} // namespace

UtcSeconds parse_utc(std::string_view text) {
    using namespace std::chrono;

    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    bool ok = read_int(text, pos, 4, y) && expect(text, pos, '-') &&
              read_int(text, pos, 2, mo) && expect(text, pos, '-') &&
              read_int(text, pos, 2, d) &&
              (pos < text.size() && (text[pos] == 'T' || text[pos] == 't' || text[pos] == ' ')) &&
              (++pos, read_int(text, pos, 2, h)) && expect(text, pos, ':') &&
              read_int(text, pos, 2, mi) && expect(text, pos, ':') &&
              read_int(text, pos, 2, s);
    if (!ok) fail("invalid-timestamp", "not an ISO-8601 UTC instant: '" + std::string(text) + "'");

    // Fractional seconds: parsed and truncated.
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("invalid-timestamp", "empty fractional seconds: '" + std::string(text) + "'");
    }

    int offset_minutes = 0;
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        int sign = text[pos] == '+' ? 1 : -1;
        ++pos;
        int oh = 0, om = 0;
        if (!read_int(text, pos, 2, oh) || !expect(text, pos, ':') || !read_int(text, pos, 2, om) ||
            oh > 23 || om > 59) {
            fail("invalid-timestamp", "bad UTC offset: '" + std::string(text) + "'");
        }
        offset_minutes = sign * (oh * 60 + om);
    } else {
        fail("invalid-timestamp", "missing UTC designator: '" + std::string(text) + "'");
    }
    if (pos != text.size()) {
        fail("invalid-timestamp", "trailing characters: '" + std::string(text) + "'");
    }

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
        fail("invalid-timestamp", "out-of-range field: '" + std::string(text) + "'");
    }
    if (s == 60) s = 59; // leap second, clamped

    sys_seconds instant = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return instant - minutes{offset_minutes};
}

std::string format_utc(UtcSeconds instant) {
    using namespace std::chrono;
    sys_days date = floor<days>(instant);
    year_month_day ymd{date};
    hh_mm_ss tod{instant - date};

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long>(tod.hours().count()),
                  static_cast<long>(tod.minutes().count()),
                  static_cast<long>(tod.seconds().count()));
    return buf;
}

} // namespace honeygrid
