#include "vc/dates.hpp"

#include <cstdio>

namespace vc {

namespace chr = std::chrono;

static chr::year_month_day to_ymd(std::int32_t days) {
    return chr::year_month_day{chr::sys_days{chr::days{days}}};
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    return Date(static_cast<std::int32_t>(
        chr::sys_days{ymd}.time_since_epoch().count()));
}

std::optional<Date> Date::parse_iso(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto digits = [](std::string_view t) {
        int v = 0;
        for (char c : t) {
            if (c < '0' || c > '9') return -1;
            v = v * 10 + (c - '0');
        }
        return v;
    };
    int y = digits(s.substr(0, 4));
    int m = digits(s.substr(5, 2));
    int d = digits(s.substr(8, 2));
    if (y < 0 || m < 0 || d < 0) return std::nullopt;
    chr::year_month_day ymd{chr::year{y}, chr::month{unsigned(m)},
                            chr::day{unsigned(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(static_cast<std::int32_t>(
        chr::sys_days{ymd}.time_since_epoch().count()));
}

std::string Date::to_iso() const {
    auto ymd = to_ymd(days_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

int Date::year() const { return int(to_ymd(days_).year()); }
unsigned Date::month() const { return unsigned(to_ymd(days_).month()); }
unsigned Date::day() const { return unsigned(to_ymd(days_).day()); }

Date Date::plus_months_floor(int n) const {
    auto ymd = to_ymd(days_);
    int total = int(ymd.year()) * 12 + int(unsigned(ymd.month())) - 1 + n;
    int y = total / 12;
    int m = total % 12;
    if (m < 0) {
        m += 12;
        y -= 1;
    }
    return from_ymd(y, unsigned(m + 1), 1);
}

Date Date::ceil_to_month() const {
    auto ymd = to_ymd(days_);
    if (unsigned(ymd.day()) == 1) return *this;
    return plus_months_floor(1);
}

}  // namespace vc
