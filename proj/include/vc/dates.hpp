#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vc {

/// Calendar date stored as days since 1970-01-01. Comparisons and day
/// arithmetic are integer operations; month arithmetic pins to day 1.
class Date {
public:
    Date() = default;
    explicit constexpr Date(std::int32_t days) : days_(days) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Strict ISO-8601 (YYYY-MM-DD). Anything else -> nullopt.
    static std::optional<Date> parse_iso(std::string_view s);

    std::string to_iso() const;

    constexpr std::int32_t days_since_epoch() const { return days_; }

    int year() const;
    unsigned month() const;
    unsigned day() const;

    Date plus_days(std::int32_t n) const { return Date(days_ + n); }

    /// Month stepping pinned to day 1.
    Date plus_months_floor(int n) const;

    /// First month boundary >= *this.
    Date ceil_to_month() const;

    friend constexpr auto operator<=>(Date a, Date b) = default;

private:
    std::int32_t days_ = 0;
};

inline std::int32_t operator-(Date a, Date b) {
    return a.days_since_epoch() - b.days_since_epoch();
}

}  // namespace vc
