#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zenoplan {

/// Exact rational arithmetic for durations, costs, weights and indicator
/// values. All fronts and fitness values in this project are compared for
/// exact equality, so floating point is not an option. Numerator and
/// denominator are kept in int64 (always normalized, denominator > 0);
/// intermediates use __int128 and an overflow throws instead of wrapping.
class Rat {
public:
    constexpr Rat() : num_(0), den_(1) {}
    constexpr Rat(std::int64_t value) : num_(value), den_(1) {}
    Rat(std::int64_t num, std::int64_t den);

    /// Accepts "12", "-3.25", "7/2". Decimal digits are exact (no binary
    /// rounding), which is what keeps taxes like 1.1 and 2.9 exact.
    static Rat parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    Rat operator-() const { return Rat(-num_, den_, already_normalized_tag{}); }
    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const;
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator<=(const Rat& o) const { return !(o < *this); }
    bool operator>=(const Rat& o) const { return !(*this < o); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Minimal decimal string ("8", "22.8", "-0.05") when the denominator is
    /// of the form 2^a 5^b, otherwise "num/den". Trace and CSV files round
    /// trip through parse() exactly.
    std::string to_string() const;

    std::size_t hash() const {
        std::size_t h = std::hash<std::int64_t>{}(num_);
        return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    }

private:
    struct already_normalized_tag {};
    constexpr Rat(std::int64_t n, std::int64_t d, already_normalized_tag) : num_(n), den_(d) {}
    static Rat from_i128(__int128 num, __int128 den);

    std::int64_t num_;
    std::int64_t den_;
};

inline Rat abs(const Rat& r) { return r < Rat(0) ? -r : r; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

} // namespace zenoplan

template <> struct std::hash<zenoplan::Rat> {
    std::size_t operator()(const zenoplan::Rat& r) const { return r.hash(); }
};
