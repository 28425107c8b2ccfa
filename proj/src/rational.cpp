#include "zenoplan/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace zenoplan {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr std::int64_t kMax = INT64_MAX;

} // namespace

Rat Rat::from_i128(__int128 num, __int128 den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num > kMax || num < -static_cast<__int128>(kMax) - 1 || den > kMax)
        throw std::overflow_error("Rat: value out of 64-bit range");
    return Rat(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), already_normalized_tag{});
}

Rat::Rat(std::int64_t num, std::int64_t den) {
    *this = from_i128(num, den);
}

Rat Rat::operator+(const Rat& o) const {
    return from_i128(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                     static_cast<__int128>(den_) * o.den_);
}

Rat Rat::operator-(const Rat& o) const {
    return from_i128(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                     static_cast<__int128>(den_) * o.den_);
}

Rat Rat::operator*(const Rat& o) const {
    return from_i128(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rat Rat::operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::invalid_argument("Rat: division by zero");
    return from_i128(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

bool Rat::operator<(const Rat& o) const {
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

Rat Rat::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("Rat::parse: empty string");
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        Rat n = parse(text.substr(0, slash));
        Rat d = parse(text.substr(slash + 1));
        return n / d;
    }
    bool negative = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    __int128 num = 0;
    __int128 den = 1;
    bool saw_digit = false;
    bool saw_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (saw_dot) throw std::invalid_argument("Rat::parse: bad number");
            saw_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("Rat::parse: bad character in '" + std::string(text) + "'");
        saw_digit = true;
        num = num * 10 + (c - '0');
        if (saw_dot) den *= 10;
        if (den > static_cast<__int128>(kMax) || num > static_cast<__int128>(kMax) * 1000)
            throw std::overflow_error("Rat::parse: too many digits");
    }
    if (!saw_digit) throw std::invalid_argument("Rat::parse: no digits");
    if (negative) num = -num;
    return from_i128(num, den);
}

std::string Rat::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    // expand denominators of the form 2^a 5^b to a terminating decimal
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    int digits = twos > fives ? twos : fives;
    __int128 scaled = num_;
    for (int k = 0; k < digits; ++k) scaled *= 10;
    scaled /= den_;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string body;
    for (__int128 v = scaled; v > 0 || body.empty(); v /= 10)
        body.insert(body.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
    body.insert(body.size() - digits, ".");
    return (neg ? "-" : "") + body;
}

} // namespace zenoplan
