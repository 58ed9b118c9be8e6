// amount.hpp
// Exact fixed-point money with 18 fractional decimal digits, backed by a
// 128-bit integer. Sums stay exact for at least 1e8 terms of 1e6 whole-unit
// magnitude (1e32 < 2^126), which is what the surplus conservation checks
// rely on. Unit mixing is a compile-time error.

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace laneboost {

using int128 = __int128;

constexpr int kAmountDecimals = 18;
constexpr int128 kAmountScale = [] {
    int128 s = 1;
    for (int i = 0; i < kAmountDecimals; ++i) s *= 10;
    return s;
}();

namespace detail {

inline std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    char buf[48];
    int i = 48;
    while (u > 0) {
        buf[--i] = static_cast<char>('0' + static_cast<int>(u % 10));
        u /= 10;
    }
    std::string s;
    if (neg) s.push_back('-');
    s.append(buf + i, buf + 48);
    return s;
}

} // namespace detail

// UnitTag is a marker struct; amounts of different units never mix.
template <typename UnitTag>
class FixedAmount {
public:
    constexpr FixedAmount() = default;

    static constexpr FixedAmount from_units(int128 raw) {
        FixedAmount a;
        a.units_ = raw;
        return a;
    }

    static constexpr FixedAmount from_int(std::int64_t whole) {
        return from_units(static_cast<int128>(whole) * kAmountScale);
    }

    // Parses a plain decimal literal ("0.0075", "-12", "1.5"). More than 18
    // fractional digits is rejected rather than silently truncated.
    static FixedAmount parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("amount: empty string");
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
        }
        int128 whole = 0, frac = 0;
        int frac_digits = 0;
        bool any_digit = false, in_frac = false;
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c == '.') {
                if (in_frac) throw std::invalid_argument("amount: two decimal points in '" + std::string(s) + "'");
                in_frac = true;
                continue;
            }
            if (c < '0' || c > '9')
                throw std::invalid_argument("amount: invalid character in '" + std::string(s) + "'");
            any_digit = true;
            if (in_frac) {
                if (++frac_digits > kAmountDecimals)
                    throw std::invalid_argument("amount: more than 18 fractional digits in '" + std::string(s) + "'");
                frac = frac * 10 + (c - '0');
            } else {
                whole = whole * 10 + (c - '0');
                if (whole > (std::numeric_limits<std::int64_t>::max)())
                    throw std::invalid_argument("amount: integer part out of range in '" + std::string(s) + "'");
            }
        }
        if (!any_digit) throw std::invalid_argument("amount: no digits in '" + std::string(s) + "'");
        for (int k = frac_digits; k < kAmountDecimals; ++k) frac *= 10;
        int128 u = whole * kAmountScale + frac;
        return from_units(neg ? -u : u);
    }

    // Quantizes a double to the nearest fixed-point step (ties away from zero).
    // This is the only sanctioned double -> money path; use it at boundaries
    // (agent valuations, USD conversion), never inside conservation sums.
    static FixedAmount from_double(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("amount: non-finite double");
        long double scaled = static_cast<long double>(v) * 1e18L;
        if (scaled > 1.7e38L || scaled < -1.7e38L)
            throw std::invalid_argument("amount: double out of fixed-point range");
        long double r = scaled >= 0 ? scaled + 0.5L : scaled - 0.5L;
        return from_units(static_cast<int128>(r));
    }

    constexpr int128 units() const { return units_; }
    constexpr bool is_zero() const { return units_ == 0; }
    constexpr bool is_negative() const { return units_ < 0; }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(units_) / 1e18L);
    }

    // Canonical decimal string: shortest fraction, no exponent. Round-trips
    // exactly through parse().
    std::string str() const {
        int128 u = units_;
        bool neg = u < 0;
        if (neg) u = -u;
        int128 whole = u / kAmountScale;
        int128 frac = u % kAmountScale;
        std::string out;
        if (neg) out.push_back('-');
        out += detail::int128_to_string(whole);
        if (frac != 0) {
            std::string f = detail::int128_to_string(frac);
            f.insert(f.begin(), static_cast<std::size_t>(kAmountDecimals) - f.size(), '0');
            while (!f.empty() && f.back() == '0') f.pop_back();
            out.push_back('.');
            out += f;
        }
        return out;
    }

    constexpr auto operator<=>(const FixedAmount&) const = default;

    constexpr FixedAmount operator+(FixedAmount o) const { return from_units(units_ + o.units_); }
    constexpr FixedAmount operator-(FixedAmount o) const { return from_units(units_ - o.units_); }
    constexpr FixedAmount operator-() const { return from_units(-units_); }
    constexpr FixedAmount& operator+=(FixedAmount o) {
        units_ += o.units_;
        return *this;
    }
    constexpr FixedAmount& operator-=(FixedAmount o) {
        units_ -= o.units_;
        return *this;
    }
    constexpr FixedAmount operator*(std::int64_t k) const { return from_units(units_ * k); }

    // Scaling by a real factor rounds to the nearest step; boundary use only.
    FixedAmount scaled(double factor) const {
        return from_double(to_double() * factor);
    }

private:
    int128 units_{0};
};

struct EthTag {};
struct UsdTag {};
struct TokenTag {};

using Eth = FixedAmount<EthTag>;
using Usd = FixedAmount<UsdTag>;
using TokenUnits = FixedAmount<TokenTag>;

inline Usd eth_to_usd(Eth amount, double eth_usd_price) {
    return Usd::from_double(amount.to_double() * eth_usd_price);
}

} // namespace laneboost
