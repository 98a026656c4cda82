#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace tl {

using int128 = __int128;

// Exact rational over checked 128-bit integers. Overflow raises tl::Error
// instead of degrading to floating point.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d);

    static Rational make(int128 n, int128 d);
    // Accepts "3", "-4", "3/2", "0.25", "2.5e-3".
    static Rational parse(std::string_view text);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    Rational pow(unsigned e) const;

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    // Canonical text form, "n" or "n/d"; also used as interning key.
    std::string str() const;
    double to_double() const;

private:
    int128 num_;
    int128 den_; // > 0, gcd(|num|, den) == 1
    void normalize();
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

std::string int128_to_string(int128 v);

} // namespace tl

template <>
struct std::hash<tl::Rational> {
    std::size_t operator()(const tl::Rational& r) const noexcept {
        auto mix = [](std::size_t h, std::uint64_t v) {
            return h ^ (std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        };
        std::size_t h = 0;
        h = mix(h, static_cast<std::uint64_t>(r.num()));
        h = mix(h, static_cast<std::uint64_t>(static_cast<unsigned __int128>(r.num()) >> 64));
        h = mix(h, static_cast<std::uint64_t>(r.den()));
        return h;
    }
};
