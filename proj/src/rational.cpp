#include "tl/rational.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "tl/error.hpp"

namespace tl {

namespace {

[[noreturn]] void overflow() { throw Error("exact arithmetic overflow (value outside 128-bit range)"); }

int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) overflow();
    return r;
}

int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) overflow();
    return r;
}

int128 iabs(int128 v) {
    if (v >= 0) return v;
    int128 r;
    if (__builtin_sub_overflow(int128(0), v, &r)) overflow();
    return r;
}

int128 gcd128(int128 a, int128 b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

void Rational::normalize() {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    int128 g = gcd128(num_, den_);
    num_ /= g;
    den_ /= g;
}

Rational::Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

Rational Rational::make(int128 n, int128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    // a/b + c/d = (a*(d/g) + c*(b/g)) / (b*(d/g))  with g = gcd(b, d)
    int128 g = gcd128(den_, o.den_);
    int128 db = den_ / g;
    int128 dd = o.den_ / g;
    int128 n = checked_add(checked_mul(num_, dd), checked_mul(o.num_, db));
    int128 d = checked_mul(den_, dd);
    return make(n, d);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational Rational::operator*(const Rational& o) const {
    int128 g1 = gcd128(num_, o.den_);
    int128 g2 = gcd128(o.num_, den_);
    int128 n = checked_mul(num_ / g1, o.num_ / g2);
    int128 d = checked_mul(den_ / g2, o.den_ / g1);
    return make(n, d);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw Error("division by zero");
    Rational inv;
    inv.num_ = o.den_;
    inv.den_ = o.num_;
    if (inv.den_ < 0) {
        inv.num_ = -inv.num_;
        inv.den_ = -inv.den_;
    }
    return *this * inv;
}

Rational Rational::pow(unsigned e) const {
    Rational r(1);
    Rational base = *this;
    while (e > 0) {
        if (e & 1u) r = r * base;
        base = (e > 1) ? base * base : base;
        e >>= 1u;
    }
    return r;
}

bool Rational::operator<(const Rational& o) const {
    // num_/den_ < o.num_/o.den_  <=>  num_*o.den_ < o.num_*den_ (denominators positive)
    return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
}

std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

std::string Rational::str() const {
    if (den_ == 1) return int128_to_string(num_);
    return int128_to_string(num_) + "/" + int128_to_string(den_);
}

double Rational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::parse(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&]() -> void { throw Error("malformed rational literal: '" + std::string(text) + "'"); };
    if (text.empty()) fail();

    bool neg = false;
    if (text[pos] == '-' || text[pos] == '+') {
        neg = text[pos] == '-';
        ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail();

    int128 intpart = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        intpart = checked_add(checked_mul(intpart, 10), text[pos] - '0');
        ++pos;
    }

    int128 num = intpart;
    int128 den = 1;

    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
        int128 d = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            d = checked_add(checked_mul(d, 10), text[pos] - '0');
            ++pos;
        }
        if (pos != text.size()) fail();
        if (d == 0) throw Error("rational with zero denominator: '" + std::string(text) + "'");
        return make(neg ? -num : num, d);
    }

    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            num = checked_add(checked_mul(num, 10), text[pos] - '0');
            den = checked_mul(den, 10);
            ++pos;
        }
    }

    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
            eneg = text[pos] == '-';
            ++pos;
        }
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
        int exp = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            exp = exp * 10 + (text[pos] - '0');
            if (exp > 50) overflow();
            ++pos;
        }
        for (int i = 0; i < exp; ++i) {
            if (eneg)
                den = checked_mul(den, 10);
            else
                num = checked_mul(num, 10);
        }
    }

    if (pos != text.size()) fail();
    return make(neg ? -num : num, den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace tl
