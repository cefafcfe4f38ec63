#include "stateprio/value.hpp"

#include "stateprio/error.hpp"

#include <charconv>
#include <cstdlib>
#include <numeric>

namespace stateprio {

std::string_view to_string(Type t)
{
    switch (t) {
    case Type::Int: return "int";
    case Type::Real: return "real";
    case Type::Bool: return "bool";
    }
    return "?";
}

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw EvalError("integer overflow in addition");
    return r;
}

std::int64_t sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw EvalError("integer overflow in subtraction");
    return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw EvalError("integer overflow in multiplication");
    return r;
}

} // namespace checked

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0)
        throw EvalError("rational with zero denominator");
    if (d < 0) {
        n = checked::sub(0, n);
        d = checked::sub(0, d);
    }
    std::int64_t g = std::gcd(n, d);
    if (g == 0)
        g = 1;
    num_ = n / g;
    den_ = d / g;
}

Rational operator+(const Rational& a, const Rational& b)
{
    std::int64_t g = std::gcd(a.den_, b.den_);
    std::int64_t lhs = checked::mul(a.num_, b.den_ / g);
    std::int64_t rhs = checked::mul(b.num_, a.den_ / g);
    return Rational(checked::add(lhs, rhs), checked::mul(a.den_ / g, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b)
{
    // cross-reduce first to keep intermediates small
    std::int64_t g1 = std::gcd(a.num_, b.den_);
    std::int64_t g2 = std::gcd(b.num_, a.den_);
    if (g1 == 0)
        g1 = 1;
    if (g2 == 0)
        g2 = 1;
    return Rational(checked::mul(a.num_ / g1, b.num_ / g2), checked::mul(a.den_ / g2, b.den_ / g1));
}

Rational Rational::operator-() const
{
    Rational r;
    r.num_ = checked::sub(0, num_);
    r.den_ = den_;
    return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const
{
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<std::string> Rational::decimal() const
{
    std::int64_t d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1)
        return std::nullopt;
    int digits = std::max(twos, fives);
    bool neg = num_ < 0;
    unsigned __int128 n = neg ? static_cast<unsigned __int128>(-static_cast<__int128>(num_))
                              : static_cast<unsigned __int128>(num_);
    unsigned __int128 scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    unsigned __int128 scaled = n * (scale / static_cast<unsigned __int128>(den_));
    unsigned __int128 ip = scaled / scale;
    unsigned __int128 fp = scaled % scale;
    auto u128 = [](unsigned __int128 v) {
        if (v == 0)
            return std::string("0");
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    };
    std::string out = neg ? "-" : "";
    out += u128(ip);
    out += '.';
    if (digits == 0) {
        out += '0';
    } else {
        std::string f = u128(fp);
        out += std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
    }
    return out;
}

Rational Rational::parse(std::string_view text)
{
    auto parse_int = [](std::string_view s) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty())
            throw EvalError("malformed number '" + std::string(s) + "'");
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    auto dot = text.find('.');
    if (dot == std::string_view::npos)
        return Rational(parse_int(text));
    bool neg = !text.empty() && text.front() == '-';
    std::string_view ip = text.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    std::string_view fp = text.substr(dot + 1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i)
        scale = checked::mul(scale, 10);
    std::int64_t whole = ip.empty() ? 0 : parse_int(ip);
    std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
    std::int64_t n = checked::add(checked::mul(whole, scale), frac);
    return Rational(neg ? -n : n, scale);
}

Value Value::zero_of(Type t)
{
    switch (t) {
    case Type::Int: return integer(0);
    case Type::Real: return real(Rational(0));
    case Type::Bool: return boolean(false);
    }
    return {};
}

Type Value::type() const
{
    switch (v_.index()) {
    case 0: return Type::Bool;
    case 1: return Type::Int;
    default: return Type::Real;
    }
}

bool Value::as_bool() const
{
    if (auto* b = std::get_if<bool>(&v_))
        return *b;
    throw EvalError("expected a boolean value, got " + str());
}

std::int64_t Value::as_int() const
{
    if (auto* i = std::get_if<std::int64_t>(&v_))
        return *i;
    throw EvalError("expected an integer value, got " + str());
}

Rational Value::as_rational() const
{
    if (auto* i = std::get_if<std::int64_t>(&v_))
        return Rational(*i);
    if (auto* r = std::get_if<Rational>(&v_))
        return *r;
    throw EvalError("expected a numeric value, got " + str());
}

std::string Value::str() const
{
    switch (v_.index()) {
    case 0: return std::get<bool>(v_) ? "true" : "false";
    case 1: return std::to_string(std::get<std::int64_t>(v_));
    default: {
        const auto& r = std::get<Rational>(v_);
        if (auto d = r.decimal())
            return *d;
        return r.str();
    }
    }
}

bool operator<(const Value& a, const Value& b)
{
    if (a.v_.index() != b.v_.index())
        return a.v_.index() < b.v_.index();
    return a.v_ < b.v_;
}

std::size_t Value::hash() const
{
    switch (v_.index()) {
    case 0: return std::hash<bool>{}(std::get<bool>(v_)) ^ 0x9e37u;
    case 1: return std::hash<std::int64_t>{}(std::get<std::int64_t>(v_));
    default: {
        const auto& r = std::get<Rational>(v_);
        return std::hash<std::int64_t>{}(r.num()) * 31u + std::hash<std::int64_t>{}(r.den());
    }
    }
}

} // namespace stateprio
