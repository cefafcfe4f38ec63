#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace stateprio {

enum class Type { Int, Real, Bool };

std::string_view to_string(Type t);

/// Exact rational over 64-bit integers. Always normalized (gcd 1, positive
/// denominator). Every operation checks for overflow and throws EvalError.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "3/2", "-1", ...
    std::string str() const;
    /// Exact decimal rendering ("1.5"); nullopt when the expansion does not terminate.
    std::optional<std::string> decimal() const;
    /// Parses "12", "-3", "1.25" or "7/3".
    static Rational parse(std::string_view text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Typed scalar: integer, exact real, or boolean.
class Value {
public:
    Value() : v_(std::int64_t{0}) {}
    static Value boolean(bool b) { return Value(Rep{b}); }
    static Value integer(std::int64_t i) { return Value(Rep{i}); }
    static Value real(Rational r) { return Value(Rep{r}); }
    static Value zero_of(Type t);

    Type type() const;
    bool as_bool() const;
    std::int64_t as_int() const;
    /// Integer values are promoted.
    Rational as_rational() const;

    std::string str() const;

    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
    friend bool operator<(const Value& a, const Value& b);

    std::size_t hash() const;

private:
    using Rep = std::variant<bool, std::int64_t, Rational>;
    explicit Value(Rep r) : v_(std::move(r)) {}
    Rep v_;
};

namespace checked {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t sub(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
} // namespace checked

} // namespace stateprio
