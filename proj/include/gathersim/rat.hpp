#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace gathersim {

/// Exact rational scalar. Every time, position, speed and lambda value in the
/// simulator is a Rat; the value is always kept gcd-reduced with a positive
/// denominator.
class Rat {
public:
    Rat() = default;
    Rat(std::int64_t value);  // NOLINT(google-explicit-constructor)
    Rat(std::int64_t numerator, std::int64_t denominator);
    explicit Rat(mpq_class value);

    /// Parses "p", "p/q" or a finite decimal such as "-0.125". Anything else
    /// (exponents, "inf", "sqrt(2)", ...) is rejected with IRRATIONAL_VALUE.
    static Rat parse(std::string_view text);
    static std::optional<Rat> try_parse(std::string_view text);

    /// 2^exponent for non-negative or negative exponents.
    static Rat pow2(int exponent);

    const mpq_class& raw() const noexcept { return value_; }

    int sign() const noexcept { return sgn(value_); }
    bool is_zero() const noexcept { return sign() == 0; }
    bool is_integer() const noexcept { return mpz_cmp_ui(value_.get_den_mpz_t(), 1) == 0; }

    Rat abs() const;
    double to_double() const { return value_.get_d(); }

    std::string numerator_string() const { return value_.get_num().get_str(); }
    std::string denominator_string() const { return value_.get_den().get_str(); }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const { return value_.get_str(); }

    Rat& operator+=(const Rat& other);
    Rat& operator-=(const Rat& other);
    Rat& operator*=(const Rat& other);
    Rat& operator/=(const Rat& other);

    friend Rat operator+(Rat lhs, const Rat& rhs) { return lhs += rhs; }
    friend Rat operator-(Rat lhs, const Rat& rhs) { return lhs -= rhs; }
    friend Rat operator*(Rat lhs, const Rat& rhs) { return lhs *= rhs; }
    friend Rat operator/(Rat lhs, const Rat& rhs) { return lhs /= rhs; }
    Rat operator-() const;

    friend bool operator==(const Rat& lhs, const Rat& rhs) { return cmp(lhs.value_, rhs.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rat& lhs, const Rat& rhs) {
        const int c = cmp(lhs.value_, rhs.value_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    mpq_class value_;
};

inline Rat abs(const Rat& value) { return value.abs(); }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Exact square root when the value is the square of a rational.
std::optional<Rat> exact_sqrt(const Rat& value);

std::ostream& operator<<(std::ostream& os, const Rat& value);

}  // namespace gathersim
