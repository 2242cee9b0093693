#include "gathersim/rat.hpp"

#include <cctype>
#include <ostream>

#include "gathersim/errors.hpp"

namespace gathersim {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

static_assert(sizeof(long) == sizeof(std::int64_t), "GMP si conversions assume a 64-bit long");

Rat::Rat(std::int64_t value) : value_(static_cast<long>(value)) {}

Rat::Rat(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    value_ = mpq_class(mpz_class(static_cast<long>(numerator)), mpz_class(static_cast<long>(denominator)));
    value_.canonicalize();
}

Rat::Rat(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

std::optional<Rat> Rat::try_parse(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::string_view body = text;
    if (body.front() == '-' || body.front() == '+') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    mpq_class q;
    if (const auto slash = body.find('/'); slash != std::string_view::npos) {
        const auto num = body.substr(0, slash);
        const auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        mpz_class d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        q = mpq_class(mpz_class(std::string(num), 10), d);
    } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if (!whole.empty() && !all_digits(whole)) return std::nullopt;
        if (!frac.empty() && !all_digits(frac)) return std::nullopt;
        mpz_class scale = 1;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        q = mpq_class(digits, scale);
    } else {
        if (!all_digits(body)) return std::nullopt;
        q = mpq_class(mpz_class(std::string(body), 10));
    }
    q.canonicalize();
    if (negative) q = -q;
    return Rat(std::move(q));
}

Rat Rat::parse(std::string_view text) {
    if (auto r = try_parse(text)) return *r;
    throw Error(ErrorCode::IrrationalValue,
                "'" + std::string(text) + "' is not an exact rational (expected p, p/q or a finite decimal)");
}

Rat Rat::pow2(int exponent) {
    mpz_class p = 1;
    const unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), e);
    if (exponent >= 0) return Rat(mpq_class(p));
    return Rat(mpq_class(mpz_class(1), p));
}

Rat Rat::abs() const {
    Rat r;
    r.value_ = ::abs(value_);
    return r;
}

Rat& Rat::operator+=(const Rat& other) {
    value_ += other.value_;
    return *this;
}

Rat& Rat::operator-=(const Rat& other) {
    value_ -= other.value_;
    return *this;
}

Rat& Rat::operator*=(const Rat& other) {
    value_ *= other.value_;
    return *this;
}

Rat& Rat::operator/=(const Rat& other) {
    if (other.is_zero()) throw Error(ErrorCode::DivisionByZero, "division of " + str() + " by zero");
    value_ /= other.value_;
    return *this;
}

Rat Rat::operator-() const {
    Rat r;
    r.value_ = -value_;
    return r;
}

std::optional<Rat> exact_sqrt(const Rat& value) {
    if (value.sign() < 0) return std::nullopt;
    const mpz_class& num = value.raw().get_num();
    const mpz_class& den = value.raw().get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return Rat(mpq_class(rn, rd));
}

std::ostream& operator<<(std::ostream& os, const Rat& value) { return os << value.str(); }

}  // namespace gathersim
