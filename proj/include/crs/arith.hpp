#pragma once

// Exact integer/rational scalars and the odd-prime strong type shared by all modules.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crs {

using Integer = mpz_class;
using Rational = mpq_class;

bool is_prime(std::uint64_t n);

/// An odd prime p >= 3. Construction validates; p = 2 is rejected.
class OddPrime {
public:
    explicit OddPrime(long long value);

    unsigned value() const { return value_; }
    operator unsigned() const { return value_; }  // NOLINT: used as an exponent base everywhere

    Integer pow(unsigned long k) const;

    friend bool operator==(OddPrime a, OddPrime b) { return a.value_ == b.value_; }

private:
    unsigned value_;
};

Integer ipow(const Integer& base, unsigned long exp);
std::uint64_t upow(std::uint64_t base, unsigned exp);  // throws std::overflow_error

/// Largest k with p^k | n; n must be nonzero.
unsigned long p_valuation(const Integer& n, unsigned p);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

}  // namespace crs
