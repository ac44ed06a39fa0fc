#include "crs/arith.hpp"

#include <limits>

namespace crs {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

OddPrime::OddPrime(long long value)
{
    if (value < 3 || !is_prime(static_cast<std::uint64_t>(value))) {
        throw std::invalid_argument("p must be an odd prime (got " + std::to_string(value) + ")");
    }
    if (value > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("p too large");
    }
    value_ = static_cast<unsigned>(value);
}

Integer OddPrime::pow(unsigned long k) const { return ipow(Integer(value_), k); }

Integer ipow(const Integer& base, unsigned long exp)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

std::uint64_t upow(std::uint64_t base, unsigned exp)
{
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
            throw std::overflow_error("integer power overflows 64 bits");
        }
        r *= base;
    }
    return r;
}

unsigned long p_valuation(const Integer& n, unsigned p)
{
    if (n == 0) throw std::invalid_argument("p_valuation of zero");
    Integer m = abs(n);
    unsigned long k = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++k;
    }
    return k;
}

std::string to_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& text)
{
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
    q.canonicalize();
    return q;
}

}  // namespace crs
