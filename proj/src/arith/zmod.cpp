#include "tgii/arith/zmod.hpp"

#include <numeric>

#include "tgii/error.hpp"

namespace tgii::arith {

Zmod::Zmod(std::uint64_t modulus) : m_(modulus)
{
    if (modulus < 2)
        throw Error(Errc::InvalidArgument, "modulus must exceed 1");
    if (modulus >= max_modulus)
        throw Error(Errc::TooLarge, "modulus exceeds 62 bits");
}

namespace {

std::uint64_t checked_modulus(const Integer& modulus)
{
    if (modulus < 2)
        throw Error(Errc::InvalidArgument, "modulus must exceed 1");
    if (mpz_sizeinbase(modulus.get_mpz_t(), 2) > 62)
        throw Error(Errc::TooLarge, "modulus exceeds 62 bits");
    return to_u64(modulus);
}

}  // namespace

Zmod::Zmod(const Integer& modulus) : Zmod(checked_modulus(modulus)) {}

Elem Zmod::reduce(const Integer& v) const
{
    if (sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64)
        return to_u64(v) % m_;
    return static_cast<Elem>(mpz_fdiv_ui(v.get_mpz_t(), m_));
}

Elem Zmod::from_int(std::int64_t v) const
{
    if (v >= 0)
        return static_cast<std::uint64_t>(v) % m_;
    std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
    return neg(mag % m_);
}

Elem Zmod::pow(Elem a, std::uint64_t e) const noexcept
{
    Elem result = 1 % m_;
    Elem base = a % m_;
    while (e > 0) {
        if (e & 1)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

Elem Zmod::pow(Elem a, const Integer& e) const
{
    if (sgn(e) < 0)
        return pow(inverse(a), Integer(-e));
    Elem result = 1 % m_;
    Elem base = a % m_;
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = mul(result, result);
        if (mpz_tstbit(e.get_mpz_t(), i))
            result = mul(result, base);
    }
    return result;
}

std::uint64_t Zmod::gcd_with_modulus(Elem a) const noexcept { return std::gcd(a % m_, m_); }

std::optional<Elem> Zmod::try_inverse(Elem a) const noexcept
{
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m_), newr = static_cast<std::int64_t>(a % m_);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1)
        return std::nullopt;
    if (t < 0)
        t += static_cast<std::int64_t>(m_);
    return static_cast<Elem>(t);
}

Elem Zmod::inverse(Elem a) const
{
    if (auto inv = try_inverse(a))
        return *inv;
    std::uint64_t g = gcd_with_modulus(a);
    if (g == m_)
        throw Error(Errc::NotInvertible, "zero has no inverse modulo " + std::to_string(m_));
    throw FactorFoundError(from_u64(g));
}

}  // namespace tgii::arith
