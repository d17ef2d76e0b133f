#include "tgii/arith/integer.hpp"

#include <limits>

#include "tgii/error.hpp"

namespace tgii::arith {

Integer parse_integer(std::string_view text)
{
    std::string s(text);
    if (s.empty())
        throw Error(Errc::ParseError, "empty integer literal");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size())
        throw Error(Errc::ParseError, "malformed integer '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw Error(Errc::ParseError, "malformed integer '" + s + "'");
    if (s[0] == '+')
        s.erase(0, 1);
    return Integer(s, 10);
}

std::string to_string(const Integer& n) { return n.get_str(10); }

std::uint64_t to_u64(const Integer& n)
{
    if (sgn(n) < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
        throw Error(Errc::TooLarge, to_string(n) + " does not fit in 64 unsigned bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
    return out;
}

std::int64_t to_i64(const Integer& n)
{
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 62)
        throw Error(Errc::TooLarge, to_string(n) + " does not fit in 63 signed bits");
    std::uint64_t mag = to_u64(abs(n));
    return sgn(n) < 0 ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag);
}

Integer from_u64(std::uint64_t v)
{
    Integer out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return out;
}

Integer from_i64(std::int64_t v)
{
    if (v >= 0)
        return from_u64(static_cast<std::uint64_t>(v));
    return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
}

bool is_prime(const Integer& n)
{
    if (n < 2)
        return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Integer next_prime(const Integer& n)
{
    Integer out;
    mpz_nextprime(out.get_mpz_t(), n.get_mpz_t());
    return out;
}

Integer isqrt(const Integer& n)
{
    if (sgn(n) < 0)
        throw Error(Errc::InvalidArgument, "isqrt of negative number");
    Integer out;
    mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
    return out;
}

bool is_square(const Integer& n)
{
    return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

int kronecker(const Integer& a, const Integer& n)
{
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

Integer gcd(const Integer& a, const Integer& b)
{
    Integer out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

Integer mod(const Integer& a, const Integer& m)
{
    Integer out;
    mpz_mod(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return out;
}

Integer powmod(const Integer& base, const Integer& exp, const Integer& m)
{
    Integer out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return out;
}

std::vector<std::pair<Integer, unsigned>> factor(Integer n)
{
    std::vector<std::pair<Integer, unsigned>> out;
    n = abs(n);
    if (n < 2)
        return out;
    auto strip = [&](const Integer& d) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            n /= d;
            ++e;
        }
        if (e > 0)
            out.emplace_back(d, e);
    };
    strip(2);
    for (Integer d = 3; d * d <= n; d += 2) {
        strip(d);
        if (n > 1 && mpz_sizeinbase(d.get_mpz_t(), 2) > 40)
            throw Error(Errc::TooLarge, "trial division bound exceeded");
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

Integer crt(const std::vector<Integer>& moduli, const std::vector<Integer>& residues)
{
    if (moduli.size() != residues.size())
        throw Error(Errc::InvalidArgument, "crt: length mismatch");
    Integer acc = 0;
    Integer m = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        const Integer& mi = moduli[i];
        if (mi < 1)
            throw Error(Errc::InvalidArgument, "crt: modulus must be positive");
        if (gcd(m, mi) != 1)
            throw Error(Errc::ModuliNotCoprime, "crt: moduli share a factor with " + to_string(mi));
        Integer inv;
        Integer mm = mod(m, mi);
        if (mi == 1) {
            continue;
        }
        mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), mi.get_mpz_t());
        Integer t = mod((residues[i] - acc) * inv, mi);
        acc += m * t;
        m *= mi;
    }
    return mod(acc, m);
}

}  // namespace tgii::arith
