#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace tgii::arith {

using Integer = mpz_class;

Integer parse_integer(std::string_view text);
std::string to_string(const Integer& n);

// Throws TooLarge when n does not fit.
std::uint64_t to_u64(const Integer& n);
std::int64_t to_i64(const Integer& n);
Integer from_u64(std::uint64_t v);
Integer from_i64(std::int64_t v);

bool is_prime(const Integer& n);
Integer next_prime(const Integer& n);
Integer isqrt(const Integer& n);
bool is_square(const Integer& n);

// Kronecker symbol (a|n), defined for all integers n.
int kronecker(const Integer& a, const Integer& n);

Integer gcd(const Integer& a, const Integer& b);
Integer mod(const Integer& a, const Integer& m);  // result in [0, m)
Integer powmod(const Integer& base, const Integer& exp, const Integer& m);

// Trial division; sorted by prime.  Intended for desk-scale inputs.
std::vector<std::pair<Integer, unsigned>> factor(Integer n);

// Result r with r = residues[i] mod moduli[i] and 0 <= r < prod(moduli).
Integer crt(const std::vector<Integer>& moduli, const std::vector<Integer>& residues);

}  // namespace tgii::arith
