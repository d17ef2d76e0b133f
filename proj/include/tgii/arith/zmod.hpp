#pragma once

#include <cstdint>
#include <optional>

#include "tgii/arith/integer.hpp"

namespace tgii::arith {

using Elem = std::uint64_t;

// Z/mZ with a word-sized modulus 1 < m < 2^62.  Elements are kept in [0, m).
class Zmod {
public:
    static constexpr std::uint64_t max_modulus = std::uint64_t(1) << 62;

    explicit Zmod(std::uint64_t modulus);
    explicit Zmod(const Integer& modulus);

    std::uint64_t modulus() const noexcept { return m_; }
    Integer modulus_integer() const { return from_u64(m_); }

    Elem reduce(const Integer& v) const;
    Elem from_int(std::int64_t v) const;
    Integer lift(Elem a) const { return from_u64(a); }

    Elem add(Elem a, Elem b) const noexcept
    {
        Elem s = a + b;
        return s >= m_ ? s - m_ : s;
    }
    Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + m_ - b; }
    Elem neg(Elem a) const noexcept { return a == 0 ? 0 : m_ - a; }
    Elem mul(Elem a, Elem b) const noexcept
    {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % m_);
    }
    Elem pow(Elem a, std::uint64_t e) const noexcept;
    Elem pow(Elem a, const Integer& e) const;

    std::uint64_t gcd_with_modulus(Elem a) const noexcept;
    std::optional<Elem> try_inverse(Elem a) const noexcept;
    // Throws FactorFoundError when 1 < gcd(a, m) < m, NotInvertible when a = 0.
    Elem inverse(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inverse(b)); }

    bool operator==(const Zmod& o) const noexcept { return m_ == o.m_; }

private:
    std::uint64_t m_;
};

}  // namespace tgii::arith
