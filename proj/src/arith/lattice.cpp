#include "tgii/arith/lattice.hpp"

#include <cmath>
#include <numbers>

#include "tgii/error.hpp"

namespace tgii::arith {

namespace {

using Rational = mpq_class;
using RatVector = std::vector<Rational>;

Rational dot(const RatVector& a, const RatVector& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

RatVector to_rational(const IntVector& v)
{
    RatVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[i];
    return out;
}

// Gram-Schmidt of the rows: returns (b*, mu, |b*|^2).
struct GramSchmidt {
    std::vector<RatVector> star;
    std::vector<RatVector> mu;
    RatVector norm2;
};

GramSchmidt gram_schmidt(const std::vector<IntVector>& b)
{
    const std::size_t n = b.size();
    GramSchmidt gs;
    gs.star.resize(n);
    gs.mu.assign(n, RatVector(n, 0));
    gs.norm2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        RatVector v = to_rational(b[i]);
        RatVector bi = v;
        for (std::size_t j = 0; j < i; ++j) {
            gs.mu[i][j] = dot(bi, gs.star[j]) / gs.norm2[j];
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] -= gs.mu[i][j] * gs.star[j][k];
        }
        gs.star[i] = std::move(v);
        gs.norm2[i] = dot(gs.star[i], gs.star[i]);
        if (gs.norm2[i] == 0)
            throw Error(Errc::RankDeficient, "basis rows are linearly dependent");
    }
    return gs;
}

Integer round_nearest(const Rational& q)
{
    // floor(q + 1/2)
    Rational shifted = q + Rational(1, 2);
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return out;
}

}  // namespace

IntMatrix::IntMatrix(const std::vector<IntVector>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size())
{
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw Error(Errc::InvalidArgument, "matrix rows have different lengths");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntVector IntMatrix::row(std::size_t i) const
{
    return IntVector(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void IntMatrix::set_row(std::size_t i, const IntVector& v)
{
    for (std::size_t j = 0; j < cols_; ++j)
        (*this)(i, j) = v[j];
}

std::vector<IntVector> IntMatrix::to_rows() const
{
    std::vector<IntVector> out;
    for (std::size_t i = 0; i < rows_; ++i)
        out.push_back(row(i));
    return out;
}

Integer determinant(const IntMatrix& m)
{
    if (m.rows() != m.cols())
        throw Error(Errc::InvalidArgument, "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    int sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a(r, k) == 0)
                ++r;
            if (r == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(r, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

IntMatrix lll(const IntMatrix& basis)
{
    std::vector<IntVector> b = basis.to_rows();
    const std::size_t n = b.size();
    if (n == 0)
        return basis;
    const Rational delta(3, 4);
    GramSchmidt gs = gram_schmidt(b);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            Integer r = round_nearest(gs.mu[k][jj]);
            if (r != 0) {
                for (std::size_t c = 0; c < b[k].size(); ++c)
                    b[k][c] -= r * b[jj][c];
                for (std::size_t l = 0; l < jj; ++l)
                    gs.mu[k][l] -= Rational(r) * gs.mu[jj][l];
                gs.mu[k][jj] -= Rational(r);
            }
        }
        Rational lhs = gs.norm2[k];
        Rational rhs = (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norm2[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gs = gram_schmidt(b);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return IntMatrix(b);
}

std::optional<IntVector> integer_coordinates(const IntMatrix& basis, const IntVector& v)
{
    const std::size_t n = basis.rows();
    if (basis.cols() != n || v.size() != n)
        throw Error(Errc::InvalidArgument, "integer_coordinates needs a square basis");
    // Solve x * B = v, i.e. B^T x = v, by Gaussian elimination over Q.
    std::vector<RatVector> a(n, RatVector(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = basis(j, i);
        a[i][n] = v[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0)
            ++piv;
        if (piv == n)
            throw Error(Errc::RankDeficient, "singular basis");
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0)
                continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    IntVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational xi = a[i][n] / a[i][i];
        if (xi.get_den() != 1)
            return std::nullopt;
        x[i] = xi.get_num();
    }
    return x;
}

IntVector babai_reduce(const IntMatrix& basis, const IntVector& t)
{
    GramSchmidt gs = gram_schmidt(basis.to_rows());
    RatVector c = to_rational(t);
    IntVector out = t;
    for (std::size_t i = basis.rows(); i-- > 0;) {
        Integer z = round_nearest(dot(c, gs.star[i]) / gs.norm2[i]);
        if (z == 0)
            continue;
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] -= z * basis(i, k);
            c[k] -= Rational(z * basis(i, k));
        }
    }
    return out;
}

std::vector<double> gram_schmidt_sq_norms(const IntMatrix& basis)
{
    GramSchmidt gs = gram_schmidt(basis.to_rows());
    std::vector<double> out;
    for (const auto& q : gs.norm2)
        out.push_back(q.get_d());
    return out;
}

double sigma_floor(const IntMatrix& basis)
{
    double m = 0;
    for (double v : gram_schmidt_sq_norms(basis))
        m = std::max(m, v);
    const double n = static_cast<double>(basis.rows());
    return std::sqrt(m) * std::sqrt(std::log(2 * n + 4) / std::numbers::pi);
}

long long sample_z(double s, double c, std::mt19937_64& rng)
{
    const double tail = 12.0;
    const long long lo = static_cast<long long>(std::floor(c - tail * s));
    const long long hi = static_cast<long long>(std::ceil(c + tail * s));
    std::uniform_int_distribution<long long> pick(lo, hi);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (;;) {
        long long z = pick(rng);
        double d = static_cast<double>(z) - c;
        if (coin(rng) < std::exp(-std::numbers::pi * d * d / (s * s)))
            return z;
    }
}

IntVector gauss_sample_coset(const IntMatrix& basis, const IntVector& target, double sigma,
                             std::mt19937_64& rng, const std::optional<IntVector>& center)
{
    const std::size_t n = basis.rows();
    if (target.size() != basis.cols())
        throw Error(Errc::InvalidArgument, "target length does not match the lattice");
    if (!(sigma >= sigma_floor(basis)))
        throw Error(Errc::SigmaTooSmall, "sigma is below the smoothing bound of the basis");
    GramSchmidt gs = gram_schmidt(basis.to_rows());
    // Sample a lattice point near (center - target) by randomized nearest plane.
    RatVector c(target.size());
    for (std::size_t k = 0; k < target.size(); ++k)
        c[k] = center ? Rational((*center)[k] - target[k]) : Rational(0);
    IntVector w(target.size(), 0);
    for (std::size_t i = n; i-- > 0;) {
        Rational ci = dot(c, gs.star[i]) / gs.norm2[i];
        double si = sigma / std::sqrt(gs.norm2[i].get_d());
        // Split off the integer part so the double sampler sees a small center.
        Integer base = round_nearest(ci);
        double frac = Rational(ci - Rational(base)).get_d();
        Integer z = base + Integer(static_cast<long>(sample_z(si, frac, rng)));
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] -= Rational(z * basis(i, k));
            w[k] += z * basis(i, k);
        }
    }
    IntVector out(target.size());
    for (std::size_t k = 0; k < target.size(); ++k)
        out[k] = target[k] + w[k];
    return out;
}

}  // namespace tgii::arith
