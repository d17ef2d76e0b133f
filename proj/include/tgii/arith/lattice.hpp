#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "tgii/arith/integer.hpp"

namespace tgii::arith {

using IntVector = std::vector<Integer>;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    explicit IntMatrix(const std::vector<IntVector>& rows);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    IntVector row(std::size_t i) const;
    void set_row(std::size_t i, const IntVector& v);
    std::vector<IntVector> to_rows() const;

    bool operator==(const IntMatrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> a_;
};

// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& m);

// LLL with delta = 3/4 over exact rationals.  Rows are the basis vectors.
// Throws RankDeficient when the rows are linearly dependent.
IntMatrix lll(const IntMatrix& basis);

// Integer x with x * basis = v for a square nonsingular basis, if one exists.
std::optional<IntVector> integer_coordinates(const IntMatrix& basis, const IntVector& v);

// t minus the lattice vector found by deterministic nearest-plane rounding.
IntVector babai_reduce(const IntMatrix& basis, const IntVector& t);

// Squared lengths of the Gram-Schmidt vectors, as doubles.
std::vector<double> gram_schmidt_sq_norms(const IntMatrix& basis);

// Smallest sigma accepted by gauss_sample_coset: max|b~_i| * sqrt(ln(2n+4)/pi).
double sigma_floor(const IntMatrix& basis);

// Randomized nearest-plane sampling.  Returns v = target + w with w in the
// lattice, distributed as a discrete Gaussian of width sigma around center
// (center defaults to target).  Throws SigmaTooSmall below sigma_floor.
IntVector gauss_sample_coset(const IntMatrix& basis, const IntVector& target, double sigma,
                             std::mt19937_64& rng, const std::optional<IntVector>& center = std::nullopt);

// One sample of the discrete Gaussian on Z with parameter s and center c.
long long sample_z(double s, double c, std::mt19937_64& rng);

}  // namespace tgii::arith
