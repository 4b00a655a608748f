#pragma once

// Data-parallel inner loops. Each kernel has a serial reference, kept for
// testing and benchmarking, and an OpenMP version that the library uses.

#include <array>
#include <cstddef>
#include <vector>

#include "superbethe/scalar.hpp"

namespace superbethe {

/// Dense row-major matrix of Scalars.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, const Scalar& fill = Scalar(0));

    static DenseMatrix identity(std::size_t n, Mode mode = Mode::exact);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator-=(const DenseMatrix& o);
    DenseMatrix& operator*=(const Scalar& s);
    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(DenseMatrix a, const Scalar& s) { return a *= s; }
    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

    /// Largest entry magnitude (exact |Re|+|Im| in exact mode).
    Scalar max_abs() const;
    bool is_zero() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

namespace kernels {

/// C = A B, skipping zero entries of A and B.
DenseMatrix matmul_serial(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_parallel(const DenseMatrix& a, const DenseMatrix& b);

/// Work vector in V_aux (x) H for a chain of `sites` three-level sites:
/// block[a][x] is the coefficient of e_a (x) basis state x. Site 1 is the most
/// significant base-3 digit of x.
using AuxVector = std::array<std::vector<Scalar>, 3>;

/// out += weight * P_{0,site} in, where P_{0,site} is the graded permutation of
/// the auxiliary space with quantum site `site` (0-based) under the Koszul rule.
/// `out` must not alias `in`.
void graded_swap_accumulate_serial(const AuxVector& in, AuxVector& out, std::size_t sites,
                                   std::size_t site, const Scalar& weight);
void graded_swap_accumulate_parallel(const AuxVector& in, AuxVector& out, std::size_t sites,
                                     std::size_t site, const Scalar& weight);

} // namespace kernels

} // namespace superbethe
