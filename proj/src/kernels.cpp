#include "superbethe/kernels.hpp"

#include <algorithm>
#include <cstdint>

#include "superbethe/errors.hpp"

namespace superbethe {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, const Scalar& fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n, Mode mode) {
    DenseMatrix m(n, n, Scalar(0).to_mode(mode));
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Scalar(1).to_mode(mode);
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw SizeMismatch("DenseMatrix: shape mismatch in +=");
    for (std::size_t k = 0; k < data_.size(); ++k)
        if (!o.data_[k].is_zero())
            data_[k] += o.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw SizeMismatch("DenseMatrix: shape mismatch in -=");
    for (std::size_t k = 0; k < data_.size(); ++k)
        if (!o.data_[k].is_zero())
            data_[k] -= o.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(const Scalar& s) {
    for (auto& x : data_)
        if (!x.is_zero())
            x *= s;
    return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) { return kernels::matmul_parallel(a, b); }

Scalar DenseMatrix::max_abs() const {
    Scalar best(0);
    double best_d = 0.0;
    bool numeric = false;
    for (const auto& x : data_) {
        if (x.is_zero())
            continue;
        numeric = numeric || !x.is_exact();
        Scalar m = x.magnitude();
        if (best.is_zero() || value_less(best, m)) {
            best = m;
            best_d = m.abs();
        }
    }
    (void)best_d;
    return numeric ? best.to_mode(Mode::numeric) : best;
}

bool DenseMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return x.is_zero(); });
}

namespace kernels {

namespace {

std::vector<std::vector<std::size_t>> row_support(const DenseMatrix& m) {
    std::vector<std::vector<std::size_t>> support(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero())
                support[i].push_back(j);
    return support;
}

void matmul_row(const DenseMatrix& a, const DenseMatrix& b,
                const std::vector<std::vector<std::size_t>>& b_support, DenseMatrix& c, std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const Scalar& aik = a(i, k);
        if (aik.is_zero())
            continue;
        for (std::size_t j : b_support[k])
            c(i, j) += aik * b(k, j);
    }
}

Scalar zero_like(const DenseMatrix& a) {
    if (a.rows() > 0 && a.cols() > 0 && !a(0, 0).is_exact())
        return Scalar::numeric(0.0);
    return Scalar(0);
}

} // namespace

DenseMatrix matmul_serial(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw SizeMismatch("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols(), zero_like(a));
    const auto support = row_support(b);
    for (std::size_t i = 0; i < a.rows(); ++i)
        matmul_row(a, b, support, c, i);
    return c;
}

DenseMatrix matmul_parallel(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw SizeMismatch("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols(), zero_like(a));
    const auto support = row_support(b);
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < rows; ++i)
        matmul_row(a, b, support, c, static_cast<std::size_t>(i));
    return c;
}

namespace {

constexpr int parity(std::size_t level) { return level == 2 ? 1 : 0; }

std::size_t pow3(std::size_t e) {
    std::size_t p = 1;
    while (e-- > 0)
        p *= 3;
    return p;
}

/// Parity of the number of odd (level-3) digits among the leading `count` digits.
int prefix_parity(std::size_t x, std::size_t sites, std::size_t count) {
    std::size_t y = x / pow3(sites - count);
    int p = 0;
    while (y != 0) {
        p ^= parity(y % 3);
        y /= 3;
    }
    return p;
}

inline void swap_one(const kernels::AuxVector& in, kernels::AuxVector& out, std::size_t sites,
                     std::size_t site, std::size_t stride, const Scalar& weight, std::size_t a,
                     std::size_t x) {
    const Scalar& v = in[a][x];
    if (v.is_zero())
        return;
    const std::size_t d = (x / stride) % 3;
    const std::size_t target = x + a * stride - d * stride;
    const int pa = parity(a);
    const int pd = parity(d);
    const int s = prefix_parity(x, sites, site);
    const bool negative = ((pa + (pa ^ pd) * (pa ^ s)) & 1) != 0;
    Scalar term = v * weight;
    if (negative)
        out[d][target] -= term;
    else
        out[d][target] += term;
}

void check_shapes(const kernels::AuxVector& in, const kernels::AuxVector& out, std::size_t sites,
                  std::size_t site) {
    const std::size_t dim = pow3(sites);
    if (site >= sites)
        throw SizeMismatch("graded_swap: site out of range");
    for (std::size_t a = 0; a < 3; ++a)
        if (in[a].size() != dim || out[a].size() != dim)
            throw SizeMismatch("graded_swap: block size is not 3^sites");
}

} // namespace

void graded_swap_accumulate_serial(const AuxVector& in, AuxVector& out, std::size_t sites,
                                   std::size_t site, const Scalar& weight) {
    check_shapes(in, out, sites, site);
    const std::size_t stride = pow3(sites - 1 - site);
    const std::size_t dim = in[0].size();
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t x = 0; x < dim; ++x)
            swap_one(in, out, sites, site, stride, weight, a, x);
}

void graded_swap_accumulate_parallel(const AuxVector& in, AuxVector& out, std::size_t sites,
                                     std::size_t site, const Scalar& weight) {
    check_shapes(in, out, sites, site);
    const std::size_t stride = pow3(sites - 1 - site);
    const auto total = static_cast<std::int64_t>(3 * in[0].size());
    const std::size_t dim = in[0].size();
    // (a, x) -> (digit, target) is a bijection, so writes never collide.
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < total; ++k) {
        const auto a = static_cast<std::size_t>(k) / dim;
        const auto x = static_cast<std::size_t>(k) % dim;
        swap_one(in, out, sites, site, stride, weight, a, x);
    }
}

} // namespace kernels

} // namespace superbethe
