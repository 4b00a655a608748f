#include "superbethe/kernels.hpp"

#include "support.hpp"

using namespace superbethe;
using sbtest::q;

namespace {

DenseMatrix sample_matrix(std::size_t r, std::size_t c, long seed) {
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const long v = (seed * 31 + static_cast<long>(i * 7 + j * 13)) % 11 - 5;
            if (v % 3 != 0)
                m(i, j) = q(v, 1 + static_cast<long>((i + j) % 4));
        }
    return m;
}

kernels::AuxVector sample_aux(std::size_t sites, long seed) {
    std::size_t dim = 1;
    for (std::size_t k = 0; k < sites; ++k)
        dim *= 3;
    kernels::AuxVector v;
    for (std::size_t a = 0; a < 3; ++a) {
        v[a].assign(dim, Scalar(0));
        for (std::size_t x = 0; x < dim; ++x)
            if ((x + a + static_cast<std::size_t>(seed)) % 3 != 0)
                v[a][x] = q(static_cast<long>(x % 7) - 3, static_cast<long>(a) + 1);
    }
    return v;
}

} // namespace

TEST_CASE("dense matrix arithmetic") {
    const DenseMatrix a = sample_matrix(4, 5, 1);
    const DenseMatrix i5 = DenseMatrix::identity(5);
    const DenseMatrix prod = a * i5;
    CHECK((prod - a).is_zero());
    CHECK_THROWS_AS(a * a, SizeMismatch);
    DenseMatrix b = a;
    b *= Scalar(2);
    CHECK((b - a - a).is_zero());
    DenseMatrix m(2, 2);
    m(0, 1) = Scalar::parse("-3/1+1/2 i");
    CHECK(m.max_abs() == q(7, 2));
}

TEST_CASE("matmul serial and parallel agree") {
    for (long seed = 0; seed < 4; ++seed) {
        const DenseMatrix a = sample_matrix(9, 7, seed), b = sample_matrix(7, 11, seed + 5);
        const DenseMatrix s = kernels::matmul_serial(a, b);
        const DenseMatrix p = kernels::matmul_parallel(a, b);
        CHECK((s - p).is_zero());
        // spot check one entry against the definition
        Scalar e(0);
        for (std::size_t k = 0; k < 7; ++k)
            e += a(2, k) * b(k, 3);
        CHECK(s(2, 3) == e);
    }
}

TEST_CASE("graded swap serial and parallel agree") {
    for (std::size_t sites = 1; sites <= 4; ++sites)
        for (std::size_t site = 0; site < sites; ++site) {
            const auto in = sample_aux(sites, static_cast<long>(site));
            auto s = sample_aux(sites, 1);
            auto p = s;
            kernels::graded_swap_accumulate_serial(in, s, sites, site, q(2, 3));
            kernels::graded_swap_accumulate_parallel(in, p, sites, site, q(2, 3));
            for (std::size_t a = 0; a < 3; ++a)
                CHECK(s[a] == p[a]);
        }
}

TEST_CASE("graded swap is an involution") {
    const std::size_t sites = 3;
    const auto in = sample_aux(sites, 2);
    for (std::size_t site = 0; site < sites; ++site) {
        kernels::AuxVector once, twice;
        for (std::size_t a = 0; a < 3; ++a) {
            once[a].assign(in[a].size(), Scalar(0));
            twice[a].assign(in[a].size(), Scalar(0));
        }
        kernels::graded_swap_accumulate_serial(in, once, sites, site, Scalar(1));
        kernels::graded_swap_accumulate_serial(once, twice, sites, site, Scalar(1));
        for (std::size_t a = 0; a < 3; ++a)
            CHECK(twice[a] == in[a]);
    }
}

TEST_CASE("graded swap sign on odd pairs") {
    // one site: P(e_3 (x) e_3) = -e_3 (x) e_3, P(e_1 (x) e_3) = e_3 (x) e_1
    kernels::AuxVector in, out;
    for (std::size_t a = 0; a < 3; ++a) {
        in[a].assign(3, Scalar(0));
        out[a].assign(3, Scalar(0));
    }
    in[2][2] = Scalar(1);
    in[0][2] = Scalar(5);
    kernels::graded_swap_accumulate_serial(in, out, 1, 0, Scalar(1));
    CHECK(out[2][2] == Scalar(-1));
    CHECK(out[2][0] == Scalar(5));
    CHECK_THROWS_AS(kernels::graded_swap_accumulate_serial(in, out, 1, 1, Scalar(1)), SizeMismatch);
}
