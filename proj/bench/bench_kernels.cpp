// Serial against OpenMP timings for the dense product and the graded site swap.
#include <chrono>
#include <cstdio>
#include <omp.h>

#include "superbethe/chain.hpp"
#include "superbethe/kernels.hpp"

using namespace superbethe;

namespace {

template <class F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

DenseMatrix filled(std::size_t n, long salt, Mode mode) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((i * 7 + j * 3 + salt) % 4 != 0)
                m(i, j) = Scalar::fraction(static_cast<long>((i * 31 + j * 17 + salt) % 23) - 11, 1 + (i + j) % 5)
                              .to_mode(mode);
    return m;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-34s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serial, parallel,
                serial / parallel);
}

} // namespace

int main() {
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
    for (Mode mode : {Mode::exact, Mode::numeric})
        for (std::size_t n : {27u, 81u}) {
            const DenseMatrix a = filled(n, 1, mode), b = filled(n, 2, mode);
            const int reps = mode == Mode::exact ? 3 : 20;
            char name[64];
            std::snprintf(name, sizeof name, "matmul %zux%zu %s", n, n, mode == Mode::exact ? "exact" : "numeric");
            report(name, best_ms(reps, [&] { kernels::matmul_serial(a, b); }),
                   best_ms(reps, [&] { kernels::matmul_parallel(a, b); }));
        }
    for (std::size_t sites : {5u, 7u}) {
        std::size_t dim = 1;
        for (std::size_t k = 0; k < sites; ++k)
            dim *= 3;
        kernels::AuxVector in;
        for (int a = 0; a < 3; ++a) {
            in[a].resize(dim);
            for (std::size_t x = 0; x < dim; ++x)
                in[a][x] = Scalar::fraction(static_cast<long>((x * 13 + a) % 19) - 9, 1 + x % 7);
        }
        const Scalar w = Scalar::fraction(2, 3);
        auto run = [&](bool parallel) {
            kernels::AuxVector out;
            for (auto& blk : out)
                blk.assign(dim, Scalar(0));
            for (std::size_t s = 0; s < sites; ++s)
                parallel ? kernels::graded_swap_accumulate_parallel(in, out, sites, s, w)
                         : kernels::graded_swap_accumulate_serial(in, out, sites, s, w);
        };
        char name[64];
        std::snprintf(name, sizeof name, "graded swap, %zu sites, all sites", sites);
        report(name, best_ms(3, [&] { run(false); }), best_ms(3, [&] { run(true); }));
    }
}
