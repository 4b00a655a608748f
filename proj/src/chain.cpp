#include "superbethe/chain.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "superbethe/errors.hpp"

namespace superbethe {

int grade(int level) {
    if (level < 1 || level > 3)
        throw SizeMismatch("basis level must be 1, 2 or 3");
    return level == 3 ? 1 : 0;
}

DenseMatrix build_r(const Scalar& x, const Scalar& y, const EvalContext& ctx) {
    const Scalar g = aux_eval(AuxKind::g, x, y, ctx);
    DenseMatrix r = DenseMatrix::identity(9, ctx.mode());
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const std::size_t col = 3 * (i - 1) + (j - 1);
            const std::size_t row = 3 * (j - 1) + (i - 1);
            r(row, col) += (grade(i) * grade(j) == 1) ? -g : g;
        }
    }
    return r;
}

namespace {

std::size_t triple(int a, int b, int c) { return 9 * (a - 1) + 3 * (b - 1) + (c - 1); }

DenseMatrix embed12(const DenseMatrix& r, Mode mode) {
    DenseMatrix out(27, 27, Scalar(0).to_mode(mode));
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int a2 = 1; a2 <= 3; ++a2)
                for (int b2 = 1; b2 <= 3; ++b2)
                    for (int c = 1; c <= 3; ++c)
                        out(triple(a2, b2, c), triple(a, b, c)) = r(3 * (a2 - 1) + (b2 - 1), 3 * (a - 1) + (b - 1));
    return out;
}

DenseMatrix embed23(const DenseMatrix& r, Mode mode) {
    DenseMatrix out(27, 27, Scalar(0).to_mode(mode));
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c)
                for (int b2 = 1; b2 <= 3; ++b2)
                    for (int c2 = 1; c2 <= 3; ++c2)
                        out(triple(a, b2, c2), triple(a, b, c)) = r(3 * (b2 - 1) + (c2 - 1), 3 * (b - 1) + (c - 1));
    return out;
}

DenseMatrix swap23(Mode mode) {
    DenseMatrix out(27, 27, Scalar(0).to_mode(mode));
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c)
                out(triple(a, c, b), triple(a, b, c)) = Scalar(grade(b) * grade(c) == 1 ? -1 : 1).to_mode(mode);
    return out;
}

Scalar max_of(const std::vector<Scalar>& xs) {
    Scalar best(0);
    bool numeric = false;
    for (const auto& x : xs) {
        if (!x.is_exact())
            numeric = true;
        if (x.is_zero())
            continue;
        Scalar m = x.magnitude();
        if (best.is_zero() || value_less(best, m))
            best = m;
    }
    return numeric ? best.to_mode(Mode::numeric) : best;
}

Scalar larger(const Scalar& a, const Scalar& b) { return value_less(a, b) ? b : a; }

DenseMatrix mul(const DenseMatrix& a, const DenseMatrix& b, bool parallel) {
    return parallel ? kernels::matmul_parallel(a, b) : kernels::matmul_serial(a, b);
}

} // namespace

Scalar ybe_residual(const Scalar& x, const Scalar& y, const Scalar& z, const EvalContext& ctx) {
    const Mode m = ctx.mode();
    const DenseMatrix p23 = swap23(m);
    const DenseMatrix r12 = embed12(build_r(x, y, ctx), m);
    const DenseMatrix r13 = p23 * embed12(build_r(x, z, ctx), m) * p23;
    const DenseMatrix r23 = embed23(build_r(y, z, ctx), m);
    return ((r12 * r13 * r23) - (r23 * r13 * r12)).max_abs();
}

Scalar max_abs(const StateVector& v) { return max_of(v); }

void axpy(StateVector& y, const Scalar& a, const StateVector& x) {
    if (y.size() != x.size())
        throw SizeMismatch("axpy: vector lengths differ");
    if (a.is_zero())
        return;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (!x[k].is_zero())
            y[k] += a * x[k];
}

StateVector scaled(StateVector v, const Scalar& s) {
    for (auto& x : v)
        if (!x.is_zero())
            x *= s;
    return v;
}

StateVector difference(const StateVector& a, const StateVector& b) {
    StateVector out = a;
    axpy(out, Scalar(-1), b);
    return out;
}

// ---------------------------------------------------------------------------
// ChainRep

ChainRep::ChainRep(VarSet theta, const EvalContext& ctx) : ChainRep(std::move(theta), {1, 1, 1}, ctx) {}

ChainRep::ChainRep(VarSet theta, std::array<Scalar, 3> twist, const EvalContext& ctx)
    : theta_(theta.with_mode(ctx.mode())), ctx_(ctx), dim_(1) {
    if (theta_.empty() || theta_.size() > 8)
        throw ConfigError("L", "chain length must be between 1 and 8");
    for (std::size_t k = 0; k < 3; ++k) {
        if (twist[k].is_zero())
            throw ConfigError("twist", "twist entries must be nonzero");
        twist_[k] = ctx.lift(twist[k]);
    }
    for (std::size_t k = 0; k < theta_.size(); ++k)
        dim_ *= 3;
}

StateVector ChainRep::zero() const { return StateVector(dim_, ctx_.lift(Scalar(0))); }

StateVector ChainRep::vacuum() const {
    StateVector v = zero();
    v[0] = ctx_.lift(Scalar(1));
    return v;
}

// ---------------------------------------------------------------------------
// monodromy entries

std::array<StateVector, 3> apply_column(const ChainRep& chain, int j, const Scalar& u, const StateVector& psi) {
    grade(j);
    if (psi.size() != chain.dim())
        throw SizeMismatch("state vector length differs from 3^L");
    const EvalContext& ctx = chain.ctx();
    kernels::AuxVector work;
    for (int a = 1; a <= 3; ++a)
        work[a - 1] = a == j ? psi : chain.zero();
    const std::size_t sites = chain.length();
    for (std::size_t k = 0; k < sites; ++k) {
        const Scalar g = aux_eval(AuxKind::g, u, chain.theta()[k], ctx);
        kernels::AuxVector next = work;
        if (chain.parallel)
            kernels::graded_swap_accumulate_parallel(work, next, sites, k, g);
        else
            kernels::graded_swap_accumulate_serial(work, next, sites, k, g);
        work = std::move(next);
    }
    std::array<StateVector, 3> out;
    for (int i = 1; i <= 3; ++i) {
        Scalar s = chain.twist()[i - 1];
        if (entry_parity(i, j) * grade(j) == 1)
            s = -s;
        out[i - 1] = scaled(std::move(work[i - 1]), s);
    }
    return out;
}

StateVector apply_entry(const ChainRep& chain, int i, int j, const Scalar& u, const StateVector& psi) {
    grade(i);
    return std::move(apply_column(chain, j, u, psi)[i - 1]);
}

Scalar product_normalization(int i, int j, const VarSet& v, const EvalContext& ctx) {
    Scalar norm = ctx.lift(Scalar(1));
    if (entry_parity(i, j) == 0)
        return norm;
    const bool upper = j == 3;
    for (std::size_t l = 0; l < v.size(); ++l)
        for (std::size_t m = 0; m < l; ++m)
            norm *= upper ? aux_eval(AuxKind::h, v[l], v[m], ctx) : aux_eval(AuxKind::h, v[m], v[l], ctx);
    return norm;
}

StateVector apply_product(const ChainRep& chain, int i, int j, const VarSet& v, const StateVector& psi) {
    StateVector out = psi;
    for (std::size_t k = v.size(); k-- > 0;)
        out = apply_entry(chain, i, j, v[k], out);
    const Scalar norm = product_normalization(i, j, v, chain.ctx());
    if (norm.is_zero())
        throw PoleError("symmetric product normalization vanishes at " + v.str());
    return scaled(std::move(out), Scalar(1) / norm);
}

Monodromy build_monodromy(const ChainRep& chain, const Scalar& u) {
    const std::size_t n = chain.dim();
    const Scalar zero = chain.ctx().lift(Scalar(0));
    Monodromy t;
    for (auto& row : t)
        for (auto& block : row)
            block = DenseMatrix(n, n, zero);
    for (std::size_t x = 0; x < n; ++x) {
        StateVector e = chain.zero();
        e[x] = chain.ctx().lift(Scalar(1));
        for (int j = 1; j <= 3; ++j) {
            const auto col = apply_column(chain, j, u, e);
            for (int i = 1; i <= 3; ++i)
                for (std::size_t y = 0; y < n; ++y)
                    if (!col[i - 1][y].is_zero())
                        t[i - 1][j - 1](y, x) = col[i - 1][y];
        }
    }
    return t;
}

Scalar rtt_residual(const ChainRep& chain, const Scalar& u, const Scalar& v) {
    const EvalContext& ctx = chain.ctx();
    const Monodromy tu = build_monodromy(chain, u);
    const Monodromy tv = build_monodromy(chain, v);
    const Scalar g = aux_eval(AuxKind::g, u, v, ctx);
    const bool par = chain.parallel;

    // products T_a(u) T_b(v) and T_a(v) T_b(u), keyed by block pair
    std::map<std::pair<int, int>, DenseMatrix> uv, vu;
    auto block = [](int i, int j) { return 3 * (i - 1) + (j - 1); };
    auto prod = [&](std::map<std::pair<int, int>, DenseMatrix>& memo, const Monodromy& first,
                    const Monodromy& second, int i, int j, int k, int l) -> const DenseMatrix& {
        const auto key = std::make_pair(block(i, j), block(k, l));
        auto it = memo.find(key);
        if (it == memo.end())
            it = memo.emplace(key, mul(first[i - 1][j - 1], second[k - 1][l - 1], par)).first;
        return it->second;
    };

    Scalar worst = ctx.lift(Scalar(0));
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k)
                for (int l = 1; l <= 3; ++l) {
                    DenseMatrix lhs = prod(uv, tu, tv, i, j, k, l);
                    const DenseMatrix& swapped = prod(vu, tv, tu, k, l, i, j);
                    if (entry_parity(i, j) * entry_parity(k, l) == 1)
                        lhs += swapped;
                    else
                        lhs -= swapped;
                    DenseMatrix rhs = prod(vu, tv, tu, k, j, i, l) - prod(uv, tu, tv, k, j, i, l);
                    Scalar s = g;
                    if ((grade(i) * (grade(k) + grade(l)) + grade(k) * grade(l)) % 2 == 1)
                        s = -s;
                    rhs *= s;
                    worst = larger(worst, (lhs - rhs).max_abs());
                }
    return worst;
}

Scalar vacuum_residual(const ChainRep& chain, const Scalar& u) {
    Scalar worst = chain.ctx().lift(Scalar(0));
    const StateVector omega = chain.vacuum();
    for (int j = 1; j <= 3; ++j) {
        const auto col = apply_column(chain, j, u, omega);
        for (int i = j + 1; i <= 3; ++i)
            worst = larger(worst, max_abs(col[i - 1]));
    }
    return worst;
}

Scalar lambda_eval(const ChainRep& chain, int i, const Scalar& u) {
    const StateVector w = apply_entry(chain, i, i, u, chain.vacuum());
    for (std::size_t k = 1; k < w.size(); ++k)
        if (!w[k].is_zero())
            throw NotAnEigenvector("T_" + std::to_string(i) + std::to_string(i) + "(" + u.str() +
                                   ") does not preserve the vacuum line");
    return w[0];
}

Scalar r_eval(const ChainRep& chain, int k, const Scalar& u) {
    if (k != 1 && k != 3)
        throw SizeMismatch("r_eval: k must be 1 or 3");
    const Scalar l2 = lambda_eval(chain, 2, u);
    if (l2.is_zero())
        throw ZeroWeight("lambda_2(" + u.str() + ") = 0");
    return lambda_eval(chain, k, u) / l2;
}

StateVector apply_transfer(const ChainRep& chain, const Scalar& u, const StateVector& psi) {
    StateVector out = apply_entry(chain, 1, 1, u, psi);
    axpy(out, Scalar(1), apply_entry(chain, 2, 2, u, psi));
    axpy(out, Scalar(-1), apply_entry(chain, 3, 3, u, psi));
    return out;
}

namespace {

template <class ColumnFn>
DenseMatrix dense_from_columns(const ChainRep& chain, ColumnFn column) {
    const std::size_t n = chain.dim();
    DenseMatrix m(n, n, chain.ctx().lift(Scalar(0)));
    for (std::size_t x = 0; x < n; ++x) {
        StateVector e = chain.zero();
        e[x] = chain.ctx().lift(Scalar(1));
        const StateVector col = column(e);
        for (std::size_t y = 0; y < n; ++y)
            if (!col[y].is_zero())
                m(y, x) = col[y];
    }
    return m;
}

} // namespace

DenseMatrix transfer_matrix(const ChainRep& chain, const Scalar& u) {
    return dense_from_columns(chain, [&](const StateVector& e) { return apply_transfer(chain, u, e); });
}

DenseMatrix sym_product(const ChainRep& chain, int i, int j, const VarSet& v) {
    return dense_from_columns(chain, [&](const StateVector& e) { return apply_product(chain, i, j, v, e); });
}

} // namespace superbethe
