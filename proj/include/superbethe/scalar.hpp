#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace superbethe {

enum class Mode { exact, numeric };

/// Element of Q(i): a pair of exact rationals.
class GaussRational {
public:
    GaussRational() = default;
    GaussRational(long n) : re_(n) {}
    GaussRational(mpq_class re, mpq_class im = 0);

    static GaussRational fraction(long num, long den);

    const mpq_class& real() const noexcept { return re_; }
    const mpq_class& imag() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const noexcept { return sgn(im_) == 0; }

    GaussRational conj() const { return {re_, -im_}; }
    /// |z|^2, always a non-negative rational.
    mpq_class norm2() const { return mpq_class(re_ * re_ + im_ * im_); }
    /// |Re z| + |Im z|; an exact stand-in for |z|.
    mpq_class l1_norm() const { return mpq_class(abs(re_) + abs(im_)); }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    GaussRational& operator+=(const GaussRational& o);
    GaussRational& operator-=(const GaussRational& o);
    GaussRational& operator*=(const GaussRational& o);
    GaussRational& operator/=(const GaussRational& o);
    GaussRational operator-() const { return {-re_, -im_}; }

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    /// Canonical "p/q+r/s i" form, e.g. "3/4+0/1 i", "-1/1-2/3 i".
    std::string str() const;
    /// Accepts the canonical form as well as plain "p/q", "p" or "p/q+r/s i".
    static GaussRational parse(std::string_view text);

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

/// Field element in either exact (Q(i)) or numeric (complex double) mode.
/// Mixed-mode arithmetic promotes to numeric.
class Scalar {
public:
    Scalar() : v_(GaussRational{}) {}
    Scalar(int n) : v_(GaussRational(static_cast<long>(n))) {}
    Scalar(long n) : v_(GaussRational(n)) {}
    Scalar(GaussRational q) : v_(std::move(q)) {}
    Scalar(std::complex<double> z) : v_(z) {}

    static Scalar fraction(long num, long den) { return GaussRational::fraction(num, den); }
    static Scalar numeric(double re, double im = 0.0) { return std::complex<double>(re, im); }
    static Scalar parse(std::string_view text) { return GaussRational::parse(text); }

    Mode mode() const noexcept { return v_.index() == 0 ? Mode::exact : Mode::numeric; }
    bool is_exact() const noexcept { return v_.index() == 0; }
    bool is_zero() const noexcept;

    const GaussRational& exact() const { return std::get<GaussRational>(v_); }
    std::complex<double> to_complex() const;
    Scalar to_mode(Mode m) const;

    /// Exact residual norm (|Re|+|Im|) in exact mode, |z| in numeric mode.
    Scalar magnitude() const;
    /// Floating view of magnitude(), for comparisons against tolerances.
    double abs() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    Scalar operator-() const;

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b);

    /// Total order used for canonical sorting (real part, then imaginary part).
    friend bool value_less(const Scalar& a, const Scalar& b);

    std::string str() const;

private:
    std::variant<GaussRational, std::complex<double>> v_;
};

bool value_less(const Scalar& a, const Scalar& b);
Scalar pow(const Scalar& base, int exponent);

} // namespace superbethe
