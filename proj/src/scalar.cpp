#include "superbethe/scalar.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "superbethe/errors.hpp"

namespace superbethe {

namespace {

std::string rational_str(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("empty rational");
    std::string s(text);
    if (s.front() == '+')
        s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

} // namespace

GaussRational::GaussRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

GaussRational GaussRational::fraction(long num, long den) {
    if (den == 0)
        throw PoleError("fraction with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return GaussRational(q);
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0)
        im_ += o.im_;
    return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0)
        im_ -= o.im_;
    return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
    if (o.is_zero())
        throw PoleError("division by exact zero");
    if (o.is_real()) {
        re_ /= o.re_;
        if (sgn(im_) != 0)
            im_ /= o.re_;
        return *this;
    }
    const mpq_class n2 = o.norm2();
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / n2;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / n2;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

std::string GaussRational::str() const {
    std::string out = rational_str(re_);
    if (sgn(im_) < 0)
        out += "-" + rational_str(mpq_class(-im_));
    else
        out += "+" + rational_str(im_);
    return out + " i";
}

GaussRational GaussRational::parse(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    if (s.empty())
        throw std::invalid_argument("empty scalar");
    if (s.back() != 'i')
        return GaussRational(parse_rational(s));
    s.pop_back();
    // split at the last sign that is not in leading position
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if (s[k] == '+' || s[k] == '-') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        // pure imaginary such as "3/4i" or "-i"
        std::string im = s;
        if (im.empty() || im == "+")
            im = "1";
        else if (im == "-")
            im = "-1";
        return GaussRational(0, parse_rational(im));
    }
    std::string im = s.substr(split);
    if (im == "+")
        im = "1";
    else if (im == "-")
        im = "-1";
    return GaussRational(parse_rational(s.substr(0, split)), parse_rational(im));
}

// ---------------------------------------------------------------------------

bool Scalar::is_zero() const noexcept {
    if (auto* q = std::get_if<GaussRational>(&v_))
        return q->is_zero();
    return std::get<std::complex<double>>(v_) == std::complex<double>(0.0, 0.0);
}

std::complex<double> Scalar::to_complex() const {
    if (auto* q = std::get_if<GaussRational>(&v_))
        return q->to_complex();
    return std::get<std::complex<double>>(v_);
}

Scalar Scalar::to_mode(Mode m) const {
    if (m == mode())
        return *this;
    if (m == Mode::numeric)
        return Scalar(to_complex());
    const auto z = std::get<std::complex<double>>(v_);
    return GaussRational(mpq_class(z.real()), mpq_class(z.imag()));
}

Scalar Scalar::magnitude() const {
    if (auto* q = std::get_if<GaussRational>(&v_))
        return GaussRational(q->l1_norm());
    return std::complex<double>(std::abs(std::get<std::complex<double>>(v_)), 0.0);
}

double Scalar::abs() const {
    if (auto* q = std::get_if<GaussRational>(&v_))
        return q->l1_norm().get_d();
    return std::abs(std::get<std::complex<double>>(v_));
}

namespace {

template <typename ExactOp, typename NumOp>
void combine(std::variant<GaussRational, std::complex<double>>& lhs,
             const std::variant<GaussRational, std::complex<double>>& rhs, ExactOp exact_op,
             NumOp num_op) {
    if (lhs.index() == 0 && rhs.index() == 0) {
        exact_op(std::get<GaussRational>(lhs), std::get<GaussRational>(rhs));
        return;
    }
    auto as_complex = [](const auto& v) {
        if (auto* q = std::get_if<GaussRational>(&v))
            return q->to_complex();
        return std::get<std::complex<double>>(v);
    };
    std::complex<double> a = as_complex(lhs);
    num_op(a, as_complex(rhs));
    lhs = a;
}

} // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
    combine(v_, o.v_, [](GaussRational& a, const GaussRational& b) { a += b; },
            [](std::complex<double>& a, std::complex<double> b) { a += b; });
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    combine(v_, o.v_, [](GaussRational& a, const GaussRational& b) { a -= b; },
            [](std::complex<double>& a, std::complex<double> b) { a -= b; });
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    combine(v_, o.v_, [](GaussRational& a, const GaussRational& b) { a *= b; },
            [](std::complex<double>& a, std::complex<double> b) { a *= b; });
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero())
        throw PoleError("division by zero");
    combine(v_, o.v_, [](GaussRational& a, const GaussRational& b) { a /= b; },
            [](std::complex<double>& a, std::complex<double> b) { a /= b; });
    return *this;
}

Scalar Scalar::operator-() const {
    if (auto* q = std::get_if<GaussRational>(&v_))
        return -*q;
    return -std::get<std::complex<double>>(v_);
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact())
        return a.exact() == b.exact();
    return a.to_complex() == b.to_complex();
}

bool value_less(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
        const auto& x = a.exact();
        const auto& y = b.exact();
        if (x.real() != y.real())
            return x.real() < y.real();
        return x.imag() < y.imag();
    }
    const auto x = a.to_complex();
    const auto y = b.to_complex();
    if (x.real() != y.real())
        return x.real() < y.real();
    return x.imag() < y.imag();
}

std::string Scalar::str() const {
    if (auto* q = std::get_if<GaussRational>(&v_))
        return q->str();
    const auto z = std::get<std::complex<double>>(v_);
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << " i";
    return os.str();
}

Scalar pow(const Scalar& base, int exponent) {
    Scalar result(1);
    Scalar factor = base;
    bool invert = exponent < 0;
    unsigned e = invert ? static_cast<unsigned>(-exponent) : static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1U)
            result *= factor;
        e >>= 1U;
        if (e != 0)
            factor *= factor;
    }
    return invert ? Scalar(1) / result : result;
}

} // namespace superbethe
