#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace specmt {

namespace mp = boost::multiprecision;

// Exact rational scalar. Always kept in canonical form (gcd(p,q)=1, q>0)
// by the backend; all measure and vector data is built from these.
using Rational = mp::number<mp::backends::rational_adaptor<mp::backends::cpp_int_backend<>>, mp::et_off>;
using BigInt = mp::number<mp::backends::cpp_int_backend<>, mp::et_off>;

inline Rational rat(long long n) { return Rational(n); }
inline Rational rat(long long n, long long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    return Rational(n) / Rational(d);
}

inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite value is not a rational");
    int exp = 0;
    double m = std::frexp(x, &exp);   // x = m * 2^exp, |m| in [0.5, 1)
    for (int i = 0; i < 60 && m != std::floor(m); ++i) { m *= 2; --exp; }
    Rational r(BigInt(static_cast<long long>(m)));
    if (exp > 0)
        r *= Rational(BigInt(1) << exp);
    else if (exp < 0)
        r /= Rational(BigInt(1) << -exp);
    return r;
}

// Parses "p", "-p" or "p/q". Rejects zero denominators.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::domain_error("zero denominator in rational \"" + s + "\"");
        return Rational(num) / Rational(den);
    } catch (const std::domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::domain_error("malformed rational \"" + s + "\"");
    }
}

inline std::string format_rational(const Rational& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

inline Rational abs_rational(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline Rational min_rational(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max_rational(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Complex number with exact rational real and imaginary parts.
struct Complex {
    Rational re{0};
    Rational im{0};

    Complex() = default;
    Complex(Rational r) : re(std::move(r)) {}
    Complex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    Complex conj() const { return {re, -im}; }
    Rational norm_sq() const { return re * re + im * im; }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Rational& c, const Complex& a) { return {c * a.re, c * a.im}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Rational n = b.norm_sq();
        if (n == 0) throw std::domain_error("complex division by zero");
        Complex p = a * b.conj();
        return {p.re / n, p.im / n};
    }
    friend bool operator==(const Complex& a, const Complex& b) = default;
};

// a * conj(b); the sesquilinear kernel of every inner product here.
inline Complex dot_term(const Complex& a, const Complex& b) { return a * b.conj(); }

inline std::string format_complex(const Complex& z) {
    return "[" + format_rational(z.re) + ", " + format_rational(z.im) + "]";
}

}  // namespace specmt
