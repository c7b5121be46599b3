#pragma once

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

namespace crsym {

/// Exact arbitrary-precision rational. GMP keeps values canonical
/// (reduced, positive denominator) through arithmetic.
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline Rational rat_from_string(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Element of Q(i): re + im*i with exact rational parts.
struct GaussRational {
    Rational re, im;

    GaussRational() : re(0), im(0) {}
    GaussRational(Rational r) : re(std::move(r)), im(0) {}
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussRational i_unit() { return GaussRational(Rational(0), Rational(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussRational conj() const { return GaussRational(re, -im); }

    GaussRational operator-() const { return GaussRational(-re, -im); }

    GaussRational& operator+=(const GaussRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRational& operator-=(const GaussRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }

    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return GaussRational(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }

    /// Multiplicative inverse; throws on zero.
    GaussRational inverse() const {
        Rational n = re * re + im * im;
        if (sgn(n) == 0) throw std::domain_error("division by zero Gaussian rational");
        return GaussRational(re / n, -im / n);
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
        return a * b.inverse();
    }

    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    /// Total order used only for canonical term ordering, not algebra.
    friend bool operator<(const GaussRational& a, const GaussRational& b) {
        int c = cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return cmp(a.im, b.im) < 0;
    }
};

/// Renders e.g. "1", "-2/3", "I", "-I", "2*I", "1+2*I", "1/2-I".
inline std::string to_string(const GaussRational& g) {
    if (g.is_zero()) return "0";
    std::string s;
    if (sgn(g.re) != 0) s += g.re.get_str();
    if (sgn(g.im) != 0) {
        if (!s.empty() && sgn(g.im) > 0) s += "+";
        if (g.im == -1)
            s += "-I";
        else if (g.im == 1)
            s += "I";
        else
            s += g.im.get_str() + "*I";
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const GaussRational& g) {
    return os << to_string(g);
}

}  // namespace crsym
