#pragma once

#include <map>
#include <sstream>

#include "qpoly.hpp"

namespace crsym {

/// Element of Q(i)[a1,...,at]: polynomial in the declared (real) model
/// parameters with Gaussian-rational coefficients. The coefficient ring of
/// every CR polynomial.
class CoeffScalar {
public:
    using TermMap = std::map<Mono, GaussRational, MonoGreater>;

    CoeffScalar() = default;
    explicit CoeffScalar(RingPtr params)
        : params_(std::move(params)), terms_(MonoGreater{params_.get()}) {}

    static CoeffScalar constant(RingPtr params, const GaussRational& g) {
        CoeffScalar s(std::move(params));
        if (!g.is_zero()) s.terms_.emplace(Mono(s.params_->size(), 0), g);
        return s;
    }
    static CoeffScalar parameter(RingPtr params, size_t idx) {
        CoeffScalar s(std::move(params));
        Mono m(s.params_->size(), 0);
        m[idx] = 1;
        s.terms_.emplace(std::move(m), GaussRational(Rational(1)));
        return s;
    }

    const RingPtr& params() const { return params_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && mono_is_one(terms_.begin()->first));
    }
    GaussRational constant_value() const {
        return terms_.empty() ? GaussRational() : terms_.begin()->second;
    }

    void add_term(const Mono& m, const GaussRational& g) {
        if (g.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, g);
        } else {
            it->second += g;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    CoeffScalar operator-() const {
        CoeffScalar r(*this);
        for (auto& [m, g] : r.terms_) g = -g;
        return r;
    }
    CoeffScalar& operator+=(const CoeffScalar& o) {
        for (const auto& [m, g] : o.terms_) add_term(m, g);
        return *this;
    }
    CoeffScalar& operator-=(const CoeffScalar& o) {
        for (const auto& [m, g] : o.terms_) add_term(m, -g);
        return *this;
    }
    friend CoeffScalar operator+(CoeffScalar a, const CoeffScalar& b) { return a += b; }
    friend CoeffScalar operator-(CoeffScalar a, const CoeffScalar& b) { return a -= b; }
    friend CoeffScalar operator*(const CoeffScalar& a, const CoeffScalar& b) {
        CoeffScalar r(a.params_);
        for (const auto& [ma, ga] : a.terms_)
            for (const auto& [mb, gb] : b.terms_) r.add_term(mono_mul(ma, mb), ga * gb);
        return r;
    }
    CoeffScalar& operator*=(const CoeffScalar& o) { return *this = *this * o; }

    CoeffScalar& scale(const GaussRational& g) {
        if (g.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= g;
        return *this;
    }

    friend bool operator==(const CoeffScalar& a, const CoeffScalar& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const CoeffScalar& a, const CoeffScalar& b) { return !(a == b); }
    friend bool operator<(const CoeffScalar& a, const CoeffScalar& b) {
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            int c = a.params_->cmp(ia->first, ib->first);
            if (c != 0) return c > 0;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.terms_.end() && ib != b.terms_.end();
    }

    /// Parameters are real, so conjugation only conjugates the Gaussian
    /// rational coefficients.
    CoeffScalar conj() const {
        CoeffScalar r(*this);
        for (auto& [m, g] : r.terms_) g = g.conj();
        return r;
    }

    QPoly real_part() const {
        QPoly p(params_);
        for (const auto& [m, g] : terms_)
            if (sgn(g.re) != 0) p.add_term(m, g.re);
        return p;
    }
    QPoly imag_part() const {
        QPoly p(params_);
        for (const auto& [m, g] : terms_)
            if (sgn(g.im) != 0) p.add_term(m, g.im);
        return p;
    }
    static CoeffScalar from_parts(const QPoly& re, const QPoly& im) {
        CoeffScalar s(re.ring());
        for (const auto& [m, c] : re.terms()) s.add_term(m, GaussRational(c));
        for (const auto& [m, c] : im.terms()) s.add_term(m, GaussRational(Rational(0), c));
        return s;
    }

    GaussRational eval(const std::vector<Rational>& point) const {
        GaussRational acc;
        for (const auto& [m, g] : terms_) {
            Rational t(1);
            for (size_t i = 0; i < m.size(); ++i)
                for (uint32_t e = 0; e < m[i]; ++e) t *= point[i];
            acc += GaussRational(g.re * t, g.im * t);
        }
        return acc;
    }

    /// Printable form, parenthesized when it would not bind tighter than '*'.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, g] : terms_) {
            std::string gs = to_string(g);
            if (!first && gs[0] != '-') os << "+";
            first = false;
            bool needs_paren = gs.find('+') != std::string::npos ||
                               gs.find('-', 1) != std::string::npos;
            bool have_vars = !mono_is_one(m);
            if (!have_vars) {
                os << gs;
                continue;
            }
            bool unit = (gs == "1");
            bool neg_unit = (gs == "-1");
            if (neg_unit)
                os << "-";
            else if (!unit)
                os << (needs_paren ? "(" + gs + ")" : gs) << "*";
            bool printed = false;
            for (size_t i = 0; i < m.size(); ++i) {
                if (!m[i]) continue;
                if (printed) os << "*";
                os << params_->names[i];
                if (m[i] > 1) os << "^" << m[i];
                printed = true;
            }
        }
        return os.str();
    }

private:
    RingPtr params_;
    TermMap terms_{MonoGreater{nullptr}};
};

inline std::ostream& operator<<(std::ostream& os, const CoeffScalar& s) { return os << s.str(); }

}  // namespace crsym
