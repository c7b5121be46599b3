#pragma once

#include <map>
#include <optional>
#include <sstream>

#include "rational.hpp"
#include "ring.hpp"

namespace crsym {

/// Sparse multivariate polynomial over Q in a shared Ring, terms kept in
/// descending monomial order. Canonical: no zero coefficients stored.
class QPoly {
public:
    using TermMap = std::map<Mono, Rational, MonoGreater>;

    QPoly() = default;
    explicit QPoly(RingPtr ring) : ring_(std::move(ring)), terms_(MonoGreater{ring_.get()}) {}

    static QPoly constant(RingPtr ring, const Rational& c) {
        QPoly p(std::move(ring));
        if (!crsym::is_zero(c)) p.terms_.emplace(Mono(p.ring_->size(), 0), c);
        return p;
    }
    static QPoly variable(RingPtr ring, size_t idx, uint32_t exp = 1) {
        QPoly p(std::move(ring));
        Mono m(p.ring_->size(), 0);
        m[idx] = exp;
        p.terms_.emplace(std::move(m), Rational(1));
        return p;
    }
    static QPoly term(RingPtr ring, Mono m, const Rational& c) {
        QPoly p(std::move(ring));
        if (!crsym::is_zero(c)) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && mono_is_one(terms_.begin()->first));
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }

    const Mono& leading_mono() const { return terms_.begin()->first; }
    const Rational& leading_coeff() const { return terms_.begin()->second; }

    uint64_t total_degree() const {
        uint64_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, mono_total_degree(m, 0, m.size()));
        return d;
    }

    void add_term(const Mono& m, const Rational& c) {
        if (crsym::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (crsym::is_zero(it->second)) terms_.erase(it);
        }
    }

    QPoly operator-() const {
        QPoly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    QPoly& operator+=(const QPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    QPoly& operator-=(const QPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }

    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        QPoly r(a.ring_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    QPoly& operator*=(const QPoly& o) { return *this = *this * o; }

    QPoly& scale(const Rational& c) {
        if (crsym::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend QPoly operator*(QPoly a, const Rational& c) { return a.scale(c); }
    friend QPoly operator*(const Rational& c, QPoly a) { return a.scale(c); }

    QPoly mul_mono(const Mono& m, const Rational& c) const {
        QPoly r(ring_);
        if (crsym::is_zero(c)) return r;
        for (const auto& [mm, cc] : terms_) r.terms_.emplace(mono_mul(mm, m), cc * c);
        return r;
    }

    friend bool operator==(const QPoly& a, const QPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }
    /// Deterministic total order (term-wise), used for sorting bases.
    friend bool operator<(const QPoly& a, const QPoly& b) {
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            int c = a.ring_->cmp(ia->first, ib->first);
            if (c != 0) return c > 0;  // larger leading content sorts first
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.terms_.end() && ib != b.terms_.end();
    }

    /// gcd of numerators / lcm-free positive content of all coefficients.
    Rational content() const {
        mpz_class num(0), den(1);
        for (const auto& [m, c] : terms_) {
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        }
        if (num == 0) return Rational(0);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    /// Content-free, leading coefficient positive. Zero stays zero.
    QPoly primitive_part() const {
        if (is_zero()) return *this;
        Rational c = content();
        if (sgn(leading_coeff()) < 0) c = -c;
        QPoly r(*this);
        r.scale(Rational(1) / c);
        return r;
    }

    QPoly monic() const {
        if (is_zero()) return *this;
        QPoly r(*this);
        r.scale(Rational(1) / leading_coeff());
        return r;
    }

    Rational eval(const std::vector<Rational>& point) const {
        Rational acc(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (size_t i = 0; i < m.size(); ++i)
                for (uint32_t e = 0; e < m[i]; ++e) t *= point[i];
            acc += t;
        }
        return acc;
    }

    /// Map into a larger ring; var_map[i] = index of our variable i there.
    QPoly lift(const RingPtr& target, const std::vector<size_t>& var_map) const {
        QPoly r(target);
        for (const auto& [m, c] : terms_) {
            Mono mm(target->size(), 0);
            for (size_t i = 0; i < m.size(); ++i) mm[var_map[i]] = m[i];
            r.terms_.emplace(std::move(mm), c);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rational a = c;
            if (!first) {
                os << (sgn(a) < 0 ? "-" : "+");
                if (sgn(a) < 0) a = -a;
            }
            first = false;
            bool unit = (a == 1) && !mono_is_one(m);
            if (!unit) os << a.get_str();
            bool printed = !unit;
            for (size_t i = 0; i < m.size(); ++i) {
                if (!m[i]) continue;
                if (printed) os << "*";
                os << ring_->names[i];
                if (m[i] > 1) os << "^" << m[i];
                printed = true;
            }
        }
        return os.str();
    }

private:
    RingPtr ring_;
    TermMap terms_{MonoGreater{nullptr}};
};

inline std::ostream& operator<<(std::ostream& os, const QPoly& p) { return os << p.str(); }

/// Remainder of f on division by divisors (multivariate division algorithm).
/// Deterministic: first divisor whose leading monomial divides wins.
inline QPoly normal_form(QPoly f, const std::vector<QPoly>& divisors) {
    if (divisors.empty()) return f;
    QPoly r(f.ring());
    while (!f.is_zero()) {
        bool reduced = false;
        for (const auto& g : divisors) {
            if (g.is_zero()) continue;
            if (mono_divides(g.leading_mono(), f.leading_mono())) {
                Mono q = mono_div(f.leading_mono(), g.leading_mono());
                Rational c = f.leading_coeff() / g.leading_coeff();
                f -= g.mul_mono(q, c);
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            Mono m = f.leading_mono();
            Rational c = f.leading_coeff();
            r.add_term(m, c);
            f.add_term(m, -c);
        }
    }
    return r;
}

}  // namespace crsym
