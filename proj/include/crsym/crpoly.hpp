#pragma once

#include <optional>

#include "coeff.hpp"
#include "vartable.hpp"

namespace crsym {

/// Term order for CR monomials: graded reverse lexicographic on the full
/// exponent vector over (z, bz, w, bw), graded by weighted degree.
struct CRMonoGreater {
    const VarTable* table = nullptr;
    int cmp(const Mono& a, const Mono& b) const {
        int da = table->weighted_degree(a), db = table->weighted_degree(b);
        if (da != db) return da < db ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
        return 0;
    }
    bool operator()(const Mono& a, const Mono& b) const { return cmp(a, b) > 0; }
};

/// Sparse polynomial in z, bz, w, bw over CoeffScalar. Immutability by
/// convention: operations return new values.
class CRPoly {
public:
    using TermMap = std::map<Mono, CoeffScalar, CRMonoGreater>;

    CRPoly() = default;
    explicit CRPoly(VarTablePtr table)
        : table_(std::move(table)), terms_(CRMonoGreater{table_.get()}) {}

    static CRPoly zero(VarTablePtr table) { return CRPoly(std::move(table)); }
    static CRPoly constant(VarTablePtr table, const GaussRational& g) {
        CRPoly p(std::move(table));
        p.add_term(Mono(p.table_->var_count(), 0), CoeffScalar::constant(p.table_->params(), g));
        return p;
    }
    static CRPoly variable(VarTablePtr table, size_t idx, uint32_t exp = 1) {
        CRPoly p(std::move(table));
        Mono m(p.table_->var_count(), 0);
        m[idx] = exp;
        p.add_term(std::move(m),
                   CoeffScalar::constant(p.table_->params(), GaussRational(Rational(1))));
        return p;
    }
    static CRPoly term(VarTablePtr table, Mono m, CoeffScalar c) {
        CRPoly p(std::move(table));
        p.add_term(std::move(m), std::move(c));
        return p;
    }

    const VarTablePtr& table() const { return table_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    void add_term(const Mono& m, const CoeffScalar& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    CoeffScalar coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? CoeffScalar(table_->params()) : it->second;
    }

    CRPoly operator-() const {
        CRPoly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    CRPoly& operator+=(const CRPoly& o) {
        require_same_table(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    CRPoly& operator-=(const CRPoly& o) {
        require_same_table(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend CRPoly operator+(CRPoly a, const CRPoly& b) { return a += b; }
    friend CRPoly operator-(CRPoly a, const CRPoly& b) { return a -= b; }

    friend CRPoly operator*(const CRPoly& a, const CRPoly& b) {
        a.require_same_table(b);
        CRPoly r(a.table_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    CRPoly& operator*=(const CRPoly& o) { return *this = *this * o; }

    CRPoly& scale(const GaussRational& g) {
        if (g.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c.scale(g);
        return *this;
    }
    CRPoly& scale(const CoeffScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        CRPoly r(table_);
        for (const auto& [m, c] : terms_) r.add_term(m, c * s);
        return *this = std::move(r);
    }

    friend bool operator==(const CRPoly& a, const CRPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const CRPoly& a, const CRPoly& b) { return !(a == b); }

    /// Bar-conjugation: swaps every variable with its partner and conjugates
    /// all coefficients. An involution.
    CRPoly conj() const {
        CRPoly r(table_);
        for (const auto& [m, c] : terms_) {
            Mono mm(m.size(), 0);
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i]) mm[table_->conj_index(i)] = m[i];
            r.add_term(mm, c.conj());
        }
        return r;
    }

    /// Exact substitution of one variable by a polynomial value.
    CRPoly substitute(size_t var_idx, const CRPoly& value) const {
        value.require_same_table(*this);
        CRPoly r(table_);
        // cache powers of value; exponents stay small at desk scale
        std::vector<CRPoly> powers = {CRPoly::constant(table_, GaussRational(Rational(1)))};
        for (const auto& [m, c] : terms_) {
            uint32_t e = m[var_idx];
            if (e == 0) {
                r.add_term(m, c);
                continue;
            }
            while (powers.size() <= e) powers.push_back(powers.back() * value);
            Mono rest = m;
            rest[var_idx] = 0;
            CRPoly contrib = powers[e].mul_mono(rest, c);
            r += contrib;
        }
        return r;
    }

    CRPoly mul_mono(const Mono& m, const CoeffScalar& c) const {
        CRPoly r(table_);
        if (c.is_zero()) return r;
        for (const auto& [mm, cc] : terms_) r.add_term(mono_mul(mm, m), cc * c);
        return r;
    }

    /// Formal partial derivative with respect to one variable.
    CRPoly partial_derivative(size_t var_idx) const {
        CRPoly r(table_);
        for (const auto& [m, c] : terms_) {
            if (m[var_idx] == 0) continue;
            Mono mm = m;
            mm[var_idx] -= 1;
            CoeffScalar cc = c;
            cc.scale(GaussRational(Rational(static_cast<long>(m[var_idx]))));
            r.add_term(mm, cc);
        }
        return r;
    }

    /// Weighted degree of a nonzero homogeneous polynomial; std::nullopt when
    /// terms of different weights appear. Throws on the zero polynomial (its
    /// degree is undefined; callers treat 0 as homogeneous of every weight).
    std::optional<int> weighted_degree() const {
        if (terms_.empty())
            throw std::domain_error("weighted degree of the zero polynomial is undefined");
        int d = table_->weighted_degree(terms_.begin()->first);
        for (const auto& [m, c] : terms_)
            if (table_->weighted_degree(m) != d) return std::nullopt;
        return d;
    }

    bool is_homogeneous_of(int weight) const {
        for (const auto& [m, c] : terms_)
            if (table_->weighted_degree(m) != weight) return false;
        return true;
    }

    /// Specializes all parameters to rational values.
    CRPoly eval_params(const std::vector<Rational>& point, const VarTablePtr& plain) const {
        CRPoly r(plain);
        for (const auto& [m, c] : terms_)
            r.add_term(m, CoeffScalar::constant(plain->params(), c.eval(point)));
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::string cs = c.str();
            bool needs_paren = c.terms().size() > 1;
            std::string body;
            bool have_vars = !mono_is_one(m);
            if (!have_vars) {
                body = needs_paren ? "(" + cs + ")" : cs;
            } else if (!needs_paren && cs == "1") {
                // unit coefficient
            } else if (!needs_paren && cs == "-1") {
                body = "-";
            } else {
                body = (needs_paren ? "(" + cs + ")" : cs) + "*";
            }
            std::string vars;
            for (size_t i = 0; i < m.size(); ++i) {
                if (!m[i]) continue;
                if (!vars.empty()) vars += "*";
                vars += table_->name(i);
                if (m[i] > 1) vars += "^" + std::to_string(m[i]);
            }
            std::string t = body + vars;
            if (!first && !t.empty() && t[0] != '-') s += "+";
            s += t;
            first = false;
        }
        return s;
    }

private:
    void require_same_table(const CRPoly& o) const {
        if (table_.get() != o.table_.get())
            throw std::invalid_argument("operands built over different variable tables");
    }

    VarTablePtr table_;
    TermMap terms_{CRMonoGreater{nullptr}};
};

inline std::ostream& operator<<(std::ostream& os, const CRPoly& p) { return os << p.str(); }

/// All monomials z^a w^b of exactly the given weighted degree, drawn from the
/// allowed (unbarred) variable subset, in descending term order. Weight 0
/// yields the constant monomial; negative weight yields nothing.
inline std::vector<Mono> enumerate_weighted_monomials(const VarTablePtr& table, int weight,
                                                      const std::vector<size_t>& allowed) {
    std::vector<Mono> out;
    if (weight < 0) return out;
    for (size_t idx : allowed)
        if (table->is_barred(idx))
            throw std::invalid_argument("ansatz monomials use unbarred variables only");
    Mono current(table->var_count(), 0);
    // depth-first over allowed variables, ordered by remaining weight
    auto rec = [&](auto&& self, size_t pos, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        if (pos >= allowed.size()) return;
        size_t idx = allowed[pos];
        int w = table->weight_of(idx);
        int max_e = remaining / w;
        for (int e = max_e; e >= 0; --e) {
            current[idx] = static_cast<uint32_t>(e);
            self(self, pos + 1, remaining - e * w);
        }
        current[idx] = 0;
    };
    rec(rec, 0, weight);
    CRMonoGreater cmp{table.get()};
    std::sort(out.begin(), out.end(), cmp);
    return out;
}

/// Convenience: the unbarred z and w indices of a table.
inline std::vector<size_t> unbarred_indices(const VarTablePtr& table) {
    std::vector<size_t> v;
    for (size_t j = 0; j < table->n(); ++j) v.push_back(table->z_index(j));
    for (size_t l = 0; l < table->k(); ++l) v.push_back(table->w_index(l));
    return v;
}

}  // namespace crsym
