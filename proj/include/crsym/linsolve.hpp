#pragma once

#include <limits>

#include "groebner.hpp"
#include "tangency.hpp"

namespace crsym {

/// Exact division: q with p = q * d, when it exists.
inline std::optional<QPoly> divide_exact(const QPoly& p, const QPoly& d) {
    if (d.is_zero()) return std::nullopt;
    QPoly q(p.ring());
    QPoly rem = p;
    while (!rem.is_zero()) {
        if (!mono_divides(d.leading_mono(), rem.leading_mono())) return std::nullopt;
        Mono m = mono_div(rem.leading_mono(), d.leading_mono());
        Rational c = rem.leading_coeff() / d.leading_coeff();
        q.add_term(m, c);
        rem -= d.mul_mono(m, c);
    }
    return q;
}

/// One leaf of the parametric case tree: the null set E, the non-null set N
/// (every element individually nonzero on the branch), and a nullspace basis
/// assigning a Q[params] value to every real unknown.
struct Branch {
    std::vector<QPoly> null_conditions;     // E (primitive, deduplicated)
    std::vector<QPoly> null_basis;          // reduced Groebner basis of <E>
    std::vector<QPoly> nonnull_conditions;  // N
    std::vector<std::vector<QPoly>> basis;  // one vector per free unknown
    std::vector<size_t> free_unknowns;      // which unknown each vector is one-hot in
    std::vector<QPoly> cleared_factors;     // denominator cleared from each vector
    size_t rank = 0;
    size_t nullity = 0;
};

struct CaseTree {
    std::vector<Branch> branches;
    std::vector<std::string> split_log;  // covering record of pivot splits
};

namespace detail {

struct PFrac {
    QPoly num;
    std::vector<QPoly> den;  // factor list, all known nonzero on the branch

    static PFrac zero(const RingPtr& r) { return {QPoly(r), {}}; }
};

/// Branch-local elimination state.
struct SolveState {
    std::vector<QPoly> E, N;
    std::vector<QPoly> eb;  // reduced GB of <E>
    std::vector<std::map<size_t, QPoly>> rows;
    size_t next_col = 0;
    std::vector<std::pair<size_t, size_t>> pivots;  // (row, col), in elimination order
    std::vector<bool> row_used;
};

class ParametricSolver {
public:
    ParametricSolver(const LinearSystem& sys, RingPtr params)
        : params_(std::move(params)), ncols_(sys.real_unknowns) {
        for (const auto& row : sys.rows) {
            std::map<size_t, QPoly> r;
            for (const auto& [u, p] : row.entries) r.emplace(u, p);
            rows_.push_back(std::move(r));
        }
    }

    CaseTree solve(std::vector<QPoly> E0, std::vector<QPoly> N0) {
        SolveState s;
        s.E = normalize_conditions(std::move(E0));
        s.N = normalize_conditions(std::move(N0));
        s.eb = buchberger_reduced(s.E);
        s.rows = rows_;
        s.row_used.assign(s.rows.size(), false);
        reduce_rows(s);
        run(std::move(s));
        return std::move(tree_);
    }

private:
    static std::vector<QPoly> normalize_conditions(std::vector<QPoly> v) {
        for (auto& p : v) p = p.primitive_part();
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        std::erase_if(v, [](const QPoly& p) { return p.is_zero(); });
        return v;
    }

    bool inconsistent(const std::vector<QPoly>& E, const std::vector<QPoly>& N) const {
        QPoly prod = QPoly::constant(params_, Rational(1));
        for (const auto& n : N) prod = prod * n;
        return radical_membership(prod, E, params_);
    }

    void reduce_rows(SolveState& s) const {
        for (auto& row : s.rows) {
            for (auto it = row.begin(); it != row.end();) {
                it->second = normal_form(it->second, s.eb);
                it = it->second.is_zero() ? row.erase(it) : std::next(it);
            }
        }
    }

    /// Nonzero on the branch by construction: rational constants and
    /// products of N members (up to content).
    bool known_nonzero(const QPoly& p, const std::vector<QPoly>& N) const {
        QPoly q = p.primitive_part();
        if (q.is_zero()) return false;
        if (q.is_constant()) return true;
        bool progress = true;
        while (!q.is_constant() && progress) {
            progress = false;
            for (const auto& n : N) {
                if (n.is_constant()) continue;
                if (auto quo = divide_exact(q, n)) {
                    q = quo->primitive_part();
                    progress = true;
                    break;
                }
            }
        }
        return q.is_constant();
    }

    void run(SolveState s) {
        if (inconsistent(s.E, s.N)) return;
        while (s.next_col < ncols_) {
            size_t col = s.next_col;
            // candidate rows with a nonzero coefficient in this column
            std::vector<size_t> cands;
            for (size_t r = 0; r < s.rows.size(); ++r) {
                if (s.row_used[r]) continue;
                auto it = s.rows[r].find(col);
                if (it != s.rows[r].end() && !it->second.is_zero()) cands.push_back(r);
            }
            if (cands.empty()) {
                ++s.next_col;
                continue;
            }
            // pivot preference: constants, then branch-invertible entries
            constexpr size_t kNone = std::numeric_limits<size_t>::max();
            size_t chosen = kNone;
            for (size_t r : cands)
                if (s.rows[r].at(col).is_constant()) {
                    chosen = r;
                    break;
                }
            if (chosen == kNone) {
                for (size_t r : cands)
                    if (known_nonzero(s.rows[r].at(col), s.N)) {
                        chosen = r;
                        break;
                    }
            }
            if (chosen == kNone) {
                // split on the first candidate coefficient
                QPoly c = s.rows[cands.front()].at(col).primitive_part();
                tree_.split_log.push_back("split on " + c.str());
                {
                    SolveState null_child = s;  // E u {c}: coefficient vanishes
                    null_child.E.push_back(c);
                    null_child.E = normalize_conditions(std::move(null_child.E));
                    null_child.eb = buchberger_reduced(null_child.E);
                    reduce_rows(null_child);
                    run(std::move(null_child));
                }
                s.N.push_back(c);
                s.N = normalize_conditions(std::move(s.N));
                if (inconsistent(s.E, s.N)) return;
                continue;  // retry the column; c is now invertible
            }
            eliminate(s, chosen, col);
            s.pivots.emplace_back(chosen, col);
            s.row_used[chosen] = true;
            ++s.next_col;
        }
        finish(std::move(s));
    }

    void eliminate(SolveState& s, size_t prow, size_t col) const {
        const QPoly pv = s.rows[prow].at(col);
        for (size_t r = 0; r < s.rows.size(); ++r) {
            if (r == prow || s.row_used[r]) continue;
            auto it = s.rows[r].find(col);
            if (it == s.rows[r].end()) continue;
            QPoly factor = it->second;
            // fraction-free step: row := pv*row - factor*pivot_row
            std::map<size_t, QPoly> nr;
            for (const auto& [c2, v] : s.rows[r]) {
                QPoly t = normal_form(pv * v, s.eb);
                if (!t.is_zero()) nr.emplace(c2, std::move(t));
            }
            for (const auto& [c2, v] : s.rows[prow]) {
                QPoly t = normal_form(factor * v, s.eb);
                if (t.is_zero()) continue;
                auto jt = nr.find(c2);
                if (jt == nr.end())
                    nr.emplace(c2, -t);
                else {
                    jt->second -= t;
                    if (jt->second.is_zero()) nr.erase(jt);
                }
            }
            // strip rational content to slow growth
            mpz_class num(0), den(1);
            for (const auto& [c2, v] : nr) {
                Rational c = v.content();
                mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
            }
            if (num != 0) {
                Rational scale(den, num);
                scale.canonicalize();
                bool found = false;
                for (auto& [c2, v] : nr) {
                    if (!found && sgn(v.leading_coeff()) < 0) scale = -scale;
                    found = true;
                    break;
                }
                for (auto& [c2, v] : nr) v.scale(scale);
            }
            s.rows[r] = std::move(nr);
        }
    }

    void finish(SolveState s) {
        Branch br;
        br.null_conditions = s.E;
        br.null_basis = s.eb;
        br.nonnull_conditions = s.N;
        br.rank = s.pivots.size();

        std::vector<bool> is_pivot_col(ncols_, false);
        for (const auto& [r, c] : s.pivots) is_pivot_col[c] = true;

        for (size_t f = 0; f < ncols_; ++f) {
            if (is_pivot_col[f]) continue;
            // one-hot free assignment, pivots solved in reverse order
            std::vector<PFrac> x(ncols_, PFrac::zero(params_));
            x[f].num = QPoly::constant(params_, Rational(1));
            for (auto it = s.pivots.rbegin(); it != s.pivots.rend(); ++it) {
                auto [prow, pcol] = *it;
                const QPoly& pv = s.rows[prow].at(pcol);
                // x[pcol] = -(sum_{c != pcol} row[c]*x[c]) / pv
                PFrac acc = PFrac::zero(params_);
                for (const auto& [c2, v] : s.rows[prow]) {
                    if (c2 == pcol || x[c2].num.is_zero()) continue;
                    PFrac term{normal_form(v * x[c2].num, s.eb), x[c2].den};
                    if (term.num.is_zero()) continue;
                    if (acc.num.is_zero()) {
                        acc = std::move(term);
                    } else {
                        QPoly an = acc.num, tn = term.num;
                        for (const auto& d : term.den) an = an * d;
                        for (const auto& d : acc.den) tn = tn * d;
                        acc.num = normal_form(an + tn, s.eb);
                        for (const auto& d : term.den) acc.den.push_back(d);
                    }
                }
                if (!acc.num.is_zero()) {
                    acc.num = -acc.num;
                    acc.den.push_back(pv);
                    // cancel the new denominator factor when it divides
                    if (auto q = divide_exact(acc.num, pv)) {
                        acc.num = *q;
                        acc.den.pop_back();
                    }
                    x[pcol] = std::move(acc);
                }
            }
            // clear denominators: multiply through by the product of all
            // distinct factors still present
            std::vector<QPoly> factors;
            for (const auto& xi : x)
                for (const auto& d : xi.den)
                    if (std::find(factors.begin(), factors.end(), d) == factors.end())
                        factors.push_back(d);
            std::vector<QPoly> vec(ncols_, QPoly(params_));
            QPoly cleared = QPoly::constant(params_, Rational(1));
            for (const auto& d : factors) cleared = cleared * d;
            for (size_t c2 = 0; c2 < ncols_; ++c2) {
                if (x[c2].num.is_zero()) continue;
                QPoly v = x[c2].num;
                for (const auto& d : factors)
                    if (std::count(x[c2].den.begin(), x[c2].den.end(), d) == 0) v = v * d;
                // factors appearing with multiplicity > 1 in den: divide out
                std::vector<QPoly> remaining = x[c2].den;
                for (const auto& d : factors) {
                    auto itd = std::find(remaining.begin(), remaining.end(), d);
                    if (itd != remaining.end()) remaining.erase(itd);
                }
                for (const auto& d : remaining) {
                    auto q = divide_exact(v, d);
                    if (!q) throw std::logic_error("denominator clearing failed");
                    v = *q;
                }
                vec[c2] = normal_form(v, s.eb);
            }
            // normalize: rational content out, first nonzero entry positive
            mpz_class num(0), den(1);
            for (const auto& v : vec) {
                if (v.is_zero()) continue;
                Rational c = v.content();
                mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
            }
            if (num != 0) {
                Rational scale(den, num);
                scale.canonicalize();
                for (const auto& v : vec)
                    if (!v.is_zero()) {
                        if (sgn(v.leading_coeff()) < 0) scale = -scale;
                        break;
                    }
                for (auto& v : vec) v.scale(scale);
            }
            br.basis.push_back(std::move(vec));
            br.free_unknowns.push_back(f);
            br.cleared_factors.push_back(cleared);
        }
        br.nullity = br.basis.size();
        tree_.branches.push_back(std::move(br));
    }

    RingPtr params_;
    size_t ncols_;
    std::vector<std::map<size_t, QPoly>> rows_;
    CaseTree tree_;
};

}  // namespace detail

/// Solves the homogeneous system over Q[params] exactly, splitting into a
/// finite case tree of (E, N) branches. Pivots prefer rational constants,
/// then entries invertible on the branch; otherwise the branch splits on the
/// candidate coefficient (null child first). Inconsistent children (product
/// of N inside the radical of <E>) are pruned. Rows are homogeneous by
/// construction of LinearSystem.
inline CaseTree solve_parametric_linear(const LinearSystem& sys, const RingPtr& params,
                                        std::vector<QPoly> E0 = {},
                                        std::vector<QPoly> N0 = {}) {
    detail::ParametricSolver solver(sys, params);
    return solver.solve(std::move(E0), std::move(N0));
}

/// Parameter-free fast path: exact nullspace over Q.
inline std::vector<std::vector<Rational>> nullspace_rational(const LinearSystem& sys) {
    for (const auto& row : sys.rows)
        for (const auto& [u, p] : row.entries)
            if (!p.is_constant())
                throw std::invalid_argument("nullspace_rational requires a parameter-free system");
    size_t ncols = sys.real_unknowns;
    std::vector<std::vector<Rational>> m;
    for (const auto& row : sys.rows) {
        std::vector<Rational> r(ncols, Rational(0));
        for (const auto& [u, p] : row.entries) r[u] = p.constant_value();
        m.push_back(std::move(r));
    }
    std::vector<int> pivot_of_col(ncols, -1);
    size_t prow = 0;
    for (size_t col = 0; col < ncols && prow < m.size(); ++col) {
        size_t sel = m.size();
        for (size_t r = prow; r < m.size(); ++r)
            if (sgn(m[r][col]) != 0) {
                sel = r;
                break;
            }
        if (sel == m.size()) continue;
        std::swap(m[prow], m[sel]);
        Rational inv = 1 / m[prow][col];
        for (auto& v : m[prow]) v *= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == prow || sgn(m[r][col]) == 0) continue;
            Rational f = m[r][col];
            for (size_t c2 = 0; c2 < ncols; ++c2) m[r][c2] -= f * m[prow][c2];
        }
        pivot_of_col[col] = static_cast<int>(prow);
        ++prow;
    }
    std::vector<std::vector<Rational>> basis;
    for (size_t f = 0; f < ncols; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        std::vector<Rational> v(ncols, Rational(0));
        v[f] = 1;
        for (size_t c2 = 0; c2 < ncols; ++c2)
            if (pivot_of_col[c2] >= 0) v[c2] = -m[pivot_of_col[c2]][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace crsym
