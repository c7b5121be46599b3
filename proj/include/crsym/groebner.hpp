#pragma once

#include <algorithm>
#include <set>

#include "qpoly.hpp"

namespace crsym {

namespace detail {

inline QPoly s_poly(const QPoly& f, const QPoly& g) {
    Mono l = mono_lcm(f.leading_mono(), g.leading_mono());
    QPoly a = f.mul_mono(mono_div(l, f.leading_mono()), Rational(1) / f.leading_coeff());
    QPoly b = g.mul_mono(mono_div(l, g.leading_mono()), Rational(1) / g.leading_coeff());
    return a - b;
}

}  // namespace detail

/// Unique reduced Groebner basis (monic, inter-reduced, sorted by leading
/// monomial descending). Buchberger with the normal (sugar-like) pair
/// selection: pairs handled in ascending lcm order, with the product and
/// chain criteria.
inline std::vector<QPoly> buchberger_reduced(std::vector<QPoly> gens) {
    std::vector<QPoly> basis;
    RingPtr ring;
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        ring = g.ring();
        basis.push_back(g.monic());
    }
    if (basis.empty()) return {};
    const Ring* R = ring.get();

    // pending S-pairs, keyed by lcm so small pairs go first
    struct Pair {
        Mono lcm;
        size_t i, j;
    };
    auto pair_less = [R](const Pair& a, const Pair& b) {
        int c = R->cmp(a.lcm, b.lcm);
        if (c != 0) return c < 0;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    std::vector<Pair> pairs;
    auto push_pairs_for = [&](size_t j) {
        for (size_t i = 0; i < j; ++i)
            pairs.push_back({mono_lcm(basis[i].leading_mono(), basis[j].leading_mono()), i, j});
        std::sort(pairs.begin(), pairs.end(), pair_less);
    };
    for (size_t j = 1; j < basis.size(); ++j)
        for (size_t i = 0; i < j; ++i)
            pairs.push_back({mono_lcm(basis[i].leading_mono(), basis[j].leading_mono()), i, j});
    std::sort(pairs.begin(), pairs.end(), pair_less);

    while (!pairs.empty()) {
        Pair p = pairs.front();
        pairs.erase(pairs.begin());
        const QPoly& f = basis[p.i];
        const QPoly& g = basis[p.j];
        // product criterion: coprime leading monomials reduce to zero
        if (mono_mul(f.leading_mono(), g.leading_mono()) == p.lcm) continue;
        QPoly s = normal_form(detail::s_poly(f, g), basis);
        if (s.is_zero()) continue;
        basis.push_back(s.monic());
        if (s.is_constant()) break;  // ideal is (1)
        push_pairs_for(basis.size() - 1);
    }

    // minimalize: drop elements whose lt is divisible by another's
    std::vector<QPoly> minimal;
    for (size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            if (mono_divides(basis[j].leading_mono(), basis[i].leading_mono())) {
                // break ties (equal lt) by keeping the earlier element
                if (basis[j].leading_mono() == basis[i].leading_mono())
                    redundant = j < i;
                else
                    redundant = true;
            }
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    // full inter-reduction
    std::vector<QPoly> reduced;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<QPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        QPoly nf = normal_form(minimal[i], others);
        if (!nf.is_zero()) reduced.push_back(nf.monic());
    }
    std::sort(reduced.begin(), reduced.end(), [R](const QPoly& a, const QPoly& b) {
        return R->cmp(a.leading_mono(), b.leading_mono()) > 0;
    });
    return reduced;
}

inline bool basis_contains_one(const std::vector<QPoly>& basis) {
    for (const auto& g : basis)
        if (g.is_constant() && !g.is_zero()) return true;
    return false;
}

inline bool in_ideal(const QPoly& f, const std::vector<QPoly>& reduced_basis) {
    return normal_form(f, reduced_basis).is_zero();
}

/// Rabinowitsch test: f in sqrt(<E>) iff 1 in <E, 1 - t*f> with t fresh.
inline bool radical_membership(const QPoly& f, const std::vector<QPoly>& E, const RingPtr& ring) {
    if (f.is_zero()) return true;
    // a nonzero constant lies in the radical only when the ideal is (1)
    if (f.is_constant()) return basis_contains_one(buchberger_reduced(E));
    std::string tname = "_rab";
    while (ring->index_of(tname) >= 0) tname += "_";
    std::vector<std::string> names = ring->names;
    names.push_back(tname);
    // keep the original block structure; the fresh variable joins the tail
    RingPtr ext = make_ring(names, ring->block_split);
    std::vector<size_t> var_map(ring->size());
    for (size_t i = 0; i < var_map.size(); ++i) var_map[i] = i;
    std::vector<QPoly> gens;
    for (const auto& e : E)
        if (!e.is_zero()) gens.push_back(e.lift(ext, var_map));
    QPoly tf = f.lift(ext, var_map) * QPoly::variable(ext, ext->size() - 1);
    gens.push_back(QPoly::constant(ext, Rational(1)) - tf);
    return basis_contains_one(buchberger_reduced(std::move(gens)));
}

/// One case of a comprehensive Groebner system. Region semantics follow the
/// set difference V(E) \ V(N): every null condition vanishes and at least
/// one non-null condition does not. Empty N means all of V(E).
struct CGSTriple {
    std::vector<QPoly> null_conditions;     // E
    std::vector<QPoly> nonnull_conditions;  // N
    std::vector<QPoly> basis;               // G
};

struct CGSOptions {
    size_t max_branches = 64;
    size_t max_depth = 32;
};

namespace detail {

inline std::vector<QPoly> sorted_unique_primitive(std::vector<QPoly> v) {
    for (auto& p : v) p = p.primitive_part();
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// region(E, N) empty? With the V(E) \ V(N) semantics this happens exactly
/// when every element of N vanishes on V(E).
inline bool cgs_region_empty(const std::vector<QPoly>& E, const std::vector<QPoly>& N,
                             const RingPtr& ring) {
    if (!N.empty()) {
        for (const auto& n : N)
            if (!radical_membership(n, E, ring)) return false;
        return true;
    }
    return basis_contains_one(buchberger_reduced(E));
}

struct CGSWorker {
    RingPtr ring;  // block ring: main variables then parameters
    size_t split;  // parameter block starts here
    std::vector<QPoly> gens;
    CGSOptions opts;
    std::vector<CGSTriple> out;
    size_t branches_emitted = 0;

    bool param_only(const QPoly& p) const {
        for (const auto& [m, c] : p.terms())
            if (mono_total_degree(m, 0, split) > 0) return false;
        return true;
    }

    /// Leading coefficient of g with respect to the main variables: the sum
    /// of parameter terms sharing g's maximal main-variable part.
    QPoly main_leading_coeff(const QPoly& g) const {
        const Mono& lead = g.leading_mono();
        QPoly c(ring);
        for (const auto& [m, v] : g.terms()) {
            bool same_main = true;
            for (size_t i = 0; i < split && same_main; ++i) same_main = m[i] == lead[i];
            if (same_main) {
                Mono pm(ring->size(), 0);
                for (size_t i = split; i < ring->size(); ++i) pm[i] = m[i];
                c.add_term(pm, v);
            }
        }
        return c;
    }

    void emit(std::vector<QPoly> E, std::vector<QPoly> N, std::vector<QPoly> G) {
        if (++branches_emitted > opts.max_branches)
            throw std::runtime_error("comprehensive Groebner system exceeded branch cap");
        out.push_back({sorted_unique_primitive(std::move(E)), sorted_unique_primitive(std::move(N)),
                       std::move(G)});
    }

    static std::vector<QPoly> combine_guards(const std::vector<QPoly>& N,
                                             const std::vector<QPoly>& extra) {
        // region constraint "(some of N nonzero) AND (some of extra nonzero)"
        // is representable as one set via pairwise products
        if (N.empty()) return extra;
        if (extra.empty()) return N;
        std::vector<QPoly> r;
        for (const auto& n : N)
            for (const auto& e : extra) r.push_back(n * e);
        return r;
    }

    void run(std::vector<QPoly> E, std::vector<QPoly> N, size_t depth) {
        if (depth > opts.max_depth)
            throw std::runtime_error("comprehensive Groebner system exceeded depth cap");
        if (cgs_region_empty(E, N, ring)) return;

        std::vector<QPoly> all = gens;
        for (const auto& e : E) all.push_back(e);
        std::vector<QPoly> G = buchberger_reduced(all);
        if (basis_contains_one(G)) {
            emit(std::move(E), std::move(N), {QPoly::constant(ring, Rational(1))});
            return;
        }

        std::vector<QPoly> eb = buchberger_reduced(E);
        std::vector<QPoly> param_part, main_part;
        for (const auto& g : G)
            (param_only(g) ? param_part : main_part).push_back(g);

        // parameter constraints not already implied: where one of them is
        // nonzero the specialized ideal contains a nonzero constant
        std::vector<QPoly> fresh;
        for (const auto& p : param_part)
            if (!radical_membership(p, eb, ring)) fresh.push_back(p);
        if (!fresh.empty()) {
            auto guard = combine_guards(N, fresh);
            if (!cgs_region_empty(E, guard, ring))
                emit(E, guard, {QPoly::constant(ring, Rational(1))});
            for (const auto& p : param_part) E.push_back(p);
            eb = buchberger_reduced(E);
            if (cgs_region_empty(E, N, ring)) return;
        }

        if (main_part.empty()) {  // specialized ideal is zero on the region
            emit(std::move(E), std::move(N), {});
            return;
        }

        // leading coefficients that vanish identically on the region force a
        // strictly larger condition ideal; restart with them added
        std::vector<QPoly> degenerate;
        std::vector<QPoly> lcs;
        for (const auto& g : main_part) {
            QPoly lc = main_leading_coeff(g).primitive_part();
            if (lc.is_constant()) continue;
            if (radical_membership(lc, eb, ring))
                degenerate.push_back(lc);
            else
                lcs.push_back(lc);
        }
        if (!degenerate.empty()) {
            for (auto& d : degenerate) E.push_back(std::move(d));
            run(std::move(E), std::move(N), depth + 1);
            return;
        }
        lcs = sorted_unique_primitive(std::move(lcs));

        // main branch: all leading coefficients invertible (Kalkbrener /
        // Suzuki-Sato specialization lemma), guarded by their product
        if (lcs.empty()) {
            emit(std::move(E), std::move(N), std::move(main_part));
            return;
        }
        QPoly prod = QPoly::constant(ring, Rational(1));
        for (const auto& h : lcs) prod = prod * h;
        {
            auto guard = combine_guards(N, {prod});
            if (!cgs_region_empty(E, guard, ring)) emit(E, guard, main_part);
        }
        // children: h_i vanishes, earlier h_j stay nonzero
        QPoly prefix = QPoly::constant(ring, Rational(1));
        for (size_t i = 0; i < lcs.size(); ++i) {
            std::vector<QPoly> Ei = E;
            Ei.push_back(lcs[i]);
            std::vector<QPoly> Ni =
                i == 0 ? N : combine_guards(N, {prefix});
            run(std::move(Ei), std::move(Ni), depth + 1);
            prefix = prefix * lcs[i];
        }
    }
};

}  // namespace detail

/// Computes a comprehensive Groebner system of the ideal generated by gens
/// in Q[params][vars]. The supplied ring must be a block ring with the main
/// variables in the leading block (block_split = number of main variables).
inline std::vector<CGSTriple> comprehensive_groebner_system(const std::vector<QPoly>& gens,
                                                            const RingPtr& ring,
                                                            const CGSOptions& opts = {}) {
    if (ring->block_split == 0 || ring->block_split > ring->size())
        throw std::invalid_argument("comprehensive_groebner_system needs a block ring");
    detail::CGSWorker w;
    w.ring = ring;
    w.split = ring->block_split;
    w.gens = gens;
    w.opts = opts;
    w.run({}, {}, 0);
    return std::move(w.out);
}

}  // namespace crsym
