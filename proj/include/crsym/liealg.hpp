#pragma once

#include <climits>

#include "linsolve.hpp"

namespace crsym {

/// Holomorphic (1,0) vector field: one CRPoly coefficient per d/dz_j and
/// d/dw_l, in unbarred z, w only.
struct VectorField {
    VarTablePtr table;
    std::vector<CRPoly> coeffs;  // n z-slots then k w-slots

    static VectorField zero(const VarTablePtr& t) {
        VectorField f;
        f.table = t;
        f.coeffs.assign(t->n() + t->k(), CRPoly(t));
        return f;
    }

    size_t slot_var(size_t s) const {
        return s < table->n() ? table->z_index(s) : table->w_index(s - table->n());
    }

    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }

    VectorField operator+(const VectorField& o) const {
        VectorField r = *this;
        for (size_t s = 0; s < coeffs.size(); ++s) r.coeffs[s] += o.coeffs[s];
        return r;
    }
    VectorField operator-(const VectorField& o) const {
        VectorField r = *this;
        for (size_t s = 0; s < coeffs.size(); ++s) r.coeffs[s] -= o.coeffs[s];
        return r;
    }
    VectorField scaled(const GaussRational& g) const {
        VectorField r = *this;
        for (auto& c : r.coeffs) c.scale(g);
        return r;
    }

    /// X(f) for holomorphic f: only unbarred derivatives contribute.
    CRPoly apply(const CRPoly& f) const {
        CRPoly acc(table);
        for (size_t s = 0; s < coeffs.size(); ++s) {
            if (coeffs[s].is_zero()) continue;
            CRPoly d = f.partial_derivative(slot_var(s));
            if (!d.is_zero()) acc += coeffs[s] * d;
        }
        return acc;
    }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i].is_zero()) continue;
            std::string cs = coeffs[i].str();
            bool paren = coeffs[i].term_count() > 1;
            std::string piece = (paren ? "(" + cs + ")" : cs) + "*d_" +
                                table->name(slot_var(i));
            if (!s.empty() && piece[0] != '-') s += "+";
            s += piece;
        }
        return s.empty() ? "0" : s;
    }
};

inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    VectorField r = VectorField::zero(x.table);
    for (size_t s = 0; s < r.coeffs.size(); ++s)
        r.coeffs[s] = x.apply(y.coeffs[s]) - y.apply(x.coeffs[s]);
    return r;
}

/// Weight of a homogeneous field: [coefficient] - [variable], uniform over
/// slots. std::nullopt when slots disagree; throws on the zero field.
inline std::optional<int> field_weight(const VectorField& x) {
    if (x.is_zero()) throw std::domain_error("weight of the zero field is undefined");
    std::optional<int> w;
    for (size_t s = 0; s < x.coeffs.size(); ++s) {
        if (x.coeffs[s].is_zero()) continue;
        auto d = x.coeffs[s].weighted_degree();
        if (!d) return std::nullopt;
        int t = *d - x.table->weight_of(x.slot_var(s));
        if (w && *w != t) return std::nullopt;
        w = t;
    }
    return w;
}

/// Conditions of one case-tree leaf, shared by all rank/span decisions.
struct BranchView {
    RingPtr params;
    std::vector<QPoly> null_basis;  // reduced GB of <E>
    std::vector<QPoly> nonnull;     // N

    QPoly nf(const QPoly& p) const { return normal_form(p, null_basis); }
    bool reduces_to_zero(const QPoly& p) const { return nf(p).is_zero(); }

    bool known_nonzero(const QPoly& p) const {
        QPoly q = p.primitive_part();
        if (q.is_zero()) return false;
        bool progress = true;
        while (!q.is_constant() && progress) {
            progress = false;
            for (const auto& n : nonnull) {
                if (n.is_constant()) continue;
                if (auto quo = divide_exact(q, n)) {
                    q = quo->primitive_part();
                    progress = true;
                    break;
                }
            }
        }
        return q.is_constant() && !q.is_zero();
    }
};

/// Raised when a zero-test cannot be decided modulo (E, N); the caller
/// splits the branch on the condition and retries.
struct RefineRequest {
    QPoly condition;
};

namespace detail {

/// Real coordinates of a field: for every (slot, monomial), the real and
/// imaginary parts of the coefficient, as Q[params] values.
using CoordKey = std::tuple<size_t, Mono, bool>;  // slot, monomial, imag?

inline std::map<CoordKey, QPoly> field_coordinates(const VectorField& x) {
    std::map<CoordKey, QPoly> out;
    for (size_t s = 0; s < x.coeffs.size(); ++s) {
        for (const auto& [m, c] : x.coeffs[s].terms()) {
            QPoly re = c.real_part(), im = c.imag_part();
            if (!re.is_zero()) out.emplace(CoordKey{s, m, false}, re);
            if (!im.is_zero()) out.emplace(CoordKey{s, m, true}, im);
        }
    }
    return out;
}

/// Dense real-coordinate matrix over a common column index.
struct FieldMatrix {
    std::vector<CoordKey> columns;
    std::vector<std::vector<QPoly>> rows;

    static FieldMatrix build(const std::vector<VectorField>& fields, const RingPtr& params) {
        FieldMatrix m;
        std::map<CoordKey, size_t> index;
        std::vector<std::map<CoordKey, QPoly>> coords;
        for (const auto& f : fields) coords.push_back(field_coordinates(f));
        for (const auto& c : coords)
            for (const auto& [k, v] : c)
                if (index.emplace(k, index.size()).second) m.columns.push_back(k);
        // stable deterministic column order: as first encountered, then remap
        // to sorted order for reproducibility
        std::map<CoordKey, size_t> sorted;
        for (const auto& [k, i] : index) sorted.emplace(k, sorted.size());
        m.columns.clear();
        for (const auto& [k, i] : sorted) m.columns.push_back(k);
        for (const auto& c : coords) {
            std::vector<QPoly> row(sorted.size(), QPoly(params));
            for (const auto& [k, v] : c) row[sorted.at(k)] = v;
            m.rows.push_back(std::move(row));
        }
        return m;
    }
};

/// Gaussian elimination over the branch field. Pivot entries must be
/// decidably nonzero; otherwise a RefineRequest escapes.
class BranchElim {
public:
    BranchElim(FieldMatrix m, const BranchView& view) : m_(std::move(m)), view_(view) {
        for (auto& row : m_.rows)
            for (auto& v : row) v = view_.nf(v);
    }

    /// Indices of a maximal independent subset, chosen first-come.
    std::vector<size_t> independent_rows() {
        std::vector<size_t> chosen;
        std::vector<std::vector<QPoly>> echelon;
        for (size_t r = 0; r < m_.rows.size(); ++r) {
            std::vector<QPoly> row = m_.rows[r];
            if (reduce_row(row, echelon)) continue;
            echelon.push_back(std::move(row));
            chosen.push_back(r);
        }
        return chosen;
    }

    size_t rank() { return independent_rows().size(); }

private:
    /// Reduces row against the echelon set; true when it vanishes.
    bool reduce_row(std::vector<QPoly>& row, const std::vector<std::vector<QPoly>>& echelon) {
        for (const auto& e : echelon) {
            size_t pc = pivot_col(e);
            if (row[pc].is_zero()) continue;
            // row := pivot*row - entry*e
            const QPoly& pv = e[pc];
            const QPoly entry = row[pc];
            for (size_t c = 0; c < row.size(); ++c) {
                row[c] = view_.nf(pv * row[c] - entry * e[c]);
            }
        }
        for (size_t c = 0; c < row.size(); ++c) {
            if (row[c].is_zero()) continue;
            if (view_.known_nonzero(row[c])) return false;
            throw RefineRequest{row[c].primitive_part()};
        }
        return true;
    }

    size_t pivot_col(const std::vector<QPoly>& row) const {
        for (size_t c = 0; c < row.size(); ++c)
            if (!row[c].is_zero()) return c;
        throw std::logic_error("zero row in echelon set");
    }

    FieldMatrix m_;
    const BranchView& view_;
};

}  // namespace detail

/// Rank of the real span of the fields over the branch field.
inline size_t span_rank(const std::vector<VectorField>& fields, const BranchView& view) {
    if (fields.empty()) return 0;
    auto m = detail::FieldMatrix::build(fields, view.params);
    detail::BranchElim elim(std::move(m), view);
    return elim.rank();
}

/// First-come maximal independent subset.
inline std::vector<VectorField> span_basis(const std::vector<VectorField>& fields,
                                           const BranchView& view) {
    if (fields.empty()) return {};
    auto m = detail::FieldMatrix::build(fields, view.params);
    detail::BranchElim elim(std::move(m), view);
    std::vector<VectorField> out;
    for (size_t r : elim.independent_rows()) out.push_back(fields[r]);
    return out;
}

inline bool spans_equal(const std::vector<VectorField>& a, const std::vector<VectorField>& b,
                        const BranchView& view) {
    std::vector<VectorField> both = a;
    both.insert(both.end(), b.begin(), b.end());
    size_t ra = span_rank(a, view), rb = span_rank(b, view);
    return ra == rb && span_rank(both, view) == ra;
}

inline bool in_span(const VectorField& x, const std::vector<VectorField>& basis,
                    const BranchView& view) {
    if (x.is_zero()) return true;
    std::vector<VectorField> all = basis;
    all.push_back(x);
    return span_rank(all, view) == span_rank(basis, view);
}

/// Builds the fields of one solved branch: each nullspace vector assigns
/// Re/Im values to every complex unknown of the ansatz.
inline std::vector<VectorField> extract_generators(const Ansatz& a, const Branch& br) {
    std::vector<VectorField> out;
    const auto& model = a.model;
    auto table = model->table();
    for (const auto& vec : br.basis) {
        VectorField f = VectorField::zero(table);
        for (size_t s = 0; s < a.slots.size(); ++s) {
            const AnsatzSlot& slot = a.slots[s];
            CRPoly acc(table);
            for (size_t i = 0; i < slot.monomials.size(); ++i) {
                size_t u = slot.first_unknown + i;
                CoeffScalar val = CoeffScalar::from_parts(vec[2 * u], vec[2 * u + 1]);
                if (!val.is_zero()) acc.add_term(slot.monomials[i], val);
            }
            f.coeffs[s] = std::move(acc);
        }
        out.push_back(std::move(f));
    }
    return out;
}

/// Independent recheck of the tangency identities for a concrete field,
/// modulo the branch's null conditions.
inline bool verify_tangency(const CRModelPtr& model, const VectorField& x,
                            const std::vector<QPoly>& null_basis = {}) {
    const auto& T = *model->table();
    for (size_t j = 0; j < T.k(); ++j) {
        const CRPoly& R = model->rhs(j);
        CRPoly t = x.coeffs[T.n() + j] - x.coeffs[T.n() + j].conj();
        for (size_t s = 0; s < x.coeffs.size(); ++s) {
            size_t v = x.slot_var(s);
            CRPoly d = R.partial_derivative(v);
            CRPoly dbar = R.partial_derivative(T.conj_index(v));
            if (!d.is_zero()) t -= x.coeffs[s] * d;
            if (!dbar.is_zero()) t -= x.coeffs[s].conj() * dbar;
        }
        CRPoly res = model->restrict_to_m(t);
        for (const auto& [m, c] : res.terms()) {
            if (!normal_form(c.real_part(), null_basis).is_zero()) return false;
            if (!normal_form(c.imag_part(), null_basis).is_zero()) return false;
        }
    }
    return true;
}

/// Splits a (possibly inhomogeneous) automorphism into its weighted
/// homogeneous components, each an automorphism in its own right.
inline std::map<int, VectorField> decompose_by_weight(const VectorField& x) {
    std::map<int, VectorField> out;
    for (size_t s = 0; s < x.coeffs.size(); ++s) {
        int base = x.table->weight_of(x.slot_var(s));
        for (const auto& [m, c] : x.coeffs[s].terms()) {
            int t = x.table->weighted_degree(m) - base;
            auto it = out.find(t);
            if (it == out.end()) it = out.emplace(t, VectorField::zero(x.table)).first;
            it->second.coeffs[s].add_term(m, c);
        }
    }
    return out;
}

/// Result of computing one weight-t component under given leaf conditions.
struct ComponentResult {
    Ansatz ansatz;
    LinearSystem system;
    CaseTree tree;
    std::vector<std::vector<VectorField>> generators;  // per branch
};

/// The (s1)-(s3) pipeline for a single weight: ansatz, tangency, extraction,
/// parametric solve, generator extraction. Every generator is rechecked
/// against the tangency identities and its weight.
inline ComponentResult compute_component(const CRModelPtr& model, int t,
                                         std::vector<QPoly> E0 = {}, std::vector<QPoly> N0 = {},
                                         bool cumulative = false) {
    ComponentResult res;
    res.ansatz = build_ansatz(model, t, cumulative);
    auto polys = tangency_polynomials(model, res.ansatz);
    res.system = extract_linear_system(model, res.ansatz, polys);
    res.tree = solve_parametric_linear(res.system, model->table()->params(), std::move(E0),
                                       std::move(N0));
    for (const auto& br : res.tree.branches) {
        auto gens = extract_generators(res.ansatz, br);
        for (const auto& g : gens) {
            if (!verify_tangency(model, g, br.null_basis))
                throw std::logic_error("extracted generator fails the tangency recheck");
            if (!cumulative && !g.is_zero()) {
                auto w = field_weight(g);
                if (!w || *w != t)
                    throw std::logic_error("extracted generator has unexpected weight");
            }
        }
        res.generators.push_back(std::move(gens));
    }
    return res;
}

/// Iterated brackets of g_{-1}: components g_{-2}..g_{-rho} spanned by
/// [g_{-1}, g_{-(m-1)}], bases chosen first-come.
inline std::map<int, std::vector<VectorField>> negative_via_brackets(
    const std::vector<VectorField>& g_minus1, int rho, const BranchView& view) {
    std::map<int, std::vector<VectorField>> out;
    out[-1] = g_minus1;
    for (int m = 2; m <= rho; ++m) {
        std::vector<VectorField> cands;
        for (const auto& x : g_minus1)
            for (const auto& y : out[-(m - 1)]) {
                VectorField b = lie_bracket(x, y);
                if (!b.is_zero()) cands.push_back(std::move(b));
            }
        out[-m] = span_basis(cands, view);
    }
    out.erase(-1);
    return out;
}

/// True when every ansatz-computed negative component is spanned by the
/// iterated brackets of g_{-1}.
inline bool check_fundamental(const std::map<int, std::vector<VectorField>>& negative,
                              int rho, const BranchView& view) {
    auto it1 = negative.find(-1);
    std::vector<VectorField> g1 = it1 == negative.end() ? std::vector<VectorField>{} : it1->second;
    auto bracketed = negative_via_brackets(g1, rho, view);
    for (int m = 2; m <= rho; ++m) {
        auto it = negative.find(-m);
        const auto& ansatz_comp = it == negative.end() ? std::vector<VectorField>{} : it->second;
        if (!spans_equal(bracketed[-m], ansatz_comp, view)) return false;
    }
    return true;
}

struct AlgebraOptions {
    std::optional<int> max_weight;  // compute g_0..g_N unconditionally
    bool assume_fundamental = false;
    bool run_fundamental_check = true;
    int safety_cap = 20;  // highest t the termination search may reach
};

/// Structure constant entry: [X_i, X_j] = sum_m (num/den) X_m.
struct StructureEntry {
    size_t m;
    QPoly num, den;  // den is branch-invertible
};

struct BranchAlgebra {
    std::vector<QPoly> null_conditions, nonnull_conditions, null_basis;
    std::map<int, std::vector<VectorField>> components;
    int rho = 0;
    int varrho = -1;  // -1 marks "no nonnegative part" per the reporting rule
    bool rigid = false;
    bool fundamental = false;
    bool fundamental_assumed = false;
    bool transitive_assumed = true;
    bool terminated = true;  // false when a max-weight override cut the search
    std::vector<std::pair<int, size_t>> generator_index;  // (weight, position)
    std::map<std::pair<size_t, size_t>, std::vector<StructureEntry>> structure;
    std::vector<std::string> notes;

    size_t dim() const {
        size_t d = 0;
        for (const auto& [t, gens] : components) d += gens.size();
        return d;
    }
    size_t dim_at(int t) const {
        auto it = components.find(t);
        return it == components.end() ? 0 : it->second.size();
    }
    size_t negative_dim() const {
        size_t d = 0;
        for (const auto& [t, gens] : components)
            if (t < 0) d += gens.size();
        return d;
    }
    BranchView view(const RingPtr& params) const {
        return BranchView{params, null_basis, nonnull_conditions};
    }
};

namespace detail {

struct Leaf {
    std::vector<QPoly> E, N, eb;
    std::map<int, std::vector<VectorField>> comps;
    bool fundamental = false;
    bool fundamental_assumed = false;
    int trailing_trivial = 0;     // consecutive trivial components at t >= 0
    int top_t = INT_MIN;          // highest weight actually computed
    bool done = false;
    bool terminated_by_rule = false;
};

/// Expresses x in the basis over the branch field; nullopt when x is not in
/// the span. May raise RefineRequest.
inline std::optional<std::vector<PFrac>> express_in_basis(const VectorField& x,
                                                          const std::vector<VectorField>& basis,
                                                          const BranchView& view) {
    if (x.is_zero()) return std::vector<PFrac>(basis.size(), PFrac::zero(view.params));
    std::vector<VectorField> all = basis;
    all.push_back(x);
    auto m = FieldMatrix::build(all, view.params);
    size_t ncols = m.columns.size(), nb = basis.size();
    // solve sum_i lambda_i * basis_i = x column-wise: transpose system with
    // unknowns lambda_i, one equation per coordinate
    // augmented rows: [basis_0[c] ... basis_{nb-1}[c] | x[c]]
    std::vector<std::vector<QPoly>> rows;
    for (size_t c = 0; c < ncols; ++c) {
        std::vector<QPoly> row(nb + 1, QPoly(view.params));
        for (size_t i = 0; i < nb; ++i) row[i] = view.nf(m.rows[i][c]);
        row[nb] = view.nf(m.rows[nb][c]);
        bool all_zero = true;
        for (const auto& v : row) all_zero = all_zero && v.is_zero();
        if (!all_zero) rows.push_back(std::move(row));
    }
    // elimination with pivot policy over the first nb columns
    std::vector<std::pair<size_t, size_t>> pivots;
    std::vector<bool> used(rows.size(), false);
    for (size_t col = 0; col < nb; ++col) {
        size_t chosen = rows.size();
        for (size_t r = 0; r < rows.size(); ++r) {
            if (used[r] || rows[r][col].is_zero()) continue;
            if (rows[r][col].is_constant()) {
                chosen = r;
                break;
            }
            if (chosen == rows.size() && view.known_nonzero(rows[r][col])) chosen = r;
        }
        if (chosen == rows.size()) {
            for (size_t r = 0; r < rows.size(); ++r)
                if (!used[r] && !rows[r][col].is_zero())
                    throw RefineRequest{rows[r][col].primitive_part()};
            continue;  // column identically zero
        }
        const QPoly pv = rows[chosen][col];
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == chosen || used[r] || rows[r][col].is_zero()) continue;
            const QPoly f = rows[r][col];
            for (size_t c2 = 0; c2 <= nb; ++c2)
                rows[r][c2] = view.nf(pv * rows[r][c2] - f * rows[chosen][c2]);
        }
        pivots.emplace_back(chosen, col);
        used[chosen] = true;
    }
    // consistency: unused rows must have zero rhs
    for (size_t r = 0; r < rows.size(); ++r) {
        if (used[r]) continue;
        for (size_t c2 = 0; c2 < nb; ++c2)
            if (!rows[r][c2].is_zero()) throw std::logic_error("elimination left a pivotable row");
        if (!rows[r][nb].is_zero()) {
            if (view.known_nonzero(rows[r][nb])) return std::nullopt;
            throw RefineRequest{rows[r][nb].primitive_part()};
        }
    }
    std::vector<PFrac> lambda(nb, PFrac::zero(view.params));
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        auto [prow, pcol] = *it;
        PFrac acc = PFrac::zero(view.params);
        // lambda_pcol = (rhs - sum_{c>pcol} row[c]*lambda_c) / pivot
        acc.num = rows[prow][nb];
        for (size_t c2 = pcol + 1; c2 < nb; ++c2) {
            if (rows[prow][c2].is_zero() || lambda[c2].num.is_zero()) continue;
            QPoly tn = view.nf(rows[prow][c2] * lambda[c2].num);
            if (tn.is_zero()) continue;
            QPoly an = acc.num;
            for (const auto& d : lambda[c2].den) an = an * d;
            // tn gains acc's denominators (none yet beyond shared list)
            QPoly t2 = tn;
            for (const auto& d : acc.den) t2 = t2 * d;
            acc.num = view.nf(an - t2);
            for (const auto& d : lambda[c2].den) acc.den.push_back(d);
        }
        if (!acc.num.is_zero()) {
            if (auto q = divide_exact(acc.num, rows[prow][pcol])) {
                acc.num = *q;
            } else {
                acc.den.push_back(rows[prow][pcol]);
            }
            lambda[pcol] = std::move(acc);
        }
    }
    return lambda;
}

}  // namespace detail

/// Full pipeline: negative part by the ansatz route, fundamentality check,
/// nonnegative components with the transitivity termination rule, structure
/// constants, rigidity. One BranchAlgebra per surviving case-tree leaf.
class AlgebraComputation {
public:
    AlgebraComputation(CRModelPtr model, AlgebraOptions opts)
        : model_(std::move(model)), opts_(opts), params_(model_->table()->params()) {}

    std::vector<BranchAlgebra> run() {
        int rho = model_->rho();
        std::vector<detail::Leaf> leaves(1);
        leaves[0].eb = {};

        for (int t = -rho; t <= -1; ++t) step_weight(leaves, t);

        // index loop: refinement splits may append new leaves
        for (size_t i = 0; i < leaves.size(); ++i) {
            leaves[i].fundamental_assumed = opts_.assume_fundamental;
            if (opts_.assume_fundamental) {
                leaves[i].fundamental = true;
            } else if (opts_.run_fundamental_check) {
                for (;;) {
                    try {
                        BranchView v{params_, leaves[i].eb, leaves[i].N};
                        leaves[i].fundamental = check_fundamental(leaves[i].comps, rho, v);
                        break;
                    } catch (const RefineRequest& rr) {
                        split_leaf(leaves, i, rr.condition);
                    }
                }
            }
        }

        int top = opts_.max_weight ? *opts_.max_weight : opts_.safety_cap;
        for (int t = 0; t <= top; ++t) {
            bool any_active = false;
            for (const auto& leaf : leaves) any_active |= !leaf.done;
            if (!any_active) break;
            step_weight(leaves, t, /*skip_done=*/true);
            for (auto& leaf : leaves) {
                if (leaf.done || opts_.max_weight) continue;
                auto it = leaf.comps.find(t);
                bool trivial = it == leaf.comps.end() || it->second.empty();
                leaf.trailing_trivial = trivial ? leaf.trailing_trivial + 1 : 0;
                int needed = (model_->transitive() && leaf.fundamental) ? 1 : rho;
                if (leaf.trailing_trivial >= needed) {
                    leaf.done = true;
                    leaf.terminated_by_rule = true;
                }
            }
        }
        if (opts_.max_weight) {
            for (auto& leaf : leaves) leaf.done = true;
        }
        for (const auto& leaf : leaves)
            if (!leaf.done || (!leaf.terminated_by_rule && !opts_.max_weight))
                throw std::runtime_error(
                    "termination not reached; supply --max-weight or verify transitivity");

        std::vector<BranchAlgebra> out;
        for (size_t i = 0; i < leaves.size(); ++i) {
            for (;;) {
                try {
                    out.push_back(finalize_once(leaves[i]));
                    break;
                } catch (const RefineRequest& rr) {
                    split_leaf(leaves, i, rr.condition);
                }
            }
        }
        return out;
    }

private:
    /// Computes the weight-t component on every leaf, splitting leaves as
    /// the parametric solve requires.
    void step_weight(std::vector<detail::Leaf>& leaves, int t, bool skip_done = false) {
        Ansatz ansatz = build_ansatz(model_, t);
        auto polys = tangency_polynomials(model_, ansatz);
        LinearSystem sys = extract_linear_system(model_, ansatz, polys);
        std::vector<detail::Leaf> next;
        for (auto& leaf : leaves) {
            if (skip_done && leaf.done) {
                next.push_back(std::move(leaf));
                continue;
            }
            CaseTree tree = solve_parametric_linear(sys, params_, leaf.E, leaf.N);
            for (auto& br : tree.branches) {
                detail::Leaf child = leaf;
                child.E = br.null_conditions;
                child.eb = br.null_basis;
                child.N = br.nonnull_conditions;
                auto gens = extract_generators(ansatz, br);
                for (const auto& g : gens)
                    if (!verify_tangency(model_, g, br.null_basis))
                        throw std::logic_error("generator fails the tangency recheck");
                std::erase_if(gens, [](const VectorField& g) { return g.is_zero(); });
                if (!gens.empty()) child.comps[t] = std::move(gens);
                child.top_t = t;
                next.push_back(std::move(child));
            }
        }
        leaves = std::move(next);
    }

    /// leaves[i] becomes the nonnull child of the split; the null child is
    /// appended (processed later by index loops) unless inconsistent.
    void split_leaf(std::vector<detail::Leaf>& leaves, size_t i, const QPoly& c) {
        detail::Leaf null_child = leaves[i];
        null_child.E.push_back(c);
        std::sort(null_child.E.begin(), null_child.E.end());
        null_child.E.erase(std::unique(null_child.E.begin(), null_child.E.end()),
                           null_child.E.end());
        null_child.eb = buchberger_reduced(null_child.E);
        QPoly nprod = QPoly::constant(params_, Rational(1));
        for (const auto& n : null_child.N) nprod = nprod * n;
        if (!radical_membership(nprod, null_child.E, params_))
            leaves.push_back(std::move(null_child));
        leaves[i].N.push_back(c);
        std::sort(leaves[i].N.begin(), leaves[i].N.end());
        leaves[i].N.erase(std::unique(leaves[i].N.begin(), leaves[i].N.end()),
                          leaves[i].N.end());
    }

    BranchAlgebra finalize_once(const detail::Leaf& leaf) {
        BranchAlgebra alg;
        alg.null_conditions = leaf.E;
        alg.null_basis = leaf.eb;
        alg.nonnull_conditions = leaf.N;
        alg.components = leaf.comps;
        alg.rho = model_->rho();
        alg.fundamental = leaf.fundamental;
        alg.fundamental_assumed = leaf.fundamental_assumed;
        alg.transitive_assumed = model_->transitive();
        alg.terminated = leaf.terminated_by_rule;
        int varrho = -1;
        for (const auto& [t, gens] : alg.components)
            if (!gens.empty() && t >= 0) varrho = std::max(varrho, t);
        alg.varrho = varrho;
        alg.rigid = varrho <= 0;

        // rigidity double-check via the coefficient-weight-bound criterion
        bool bound_ok = true;
        for (const auto& [t, gens] : alg.components)
            for (const auto& g : gens)
                for (size_t s = 0; s < g.coeffs.size(); ++s) {
                    if (g.coeffs[s].is_zero()) continue;
                    auto d = g.coeffs[s].weighted_degree();
                    int limit = model_->table()->weight_of(g.slot_var(s));
                    if (!d || *d > limit) bound_ok = false;
                }
        if (alg.rigid != bound_ok)
            alg.notes.push_back("rigidity flag disagrees with the coefficient-weight criterion");

        BranchView view{params_, leaf.eb, leaf.N};
        for (const auto& [t, gens] : alg.components)
            for (size_t i = 0; i < gens.size(); ++i) alg.generator_index.emplace_back(t, i);

        auto gen_at = [&](size_t idx) -> const VectorField& {
            auto [t, i] = alg.generator_index[idx];
            return alg.components.at(t)[i];
        };
        size_t dim = alg.generator_index.size();
        for (size_t i = 0; i < dim; ++i) {
            for (size_t j = i + 1; j < dim; ++j) {
                VectorField b = lie_bracket(gen_at(i), gen_at(j));
                int tw = alg.generator_index[i].first + alg.generator_index[j].first;
                auto comp = alg.components.find(tw);
                bool expect_zero = comp == alg.components.end();
                // check the bracket coordinate-wise modulo E
                bool zero = true;
                for (const auto& [k, v] : detail::field_coordinates(b))
                    zero = zero && view.reduces_to_zero(v);
                if (zero) continue;
                if (expect_zero) {
                    // empty components inside the computed range (and, for a
                    // terminated run, everything above it) must absorb zero
                    if (tw <= leaf.top_t || alg.terminated)
                        throw std::logic_error("grading violated: bracket in an empty component");
                    alg.notes.push_back("bracket [" + std::to_string(i + 1) + "," +
                                        std::to_string(j + 1) +
                                        "] lands outside the computed range");
                    continue;
                }
                auto lambda = detail::express_in_basis(b, comp->second, view);
                if (!lambda)
                    throw std::logic_error("grading violated: bracket outside its component");
                std::vector<StructureEntry> entries;
                // global index of components.at(tw)[m]
                size_t base = 0;
                for (size_t g = 0; g < alg.generator_index.size(); ++g)
                    if (alg.generator_index[g].first == tw) {
                        base = g;
                        break;
                    }
                for (size_t mcol = 0; mcol < lambda->size(); ++mcol) {
                    auto& pf = (*lambda)[mcol];
                    if (pf.num.is_zero()) continue;
                    QPoly den = QPoly::constant(params_, Rational(1));
                    for (const auto& d : pf.den) den = den * d;
                    entries.push_back({base + mcol, pf.num, den});
                }
                if (!entries.empty()) alg.structure.emplace(std::make_pair(i, j), std::move(entries));
            }
        }
        return alg;
    }

    CRModelPtr model_;
    AlgebraOptions opts_;
    RingPtr params_;
};

inline std::vector<BranchAlgebra> compute_full_algebra(const CRModelPtr& model,
                                                       const AlgebraOptions& opts = {}) {
    AlgebraComputation c(model, opts);
    return c.run();
}

}  // namespace crsym
