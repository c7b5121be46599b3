#pragma once

#include "model.hpp"

namespace crsym {

/// Polynomial ansatz for one coefficient slot of the unknown holomorphic
/// field: every listed monomial carries one complex unknown.
struct AnsatzSlot {
    size_t var_index;            // the z_j or w_l this slot multiplies (d/d var)
    std::vector<Mono> monomials;  // unbarred z,w monomials, descending order
    size_t first_unknown;         // index of the unknown attached to monomials[0]
};

/// Weight-t ansatz (or cumulative up-to-t): Z^j carries monomials of weight
/// [z_j]+t, W^l of weight [w_l]+t; cumulative mode takes all weights up to
/// the bound. Unknowns are named c1..cN in slot-major order; each complex
/// unknown c_u is backed by the real pair (x_{2u} = Re, x_{2u+1} = Im).
struct Ansatz {
    CRModelPtr model;
    int t = 0;
    bool cumulative = false;
    bool below_minimum = false;  // t < -[w_k]; ansatz is empty
    std::vector<AnsatzSlot> slots;
    size_t complex_count = 0;

    std::string unknown_name(size_t u) const { return "c" + std::to_string(u + 1); }
    std::string real_name(size_t r) const {
        return (r % 2 ? "Im(" : "Re(") + unknown_name(r / 2) + ")";
    }
};

inline Ansatz build_ansatz(const CRModelPtr& model, int t, bool cumulative = false) {
    const auto& T = *model->table();
    Ansatz a;
    a.model = model;
    a.t = t;
    a.cumulative = cumulative;
    if (t < -model->rho()) {
        a.below_minimum = true;  // below the minimal weight -[w_k]
        return a;
    }
    auto allowed = unbarred_indices(model->table());
    size_t next = 0;
    auto add_slot = [&](size_t var_index, int bound) {
        AnsatzSlot slot;
        slot.var_index = var_index;
        if (cumulative) {
            for (int w = bound; w >= 0; --w) {
                auto ms = enumerate_weighted_monomials(model->table(), w, allowed);
                slot.monomials.insert(slot.monomials.end(), ms.begin(), ms.end());
            }
        } else {
            slot.monomials = enumerate_weighted_monomials(model->table(), bound, allowed);
        }
        slot.first_unknown = next;
        next += slot.monomials.size();
        a.slots.push_back(std::move(slot));
    };
    for (size_t j = 0; j < T.n(); ++j) add_slot(T.z_index(j), 1 + t);
    for (size_t l = 0; l < T.k(); ++l) add_slot(T.w_index(l), T.w_weight(l) + t);
    a.complex_count = next;
    return a;
}

/// Polynomial linear in the ansatz unknowns and their conjugates, with
/// CRPoly coefficients: sum of coeff(u, conj) * (c_u or conj(c_u)).
struct LinPoly {
    std::map<std::pair<size_t, bool>, CRPoly> parts;

    void add(size_t u, bool conj, const CRPoly& p) {
        if (p.is_zero()) return;
        auto key = std::make_pair(u, conj);
        auto it = parts.find(key);
        if (it == parts.end()) {
            parts.emplace(key, p);
        } else {
            it->second += p;
            if (it->second.is_zero()) parts.erase(it);
        }
    }
    bool is_zero() const { return parts.empty(); }
};

/// The k tangency polynomials T_j of the general ansatz field, restricted to
/// M. T_j = W^j - conj(W^j) - sum_i Z^i dR_j/dz_i - sum_i conj(Z^i) dR_j/dbz_i
///       - sum_l W^l dR_j/dw_l - sum_l conj(W^l) dR_j/dbw_l.
inline std::vector<LinPoly> tangency_polynomials(const CRModelPtr& model, const Ansatz& a) {
    const auto& T = *model->table();
    auto table = model->table();
    std::vector<LinPoly> out(T.k());
    auto slot_mono = [&](const AnsatzSlot& s, size_t i, bool conj) {
        CRPoly m = CRPoly::term(table, s.monomials[i],
                                CoeffScalar::constant(table->params(), GaussRational(rat(1))));
        return conj ? m.conj() : m;
    };
    for (size_t j = 0; j < T.k(); ++j) {
        LinPoly acc;
        const CRPoly& R = model->rhs(j);
        // W^j - conj(W^j)
        if (!a.slots.empty()) {
            const AnsatzSlot& wslot = a.slots[T.n() + j];
            for (size_t i = 0; i < wslot.monomials.size(); ++i) {
                acc.add(wslot.first_unknown + i, false, slot_mono(wslot, i, false));
                acc.add(wslot.first_unknown + i, true, -slot_mono(wslot, i, true));
            }
        }
        // derivative couplings
        for (const AnsatzSlot& s : a.slots) {
            CRPoly d = R.partial_derivative(s.var_index);
            CRPoly dbar = R.partial_derivative(T.conj_index(s.var_index));
            for (size_t i = 0; i < s.monomials.size(); ++i) {
                if (!d.is_zero()) acc.add(s.first_unknown + i, false, -(slot_mono(s, i, false) * d));
                if (!dbar.is_zero())
                    acc.add(s.first_unknown + i, true, -(slot_mono(s, i, true) * dbar));
            }
        }
        LinPoly restricted;
        for (const auto& [key, p] : acc.parts) restricted.add(key.first, key.second,
                                                              model->restrict_to_m(p));
        out[j] = std::move(restricted);
    }
    return out;
}

/// One complex linear equation sum a_u c_u + b_u conj(c_u) = 0, tagged with
/// the defining equation and extracted monomial it came from.
struct ComplexRow {
    std::map<std::pair<size_t, bool>, CoeffScalar> coeffs;
    size_t eq_index;
    Mono monomial;
};

/// Real linear form sum over real unknowns with Q[params] coefficients.
struct RealRow {
    std::vector<std::pair<size_t, QPoly>> entries;  // sorted by unknown index
    size_t eq_index;
    Mono monomial;
    bool imag_part;
};

struct LinearSystem {
    VarTablePtr table;
    size_t complex_unknowns = 0;
    size_t real_unknowns = 0;
    std::vector<ComplexRow> display_rows;  // as extracted, duplicates kept
    std::vector<RealRow> rows;             // deduplicated solve form
};

namespace detail {

inline void normalize_real_row(RealRow& row) {
    std::sort(row.entries.begin(), row.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // rational content out, first nonzero entry sign-positive
    mpz_class num(0), den(1);
    for (const auto& [u, p] : row.entries) {
        Rational c = p.content();
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    if (num == 0) {
        row.entries.clear();
        return;
    }
    Rational scale(den, num);
    scale.canonicalize();
    if (sgn(row.entries.front().second.leading_coeff()) < 0) scale = -scale;
    for (auto& [u, p] : row.entries) p.scale(scale);
}

inline std::string row_key(const RealRow& row) {
    std::string k;
    for (const auto& [u, p] : row.entries) k += std::to_string(u) + ":" + p.str() + ";";
    return k;
}

}  // namespace detail

/// Collects the coefficient of every monomial of z, bz, w across the given
/// tangency polynomials (complex rows), then splits each into real and
/// imaginary parts over the real unknown pairs. Solve-form rows are
/// content-normalized, sign-normalized and deduplicated in first-seen order.
inline LinearSystem extract_linear_system(const CRModelPtr& model, const Ansatz& a,
                                          const std::vector<LinPoly>& polys) {
    LinearSystem sys;
    sys.table = model->table();
    sys.complex_unknowns = a.complex_count;
    sys.real_unknowns = 2 * a.complex_count;
    CRMonoGreater order{model->table().get()};

    for (size_t j = 0; j < polys.size(); ++j) {
        std::map<Mono, ComplexRow, CRMonoGreater> rows{order};
        for (const auto& [key, p] : polys[j].parts) {
            for (const auto& [m, c] : p.terms()) {
                auto it = rows.find(m);
                if (it == rows.end()) {
                    ComplexRow r;
                    r.eq_index = j;
                    r.monomial = m;
                    it = rows.emplace(m, std::move(r)).first;
                }
                it->second.coeffs[key] = c;
            }
        }
        for (auto& [m, row] : rows) sys.display_rows.push_back(std::move(row));
    }

    std::set<std::string> seen;
    for (const ComplexRow& crow : sys.display_rows) {
        RealRow re, im;
        re.eq_index = im.eq_index = crow.eq_index;
        re.monomial = im.monomial = crow.monomial;
        re.imag_part = false;
        im.imag_part = true;
        std::map<size_t, QPoly> re_acc, im_acc;
        for (const auto& [key, c] : crow.coeffs) {
            auto [u, conj] = key;
            QPoly alpha_re = c.real_part(), alpha_im = c.imag_part();
            size_t xs = 2 * u, ys = 2 * u + 1;
            auto add = [&](std::map<size_t, QPoly>& acc, size_t idx, const QPoly& q) {
                if (q.is_zero()) return;
                auto it = acc.find(idx);
                if (it == acc.end())
                    acc.emplace(idx, q);
                else {
                    it->second += q;
                    if (it->second.is_zero()) acc.erase(it);
                }
            };
            // (alpha_re + i alpha_im)(x + i y) for c_u, conjugated pair for
            // conj(c_u) = x - i y
            add(re_acc, xs, alpha_re);
            add(re_acc, ys, conj ? alpha_im : -alpha_im);
            add(im_acc, xs, alpha_im);
            add(im_acc, ys, conj ? -alpha_re : alpha_re);
        }
        for (auto& [u, q] : re_acc) re.entries.emplace_back(u, std::move(q));
        for (auto& [u, q] : im_acc) im.entries.emplace_back(u, std::move(q));
        for (RealRow* r : {&re, &im}) {
            detail::normalize_real_row(*r);
            if (r->entries.empty()) continue;
            if (seen.insert(detail::row_key(*r)).second) sys.rows.push_back(std::move(*r));
        }
    }
    return sys;
}

/// Sys^{t,j} in the display grouping: the complex rows of one defining
/// equation, rendered with the ansatz unknown names.
inline std::string format_complex_row(const Ansatz& a, const ComplexRow& row) {
    std::string s;
    for (const auto& [key, c] : row.coeffs) {
        std::string name = a.unknown_name(key.first);
        if (key.second) name = "conj(" + name + ")";
        std::string cs = c.str();
        std::string piece;
        if (cs == "1")
            piece = name;
        else if (cs == "-1")
            piece = "-" + name;
        else if (c.terms().size() > 1 || cs.find("+") != std::string::npos)
            piece = "(" + cs + ")*" + name;
        else
            piece = cs + "*" + name;
        if (!s.empty() && piece[0] != '-') s += "+";
        s += piece;
    }
    return s + " = 0";
}

}  // namespace crsym
