#pragma once

#include <fstream>

#include <json.hpp>

#include "expr.hpp"

namespace crsym {

struct ModelViolation {
    std::string message;
    bool fatal = true;
};

/// Weighted homogeneous CR-generic model in complex form: w_j - bw_j = R_j,
/// with R_j = 2i*Phi_j weighted homogeneous of weight [w_j].
class CRModel {
public:
    CRModel(VarTablePtr table, std::vector<CRPoly> rhs, bool transitive = true)
        : table_(std::move(table)), rhs_(std::move(rhs)), transitive_(transitive) {
        if (rhs_.size() != table_->k())
            throw std::invalid_argument("need exactly one defining equation per w variable");
    }

    const VarTablePtr& table() const { return table_; }
    const std::vector<CRPoly>& rhs() const { return rhs_; }
    const CRPoly& rhs(size_t j) const { return rhs_[j]; }
    bool transitive() const { return transitive_; }
    int rho() const { return table_->max_w_weight(); }

    /// Checks the four structural invariants. Fatal violations make
    /// restrict_to_M unusable; Bloom-Graham condition (ii) findings are
    /// reported as warnings (fatal = false).
    std::vector<ModelViolation> validate() const {
        std::vector<ModelViolation> out;
        const auto& T = *table_;
        for (size_t j = 0; j < rhs_.size(); ++j) {
            std::string eq = "rhs[" + std::to_string(j) + "] (w" + std::to_string(j + 1) + ")";
            const CRPoly& R = rhs_[j];
            if (R.is_zero()) {
                out.push_back({eq + ": zero right-hand side (model would be Levi-flat here)"});
                continue;
            }
            if (!R.is_homogeneous_of(T.w_weight(j))) {
                for (const auto& [m, c] : R.terms()) {
                    if (T.weighted_degree(m) != T.w_weight(j)) {
                        out.push_back({eq + ": inhomogeneous weight: monomial " +
                                       CRPoly::term(table_, m, c).str() + " has weight " +
                                       std::to_string(T.weighted_degree(m)) + ", expected " +
                                       std::to_string(T.w_weight(j))});
                        break;
                    }
                }
            }
            if (R.conj() != -R) out.push_back({eq + ": fails anti-reality conj(R) = -R"});
            for (const auto& [m, c] : R.terms()) {
                bool has_barred = false, has_unbarred = false;
                for (size_t i = 0; i < m.size(); ++i) {
                    if (!m[i]) continue;
                    (T.is_barred(i) ? has_barred : has_unbarred) = true;
                }
                if (!has_barred || !has_unbarred) {
                    out.push_back({eq + ": pluriharmonic term " +
                                   CRPoly::term(table_, m, c).str()});
                }
            }
            for (const auto& [m, c] : R.terms()) {
                for (size_t l = 0; l < T.k(); ++l) {
                    if ((m[T.w_index(l)] || m[T.bw_index(l)]) &&
                        T.w_weight(l) >= T.w_weight(j)) {
                        out.push_back({eq + ": stratification violated: involves w" +
                                       std::to_string(l + 1) + " of weight >= " +
                                       std::to_string(T.w_weight(j))});
                    }
                }
            }
        }
        bloom_condition_ii(out);
        return out;
    }

    bool is_valid() const {
        for (const auto& v : validate())
            if (v.fatal) return false;
        return true;
    }

    /// Restriction to M: eliminates every barred w by the ordered
    /// substitution bw_l := w_l - R_l (increasing weight), yielding a
    /// polynomial in z, bz, w only.
    CRPoly restrict_to_m(const CRPoly& p) const {
        ensure_elimination();
        CRPoly r = p;
        for (size_t pos = 0; pos < elim_order_.size(); ++pos) {
            size_t l = elim_order_[pos];
            r = r.substitute(table_->bw_index(l), elim_expr_[l]);
        }
        return r;
    }

    /// The closed (barred-free) form substituted for bw_l.
    const CRPoly& eliminated_bw(size_t l) const {
        ensure_elimination();
        return elim_expr_[l];
    }

private:
    void ensure_elimination() const {
        if (!elim_expr_.empty()) return;
        const auto& T = *table_;
        std::vector<size_t> order(T.k());
        for (size_t l = 0; l < T.k(); ++l) order[l] = l;
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return T.w_weight(a) < T.w_weight(b); });
        std::vector<CRPoly> exprs(T.k(), CRPoly(table_));
        for (size_t pos = 0; pos < order.size(); ++pos) {
            size_t l = order[pos];
            CRPoly e = CRPoly::variable(table_, T.w_index(l)) - rhs_[l];
            for (size_t q = 0; q < pos; ++q) {
                size_t m = order[q];
                e = e.substitute(T.bw_index(m), exprs[m]);
            }
            for (const auto& [mono, c] : e.terms())
                for (size_t m = 0; m < T.k(); ++m)
                    if (mono[T.bw_index(m)])
                        throw std::runtime_error(
                            "stratification violated; elimination would not terminate");
            exprs[l] = std::move(e);
        }
        elim_expr_ = std::move(exprs);
        elim_order_ = std::move(order);
    }

    /// Bloom-Graham condition (ii): flags R_i containing a nonzero multiple
    /// of u^alpha * R_j for some j < i.
    void bloom_condition_ii(std::vector<ModelViolation>& out) const {
        const auto& T = *table_;
        for (size_t i = 1; i < T.k(); ++i) {
            for (size_t j = 0; j < i; ++j) {
                int budget = T.w_weight(i) - T.w_weight(j);
                if (budget < 0) continue;
                std::vector<size_t> uvars;
                for (size_t l = 0; l <= j; ++l) uvars.push_back(T.w_index(l));
                for (const Mono& alpha : enumerate_weighted_monomials(table_, budget, uvars)) {
                    CRPoly ualpha = CRPoly::constant(table_, GaussRational(Rational(1)));
                    for (size_t l = 0; l <= j; ++l) {
                        uint32_t e = alpha[T.w_index(l)];
                        for (uint32_t t = 0; t < e; ++t) {
                            CRPoly u = CRPoly::variable(table_, T.w_index(l)) +
                                       CRPoly::variable(table_, T.bw_index(l));
                            u.scale(GaussRational(rat(1, 2)));
                            ualpha *= u;
                        }
                    }
                    CRPoly cand = ualpha * rhs_[j];
                    if (proportional_subsum(rhs_[i], cand)) {
                        out.push_back({"rhs[" + std::to_string(i) +
                                           "]: contains a multiple of u^alpha * rhs[" +
                                           std::to_string(j) +
                                           "] (Bloom-Graham condition (ii)); consider "
                                           "renormalizing the model",
                                       /*fatal=*/false});
                        break;
                    }
                }
            }
        }
    }

    /// True when target contains lambda * cand as a subsum for a single
    /// nonzero scalar lambda (tested by cross-multiplication).
    bool proportional_subsum(const CRPoly& target, const CRPoly& cand) const {
        if (cand.is_zero()) return false;
        const auto& first = *cand.terms().begin();
        CoeffScalar num = target.coeff(first.first);  // lambda = num / first.second
        if (num.is_zero()) return false;
        for (const auto& [m, c] : cand.terms()) {
            if (target.coeff(m) * first.second != num * c) return false;
        }
        return true;
    }

    VarTablePtr table_;
    std::vector<CRPoly> rhs_;
    bool transitive_;
    mutable std::vector<CRPoly> elim_expr_;
    mutable std::vector<size_t> elim_order_;
};

using CRModelPtr = std::shared_ptr<const CRModel>;

/// Loads the model JSON document:
///   { "cr_dim": n, "codim": k, "weights_w": [l1..lk],
///     "parameters": ["lambda", ...], "rhs": ["2*I*z1*bz1", ...] }
inline CRModelPtr model_from_json(const nlohmann::json& doc) {
    auto require = [&](const char* key) {
        if (!doc.contains(key))
            throw std::runtime_error(std::string("model file missing key \"") + key + "\"");
    };
    require("cr_dim");
    require("codim");
    require("weights_w");
    require("rhs");
    size_t n = doc.at("cr_dim").get<size_t>();
    size_t k = doc.at("codim").get<size_t>();
    std::vector<int> weights = doc.at("weights_w").get<std::vector<int>>();
    if (weights.size() != k)
        throw std::runtime_error("weights_w must list one weight per codimension");
    std::vector<std::string> params;
    if (doc.contains("parameters")) params = doc.at("parameters").get<std::vector<std::string>>();
    for (const auto& p : params) {
        if (p == "I" || p.empty())
            throw std::runtime_error("invalid parameter name \"" + p + "\"");
    }
    auto table = make_vartable(n, weights, params);
    for (const auto& p : params)
        if (table->index_of(p) >= 0)
            throw std::runtime_error("parameter name collides with a variable: " + p);
    std::vector<std::string> rhs_text = doc.at("rhs").get<std::vector<std::string>>();
    if (rhs_text.size() != k) throw std::runtime_error("rhs must list one equation per w");
    std::vector<CRPoly> rhs;
    for (size_t j = 0; j < k; ++j) {
        try {
            rhs.push_back(parse_crpoly(rhs_text[j], table));
        } catch (const ParseError& e) {
            throw std::runtime_error("rhs[" + std::to_string(j) + "]: " + e.what());
        }
    }
    bool transitive = doc.value("transitive", true);
    return std::make_shared<CRModel>(table, std::move(rhs), transitive);
}

inline CRModelPtr model_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("JSON parse error in " + path + ": " + e.what());
    }
    return model_from_json(doc);
}

}  // namespace crsym
