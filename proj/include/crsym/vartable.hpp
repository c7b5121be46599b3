#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ring.hpp"

namespace crsym {

/// Variable layout of a CR model in C^{n+k}: z_1..z_n of weight 1, their
/// conjugates bz_1..bz_n, then w_1..w_k of weights l_1 <= ... <= l_k and
/// conjugates bw_1..bw_k. Real parameters (weight 0) live in a separate
/// single-block ring shared by all coefficients.
class VarTable {
public:
    VarTable(size_t cr_dim, std::vector<int> w_weights, std::vector<std::string> parameters)
        : n_(cr_dim), k_(w_weights.size()), weights_w_(std::move(w_weights)) {
        if (n_ == 0) throw std::invalid_argument("CR dimension must be positive");
        for (size_t l = 0; l < k_; ++l) {
            if (weights_w_[l] <= 1) throw std::invalid_argument("w weights must exceed 1");
            if (l > 0 && weights_w_[l] < weights_w_[l - 1])
                throw std::invalid_argument("w weights must be nondecreasing");
        }
        names_.reserve(2 * (n_ + k_));
        for (size_t j = 0; j < n_; ++j) names_.push_back("z" + std::to_string(j + 1));
        for (size_t j = 0; j < n_; ++j) names_.push_back("bz" + std::to_string(j + 1));
        for (size_t l = 0; l < k_; ++l) names_.push_back("w" + std::to_string(l + 1));
        for (size_t l = 0; l < k_; ++l) names_.push_back("bw" + std::to_string(l + 1));
        params_ = make_ring(std::move(parameters));
    }

    size_t n() const { return n_; }
    size_t k() const { return k_; }
    size_t var_count() const { return 2 * (n_ + k_); }
    const std::vector<std::string>& names() const { return names_; }
    const RingPtr& params() const { return params_; }

    // index layout: [0,n) z, [n,2n) bz, [2n,2n+k) w, [2n+k,2n+2k) bw
    size_t z_index(size_t j) const { return j; }
    size_t bz_index(size_t j) const { return n_ + j; }
    size_t w_index(size_t l) const { return 2 * n_ + l; }
    size_t bw_index(size_t l) const { return 2 * n_ + k_ + l; }

    bool is_barred(size_t idx) const {
        return (idx >= n_ && idx < 2 * n_) || idx >= 2 * n_ + k_;
    }
    bool is_w_kind(size_t idx) const { return idx >= 2 * n_; }

    /// Index of the conjugate partner (involution).
    size_t conj_index(size_t idx) const {
        if (idx < n_) return idx + n_;
        if (idx < 2 * n_) return idx - n_;
        if (idx < 2 * n_ + k_) return idx + k_;
        return idx - k_;
    }

    int weight_of(size_t idx) const {
        if (idx < 2 * n_) return 1;
        if (idx < 2 * n_ + k_) return weights_w_[idx - 2 * n_];
        return weights_w_[idx - 2 * n_ - k_];
    }
    int w_weight(size_t l) const { return weights_w_[l]; }
    int max_w_weight() const { return weights_w_.empty() ? 1 : weights_w_.back(); }

    int weighted_degree(const Mono& m) const {
        int d = 0;
        for (size_t i = 0; i < m.size(); ++i) d += static_cast<int>(m[i]) * weight_of(i);
        return d;
    }

    const std::string& name(size_t idx) const { return names_[idx]; }
    int index_of(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

private:
    size_t n_, k_;
    std::vector<int> weights_w_;
    std::vector<std::string> names_;
    RingPtr params_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline VarTablePtr make_vartable(size_t cr_dim, std::vector<int> w_weights,
                                 std::vector<std::string> parameters = {}) {
    return std::make_shared<VarTable>(cr_dim, std::move(w_weights), std::move(parameters));
}

}  // namespace crsym
