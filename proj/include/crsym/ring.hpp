#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace crsym {

/// Exponent vector. All monomial containers in a ring share one length.
using Mono = std::vector<uint32_t>;

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Mono mono_div(const Mono& b, const Mono& a) {  // b / a, assumes a | b
    Mono r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline bool mono_is_one(const Mono& a) {
    for (auto e : a)
        if (e) return false;
    return true;
}

inline uint64_t mono_total_degree(const Mono& a, size_t lo, size_t hi) {
    uint64_t d = 0;
    for (size_t i = lo; i < hi; ++i) d += a[i];
    return d;
}

/// Variable ring for plain commutative polynomials over Q.
/// Supports an optional two-block elimination order (vars [0,block_split)
/// dominate the rest); grevlex within each block. block_split == 0 means a
/// single block.
struct Ring {
    std::vector<std::string> names;
    size_t block_split = 0;

    size_t size() const { return names.size(); }

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    }

    /// grevlex within [lo,hi): higher total degree wins; ties broken by the
    /// LAST variable with differing exponent, smaller exponent there wins.
    static int cmp_block(const Mono& a, const Mono& b, size_t lo, size_t hi) {
        uint64_t da = mono_total_degree(a, lo, hi), db = mono_total_degree(b, lo, hi);
        if (da != db) return da < db ? -1 : 1;
        for (size_t i = hi; i-- > lo;) {
            if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
        }
        return 0;
    }

    /// Total order: compares the leading block first, then the tail block.
    int cmp(const Mono& a, const Mono& b) const {
        size_t n = size();
        size_t split = block_split == 0 ? n : block_split;
        if (int c = cmp_block(a, b, 0, split)) return c;
        if (split < n) return cmp_block(a, b, split, n);
        return 0;
    }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(std::vector<std::string> names, size_t block_split = 0) {
    auto r = std::make_shared<Ring>();
    r->names = std::move(names);
    r->block_split = block_split;
    return r;
}

/// Descending comparator for term maps (leading monomial first).
struct MonoGreater {
    const Ring* ring = nullptr;
    bool operator()(const Mono& a, const Mono& b) const { return ring->cmp(a, b) > 0; }
};

}  // namespace crsym
