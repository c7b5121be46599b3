#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <crsym/liealg.hpp>

using namespace crsym;

namespace {

CRModelPtr load(const std::string& name) {
    return model_from_file(std::string(CRSYM_MODELS_DIR) + "/" + name);
}

// builds a LinearSystem directly from dense Q[params] rows
LinearSystem make_system(const RingPtr& params, size_t unknowns,
                         const std::vector<std::vector<QPoly>>& dense) {
    LinearSystem sys;
    sys.complex_unknowns = 0;
    sys.real_unknowns = unknowns;
    for (size_t r = 0; r < dense.size(); ++r) {
        RealRow row;
        row.eq_index = 0;
        row.imag_part = false;
        for (size_t c = 0; c < unknowns; ++c)
            if (!dense[r][c].is_zero()) row.entries.emplace_back(c, dense[r][c]);
        if (!row.entries.empty()) sys.rows.push_back(std::move(row));
    }
    return sys;
}

// independent dense elimination oracle over Q (row-reduced nullspace)
std::vector<std::vector<Rational>> oracle_nullspace(std::vector<std::vector<Rational>> m,
                                                    size_t ncols) {
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
            for (size_t c = 0; c < ncols; ++c) m[r][c] -= f * m[prow][c];
        }
        pivot_of_col[col] = static_cast<int>(prow);
        ++prow;
    }
    std::vector<std::vector<Rational>> basis;
    for (size_t f = 0; f < ncols; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        std::vector<Rational> v(ncols, Rational(0));
        v[f] = 1;
        for (size_t c = 0; c < ncols; ++c)
            if (pivot_of_col[c] >= 0) v[c] = -m[pivot_of_col[c]][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Rational> eval_vector(const std::vector<QPoly>& v,
                                  const std::vector<Rational>& pt) {
    std::vector<Rational> out;
    for (const auto& p : v) out.push_back(p.eval(pt));
    return out;
}

}  // namespace

TEST_CASE("nullspace_rational on the spec's examples") {
    auto params = make_ring({});
    // {x - y = 0}
    auto one = QPoly::constant(params, Rational(1));
    auto sys = make_system(params, 2, {{one, -one}});
    auto basis = nullspace_rational(sys);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == std::vector<Rational>{Rational(1), Rational(1)});

    // empty system, 3 unknowns
    auto sys2 = make_system(params, 3, {});
    auto basis2 = nullspace_rational(sys2);
    REQUIRE(basis2.size() == 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) CHECK(basis2[i][j] == Rational(i == j ? 1 : 0));

    // parameters present -> usage error
    auto pr = make_ring({"a"});
    auto sys3 = make_system(pr, 1, {{QPoly::variable(pr, 0)}});
    CHECK_THROWS_AS(nullspace_rational(sys3), std::invalid_argument);
}

TEST_CASE("(1,3) Sys^{-1}: single branch, nullity 2, the paper's solution") {
    auto m = load("cubic13.json");
    auto res = compute_component(m, -1);
    REQUIRE(res.tree.branches.size() == 1);
    const Branch& br = res.tree.branches[0];
    CHECK(br.null_conditions.empty());
    CHECK(br.nonnull_conditions.empty());
    CHECK(br.nullity == 2);
    CHECK(br.rank == 10);  // 12 real unknowns, 2 free

    // paper solution: p = a + i b, q = s = 2(b + i a), r = 4a, t = 4b,
    // u = 2(a - i b). Unknowns: c1=p, c2=q, c3=s, c4=r, c5=u, c6=t.
    // free one-hot order follows declaration order: Re(p) (=a), Im(p) (=b).
    REQUIRE(res.generators.size() == 1);
    const auto& gens = res.generators[0];
    REQUIRE(gens.size() == 2);
    auto t = m->table();
    auto expect_a = parse_crpoly("1", t);  // Z for a=1: p=1
    CHECK(gens[0].coeffs[0] == expect_a);
    CHECK(gens[0].coeffs[1] == parse_crpoly("2*I*z1", t));
    CHECK(gens[0].coeffs[2] == parse_crpoly("2*I*z1^2+4*w1", t));
    CHECK(gens[0].coeffs[3] == parse_crpoly("2*z1^2", t));
    CHECK(gens[1].coeffs[0] == parse_crpoly("I", t));
    CHECK(gens[1].coeffs[1] == parse_crpoly("2*z1", t));
    CHECK(gens[1].coeffs[2] == parse_crpoly("2*z1^2", t));
    CHECK(gens[1].coeffs[3] == parse_crpoly("-2*I*z1^2+4*w1", t));
}

TEST_CASE("(1,3) Sys^0 nullity 2 and Sys^1 only trivial") {
    auto m = load("cubic13.json");
    auto res0 = compute_component(m, 0);
    REQUIRE(res0.tree.branches.size() == 1);
    CHECK(res0.tree.branches[0].nullity == 2);
    auto t = m->table();
    const auto& gens = res0.generators[0];
    REQUIRE(gens.size() == 2);
    // the rotation i z d_z - w3 d_w2 + w2 d_w3 and the dilation
    // z d_z + 2w1 d_w1 + 3w2 d_w2 + 3w3 d_w3, in free-column order
    CHECK(gens[0].coeffs[0] == parse_crpoly("I*z1", t));
    CHECK(gens[0].coeffs[1].is_zero());
    CHECK(gens[0].coeffs[2] == parse_crpoly("-w3", t));
    CHECK(gens[0].coeffs[3] == parse_crpoly("w2", t));
    CHECK(gens[1].coeffs[0] == parse_crpoly("z1", t));
    CHECK(gens[1].coeffs[1] == parse_crpoly("2*w1", t));
    CHECK(gens[1].coeffs[2] == parse_crpoly("3*w2", t));
    CHECK(gens[1].coeffs[3] == parse_crpoly("3*w3", t));

    auto res1 = compute_component(m, 1);
    REQUIRE(res1.tree.branches.size() == 1);
    CHECK(res1.tree.branches[0].nullity == 0);
    CHECK(res1.generators[0].empty());
}

TEST_CASE("parametric split: {a x = 0}") {
    auto params = make_ring({"a"});
    auto sys = make_system(params, 1, {{QPoly::variable(params, 0)}});
    auto tree = solve_parametric_linear(sys, params);
    REQUIRE(tree.branches.size() == 2);
    // null child first
    REQUIRE(tree.branches[0].null_conditions.size() == 1);
    CHECK(tree.branches[0].null_conditions[0] == QPoly::variable(params, 0));
    CHECK(tree.branches[0].nonnull_conditions.empty());
    CHECK(tree.branches[0].nullity == 1);
    CHECK(tree.branches[1].null_conditions.empty());
    REQUIRE(tree.branches[1].nonnull_conditions.size() == 1);
    CHECK(tree.branches[1].nullity == 0);
}

TEST_CASE("solver matches the brute-force oracle on random systems") {
    auto params = make_ring({});
    std::mt19937_64 rng(20240810);
    for (int iter = 0; iter < 500; ++iter) {
        size_t ncols = 1 + rng() % 12, nrows = rng() % 10;
        std::vector<std::vector<Rational>> dense(nrows, std::vector<Rational>(ncols, Rational(0)));
        std::vector<std::vector<QPoly>> qdense(nrows, std::vector<QPoly>(ncols, QPoly(params)));
        for (size_t r = 0; r < nrows; ++r)
            for (size_t c = 0; c < ncols; ++c) {
                long v = static_cast<long>(rng() % 11) - 5;
                if (rng() % 2) v = 0;
                dense[r][c] = rat(v);
                qdense[r][c] = QPoly::constant(params, rat(v));
            }
        auto expected = oracle_nullspace(dense, ncols);
        auto got = nullspace_rational(make_system(params, ncols, qdense));
        REQUIRE(got.size() == expected.size());
        CHECK(got == expected);

        // the parametric solver agrees on parameter-free input
        auto tree = solve_parametric_linear(make_system(params, ncols, qdense), params);
        REQUIRE(tree.branches.size() == 1);
        CHECK(tree.branches[0].nullity == expected.size());
        for (size_t i = 0; i < expected.size(); ++i) {
            // same vectors up to positive scaling (content-normalized)
            const auto& v = tree.branches[0].basis[i];
            size_t hot = tree.branches[0].free_unknowns[i];
            REQUIRE(!v[hot].is_zero());
            Rational scale = v[hot].constant_value();
            for (size_t c = 0; c < ncols; ++c)
                CHECK(v[c].constant_value() == scale * expected[i][c]);
        }
    }
}

TEST_CASE("branch soundness and covering by sampling") {
    // parametric system exercising splits: rows over Q[a,b]
    auto params = make_ring({"a", "b"});
    auto A = QPoly::variable(params, 0), B = QPoly::variable(params, 1);
    auto one = QPoly::constant(params, Rational(1));
    auto zero = QPoly(params);
    // x + a y = 0;  b y + z = 0;  a b z - w... keep 4 unknowns
    std::vector<std::vector<QPoly>> rows = {
        {one, A, zero, zero},
        {zero, B, one, zero},
        {zero, zero, A * B, one},
    };
    auto sys = make_system(params, 4, rows);
    auto tree = solve_parametric_linear(sys, params);
    CHECK(tree.branches.size() >= 1);

    std::mt19937_64 rng(77);
    int covered_points = 0;
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<Rational> pt = {rat((long)(rng() % 9) - 4), rat((long)(rng() % 9) - 4)};
        int holders = 0;
        for (const auto& br : tree.branches) {
            bool ok = true;
            for (const auto& e : br.null_conditions) ok = ok && is_zero(e.eval(pt));
            for (const auto& n : br.nonnull_conditions) ok = ok && !is_zero(n.eval(pt));
            if (!ok) continue;
            ++holders;
            // specialize: basis must span the exact nullspace at pt
            std::vector<std::vector<Rational>> dense;
            for (const auto& row : rows) {
                std::vector<Rational> r;
                for (const auto& p : row) r.push_back(p.eval(pt));
                dense.push_back(std::move(r));
            }
            auto expected = oracle_nullspace(dense, 4);
            CHECK(br.nullity == expected.size());
            // each specialized basis vector solves the specialized system
            for (const auto& vec : br.basis) {
                auto v = eval_vector(vec, pt);
                for (const auto& row : dense) {
                    Rational acc(0);
                    for (size_t c = 0; c < 4; ++c) acc += row[c] * v[c];
                    CHECK(is_zero(acc));
                }
            }
            // and is nonzero (free one-hot scaled by a nonzero factor)
            for (size_t i = 0; i < br.basis.size(); ++i) {
                auto v = eval_vector(br.basis[i], pt);
                bool nonzero = false;
                for (const auto& x : v) nonzero = nonzero || !is_zero(x);
                CHECK(nonzero);
            }
        }
        // branches partition the parameter space: exactly one holds
        CHECK(holders == 1);
        covered_points += holders > 0;
    }
    CHECK(covered_points == 100);
}

TEST_CASE("deterministic case trees") {
    auto params = make_ring({"a", "b"});
    auto A = QPoly::variable(params, 0), B = QPoly::variable(params, 1);
    auto one = QPoly::constant(params, Rational(1));
    std::vector<std::vector<QPoly>> rows = {{A, B}, {B, one}};
    auto sys = make_system(params, 2, rows);
    auto t1 = solve_parametric_linear(sys, params);
    auto t2 = solve_parametric_linear(sys, params);
    REQUIRE(t1.branches.size() == t2.branches.size());
    for (size_t i = 0; i < t1.branches.size(); ++i) {
        CHECK(t1.branches[i].null_conditions == t2.branches[i].null_conditions);
        CHECK(t1.branches[i].nonnull_conditions == t2.branches[i].nonnull_conditions);
        CHECK(t1.branches[i].basis == t2.branches[i].basis);
    }
    CHECK(t1.split_log == t2.split_log);
}

TEST_CASE("basis vectors satisfy every row modulo the null ideal") {
    auto m = load("m8.json");
    for (int t = -2; t <= 0; ++t) {
        auto res = compute_component(m, t);
        for (const auto& br : res.tree.branches) {
            for (const auto& vec : br.basis) {
                for (const auto& row : res.system.rows) {
                    QPoly acc(m->table()->params());
                    for (const auto& [u, p] : row.entries) acc += p * vec[u];
                    CHECK(normal_form(acc, br.null_basis).is_zero());
                }
            }
        }
    }
}
