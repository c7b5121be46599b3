#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <crsym/liealg.hpp>

using namespace crsym;

namespace {

CRModelPtr load(const std::string& name) {
    return model_from_file(std::string(CRSYM_MODELS_DIR) + "/" + name);
}

CRPoly P(const VarTablePtr& t, const std::string& s) { return parse_crpoly(s, t); }

VectorField field(const VarTablePtr& t, const std::vector<std::string>& coeffs) {
    VectorField f = VectorField::zero(t);
    for (size_t i = 0; i < coeffs.size(); ++i) f.coeffs[i] = P(t, coeffs[i]);
    return f;
}

// the (1,3) basis of Example (1,3), X3..X5 in the d_w normalization
std::vector<VectorField> cubic_basis(const VarTablePtr& t) {
    return {
        field(t, {"1", "2*I*z1", "2*I*z1^2+4*w1", "2*z1^2"}),            // X1
        field(t, {"I", "2*z1", "2*z1^2", "-2*I*z1^2+4*w1"}),             // X2
        field(t, {"0", "1", "0", "0"}),                                  // X3
        field(t, {"0", "0", "1", "0"}),                                  // X4
        field(t, {"0", "0", "0", "1"}),                                  // X5
        field(t, {"z1", "2*w1", "3*w2", "3*w3"}),                        // X6
        field(t, {"I*z1", "0", "-w3", "w2"}),                            // X7
    };
}

BranchView empty_view(const CRModelPtr& m) {
    return BranchView{m->table()->params(), {}, {}};
}

bool equal_fields(const VectorField& a, const VectorField& b) {
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        if (a.coeffs[i] != b.coeffs[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("lie bracket basics") {
    auto m = load("cubic13.json");
    auto t = m->table();
    // [d_z, z d_z] = d_z
    auto dz = field(t, {"1", "0", "0", "0"});
    auto zdz = field(t, {"z1", "0", "0", "0"});
    CHECK(equal_fields(lie_bracket(dz, zdz), dz));

    auto X = cubic_basis(t);
    // X3 := [X1, X2] = 4 d_w1
    CHECK(equal_fields(lie_bracket(X[0], X[1]), field(t, {"0", "4", "0", "0"})));
    // with X3 = d_w1: [X1, X3] = -4 d_w2
    CHECK(equal_fields(lie_bracket(X[0], X[2]), field(t, {"0", "0", "-4", "0"})));

    // bilinearity and antisymmetry on random members of the basis span
    std::mt19937_64 rng(15);
    for (int iter = 0; iter < 40; ++iter) {
        auto pick = [&] {
            VectorField f = VectorField::zero(t);
            for (int j = 0; j < 3; ++j) {
                auto g = X[rng() % X.size()].scaled(
                    GaussRational(rat((long)(rng() % 7) - 3)));
                f = f + g;
            }
            return f;
        };
        VectorField a = pick(), b = pick();
        CHECK(equal_fields(lie_bracket(a, b), lie_bracket(b, a).scaled(GaussRational(rat(-1)))));
    }
}

TEST_CASE("field weights") {
    auto m = load("cubic13.json");
    auto t = m->table();
    CHECK(field_weight(field(t, {"0", "0", "0", "1"})) == -3);  // d_w3, [w3] = 3
    CHECK(field_weight(field(t, {"z1", "2*w1", "3*w2", "3*w3"})) == 0);
    CHECK(field_weight(field(t, {"1", "w1", "0", "0"})) == std::nullopt);
    CHECK_THROWS_AS(field_weight(VectorField::zero(t)), std::domain_error);
}

TEST_CASE("verify_tangency") {
    auto m = load("cubic13.json");
    auto t = m->table();
    auto X = cubic_basis(t);
    for (const auto& x : X) CHECK(verify_tangency(m, x));
    CHECK_FALSE(verify_tangency(m, field(t, {"1", "0", "0", "0"})));  // d_z alone
    CHECK(verify_tangency(m, VectorField::zero(t)));
}

TEST_CASE("compute_component golden values") {
    auto cubic = load("cubic13.json");
    CHECK(compute_component(cubic, -1).generators[0].size() == 2);
    CHECK(compute_component(cubic, 1).generators[0].empty());

    auto M = load("newmodel.json");
    auto res = compute_component(M, 0);
    REQUIRE(res.generators[0].size() == 1);
    auto t = M->table();
    CHECK(equal_fields(res.generators[0][0], field(t, {"z1", "2*w1", "3*w2", "4*w3"})));
}

TEST_CASE("negative components via brackets") {
    auto m = load("cubic13.json");
    auto t = m->table();
    auto view = empty_view(m);
    auto X = cubic_basis(t);
    auto neg = negative_via_brackets({X[0], X[1]}, 3, view);
    REQUIRE(neg.count(-2) == 1);
    REQUIRE(neg[-2].size() == 1);
    CHECK(equal_fields(neg[-2][0], field(t, {"0", "4", "0", "0"})));
    REQUIRE(neg[-3].size() == 2);
    CHECK(equal_fields(neg[-3][0], field(t, {"0", "0", "-16", "0"})));  // [X1,[X1,X2]]
    CHECK(equal_fields(neg[-3][1], field(t, {"0", "0", "0", "-16"})));  // [X2,[X1,X2]]

    // commuting g_{-1}: everything below is empty
    auto d2 = field(t, {"0", "1", "0", "0"}), d3 = field(t, {"0", "0", "1", "0"});
    auto neg2 = negative_via_brackets({d2, d3}, 3, view);
    CHECK(neg2[-2].empty());
    CHECK(neg2[-3].empty());
}

TEST_CASE("check_fundamental") {
    auto m = load("cubic13.json");
    auto t = m->table();
    auto view = empty_view(m);
    auto X = cubic_basis(t);
    std::map<int, std::vector<VectorField>> neg = {
        {-1, {X[0], X[1]}}, {-2, {X[2]}}, {-3, {X[3], X[4]}}};
    CHECK(check_fundamental(neg, 3, view));

    // g_{-1} empty but g_{-2} inhabited: not fundamental
    std::map<int, std::vector<VectorField>> bad = {{-2, {X[2]}}};
    CHECK_FALSE(check_fundamental(bad, 3, view));

    auto M = load("newmodel.json");
    auto algs = compute_full_algebra(M);
    REQUIRE(algs.size() == 1);
    CHECK(algs[0].fundamental);
}

TEST_CASE("(1,3) full algebra") {
    auto m = load("cubic13.json");
    auto algs = compute_full_algebra(m);
    REQUIRE(algs.size() == 1);
    const BranchAlgebra& g = algs[0];
    CHECK(g.dim() == 7);
    CHECK(g.dim_at(-3) == 2);
    CHECK(g.dim_at(-2) == 1);
    CHECK(g.dim_at(-1) == 2);
    CHECK(g.dim_at(0) == 2);
    CHECK(g.rho == 3);
    CHECK(g.varrho == 0);
    CHECK(g.rigid);
    CHECK(g.fundamental);

    // computed components span the published basis
    auto view = empty_view(m);
    auto X = cubic_basis(m->table());
    CHECK(spans_equal(g.components.at(-1), {X[0], X[1]}, view));
    CHECK(spans_equal(g.components.at(-2), {X[2]}, view));
    CHECK(spans_equal(g.components.at(-3), {X[3], X[4]}, view));
    CHECK(spans_equal(g.components.at(0), {X[5], X[6]}, view));
}

TEST_CASE("section-5 model full algebra") {
    auto M = load("newmodel.json");
    auto algs = compute_full_algebra(M);
    REQUIRE(algs.size() == 1);
    const BranchAlgebra& g = algs[0];
    CHECK(g.dim() == 6);
    CHECK(g.dim_at(-4) == 1);
    CHECK(g.dim_at(-3) == 1);
    CHECK(g.dim_at(-2) == 1);
    CHECK(g.dim_at(-1) == 2);
    CHECK(g.dim_at(0) == 1);
    CHECK(g.rho == 4);
    CHECK(g.varrho == 0);
    CHECK(g.rigid);
    CHECK(g.fundamental);
    auto t = M->table();
    CHECK(in_span(field(t, {"z1", "2*w1", "3*w2", "4*w3"}), g.components.at(0), empty_view(M)));
}

TEST_CASE("hypersurface M1: the su(2,1)-graded picture") {
    auto m = load("m1.json");
    auto algs = compute_full_algebra(m);
    REQUIRE(algs.size() == 1);
    const BranchAlgebra& g = algs[0];
    CHECK(g.dim() == 8);
    CHECK(g.rho == 2);
    CHECK(g.varrho == 2);
    CHECK_FALSE(g.rigid);
    CHECK(g.dim_at(-2) == 1);
    CHECK(g.dim_at(-1) == 2);
    CHECK(g.dim_at(0) == 2);
    CHECK(g.dim_at(1) == 2);
    CHECK(g.dim_at(2) == 1);
}

TEST_CASE("n = 2 sphere gives su(3,1)") {
    auto m = load("sphere2.json");
    auto algs = compute_full_algebra(m);
    REQUIRE(algs.size() == 1);
    const BranchAlgebra& g = algs[0];
    CHECK(g.dim() == 15);
    CHECK(g.dim_at(-2) == 1);
    CHECK(g.dim_at(-1) == 4);
    CHECK(g.dim_at(0) == 5);
    CHECK(g.dim_at(1) == 4);
    CHECK(g.dim_at(2) == 1);
}

TEST_CASE("structure constants: antisymmetry source, Jacobi, grading closure") {
    for (const char* name : {"cubic13.json", "newmodel.json", "m1.json"}) {
        auto m = load(name);
        auto algs = compute_full_algebra(m);
        REQUIRE(algs.size() == 1);
        const BranchAlgebra& g = algs[0];
        auto view = empty_view(m);

        std::vector<VectorField> basis;
        std::vector<int> weight;
        for (const auto& [t, gens] : g.components)
            for (const auto& x : gens) {
                basis.push_back(x);
                weight.push_back(t);
            }

        // grading closure: [g_s, g_t] inside span(g_{s+t}) (or zero)
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j) {
                VectorField b = lie_bracket(basis[i], basis[j]);
                if (b.is_zero()) continue;
                int tw = weight[i] + weight[j];
                auto it = g.components.find(tw);
                REQUIRE(it != g.components.end());
                CHECK(in_span(b, it->second, view));
            }

        // Jacobi identity, symbolically
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j)
                for (size_t k = j + 1; k < basis.size(); ++k) {
                    VectorField s = lie_bracket(basis[i], lie_bracket(basis[j], basis[k])) +
                                    lie_bracket(basis[j], lie_bracket(basis[k], basis[i])) +
                                    lie_bracket(basis[k], lie_bracket(basis[i], basis[j]));
                    CHECK(s.is_zero());
                }

        // the recorded table reproduces the brackets exactly
        auto gen_at = [&](size_t idx) { return basis[idx]; };
        for (const auto& [key, entries] : g.structure) {
            VectorField lhs = lie_bracket(gen_at(key.first), gen_at(key.second));
            VectorField rhs = VectorField::zero(m->table());
            for (const auto& e : entries) {
                REQUIRE(e.den.is_constant());  // no parameters here
                Rational c = e.num.constant_value() / e.den.constant_value();
                rhs = rhs + gen_at(e.m).scaled(GaussRational(c));
            }
            CHECK(equal_fields(lhs, rhs));
        }
    }
}

TEST_CASE("degree bounds from the gradation") {
    // every weight-t generator has coefficient weights [z_j]+t / [w_l]+t
    for (const char* name : {"cubic13.json", "m1.json", "newmodel.json"}) {
        auto m = load(name);
        auto algs = compute_full_algebra(m);
        for (const auto& g : algs)
            for (const auto& [t, gens] : g.components)
                for (const auto& x : gens)
                    for (size_t s = 0; s < x.coeffs.size(); ++s) {
                        if (x.coeffs[s].is_zero()) continue;
                        auto d = x.coeffs[s].weighted_degree();
                        REQUIRE(d.has_value());
                        CHECK(*d == m->table()->weight_of(x.slot_var(s)) + t);
                    }
    }
}

TEST_CASE("cumulative ansatz computes g^{(t)}") {
    auto m = load("cubic13.json");
    // g^{(0)} is the whole 7-dimensional algebra (the model is rigid)
    auto res = compute_component(m, 0, {}, {}, /*cumulative=*/true);
    REQUIRE(res.tree.branches.size() == 1);
    CHECK(res.tree.branches[0].nullity == 7);
    // decompose generators by weight; components must match the full run
    std::map<int, std::vector<VectorField>> split;
    for (const auto& g : res.generators[0])
        for (auto& [t, part] : decompose_by_weight(g)) split[t].push_back(part);
    auto view = empty_view(m);
    auto algs = compute_full_algebra(m);
    for (const auto& [t, gens] : algs[0].components) {
        REQUIRE(split.count(t) == 1);
        CHECK(spans_equal(span_basis(split[t], view), gens, view));
    }
}

TEST_CASE("termination cap error without transitivity rule") {
    auto t = make_vartable(1, {2});
    auto m = std::make_shared<CRModel>(
        t, std::vector<CRPoly>{parse_crpoly("2*I*z1*bz1", t)}, /*transitive=*/true);
    AlgebraOptions opts;
    opts.safety_cap = 1;  // too small to see g_3 = 0 for the sphere
    CHECK_THROWS_WITH_AS(compute_full_algebra(m, opts),
                         "termination not reached; supply --max-weight or verify transitivity",
                         std::runtime_error);

    // an explicit max-weight override always returns
    opts.max_weight = 1;
    auto algs = compute_full_algebra(m, opts);
    REQUIRE(algs.size() == 1);
    CHECK_FALSE(algs[0].terminated);
    CHECK(algs[0].dim_at(1) == 2);
}
