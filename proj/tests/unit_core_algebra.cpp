#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <crsym/crpoly.hpp>
#include <crsym/expr.hpp>

using namespace crsym;

namespace {

// (1,3) cubic layout: z of weight 1, w1 of weight 2, w2 = w3 of weight 3
VarTablePtr cubic_table(std::vector<std::string> params = {}) {
    return make_vartable(1, {2, 3, 3}, std::move(params));
}

CRPoly P(const VarTablePtr& t, const std::string& s) { return parse_crpoly(s, t); }

// brute-force oracle: every exponent vector with entries <= weight
std::vector<Mono> enumerate_oracle(const VarTablePtr& t, int weight,
                                   const std::vector<size_t>& allowed) {
    std::vector<Mono> out;
    if (weight < 0) return out;
    Mono m(t->var_count(), 0);
    auto rec = [&](auto&& self, size_t pos) -> void {
        if (pos == allowed.size()) {
            if (t->weighted_degree(m) == weight) out.push_back(m);
            return;
        }
        for (int e = 0; e <= weight; ++e) {
            m[allowed[pos]] = static_cast<uint32_t>(e);
            self(self, pos + 1);
        }
        m[allowed[pos]] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), CRMonoGreater{t.get()});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CRPoly random_sparse_poly(const VarTablePtr& t, std::mt19937_64& rng, int max_terms = 5,
                          int max_exp = 3) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> expd(0, max_exp);
    std::uniform_int_distribution<long> coeff(-6, 6);
    CRPoly p(t);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Mono m(t->var_count(), 0);
        for (size_t v = 0; v < t->var_count(); ++v)
            if (rng() % 3 == 0) m[v] = static_cast<uint32_t>(expd(rng));
        GaussRational g(rat(coeff(rng)), rat(coeff(rng)));
        p.add_term(m, CoeffScalar::constant(t->params(), g));
    }
    return p;
}

}  // namespace

TEST_CASE("coefficient conjugation") {
    auto t = cubic_table({"lambda", "a"});
    auto params = t->params();

    auto two_i = CoeffScalar::constant(params, GaussRational(rat(0), rat(2)));
    CHECK(two_i.conj() == CoeffScalar::constant(params, GaussRational(rat(0), rat(-2))));

    // real parameters are fixed by conjugation
    auto lam = CoeffScalar::parameter(params, 0);
    CoeffScalar three_lam = lam;
    three_lam.scale(GaussRational(rat(3)));
    CHECK(three_lam.conj() == three_lam);

    // (1+i)*a^2 -> (1-i)*a^2 componentwise
    auto a = CoeffScalar::parameter(params, 1);
    CoeffScalar lhs = a * a;
    lhs.scale(GaussRational(rat(1), rat(1)));
    CoeffScalar rhs = a * a;
    rhs.scale(GaussRational(rat(1), rat(-1)));
    CHECK(lhs.conj() == rhs);
}

TEST_CASE("polynomial multiplication") {
    auto t = cubic_table();
    CHECK(P(t, "z1") * P(t, "bz1") == P(t, "z1*bz1"));
    CHECK(P(t, "z1+w1") * P(t, "z1-w1") == P(t, "z1^2-w1^2"));
    CHECK(P(t, "2*I*z1*bz1") * P(t, "2*I*z1*bz1") == P(t, "-4*z1^2*bz1^2"));

    auto s = make_vartable(1, {2});
    CHECK_THROWS_AS(P(t, "z1") * P(s, "z1"), std::invalid_argument);
}

TEST_CASE("polynomial conjugation") {
    auto t = cubic_table({"c"});
    CHECK(P(t, "2*I*z1^2*bz1*w1").conj() == P(t, "-2*I*bz1^2*z1*bw1"));
    CHECK(P(t, "z1*bz1").conj() == P(t, "z1*bz1"));
    // model M7 shape: real parameter survives, i flips
    CHECK(P(t, "c*I*(w1+bw1)*z1^2*bz1").conj() == P(t, "-c*I*(bw1+w1)*bz1^2*z1"));
}

TEST_CASE("substitution") {
    auto t = cubic_table();
    auto val = P(t, "w1-2*I*z1*bz1");
    CHECK(P(t, "bw1^2").substitute(t->bw_index(0), val) ==
          P(t, "w1^2-4*I*z1*bz1*w1-4*z1^2*bz1^2"));
    CHECK(P(t, "z1^3").substitute(t->bw_index(0), val) == P(t, "z1^3"));
    CHECK(P(t, "bw2").substitute(t->bw_index(1), P(t, "w2-2*I*(z1^2*bz1+bz1^2*z1)")) ==
          P(t, "w2-2*I*z1^2*bz1-2*I*bz1^2*z1"));
}

TEST_CASE("weighted degree") {
    auto t = cubic_table({"lambda"});
    CHECK(P(t, "z1^2*w1").weighted_degree() == 4);
    CHECK(P(t, "lambda*z1*w2").weighted_degree() == 4);  // parameters weigh 0
    CHECK(P(t, "z1+w1").weighted_degree() == std::nullopt);
    CHECK_THROWS_AS(CRPoly::zero(t).weighted_degree(), std::domain_error);
}

TEST_CASE("weighted monomial enumeration") {
    auto t = cubic_table();
    auto allowed = unbarred_indices(t);  // z, w1, w2, w3 of weights 1,2,3,3

    auto got = enumerate_weighted_monomials(t, 3, allowed);
    REQUIRE(got.size() == 4);  // z^3, z w1, w2, w3
    std::vector<CRPoly> polys;
    for (const auto& m : got)
        polys.push_back(CRPoly::term(t, m, CoeffScalar::constant(t->params(),
                                                                 GaussRational(rat(1)))));
    CHECK(polys[0] + polys[1] + polys[2] + polys[3] == P(t, "z1^3+z1*w1+w2+w3"));

    auto unit = enumerate_weighted_monomials(t, 0, allowed);
    REQUIRE(unit.size() == 1);
    CHECK(mono_is_one(unit[0]));

    auto t2 = make_vartable(1, {2});
    auto got2 = enumerate_weighted_monomials(t2, 4, unbarred_indices(t2));
    CHECK(got2 == enumerate_oracle(t2, 4, unbarred_indices(t2)));
    CHECK(got2.size() == 3);  // z^4, z^2 w1, w1^2

    CHECK(enumerate_weighted_monomials(t, -2, allowed).empty());

    // brute-force agreement across tables and weights
    for (int w = 0; w <= 12; ++w) {
        CHECK(enumerate_weighted_monomials(t, w, allowed) == enumerate_oracle(t, w, allowed));
        CHECK(enumerate_weighted_monomials(t2, w, unbarred_indices(t2)) ==
              enumerate_oracle(t2, w, unbarred_indices(t2)));
    }
    auto t3 = make_vartable(2, {2, 4});
    for (int w = 0; w <= 9; ++w)
        CHECK(enumerate_weighted_monomials(t3, w, unbarred_indices(t3)) ==
              enumerate_oracle(t3, w, unbarred_indices(t3)));

    CHECK_THROWS_AS(enumerate_weighted_monomials(t, 2, {t->bz_index(0)}),
                    std::invalid_argument);
}

TEST_CASE("partial derivatives") {
    auto t = cubic_table();
    CHECK(P(t, "z1^2*bz1").partial_derivative(t->z_index(0)) == P(t, "2*z1*bz1"));
    CHECK(P(t, "z1^3").partial_derivative(t->w_index(0)).is_zero());
    CHECK(P(t, "2*I*z1*bz1*(z1+bz1)").partial_derivative(t->bz_index(0)) ==
          P(t, "2*I*z1^2+4*I*z1*bz1"));
}

TEST_CASE("conjugation is an involutive ring antihomomorphism") {
    auto t = cubic_table({"a"});
    std::mt19937_64 rng(20240811);
    auto i_const = CRPoly::constant(t, GaussRational::i_unit());
    for (int iter = 0; iter < 200; ++iter) {
        CRPoly p = random_sparse_poly(t, rng);
        CRPoly q = random_sparse_poly(t, rng);
        CHECK(p.conj().conj() == p);
        CHECK((p * q).conj() == p.conj() * q.conj());
        CHECK((p + q).conj() == p.conj() + q.conj());
        CHECK((i_const * p).conj() == -(i_const * p.conj()));
    }
}

TEST_CASE("homogeneous products add weights") {
    auto t = cubic_table();
    std::mt19937_64 rng(7);
    auto allowed_all = [&] {
        std::vector<size_t> v(t->var_count());
        for (size_t i = 0; i < v.size(); ++i) v[i] = i;
        return v;
    }();
    for (int iter = 0; iter < 100; ++iter) {
        // random homogeneous pieces of random weights
        int wp = 1 + static_cast<int>(rng() % 5), wq = 1 + static_cast<int>(rng() % 5);
        CRPoly p(t), q(t);
        Mono m(t->var_count(), 0);
        auto pick = [&](int weight, CRPoly& dst) {
            // greedy random monomial of the exact weight
            Mono mm(t->var_count(), 0);
            int rem = weight;
            while (rem > 0) {
                size_t v = allowed_all[rng() % allowed_all.size()];
                if (t->weight_of(v) <= rem) {
                    mm[v] += 1;
                    rem -= t->weight_of(v);
                }
            }
            dst.add_term(mm, CoeffScalar::constant(t->params(),
                                                   GaussRational(rat(1 + (long)(rng() % 5)))));
        };
        for (int i = 0; i < 3; ++i) pick(wp, p);
        for (int i = 0; i < 3; ++i) pick(wq, q);
        REQUIRE(p.weighted_degree() == wp);
        REQUIRE(q.weighted_degree() == wq);
        CRPoly prod = p * q;
        if (!prod.is_zero()) CHECK(prod.weighted_degree() == wp + wq);
    }
}

TEST_CASE("derivatives commute and obey the product rule") {
    auto t = cubic_table({"a"});
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 100; ++iter) {
        CRPoly p = random_sparse_poly(t, rng);
        CRPoly q = random_sparse_poly(t, rng);
        size_t x = rng() % t->var_count(), y = rng() % t->var_count();
        CHECK(p.partial_derivative(x).partial_derivative(y) ==
              p.partial_derivative(y).partial_derivative(x));
        CHECK((p * q).partial_derivative(x) ==
              p.partial_derivative(x) * q + p * q.partial_derivative(x));
    }
}

TEST_CASE("canonicalization is confluent under insertion order") {
    auto t = cubic_table({"a"});
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 50; ++iter) {
        CRPoly p = random_sparse_poly(t, rng, 8);
        std::vector<std::pair<Mono, CoeffScalar>> items(p.terms().begin(), p.terms().end());
        std::shuffle(items.begin(), items.end(), rng);
        CRPoly q(t);
        for (const auto& [m, c] : items) q.add_term(m, c);
        CHECK(p == q);
        CHECK(p.str() == q.str());
    }
}

TEST_CASE("parser reports positions") {
    auto t = cubic_table();
    CHECK_THROWS_AS(parse_crpoly("z1 + % w1", t), ParseError);
    try {
        parse_crpoly("z1 +\n qq1*w1", t);
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 2);
    }
}
