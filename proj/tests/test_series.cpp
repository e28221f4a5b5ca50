#include <set>

#include "doctest.h"
#include "gkz/series.hpp"
#include "gkz/slopes.hpp"

using namespace gkz;

namespace {

Q factorial(long m) {
    mpz_class f = 1;
    for (long i = 2; i <= m; ++i) f *= i;
    return Q(f);
}

// product c(c-1)...(c-k+1) for k >= 0, 1/((c+1)(c+2)...(c-k)) for k < 0
GQ falling(const GQ& c, long k) {
    GQ r(1);
    if (k >= 0) {
        for (long j = 0; j < k; ++j) r = r * (c - GQ(j));
    } else {
        for (long j = 1; j <= -k; ++j) r = r * (c + GQ(j));
        r = GQ(1) / r;
    }
    return r;
}

Exponent exp_k(const ConfigMatrix& A, const GVec& beta, Index sigma, IVec k) {
    return exponent_from_k(A.q(), beta, make_simplex(A, sigma), k);
}

void check_support(const QMat& A, const TruncatedSeries& f) {
    Index ns;
    for (int i = 0; i < f.size(); ++i)
        if (f.base[i].is_negative_integer()) ns.push_back(i);
    for (const auto& [u, c] : f.terms) {
        for (const auto& row : A) {
            Q s = 0;
            for (size_t j = 0; j < row.size(); ++j) s += row[j] * u[j];
            CHECK(s == 0);
        }
        Index ns2;
        for (int i = 0; i < (int)A[0].size(); ++i)
            if ((f.base[i] + GQ(u[i])).is_negative_integer()) ns2.push_back(i);
        Index ns1;
        for (int i : ns)
            if (i < (int)A[0].size()) ns1.push_back(i);
        CHECK(ns2 == ns1);
        CHECK(f.in_support(u));
        CHECK(f.in_window(u));
        CHECK_FALSE(c.is_zero());
    }
}

}  // namespace

TEST_CASE("pochhammer") {
    GQ beta(Q(3, 7));
    CHECK(pochhammer(beta, 0) == GQ(1));
    CHECK(pochhammer(GQ(-1), 2) == GQ(2));
    for (long m = 0; m <= 6; ++m) CHECK(pochhammer(GQ(-1), 2 * m) == GQ(factorial(2 * m)));
    CHECK(pochhammer(GQ(5), 6) == GQ(0));
    CHECK(pochhammer(GQ(Q(1), Q(1)), 2) == GQ(Q(1), Q(1)) * GQ(Q(0), Q(1)));
}

TEST_CASE("phi_v for A=(1,2)") {
    ConfigMatrix A({{1, 2}});
    SUBCASE("beta = -1: coefficients (2m)!/m!") {
        auto v = exp_k(A, {GQ(-1)}, {0}, {0});
        CHECK(v.v == GVec{GQ(-1), GQ(0)});
        auto f = phi_v(A, v, 8);
        CHECK(f.terms.size() == 9);
        for (long m = 0; m <= 8; ++m) {
            IVec u = {-2 * m, m};
            REQUIRE(f.terms.count(u));
            CHECK(f.terms.at(u) == GQ(factorial(2 * m) / factorial(m)));
        }
        check_support(A.q(), f);
    }
    SUBCASE("generic beta satisfies the recurrence of d1^2 - d2") {
        GQ beta(Q(5, 13));
        auto f = phi_v(A, exp_k(A, {beta}, {0}, {0}), 10);
        // c_{m+1}(m+1) = c_m (β-2m)(β-2m-1)
        for (long m = 0; m < 10; ++m) {
            GQ cm = f.coefficient({-2 * m, m});
            GQ cn = f.coefficient({-2 * m - 2, m + 1});
            CHECK(cn * GQ(m + 1) == cm * (beta - GQ(2 * m)) * (beta - GQ(2 * m + 1)));
        }
    }
    SUBCASE("box fallback agrees with the cone") {
        GQ beta(Q(5, 13));
        auto v = exp_k(A, {beta}, {0}, {0});
        auto cone = phi_v(A, v, 7);
        Exponent bare;
        bare.v = v.v;
        auto box = phi_v(A, bare, 7);
        CHECK(box.terms == cone.terms);
    }
    SUBCASE("nonnegative integer exponent gives a polynomial") {
        // v = (4,0): [4]_{2m} vanishes for m >= 3
        auto f = phi_v(A, exp_k(A, {GQ(4)}, {0}, {0}), 10);
        std::set<IVec> nz;
        for (auto& [u, c] : f.terms)
            if (!c.is_zero()) nz.insert(u);
        CHECK(nz == std::set<IVec>{{0, 0}, {-2, 1}, {-4, 2}});
    }
}

TEST_CASE("phi_v for A=(1,3,5,6)") {
    ConfigMatrix A({{1, 3, 5, 6}});
    GQ beta(Q(2, 9));
    auto v = exp_k(A, {beta}, {0}, {0, 0, 0});
    CHECK(v.v == GVec{beta, GQ(0), GQ(0), GQ(0)});
    auto f = phi_v(A, v, 6);
    CHECK(f.coefficient({0, 0, 0, 0}) == GQ(1));
    CHECK(f.coefficient({-3, 1, 0, 0}) == beta * (beta - GQ(1)) * (beta - GQ(2)));
    check_support(A.q(), f);
    // every term against the hypergeometric coefficient written out directly
    for (auto& [u, c] : f.terms) {
        GQ expect = falling(beta, -u[0]);
        for (int i = 1; i < 4; ++i) expect = expect / GQ(factorial(u[i]));
        CHECK(c == expect);
    }
}

TEST_CASE("psi_v") {
    SUBCASE("A=(1,3,5,6), w=(-4,-2,0,1)") {
        ConfigMatrix A({{1, 3, 5, 6}});
        GQ beta(Q(2, 9));
        auto v = exp_k(A, {beta}, {0}, {0, 0, 0});
        auto p = psi_v(A, {-4, -2, 0, 1}, GQ(0), v, {20, 6});
        CHECK(p.t_index == 4);
        CHECK(p.gamma() == GQ(-4) * beta);
        CHECK(p.coefficient({0, 0, 0, 0, 0}) == GQ(1));
        CHECK(p.coefficient({-3, 1, 0, 0, 10}) == beta * (beta - GQ(1)) * (beta - GQ(2)));
        CHECK(p.coefficient({-6, 2, 0, 0, 20}) == pochhammer(beta, 6) / GQ(2));
        CHECK(p.coefficient({-5, 0, 1, 0, 20}) == pochhammer(beta, 5));
        for (auto& [u, c] : p.terms) {
            CHECK(u[4] == -4 * u[0] - 2 * u[1] + u[3]);
            CHECK(u[4] <= 20);
            CHECK(p.in_support(u));
        }
        // indicial consistency: γ + α is a root
        auto roots = indicial_roots(A, {-4, -2, 0, 1}, {beta});
        CHECK(std::find(roots.begin(), roots.end(), p.gamma()) != roots.end());
    }
    SUBCASE("A=(1,2), w=(0,1): t counts the powers of x2") {
        ConfigMatrix A({{1, 2}});
        GQ beta(Q(-7, 3));
        auto p = psi_v(A, {0, 1}, GQ(0), exp_k(A, {beta}, {0}, {0}), {5, 8});
        CHECK(p.gamma() == GQ(0));
        CHECK(p.terms.size() == 6);
        for (long m = 0; m <= 5; ++m) CHECK(p.coefficient({-2 * m, m, m}) == pochhammer(beta, 2 * m) / GQ(factorial(m)));
    }
    SUBCASE("w in the row span: a single t layer") {
        ConfigMatrix A({{1, 2}});
        GQ alpha(Q(1, 2));
        auto p = psi_v(A, {3, 6}, alpha, exp_k(A, {GQ(Q(1, 5))}, {0}, {0}), {4, 6});
        for (auto& [u, c] : p.terms) CHECK(u[2] == 0);
        CHECK(p.gamma() == GQ(Q(3, 5)) - alpha);
    }
    SUBCASE("exponent from the wrong simplex") {
        ConfigMatrix A({{1, 2}});
        auto v = exp_k(A, {GQ(Q(1, 5))}, {1}, {0});
        CHECK_THROWS_AS(psi_v(A, {0, 1}, GQ(0), v, {4, 4}), Error);
        try {
            psi_v(A, {0, 1}, GQ(0), v, {4, 4});
        } catch (const Error& e) {
            CHECK(e.kind == ErrorKind::NegativeTExponent);
        }
    }
}

TEST_CASE("exponents and counts") {
    SUBCASE("A=(1,2,3), w=(0,0,1)") {
        ConfigMatrix A({{1, 2, 3}});
        GQ beta(Q(3, 11));
        auto ex = exponents_for_weight(A, {beta}, {0, 0, 1});
        bool found = false;
        for (auto& e : ex) {
            CHECK(e.v[0] + GQ(2) * e.v[1] + GQ(3) * e.v[2] == beta);
            if (e.v == GVec{GQ(0), beta / GQ(2), GQ(0)}) found = true;
        }
        CHECK(found);
        CHECK((long)ex.size() == count_formal_solutions(A, {0, 0, 1}));
        auto roots = indicial_roots(A, {0, 0, 1}, {beta});
        CHECK(std::find(roots.begin(), roots.end(), GQ(0)) != roots.end());
        CHECK((long)roots.size() == count_formal_solutions(A, {0, 0, 1}));
    }
    SUBCASE("A=(1,3,5,6), w=(-4,-2,0,1)") {
        ConfigMatrix A({{1, 3, 5, 6}});
        GQ beta(Q(2, 9));
        auto ex = exponents_for_weight(A, {beta}, {-4, -2, 0, 1});
        REQUIRE(ex.size() == 1);
        CHECK(ex[0].v == GVec{beta, GQ(0), GQ(0), GQ(0)});
    }
    SUBCASE("counts") {
        ConfigMatrix A({{1, 2}});
        CHECK(count_formal_solutions(A, {1, 1}) == 2);
        CHECK(count_formal_solutions(A, {0, 1}) == 1);
        CHECK(count_formal_solutions(ConfigMatrix({{1, 3, 5}}), {0, 1, 1}) == 1);
        CHECK(count_formal_solutions(ConfigMatrix({{1, 3, 5}}), {1, 1, 1}) == 5);
        ConfigMatrix S({{2, 1}, {1, 3}}, false);
        CHECK(count_formal_solutions(S, {0, 0}) == 5);
    }
    SUBCASE("|exponents| = count over random weights") {
        ConfigMatrix A({{1, 1, 1, 1}, {0, 1, 3, 4}});
        GVec beta = {GQ(Q(1, 7)), GQ(Q(2, 13))};
        for (QVec w : {QVec{0, 0, 0, 0}, QVec{1, -1, 2, 0}, QVec{0, 3, 1, -2}, QVec{5, 0, 0, 1}}) {
            auto ex = exponents_for_weight(A, beta, w);
            CHECK((long)ex.size() == count_formal_solutions(A, w));
            CHECK(count_formal_solutions(A, w) == 4);
            for (auto& e : ex) {
                CHECK(e.v[0] + e.v[1] + e.v[2] + e.v[3] == beta[0]);
                CHECK(e.v[1] + GQ(3) * e.v[2] + GQ(4) * e.v[3] == beta[1]);
            }
        }
    }
}

TEST_CASE("Gevrey indices") {
    SUBCASE("coordinate index") {
        ConfigMatrix A({{1, 2}});
        auto g = gevrey_index_coordinate(A.q(), make_simplex(A, {0}));
        CHECK(g.s == 2);
        CHECK(g.Z == Index{1});
        ConfigMatrix B({{2, 1, 1}, {1, 2, 1}});
        auto h = gevrey_index_coordinate(B.q(), make_simplex(B, {0, 1}));
        CHECK(h.s == 1);
        CHECK(h.Z.empty());
        // A_σ^{-1} a_3 = (1/3, 1/3) evaluated by Cramer's rule
        CHECK(simplex_norm(make_simplex(B, {0, 1}), B.colq(2)) == Q(2, 3));
    }
    SUBCASE("along T, A=(1,3,5,6)") {
        ConfigMatrix A({{1, 3, 5, 6}});
        QVec w = {-4, -2, 0, 1};
        auto s = make_simplex(A, {0});
        CHECK(gevrey_index_T(A.q(), w, s) == Q(1, 5));
        // b_i by hand: (-3,1,0,0), (-5,0,1,0), (-6,0,0,1)
        std::vector<QVec> b = {{-3, 1, 0, 0}, {-5, 0, 1, 0}, {-6, 0, 0, 1}};
        auto ratios = gevrey_index_T_ratios(A.q(), w, s);
        for (int i = 0; i < 3; ++i) {
            Q size = b[i][0] + b[i][1] + b[i][2] + b[i][3];
            CHECK(ratios.at(i + 1) == -size / dot(w, b[i]));
            CHECK(ratios.at(i + 1) == Q(1, 5));
        }
    }
    SUBCASE("along T, A=(1,2,3)") {
        ConfigMatrix A({{1, 2, 3}});
        CHECK(gevrey_index_T(A.q(), {0, 0, 1}, make_simplex(A, {1})) == Q(1, 2));
    }
    SUBCASE("homogeneous A") {
        ConfigMatrix A({{1, 1, 1}, {0, 1, 2}});
        CHECK(gevrey_index_T(A.q(), {0, 0, 1}, make_simplex(A, {0, 1})) == 0);
        CHECK(gevrey_index_T(A.q(), {0, 3, -1}, make_simplex(A, {0, 2})) == 0);
    }
}

TEST_CASE("exponents at infinity") {
    ConfigMatrix A({{2, 1, 1}, {1, 2, 1}});
    GVec beta = {GQ(Q(1, 7)), GQ(Q(2, 11))};
    auto ex = exponents_at_infinity(A, beta, make_simplex(A, {0, 1}), 2);
    REQUIRE(ex.size() == 3);
    for (int i = 0; i < 3; ++i) {
        long k = -1 - i;
        GQ v1 = (GQ(2) * beta[0] - beta[1] - GQ(k)) / GQ(3);
        GQ v2 = (GQ(2) * beta[1] - beta[0] - GQ(k)) / GQ(3);
        CHECK(ex[i].v == GVec{v1, v2, GQ(k)});
        CHECK(ex[i].infinity == 2);
    }
    CHECK_THROWS_AS(exponents_at_infinity(ConfigMatrix({{1, 2}}), {GQ(1)}, make_simplex(ConfigMatrix({{1, 2}}), {0}), 1),
                    Error);
    // φ along the infinity cone: u_3 <= 0 and coefficients from the Γ-series rule
    auto f = phi_v(A, ex[0], 6);
    check_support(A.q(), f);
    for (auto& [u, c] : f.terms) {
        CHECK(u[2] <= 0);
        GQ expect(1);
        for (int i = 0; i < 3; ++i) expect = expect * falling(ex[0].v[i], -u[i]);
        CHECK(c == expect);
    }
}

TEST_CASE("upsilon") {
    ConfigMatrix A({{1, 2}});
    GQ beta(Q(4, 7));
    SUBCASE("gamma = 0") {
        auto p = psi_v(A, {0, 1}, GQ(0), exp_k(A, {beta}, {0}, {0}), {6, 6});
        auto q = upsilon(p, GQ(0));
        CHECK(q.gamma() == GQ(-1));
        for (long m = 0; m <= 6; ++m) {
            GQ c = p.coefficient({-2 * m, m, m});
            Q sign = m % 2 ? -1 : 1;
            CHECK(q.coefficient({-2 * m, m, -m}) == c * GQ(factorial(m) * sign));
        }
        auto back = upsilon_inverse(q, GQ(0));
        CHECK(back.terms == p.terms);
        CHECK(back.base == p.base);
    }
    SUBCASE("round trip at gamma = 1/2") {
        GQ alpha(Q(-1, 2));
        auto p = psi_v(A, {0, 1}, alpha, exp_k(A, {beta}, {0}, {0}), {6, 6});
        REQUIRE(p.gamma() == GQ(Q(1, 2)));
        auto q = upsilon(p, GQ(Q(1, 2)));
        CHECK(q.gamma() == GQ(Q(-3, 2)));
        auto back = upsilon_inverse(q, GQ(Q(1, 2)));
        CHECK(back.terms == p.terms);
        CHECK(back.rel == p.rel);
        CHECK(back.rhs == p.rhs);
        CHECK(back.t_hi == p.t_hi);
        CHECK(back.t_lo == p.t_lo);
        for (auto& [u, c] : p.terms) CHECK(back.in_support(u));
    }
    SUBCASE("negative integer gamma rejected") {
        auto p = psi_v(A, {0, 1}, GQ(2), exp_k(A, {beta}, {0}, {0}), {3, 3});
        CHECK_THROWS_AS(upsilon(p, GQ(-2)), Error);
    }
}

TEST_CASE("solutions modulo convergent series, A=(1,3,5), w=(0,1,1)") {
    ConfigMatrix A({{1, 3, 5}});
    GQ alpha(Q(1, 3)), beta(Q(2, 7));
    Truncation tr{6, 10};
    auto mc = modified_solutions_mod_convergent(A, {0, 1, 1}, alpha, {beta}, tr);
    CHECK(mc.slopes == std::vector<Q>{5});
    CHECK(mc.multiplicity == 1);
    REQUIRE(mc.series.size() == 1);
    CHECK(mc.facets[0] == Index{0, 2});
    CHECK(mc.exponents[0].v == GVec{beta - GQ(5) * alpha, GQ(0), alpha, GQ(-1)});
    const auto& psi = mc.series[0];
    CHECK(psi.t_index == 3);
    CHECK(psi.base == GVec{beta - GQ(5) * alpha, GQ(0), alpha, GQ(0)});
    // displayed series: [β-5α]_{3m2+5m3} / ([α+m3]_{m3} m2!) with m2 >= 0, m2+m3 >= 0
    int seen = 0;
    for (auto& [u, c] : psi.terms) {
        long m2 = u[1], m3 = u[2];
        CHECK(m2 >= 0);
        CHECK(m2 + m3 >= 0);
        CHECK(u[0] == -3 * m2 - 5 * m3);
        CHECK(u[3] == m2 + m3);
        CHECK(u[3] <= tr.t_order);
        GQ expect = falling(beta - GQ(5) * alpha, 3 * m2 + 5 * m3) / falling(alpha + GQ(m3), m3) / GQ(factorial(m2));
        CHECK(c == expect);
        ++seen;
    }
    // every (m2, m) with m2 + m <= x_degree and m <= t_order is present
    int want = 0;
    for (long m = 0; m <= tr.t_order; ++m)
        for (long m2 = 0; m2 + m <= tr.x_degree; ++m2) {
            ++want;
            CHECK(psi.terms.count({-3 * m2 - 5 * (m - m2), m2, m - m2, m}));
        }
    CHECK(seen == want);

    // no slope, empty result
    auto none = modified_solutions_mod_convergent(ConfigMatrix({{1, 2}}), {1, 1}, alpha, {beta}, tr);
    CHECK(none.series.empty());
    CHECK(none.multiplicity == 0);
}

TEST_CASE("modulo convergent count matches the witness volumes") {
    for (IVec w : {IVec{0, 1, 1}, IVec{0, 2, 1}, IVec{0, 1, 3}, IVec{1, 0, 2}}) {
        ConfigMatrix A({{1, 3, 5}});
        auto rep = modified_slopes_along_T(A, w);
        auto mc = modified_solutions_mod_convergent(A, w, GQ(Q(1, 3)), {GQ(Q(2, 7))}, {3, 3});
        CHECK(Q(mc.multiplicity) == rep.multiplicity());
        CHECK((long)mc.series.size() == mc.multiplicity);
    }
}

TEST_CASE("sigma weight vector") {
    ConfigMatrix A({{2, 0, 1, 3}, {0, 1, 1, 2}});
    CHECK(sigma_weight_vector(A.q(), make_simplex(A, {0, 2})) == IVec{0, 0, 0, 3});
    ConfigMatrix B({{1, 2, 3}});
    CHECK(sigma_weight_vector(B.q(), make_simplex(B, {1})) == IVec{0, 0, 1});
    ConfigMatrix H({{1, 1, 1}, {0, 1, 2}});
    CHECK(sigma_weight_vector(H.q(), make_simplex(H, {0, 2})) == IVec{0, 0, 0});
}

TEST_CASE("nsupp minimality") {
    ConfigMatrix A({{1, 2}});
    CHECK(nsupp_minimal(A.q(), {GQ(-1), GQ(0)}, 6));
    ConfigMatrix B({{1, 1}});
    CHECK_FALSE(nsupp_minimal(B.q(), {GQ(-1), GQ(-1)}, 4));
    CHECK(nsupp_minimal(B.q(), {GQ(Q(1, 2)), GQ(Q(-5, 2))}, 4));
}

TEST_CASE("generic parameter sampler") {
    ConfigMatrix A({{1, 2, 3}});
    auto b1 = generic_parameter_sampler(A, 20, 42);
    auto b2 = generic_parameter_sampler(A, 20, 42);
    CHECK(b1 == b2);
    CHECK(nsupp_stability_scan(A.q(), b1, 20));
    CHECK(b1[0].re.get_den() > 10000);
    CHECK_FALSE(nsupp_stability_scan(A.q(), {GQ(3)}, 20));
    // for d = 1 only integer β can resonate
    CHECK(nsupp_stability_scan(A.q(), {GQ(Q(1, 2))}, 20));
    ConfigMatrix B({{1, 1, 1}, {0, 1, 3}});
    auto b3 = generic_parameter_sampler(B, 8, 7);
    CHECK(nsupp_stability_scan(B.q(), b3, 8));
    CHECK(generic_parameter_sampler(B, 8, 8) != b3);
    // brute-force scan oracle for a few simplices of B
    for (Index sig : {Index{0, 1}, Index{0, 2}, Index{1, 2}}) {
        auto s = make_simplex(B, sig);
        int off = complement(sig, 3)[0];
        for (long k = -8; k <= 8; ++k) {
            GQ r0 = b3[0] - GQ(B(0, off) * k), r1 = b3[1] - GQ(B(1, off) * k);
            GQ x0 = GQ(s.inv[0][0]) * r0 + GQ(s.inv[0][1]) * r1;
            GQ x1 = GQ(s.inv[1][0]) * r0 + GQ(s.inv[1][1]) * r1;
            CHECK_FALSE(x0.is_integer());
            CHECK_FALSE(x1.is_integer());
        }
    }
}
