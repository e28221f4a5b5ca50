#include <random>
#include <set>

#include "doctest.h"
#include "gkz/geometry.hpp"

using namespace gkz;

namespace {

std::vector<QVec> cols(const IMat& A) {
    std::vector<QVec> p(A[0].size(), QVec(A.size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[0].size(); ++j) p[j][i] = A[i][j];
    return p;
}

// planar oracle: outer edges of conv(0 ∪ pts) by testing every pair of points
// (origin included) against the sign of the 2x2 cross product
std::set<Index> planar_outer_edges(const std::vector<QVec>& pts) {
    std::vector<QVec> P = pts;
    P.push_back({0, 0});
    int m = (int)P.size();
    std::set<Index> edges;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            Q dx = P[b][0] - P[a][0], dy = P[b][1] - P[a][1];
            if (dx == 0 && dy == 0) continue;
            int pos = 0, neg = 0;
            Index on;
            for (int k = 0; k < m; ++k) {
                Q cr = dx * (P[k][1] - P[a][1]) - dy * (P[k][0] - P[a][0]);
                if (cr > 0) ++pos;
                else if (cr < 0) ++neg;
                else on.push_back(k);
            }
            if (pos && neg) continue;
            if (!pos && !neg) continue;
            if (std::find(on.begin(), on.end(), m - 1) != on.end()) continue;
            edges.insert(on);
        }
    return edges;
}

// twice the area of conv(0 ∪ pts) in the plane, by gift wrapping on a small set
Q planar_normalized_volume(const std::vector<QVec>& pts) {
    std::vector<QVec> P = pts;
    P.push_back({0, 0});
    // Andrew monotone chain over exact rationals
    std::sort(P.begin(), P.end());
    P.erase(std::unique(P.begin(), P.end()), P.end());
    auto cross = [](const QVec& o, const QVec& a, const QVec& b) -> Q {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<QVec> H(2 * P.size());
    size_t k = 0;
    for (size_t i = 0; i < P.size(); ++i) {
        while (k >= 2 && cross(H[k - 2], H[k - 1], P[i]) <= 0) --k;
        H[k++] = P[i];
    }
    for (size_t i = P.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(H[k - 2], H[k - 1], P[i - 1]) <= 0) --k;
        H[k++] = P[i - 1];
    }
    H.resize(k - 1);
    Q area2 = 0;
    for (size_t i = 0; i < H.size(); ++i) {
        const QVec& a = H[i];
        const QVec& b = H[(i + 1) % H.size()];
        area2 += a[0] * b[1] - a[1] * b[0];
    }
    return abs(area2);
}

void check_certifies(const std::vector<QVec>& pts, const Face& f) {
    for (size_t k = 0; k < pts.size(); ++k) {
        Q v = dot(f.covector, pts[k]);
        bool on = std::find(f.indices.begin(), f.indices.end(), (int)k) != f.indices.end();
        if (on) CHECK(v == f.rhs);
        else CHECK(v < f.rhs);
    }
}

}  // namespace

TEST_CASE("hull facets, planar examples") {
    SUBCASE("three points with origin") {
        std::vector<QVec> pts = {{1, 0}, {3, 1}, {5, 1}};
        auto F = hull_facets(pts, true);
        std::set<Index> outer;
        for (auto& f : F) {
            check_certifies(pts, f);
            if (f.contains_zero) continue;
            outer.insert(f.indices);
            if (f.indices == Index{0, 2}) CHECK(f.covector == QVec{1, -4});
            if (f.indices == Index{1, 2}) CHECK(f.covector == QVec{0, 1});
            CHECK(f.rhs == 1);
        }
        CHECK(outer == std::set<Index>{{0, 2}, {1, 2}});
        CHECK(outer == planar_outer_edges(pts));
    }
    SUBCASE("interior point below the facet") {
        std::vector<QVec> pts = {{2, 1}, {1, 2}, {1, 1}};
        auto F = hull_facets(pts, true);
        int outer = 0;
        for (auto& f : F) {
            check_certifies(pts, f);
            if (f.contains_zero) continue;
            ++outer;
            CHECK(f.indices == Index{0, 1});
            CHECK(f.covector == QVec{Q(1, 3), Q(1, 3)});
            CHECK(dot(f.covector, pts[2]) == Q(2, 3));
        }
        CHECK(outer == 1);
    }
    SUBCASE("segment in dimension one") {
        auto F = hull_facets({{1}}, true);
        REQUIRE(F.size() == 2);
        for (auto& f : F)
            if (!f.contains_zero) {
                CHECK(f.indices == Index{0});
                CHECK(f.covector == QVec{1});
            }
    }
    SUBCASE("lower-dimensional hull") {
        std::vector<QVec> pts = {{1, 1}, {2, 2}};
        auto F = hull_facets(pts, true);
        REQUIRE(F.size() == 2);
        for (auto& f : F) {
            check_certifies(pts, f);
            if (!f.contains_zero) CHECK(f.indices == Index{1});
        }
    }
    SUBCASE("zero-dimensional hull rejected") {
        CHECK_THROWS_AS(hull_facets({{0, 0}}, true), Error);
    }
    SUBCASE("cube without origin") {
        std::vector<QVec> pts;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) pts.push_back({a + 1, b + 1, c + 1});
        auto F = hull_facets(pts, false);
        CHECK(F.size() == 6);
        for (auto& f : F) {
            CHECK(f.indices.size() == 4);
            check_certifies(pts, f);
        }
    }
}

TEST_CASE("hull facets agree with the planar pair oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<QVec> pts;
        for (int k = 0; k < 6; ++k) pts.push_back({Q((long)(rng() % 9)), Q((long)(rng() % 9) - 2)});
        bool nonzero = false;
        for (auto& p : pts)
            if (p[0] != 0 || p[1] != 0) nonzero = true;
        if (!nonzero) continue;
        // skip collinear-with-origin configurations; the pair oracle handles only full hulls
        QMat M = pts;
        if (rank(M) < 2) continue;
        std::set<Index> mine;
        for (auto& f : hull_facets(pts, true)) {
            check_certifies(pts, f);
            if (!f.contains_zero) mine.insert(f.indices);
        }
        CHECK(mine == planar_outer_edges(pts));
    }
}

TEST_CASE("positive umbrellas") {
    SUBCASE("(1,2)") {
        Umbrella U = umbrella_positive(ConfigMatrix({{1, 2}}), {1, 1});
        std::set<Index> faces;
        for (auto& f : U.faces) faces.insert(f.indices);
        CHECK(faces == std::set<Index>{{}, {1}});
        CHECK(U.faces_of_dim(0) == std::vector<Index>{{1}});
    }
    SUBCASE("[[2,1,1],[1,2,1]]") {
        Umbrella U = umbrella_positive(ConfigMatrix({{2, 1, 1}, {1, 2, 1}}), {1, 1, 1});
        CHECK(U.faces_of_dim(1) == std::vector<Index>{{0, 1}});
        CHECK(U.faces_of_dim(0) == std::vector<Index>{{0}, {1}});
    }
    SUBCASE("square matrix") {
        Umbrella U = umbrella_positive(ConfigMatrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), {1, 1, 1});
        CHECK(U.faces_of_dim(2) == std::vector<Index>{{0, 1, 2}});
    }
    SUBCASE("weights rescale points") {
        // a_2/v_2 = 1 lands on a_1: both on the single outer face
        Umbrella U = umbrella_positive(ConfigMatrix({{1, 2}}), {1, 2});
        CHECK(U.faces_of_dim(0) == std::vector<Index>{{0, 1}});
    }
    SUBCASE("facets match the hull facets avoiding zero; closed under subfaces") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 15; ++trial) {
            IMat A(2, IVec(6));
            for (auto& r : A)
                for (auto& x : r) x = (long)(rng() % 7);
            A[0][0] = 1;
            A[1][0] = 0;
            A[0][1] = 0;
            A[1][1] = 1;
            ConfigMatrix C(A);
            Umbrella U = umbrella_positive(C, QVec(6, Q(1)));
            std::set<Index> facets, hf;
            for (auto& f : U.facets) facets.insert(f.indices);
            for (auto& f : hull_facets(cols(A), true))
                if (!f.contains_zero) hf.insert(f.indices);
            CHECK(facets == hf);
            std::set<Index> faces;
            for (auto& f : U.faces) faces.insert(f.indices);
            CHECK(faces.count(Index{}) == 1);
            for (auto& f : U.faces)
                for (auto& g : U.faces) CHECK(faces.count(sorted_intersection(f.indices, g.indices)) == 1);
        }
    }
}

TEST_CASE("regular subdivisions and triangulations") {
    SUBCASE("(1,2,3), w=(0,0,1)") {
        ConfigMatrix A({{1, 2, 3}});
        CHECK_THROWS_AS(regular_triangulation(A, QVec{0, 0, 1}), Error);
        auto cells = regular_subdivision(A.q(), {0, 0, 1});
        REQUIRE(cells.size() == 1);
        CHECK(cells[0].indices == Index{0, 1});
        Triangulation T = regular_triangulation(A, perturb_weight(3, {0, 0, 1}));
        REQUIRE(T.simplices.size() == 1);
        CHECK(T.simplices[0].idx == Index{1});
        CHECK(T.volume() == 2);
    }
    SUBCASE("(1,3,5,6), w=(-4,-2,0,1)") {
        Triangulation T = regular_triangulation(ConfigMatrix({{1, 3, 5, 6}}), QVec{-4, -2, 0, 1});
        REQUIRE(T.simplices.size() == 1);
        CHECK(T.simplices[0].idx == Index{0});
        CHECK(T.certificates[0] == QVec{-4});
    }
    SUBCASE("square matrix") {
        Triangulation T = regular_triangulation(ConfigMatrix({{1, 0}, {0, 1}}), QVec{5, -3});
        REQUIRE(T.simplices.size() == 1);
        CHECK(T.simplices[0].idx == Index{0, 1});
    }
    SUBCASE("(1,2): dependence on w") {
        ConfigMatrix A({{1, 2}});
        CHECK(regular_triangulation(A, QVec{0, 1}).simplices[0].idx == Index{0});
        CHECK(regular_triangulation(A, QVec{1, 1}).simplices[0].idx == Index{1});
        // w=(0,0) ties at the leading stage, (1,1) decides for column 2
        Triangulation T = regular_triangulation(A, perturb_weight(2, {0, 0}));
        REQUIRE(T.simplices.size() == 1);
        CHECK(T.simplices[0].idx == Index{1});
        // dominance: distinct leading values decide alone
        CHECK(regular_triangulation(A, perturb_weight(2, {0, 1})).simplices[0].idx == Index{0});
    }
    SUBCASE("perturbation is deterministic") {
        ConfigMatrix A({{1, 1, 1, 1}, {0, 1, 2, 3}});
        auto T1 = regular_triangulation(A, perturb_weight(4, {0, 0, 0, 0}));
        auto T2 = regular_triangulation(A, perturb_weight(4, {0, 0, 0, 0}));
        REQUIRE(T1.simplices.size() == T2.simplices.size());
        for (size_t i = 0; i < T1.simplices.size(); ++i) CHECK(T1.simplices[i].idx == T2.simplices[i].idx);
    }
}

TEST_CASE("triangulation certificates and volume invariants") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        IMat A(2, IVec(5));
        for (auto& r : A)
            for (auto& x : r) x = (long)(rng() % 6);
        A[0][0] = 1;
        A[1][0] = 0;
        A[0][1] = 0;
        A[1][1] = 1;
        ConfigMatrix C(A);
        QMat M = C.q();
        QVec w(5);
        for (auto& x : w) x = Q((long)(rng() % 11) - 5);

        auto T1 = regular_triangulation(C, perturb_weight(5, w, 3, 97));
        auto T2 = regular_triangulation(C, perturb_weight(5, w, 3, 1009));
        CHECK(T1.volume() == T2.volume());
        for (size_t k = 0; k < T1.simplices.size(); ++k) {
            const auto& s = T1.simplices[k];
            const auto& c = T1.certificates[k];
            for (int j = 0; j < 5; ++j) {
                Q v = dot(c, column(M, j));
                if (std::binary_search(s.idx.begin(), s.idx.end(), j)) CHECK(v == w[j]);
                else CHECK(v <= w[j]);
            }
        }

        // near (1,…,1) the cells refine the positive umbrella: Σ vol = vol conv(0 ∪ A)
        auto TF = regular_triangulation(C, perturb_weight(5, QVec(5, Q(1))));
        CHECK(TF.volume() == planar_normalized_volume(cols(A)));
    }
}

TEST_CASE("pyramid volume") {
    QMat A = {{2, 1, 1}, {1, 2, 1}};
    CHECK(pyramid_volume(A, {0, 1}) == 3);
    QMat B = {{1, 1, 1}, {0, 1, 2}};
    CHECK(pyramid_volume(B, {0, 1, 2}) == 2);
}

TEST_CASE("simplex in an outer facet") {
    QMat A = {{1, 2}};
    CHECK(sigma_in_outer_facet(A, make_simplex(A, {0})));
    CHECK_FALSE(sigma_in_outer_facet(A, make_simplex(A, {1})));
    QMat B = {{1, 1, 1}, {0, 1, 2}};
    CHECK(simplex_norm(make_simplex(B, {0, 2}), column(B, 1)) == 1);
    CHECK(sigma_in_outer_facet(B, make_simplex(B, {0, 2})));
    QMat C = {{2, 0, 1, 3}, {0, 1, 1, 2}};
    // sigma={1,3}: A_σ^{-1}a_2 = (-1/2, 1), A_σ^{-1}a_4 = (1/2, 2) -> norms 1/2 and 5/2
    Simplex s = make_simplex(C, {0, 2});
    CHECK(simplex_norm(s, column(C, 1)) == Q(1, 2));
    CHECK(simplex_norm(s, column(C, 3)) == Q(5, 2));
    CHECK_FALSE(sigma_in_outer_facet(C, s));
}

TEST_CASE("umbrella inclusion") {
    SUBCASE("d = 1 for every simplex") {
        for (IMat A : {IMat{{1, 2}}, IMat{{1, 3, 5, 6}}, IMat{{2, 3, 7}}}) {
            QMat M = to_q(A);
            for (int j = 0; j < (int)A[0].size(); ++j) {
                Simplex s = make_simplex(M, {j});
                CHECK(umbrella_inclusion_check(M, eta_for_simplex(M, s)));
            }
        }
    }
    SUBCASE("n - 1 = d for every simplex") {
        for (IMat A : {IMat{{1, 1, 1}, {0, 1, 2}}, IMat{{2, 1, 1}, {1, 2, 1}}, IMat{{2, 0, 1}, {0, 1, 1}}}) {
            QMat M = to_q(A);
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    if (det(submatrix(M, {i, j})) == 0) continue;
                    CHECK(umbrella_inclusion_check(M, eta_for_simplex(M, make_simplex(M, {i, j}))));
                }
        }
    }
    SUBCASE("final example: holds exactly for 1 < l < 2") {
        auto M = [](Q l) { return QMat{{1, 1, 0, l}, {0, 1, 2, 0}}; };
        CHECK(umbrella_inclusion_check(M(Q(3, 2)), {0, 1, 3}));
        CHECK(umbrella_inclusion_check(M(Q(7, 4)), {0, 1, 3}));
        CHECK_FALSE(umbrella_inclusion_check(M(Q(2)), {0, 1, 3}));
        CHECK_FALSE(umbrella_inclusion_check(M(Q(3)), {0, 1, 3}));
    }
}
