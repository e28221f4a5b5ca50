#include "gkz/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gkz {

Index sorted_union(const Index& a, const Index& b) {
    Index r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

Index sorted_intersection(const Index& a, const Index& b) {
    Index r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

// Calls f on every k-subset of {0..m-1} in lexicographic order.
template <class F>
static void for_each_subset(int m, int k, F&& f) {
    if (k > m || k <= 0) return;
    Index idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int t = i + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
}

std::vector<Face> hull_facets(const std::vector<QVec>& pts, bool with_origin) {
    if (pts.empty()) throw Error(ErrorKind::Input, "hull of an empty point set");
    size_t d = pts[0].size();
    std::vector<QVec> P = pts;
    if (with_origin) P.push_back(QVec(d, Q(0)));
    int m = (int)P.size();
    int origin = with_origin ? m - 1 : -1;

    // affine frame p0 + span(basis)
    const QVec& p0 = P[0];
    std::vector<QVec> basis;
    for (int k = 1; k < m; ++k) {
        QVec diff(d);
        for (size_t i = 0; i < d; ++i) diff[i] = P[k][i] - p0[i];
        auto trial = basis;
        trial.push_back(diff);
        if (rank(trial) > (int)basis.size()) basis = trial;
    }
    int D = (int)basis.size();
    if (D == 0) throw Error(ErrorKind::Input, "hull is zero-dimensional");

    QMat frame = transpose(basis);  // d × D
    std::vector<QVec> z(m);
    for (int k = 0; k < m; ++k) {
        QVec diff(d);
        for (size_t i = 0; i < d; ++i) diff[i] = P[k][i] - p0[i];
        z[k] = *solve(frame, diff);
    }

    std::set<Index> seen;
    std::vector<Face> out;
    for_each_subset(m, D, [&](const Index& S) {
        QMat eq;
        for (int k : S) {
            QVec row = z[k];
            row.push_back(Q(-1));
            eq.push_back(row);
        }
        auto ker = kernel(eq);
        if (ker.size() != 1) return;
        QVec c(ker[0].begin(), ker[0].end() - 1);
        Q h = ker[0].back();
        bool pos = false, neg = false;
        std::vector<Q> s(m);
        for (int k = 0; k < m; ++k) {
            s[k] = dot(c, z[k]) - h;
            if (sgn(s[k]) > 0) pos = true;
            if (sgn(s[k]) < 0) neg = true;
        }
        if (pos && neg) return;
        if (pos) {
            for (auto& x : c) x = -x;
            h = -h;
        }
        Index face;
        bool has_origin = false;
        for (int k = 0; k < m; ++k) {
            if (sgn(s[k]) != 0) continue;
            if (k == origin) has_origin = true;
            else face.push_back(k);
        }
        Index key = face;
        if (has_origin) key.push_back(-1);
        if (!seen.insert(key).second) return;

        // back to ambient coordinates: frame^T c_full = c
        QVec cf = *solve(basis, c);
        Q rhs = h + dot(cf, p0);
        if (sgn(rhs) != 0) {
            Q scale = abs(rhs);
            for (auto& x : cf) x /= scale;
            rhs /= scale;
        }
        Face f;
        f.indices = face;
        f.covector = cf;
        f.rhs = rhs;
        f.contains_zero = with_origin ? has_origin : sgn(rhs) == 0;
        out.push_back(std::move(f));
    });
    std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) { return a.indices < b.indices; });
    return out;
}

std::vector<Index> Umbrella::faces_of_dim(int k) const {
    std::vector<Index> r;
    for (const auto& f : faces)
        if (f.dim == k) r.push_back(f.indices);
    return r;
}

Umbrella umbrella_positive(const QMat& A, const QVec& v) {
    int d = (int)A.size(), n = (int)A[0].size();
    std::vector<QVec> pts(n, QVec(d));
    for (int j = 0; j < n; ++j) {
        if (sgn(v[j]) <= 0) throw Error(ErrorKind::Input, "umbrella weights must be positive");
        for (int i = 0; i < d; ++i) pts[j][i] = A[i][j] / v[j];
    }
    auto all = hull_facets(pts, true);
    Umbrella U;
    U.weights = v;
    std::set<Index> faces;
    std::vector<Index> queue;
    for (const auto& f : all) {
        if (f.contains_zero) continue;
        U.facets.push_back(f);
        if (faces.insert(f.indices).second) queue.push_back(f.indices);
    }
    while (!queue.empty()) {
        Index cur = queue.back();
        queue.pop_back();
        for (const auto& g : all) {
            Index I = sorted_intersection(cur, g.indices);
            if (faces.insert(I).second) queue.push_back(I);
        }
    }
    faces.insert(Index{});
    for (const auto& f : faces) {
        std::vector<QVec> rows;
        for (int j : f) rows.push_back(pts[j]);
        U.faces.push_back({f, f.empty() ? -1 : rank(rows) - 1});
    }
    std::sort(U.faces.begin(), U.faces.end(), [](const UmbrellaFace& a, const UmbrellaFace& b) {
        return a.dim != b.dim ? a.dim < b.dim : a.indices < b.indices;
    });
    return U;
}

Umbrella umbrella_positive(const ConfigMatrix& A, const QVec& v) { return umbrella_positive(A.q(), v); }

// c with c·a_i = w_i for i in σ
static QVec certificate(const Simplex& s, const QVec& w) {
    size_t d = s.idx.size();
    QVec c(d);
    for (size_t i = 0; i < d; ++i)
        for (size_t k = 0; k < d; ++k) c[i] += w[s.idx[k]] * s.inv[k][i];
    return c;
}

std::vector<Cell> regular_subdivision(const QMat& A, const QVec& w) {
    int d = (int)A.size(), n = (int)A[0].size();
    std::map<Index, QVec> cells;
    for_each_subset(n, d, [&](const Index& idx) {
        if (sgn(det(submatrix(A, idx))) == 0) return;
        Simplex s = make_simplex(A, idx);
        QVec c = certificate(s, w);
        Index eq;
        for (int j = 0; j < n; ++j) {
            Q slack = w[j] - dot(c, column(A, j));
            if (sgn(slack) < 0) return;
            if (sgn(slack) == 0) eq.push_back(j);
        }
        cells.emplace(eq, c);
    });
    std::vector<Cell> out;
    for (auto& [idx, c] : cells) out.push_back({idx, c});
    return out;
}

PerturbedWeight perturb_weight(int n, const QVec& w, int stage_count, long K) {
    PerturbedWeight p;
    p.K = K;
    p.stages.push_back(w);
    if (stage_count >= 2) p.stages.push_back(QVec(n, Q(1)));
    if (stage_count >= 3) {
        QVec wp(n);
        mpz_class pw = 1;
        for (int j = 0; j < n; ++j) {
            wp[j] = Q(pw);
            pw *= K;
        }
        p.stages.push_back(wp);
    }
    return p;
}

Q Triangulation::volume() const {
    Q v = 0;
    for (const auto& s : simplices) v += s.vol();
    return v;
}

Triangulation regular_triangulation(const QMat& A, const QVec& w) {
    Triangulation T;
    T.w = w;
    for (const auto& cell : regular_subdivision(A, w)) {
        if (cell.indices.size() != A.size())
            throw Error(ErrorKind::NonSimplicialCell, "weight is not generic: a cell has more than d points");
        T.simplices.push_back(make_simplex(A, cell.indices));
        T.certificates.push_back(cell.certificate);
    }
    return T;
}

Triangulation regular_triangulation(const QMat& A, const PerturbedWeight& w) {
    int d = (int)A.size(), n = (int)A[0].size();
    Triangulation T;
    T.w = w.stages.front();
    bool tie = false;
    for_each_subset(n, d, [&](const Index& idx) {
        if (sgn(det(submatrix(A, idx))) == 0) return;
        Simplex s = make_simplex(A, idx);
        std::vector<QVec> cs;
        for (const auto& st : w.stages) cs.push_back(certificate(s, st));
        bool tied = false;
        for (int j : complement(idx, n)) {
            QVec a = column(A, j);
            int sign = 0;
            for (size_t k = 0; k < w.stages.size() && sign == 0; ++k)
                sign = sgn(w.stages[k][j] - dot(cs[k], a));
            if (sign < 0) return;
            if (sign == 0) tied = true;
        }
        if (tied) {
            tie = true;
            return;
        }
        T.simplices.push_back(s);
        T.certificates.push_back(cs.front());
    });
    if (tie) throw Error(ErrorKind::NonSimplicialCell, "perturbed weight still has a non-simplicial cell");
    return T;
}

Triangulation regular_triangulation(const ConfigMatrix& A, const QVec& w) { return regular_triangulation(A.q(), w); }

Triangulation regular_triangulation(const ConfigMatrix& A, const PerturbedWeight& w) {
    return regular_triangulation(A.q(), w);
}

Q pyramid_volume(const QMat& A, const Index& tau) {
    QMat M = submatrix(A, tau);
    if (rank(M) < (int)A.size()) return 0;
    auto T = regular_triangulation(M, perturb_weight((int)tau.size(), QVec(tau.size(), Q(0))));
    return T.volume();
}

Q simplex_norm(const Simplex& s, const QVec& a) {
    Q r = 0;
    for (const Q& x : mat_vec(s.inv, a)) r += x;
    return r;
}

bool sigma_in_outer_facet(const QMat& A, const Simplex& s) {
    int n = (int)A[0].size();
    for (int j : complement(s.idx, n))
        if (simplex_norm(s, column(A, j)) < 1) return false;
    return true;
}

Index eta_for_simplex(const QMat& A, const Simplex& s) {
    Index eta;
    for (int j = 0; j < (int)A[0].size(); ++j)
        if (simplex_norm(s, column(A, j)) >= 1) eta.push_back(j);
    return eta;
}

bool umbrella_inclusion_check(const QMat& A, const Index& eta) {
    int n = (int)A[0].size();
    QMat M = submatrix(A, eta);
    if (rank(M) < (int)A.size()) return false;
    Umbrella U = umbrella_positive(M, QVec(eta.size(), Q(1)));
    Index rest = complement(eta, n);
    for (const auto& f : U.facets)
        for (int j : rest)
            if (dot(f.covector, column(A, j)) >= 1) return false;
    return true;
}

}  // namespace gkz
