#include "gkz/slopes.hpp"

#include <algorithm>

namespace gkz {

const char* locus_name(Locus l) {
    switch (l) {
    case Locus::Hyperplane: return "hyperplane";
    case Locus::Infinity: return "infinity";
    case Locus::T: return "T";
    case Locus::Tprime: return "Tprime";
    }
    return "";
}

Q SlopeReport::multiplicity() const {
    Q m = 0;
    for (const auto& w : witnesses) m += w.multiplicity;
    return m;
}

static void finish(SlopeReport& r) {
    std::sort(r.witnesses.begin(), r.witnesses.end(), [](const SlopeWitness& a, const SlopeWitness& b) {
        return a.s != b.s ? a.s < b.s : a.facet < b.facet;
    });
    for (const auto& w : r.witnesses)
        if (r.slopes.empty() || r.slopes.back() != w.s) r.slopes.push_back(w.s);
}

// Outer facets of conv(0, a_i : i != j), labels mapped back to A.
static std::vector<Face> facets_without(const QMat& M, int j) {
    int n = (int)M[0].size();
    Index rest;
    for (int i = 0; i < n; ++i)
        if (i != j) rest.push_back(i);
    if (rest.empty() || rank(submatrix(M, rest)) < (int)M.size()) return {};
    std::vector<QVec> pts;
    for (int i : rest) pts.push_back(column(M, i));
    std::vector<Face> out;
    for (auto f : hull_facets(pts, true)) {
        if (f.contains_zero) continue;
        for (int& k : f.indices) k = rest[k];
        out.push_back(f);
    }
    return out;
}

static void check_column(const ConfigMatrix& A, int j) {
    if (j < 0 || j >= A.n()) throw Error(ErrorKind::Input, "column index out of range");
}

SlopeReport slopes_along_hyperplane(const ConfigMatrix& A, int j) {
    check_column(A, j);
    QMat M = A.q();
    SlopeReport r{Locus::Hyperplane, j, {}, {}};
    for (const auto& f : facets_without(M, j)) {
        Q s = dot(f.covector, column(M, j));
        if (s > 1) r.witnesses.push_back({s, f.indices, f.covector, pyramid_volume(M, f.indices)});
    }
    finish(r);
    return r;
}

SlopeReport slopes_at_infinity(const ConfigMatrix& A, int j) {
    check_column(A, j);
    QMat M = A.q();
    SlopeReport r{Locus::Infinity, j, {}, {}};
    for (const auto& f : facets_without(M, j)) {
        Q c = dot(f.covector, column(M, j));
        if (c < 1) r.witnesses.push_back({2 - c, f.indices, f.covector, pyramid_volume(M, f.indices)});
    }
    finish(r);
    return r;
}

bool is_pointed(const QMat& M) {
    int d = (int)M.size(), n = (int)M[0].size();
    // Gordan: pointed iff 0 is not in the convex hull of the columns.  By
    // Carathéodory it suffices to test affinely independent subsets.
    for (int k = 1; k <= std::min(d + 1, n); ++k) {
        Index S(k);
        for (int i = 0; i < k; ++i) S[i] = i;
        while (true) {
            QMat sys = submatrix(M, S);
            sys.push_back(QVec(k, Q(1)));
            if (rank(sys) == k) {
                QVec rhs(d + 1);
                rhs[d] = 1;
                auto lam = solve(sys, rhs);
                if (lam && std::all_of(lam->begin(), lam->end(), [](const Q& x) { return sgn(x) >= 0; }))
                    return false;
            }
            int i = k - 1;
            while (i >= 0 && S[i] == n - k + i) --i;
            if (i < 0) break;
            ++S[i];
            for (int t = i + 1; t < k; ++t) S[t] = S[t - 1] + 1;
        }
    }
    return true;
}

IMat atilde(const ConfigMatrix& A, const IVec& w) {
    if ((int)w.size() != A.n()) throw Error(ErrorKind::Input, "weight vector has wrong length");
    IMat M = A.rows();
    for (auto& row : M) row.push_back(0);
    IVec last = w;
    last.push_back(1);
    M.push_back(last);
    return M;
}

QMat a_w(const ConfigMatrix& A, const IVec& w) {
    if ((int)w.size() != A.n()) throw Error(ErrorKind::Input, "weight vector has wrong length");
    QMat M = A.q();
    M.push_back(to_q(w));
    return M;
}

SlopeReport modified_slopes_along_T(const ConfigMatrix& A, const IVec& w) {
    if (!is_pointed(to_q(atilde(A, w)))) throw Error(ErrorKind::NotPointed, "the extended matrix is not pointed");
    SlopeReport r{Locus::T, -1, {}, {}};
    QMat M = a_w(A, w);
    int d = A.d();
    if (rank(M) == d) return r;  // w in the row span: ψ does not depend on t
    std::vector<QVec> pts;
    for (int i = 0; i < A.n(); ++i) pts.push_back(column(M, i));
    for (const auto& f : hull_facets(pts, true)) {
        if (f.contains_zero) continue;
        Q rr = -f.covector[d];
        if (sgn(rr) <= 0) continue;
        r.witnesses.push_back({rr + 1, f.indices, f.covector, pyramid_volume(M, f.indices)});
    }
    finish(r);
    return r;
}

SlopeReport modified_slopes_along_Tprime(const ConfigMatrix& A, const IVec& w) {
    IVec mw = w;
    for (auto& x : mw) x = -x;
    SlopeReport r = modified_slopes_along_T(A, mw);
    r.locus = Locus::Tprime;
    return r;
}

static Index relabel(const Index& local, const Index& eta) {
    Index r;
    for (int k : local) r.push_back(eta[k]);
    return r;
}

RegularityReport is_regular_along_T(const ConfigMatrix& A, const IVec& w) {
    RegularityReport rep;
    rep.regular = modified_slopes_along_T(A, w).slopes.empty();
    QMat M = A.q();
    QVec wq = to_q(w);
    int n = A.n();

    Umbrella F = umbrella_positive(M, QVec(n, Q(1)));
    for (const auto& f : F.facets) {
        QVec weta;
        for (int i : f.indices) weta.push_back(wq[i]);
        for (const auto& c : regular_subdivision(submatrix(M, f.indices), weta))
            rep.left.insert(relabel(c.indices, f.indices));
    }
    for (const auto& c : regular_subdivision(M, wq)) {
        Umbrella G = umbrella_positive(submatrix(M, c.indices), QVec(c.indices.size(), Q(1)));
        for (const auto& g : G.facets) rep.right.insert(relabel(g.indices, c.indices));
    }
    rep.condition_a = rep.left == rep.right;
    rep.consistent = rep.condition_a == rep.regular;
    return rep;
}

}  // namespace gkz
