#include "gkz/series.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "gkz/slopes.hpp"

namespace gkz {

GQ pochhammer(const GQ& c, long k) {
    GQ r(1);
    for (long j = 0; j < k; ++j) r *= c - GQ(j);
    return r;
}

Index Exponent::nsupp() const {
    Index r;
    for (int i = 0; i < (int)v.size(); ++i)
        if (v[i].is_negative_integer()) r.push_back(i);
    return r;
}

static GVec apply_rational(const QMat& M, const GVec& x) {
    GVec y(M.size());
    for (size_t i = 0; i < M.size(); ++i) {
        GQ s(0);
        for (size_t j = 0; j < x.size(); ++j) s += GQ(M[i][j]) * x[j];
        y[i] = s;
    }
    return y;
}

Exponent exponent_from_k(const QMat& A, const GVec& beta, const Simplex& s, const IVec& k, int infinity) {
    int d = (int)A.size(), n = (int)A[0].size();
    Index off = complement(s.idx, n);
    if (k.size() != off.size()) throw Error(ErrorKind::Input, "k has wrong length");
    if ((int)beta.size() != d) throw Error(ErrorKind::Input, "beta has wrong length");
    GVec rhs = beta;
    for (size_t t = 0; t < off.size(); ++t)
        for (int i = 0; i < d; ++i) rhs[i] -= GQ(A[i][off[t]] * k[t]);
    GVec vs = apply_rational(s.inv, rhs);
    Exponent e;
    e.v.assign(n, GQ(0));
    for (int i = 0; i < d; ++i) e.v[s.idx[i]] = vs[i];
    for (size_t t = 0; t < off.size(); ++t) e.v[off[t]] = GQ(k[t]);
    e.sigma = s;
    e.k = k;
    e.infinity = infinity;
    return e;
}

void nsupp_bounds(const GVec& base, const Index& coords, std::vector<std::optional<long>>& lo,
                  std::vector<std::optional<long>>& hi) {
    lo.assign(base.size(), std::nullopt);
    hi.assign(base.size(), std::nullopt);
    for (int i : coords) {
        if (!base[i].is_integer()) continue;
        long b = base[i].re.get_num().get_si();
        if (b < 0) hi[i] = -1 - b;
        else lo[i] = -b;
    }
}

bool TruncatedSeries::in_support(const IVec& u) const {
    for (size_t r = 0; r < rel.size(); ++r) {
        long s = 0;
        for (size_t j = 0; j < u.size(); ++j) s += rel[r][j] * u[j];
        if (s != rhs[r]) return false;
    }
    for (size_t i = 0; i < u.size(); ++i) {
        if (lo[i] && u[i] < *lo[i]) return false;
        if (hi[i] && u[i] > *hi[i]) return false;
    }
    return true;
}

bool TruncatedSeries::in_window(const IVec& u) const {
    long deg = 0;
    for (const auto& w : window) deg += std::labs(w.sign * u[w.coord] - w.offset);
    if (deg > x_degree) return false;
    if (t_index >= 0) {
        if (t_lo && u[t_index] < *t_lo) return false;
        if (t_hi && u[t_index] > *t_hi) return false;
    }
    return true;
}

GQ TruncatedSeries::coefficient(const IVec& u) const {
    auto it = terms.find(u);
    return it == terms.end() ? GQ(0) : it->second;
}

// rows scaled to integers
static IMat integer_rows(const QMat& A) {
    IMat R;
    for (const auto& row : A) {
        mpz_class l = 1;
        for (const Q& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        IVec r;
        for (const Q& x : row) {
            Q y = x * Q(l);
            r.push_back(y.get_num().get_si());
        }
        R.push_back(r);
    }
    return R;
}

static Simplex first_simplex(const QMat& A) {
    int d = (int)A.size(), n = (int)A[0].size();
    Index idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    while (true) {
        if (sgn(det(submatrix(A, idx))) != 0) return make_simplex(A, idx);
        int i = d - 1;
        while (i >= 0 && idx[i] == n - d + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int t = i + 1; t < d; ++t) idx[t] = idx[t - 1] + 1;
    }
    throw Error(ErrorKind::Input, "matrix has no invertible square submatrix");
}

// [v]_{u-} / [v+u]_{u+}
static GQ gamma_series_coefficient(const GVec& v, const IVec& u) {
    GQ num(1), den(1);
    for (size_t i = 0; i < v.size(); ++i) {
        if (u[i] < 0) num *= pochhammer(v[i], -u[i]);
        else if (u[i] > 0) den *= pochhammer(v[i] + GQ(u[i]), u[i]);
    }
    return num / den;
}

struct DegreeCap {
    IVec w;
    long cap;
};

// Enumeration of φ_v; with a cap, branches whose w-degree must exceed it are cut.
static TruncatedSeries phi_enumerate(const QMat& A, const Exponent& v, long D, const std::optional<DegreeCap>& wcap) {
    int d = (int)A.size(), n = (int)A[0].size();
    if ((int)v.v.size() != n) throw Error(ErrorKind::Input, "exponent has wrong length");
    bool cone = v.sigma.has_value();
    Simplex s = cone ? *v.sigma : first_simplex(A);
    Index off = complement(s.idx, n);

    TruncatedSeries f;
    f.base = v.v;
    f.rel = integer_rows(A);
    f.rhs.assign(d, 0);
    Index all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    nsupp_bounds(f.base, all, f.lo, f.hi);
    f.x_degree = D;

    // apex of the enumeration cone on each coordinate outside σ; sign = direction
    std::vector<long> apex(off.size(), 0), dir(off.size(), 0);
    for (size_t t = 0; t < off.size(); ++t) {
        if (cone) {
            bool inf = off[t] == v.infinity;
            apex[t] = inf ? -v.k[t] - 1 : -v.k[t];
            dir[t] = inf ? -1 : 1;
        }
        f.window.push_back({off[t], 1, apex[t]});
    }

    // A_σ^{-1} A_σ̄ for solving the σ coordinates
    QMat M(d, QVec(off.size()));
    for (size_t t = 0; t < off.size(); ++t) {
        QVec y = mat_vec(s.inv, column(A, off[t]));
        for (int i = 0; i < d; ++i) M[i][t] = y[i];
    }

    // w·u = Σ_t c_t u_{off t}
    QVec c(off.size(), Q(0));
    if (wcap)
        for (size_t t = 0; t < off.size(); ++t) {
            c[t] = wcap->w[off[t]];
            for (int i = 0; i < d; ++i) c[t] -= wcap->w[s.idx[i]] * M[i][t];
        }
    auto exceeds = [&](size_t t, long budget, const Q& partial) {
        if (!wcap) return false;
        Q low = partial;
        for (size_t q = t; q < off.size(); ++q) {
            if (cone) {
                Q a = c[q] * apex[q], b = c[q] * (apex[q] + dir[q] * budget);
                low += a < b ? a : b;
            } else {
                low -= abs(c[q]) * budget;
            }
        }
        return low > wcap->cap;
    };

    IVec ub(off.size());
    std::function<void(size_t, long, const Q&)> rec = [&](size_t t, long budget, const Q& partial) {
        if (exceeds(t, budget, partial)) return;
        if (t == off.size()) {
            IVec u(n, 0);
            for (size_t q = 0; q < off.size(); ++q) u[off[q]] = ub[q];
            for (int i = 0; i < d; ++i) {
                Q x = 0;
                for (size_t q = 0; q < off.size(); ++q) x -= M[i][q] * ub[q];
                if (x.get_den() != 1) return;
                u[s.idx[i]] = x.get_num().get_si();
            }
            if (!f.in_support(u)) return;
            f.terms.emplace(u, gamma_series_coefficient(f.base, u));
            return;
        }
        if (cone) {
            for (long e = 0; e <= budget; ++e) {
                ub[t] = apex[t] + dir[t] * e;
                rec(t + 1, budget - e, partial + c[t] * ub[t]);
            }
        } else {
            for (long x = -budget; x <= budget; ++x) {
                ub[t] = x;
                rec(t + 1, budget - std::labs(x), partial + c[t] * ub[t]);
            }
        }
    };
    rec(0, D, Q(0));
    return f;
}

TruncatedSeries phi_v(const QMat& A, const Exponent& v, long D) { return phi_enumerate(A, v, D, std::nullopt); }

TruncatedSeries phi_v(const ConfigMatrix& A, const Exponent& v, long D) { return phi_v(A.q(), v, D); }

bool nsupp_minimal(const QMat& A, const GVec& v, long box) {
    Index ns;
    for (int i = 0; i < (int)v.size(); ++i)
        if (v[i].is_negative_integer()) ns.push_back(i);
    if (ns.empty()) return true;
    for (const IVec& u : integer_kernel_vectors(A, first_simplex(A), box)) {
        Index ns2;
        for (int i = 0; i < (int)v.size(); ++i)
            if ((v[i] + GQ(u[i])).is_negative_integer()) ns2.push_back(i);
        if (ns2.size() < ns.size() && std::includes(ns.begin(), ns.end(), ns2.begin(), ns2.end())) return false;
    }
    return true;
}

TruncatedSeries psi_v(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const Exponent& v, Truncation tr) {
    int n = A.n();
    if ((int)w.size() != n) throw Error(ErrorKind::Input, "weight vector has wrong length");
    TruncatedSeries phi = phi_enumerate(A.q(), v, tr.x_degree, DegreeCap{w, tr.t_order});
    GQ gamma = -alpha;
    for (int i = 0; i < n; ++i) gamma += GQ(w[i]) * v.v[i];

    TruncatedSeries f;
    f.base = v.v;
    f.base.push_back(gamma);
    f.t_index = n;
    for (auto row : phi.rel) {
        row.push_back(0);
        f.rel.push_back(row);
    }
    IVec wr = w;
    wr.push_back(-1);
    f.rel.push_back(wr);
    f.rhs.assign(f.rel.size(), 0);
    f.lo = phi.lo;
    f.hi = phi.hi;
    f.lo.push_back(std::nullopt);
    f.hi.push_back(std::nullopt);
    f.window = phi.window;
    f.x_degree = phi.x_degree;
    f.t_hi = tr.t_order;
    for (const auto& [u, c] : phi.terms) {
        long m = 0;
        for (int i = 0; i < n; ++i) m += w[i] * u[i];
        if (m < 0) throw Error(ErrorKind::NegativeTExponent, "v is not an exponent for this weight: w·u < 0 on its support");
        if (m > tr.t_order) continue;
        IVec um = u;
        um.push_back(m);
        f.terms.emplace(um, c);
    }
    return f;
}

std::vector<Exponent> exponents_for_weight(const ConfigMatrix& A, const GVec& beta, const QVec& w, long bound) {
    Triangulation T = regular_triangulation(A, perturb_weight(A.n(), w));
    QMat M = A.q();
    std::vector<Exponent> out;
    for (const auto& s : T.simplices)
        for (const IVec& k : lattice_representatives(A, s, bound)) out.push_back(exponent_from_k(M, beta, s, k));
    return out;
}

long count_formal_solutions(const ConfigMatrix& A, const QVec& w) {
    Q v = regular_triangulation(A, perturb_weight(A.n(), w)).volume();
    return v.get_num().get_si();
}

std::vector<GQ> indicial_roots(const ConfigMatrix& A, const QVec& w, const GVec& beta) {
    std::vector<GQ> roots;
    for (const auto& e : exponents_for_weight(A, beta, w)) {
        GQ s(0);
        for (int i = 0; i < A.n(); ++i) s += GQ(w[i]) * e.v[i];
        roots.push_back(s);
    }
    return roots;
}

GevreyCoordinate gevrey_index_coordinate(const QMat& A, const Simplex& s) {
    GevreyCoordinate g{Q(1), {}};
    for (int j = 0; j < (int)A[0].size(); ++j) {
        Q nrm = simplex_norm(s, column(A, j));
        if (nrm > g.s) g.s = nrm;
        if (nrm > 1) g.Z.push_back(j);
    }
    return g;
}

std::map<int, Q> gevrey_index_T_ratios(const QMat& A, const QVec& w, const Simplex& s) {
    std::map<int, Q> out;
    int n = (int)A[0].size();
    Index off = complement(s.idx, n);
    auto B = simplex_kernel_matrix(A, s);
    for (size_t t = 0; t < off.size(); ++t) {
        Q size = 0;
        for (const Q& x : B[t]) size += x;
        Q wb = dot(w, B[t]);
        if (sgn(wb) != 0) out[off[t]] = -size / wb;
    }
    return out;
}

Q gevrey_index_T(const QMat& A, const QVec& w, const Simplex& s) {
    int n = (int)A[0].size();
    Index off = complement(s.idx, n);
    auto B = simplex_kernel_matrix(A, s);
    std::optional<Q> r;
    for (size_t t = 0; t < off.size(); ++t) {
        Q wb = dot(w, B[t]);
        if (sgn(wb) <= 0) continue;
        Q size = 0;
        for (const Q& x : B[t]) size += x;
        Q c = -size / wb;
        if (!r || c > *r) r = c;
    }
    return r ? *r : Q(0);
}

std::vector<Exponent> infinity_exponents(const QMat& A, const GVec& beta, const Simplex& s, int j, long count,
                                         long bound) {
    int d = (int)A.size(), n = (int)A[0].size();
    Index off = complement(s.idx, n);
    auto pos = std::find(off.begin(), off.end(), j);
    if (pos == off.end()) throw Error(ErrorKind::Input, "the infinity column lies in the simplex");
    size_t pj = pos - off.begin();
    long vol = s.vol().get_num().get_si();
    if (count < 0 || count > vol) count = vol;

    std::vector<Exponent> out;
    std::vector<QVec> images;
    for (long deg = 0; deg <= bound && (long)out.size() < count; ++deg) {
        // compositions of deg, first coordinate largest first
        std::vector<IVec> parts;
        IVec cur(off.size());
        std::function<void(size_t, long)> comp = [&](size_t p, long left) {
            if (p + 1 == off.size()) {
                cur[p] = left;
                parts.push_back(cur);
                return;
            }
            for (long a = left; a >= 0; --a) {
                cur[p] = a;
                comp(p + 1, left - a);
            }
        };
        comp(0, deg);
        for (IVec k : parts) {
            k[pj] = -1 - k[pj];
            QVec y(d);
            for (size_t t = 0; t < off.size(); ++t)
                for (int i = 0; i < d; ++i) y[i] += Q(k[t]) * A[i][off[t]];
            bool fresh = true;
            for (const auto& z : images) {
                QVec diff(d);
                for (int i = 0; i < d; ++i) diff[i] = y[i] - z[i];
                if (in_simplex_lattice(s, diff)) {
                    fresh = false;
                    break;
                }
            }
            if (!fresh) continue;
            images.push_back(y);
            out.push_back(exponent_from_k(A, beta, s, k, j));
            if ((long)out.size() == count) break;
        }
    }
    if ((long)out.size() < count) throw Error(ErrorKind::BoundExhausted, "not enough exponents at infinity within bound");
    return out;
}

std::vector<Exponent> exponents_at_infinity(const ConfigMatrix& A, const GVec& beta, const Simplex& s, int j,
                                            long count, long bound) {
    auto rep = slopes_at_infinity(A, j);
    bool ok = false;
    for (const auto& w : rep.witnesses)
        if (std::includes(w.facet.begin(), w.facet.end(), s.idx.begin(), s.idx.end())) ok = true;
    if (!ok) throw Error(ErrorKind::Input, "simplex does not lie in a facet witnessing a slope at infinity");
    return infinity_exponents(A.q(), beta, s, j, count, bound);
}

// Replace the t offset u_t by c0 − u_t and move the base to new_base.
static TruncatedSeries reflect_t(const TruncatedSeries& f, const GQ& new_base, long c0,
                                 const std::function<GQ(long)>& factor) {
    int t = f.t_index;
    TruncatedSeries g = f;
    g.base[t] = new_base;
    g.terms.clear();
    for (const auto& [u, c] : f.terms) {
        IVec v = u;
        v[t] = c0 - u[t];
        g.terms.emplace(v, c * factor(v[t]));
    }
    for (size_t r = 0; r < g.rel.size(); ++r) {
        g.rhs[r] -= g.rel[r][t] * c0;
        g.rel[r][t] = -g.rel[r][t];
    }
    g.lo[t] = f.hi[t] ? std::optional<long>(c0 - *f.hi[t]) : std::nullopt;
    g.hi[t] = f.lo[t] ? std::optional<long>(c0 - *f.lo[t]) : std::nullopt;
    for (auto& w : g.window) {
        if (w.coord != t) continue;
        w.offset -= w.sign * c0;
        w.sign = -w.sign;
    }
    g.t_lo = f.t_hi ? std::optional<long>(c0 - *f.t_hi) : std::nullopt;
    g.t_hi = f.t_lo ? std::optional<long>(c0 - *f.t_lo) : std::nullopt;
    return g;
}

static void check_gamma(const GQ& gamma) {
    if (gamma.is_negative_integer()) throw Error(ErrorKind::DomainViolation, "upsilon is not invertible at a negative integer");
}

TruncatedSeries upsilon(const TruncatedSeries& f, const GQ& gamma) {
    if (f.t_index < 0) throw Error(ErrorKind::Input, "series has no t coordinate");
    check_gamma(gamma);
    if (f.base[f.t_index] != gamma) throw Error(ErrorKind::Input, "series t exponents are not gamma + m");
    GQ g1 = -gamma - GQ(1);
    for (const auto& [u, c] : f.terms)
        if (u[f.t_index] < 0) throw Error(ErrorKind::Input, "negative t offset");
    // t^{γ+m} -> [−γ−1]_m t^{−1−γ−m}
    return reflect_t(f, g1, 0, [&](long mneg) { return pochhammer(g1, -mneg); });
}

TruncatedSeries upsilon_inverse(const TruncatedSeries& f, const GQ& gamma) {
    if (f.t_index < 0) throw Error(ErrorKind::Input, "series has no t coordinate");
    check_gamma(gamma);
    GQ g1 = -gamma - GQ(1);
    GQ c = g1 - f.base[f.t_index];
    if (!c.is_integer()) throw Error(ErrorKind::Input, "series t exponents are not -1 - gamma - m");
    long c0 = c.re.get_num().get_si();
    for (const auto& [u, co] : f.terms)
        if (c0 - u[f.t_index] < 0) throw Error(ErrorKind::Input, "negative t offset after inversion");
    return reflect_t(f, gamma, c0, [&](long m) { return GQ(1) / pochhammer(g1, m); });
}

ModConvergent modified_solutions_mod_convergent(const ConfigMatrix& A, const IVec& w, const GQ& alpha,
                                                const GVec& beta, Truncation tr) {
    ModConvergent out;
    auto rep = modified_slopes_along_T(A, w);
    out.slopes = rep.slopes;
    if (rep.witnesses.empty()) return out;
    int n = A.n();
    QMat At = to_q(atilde(A, w));
    QMat Aw = a_w(A, w);
    GVec bt = beta;
    bt.push_back(alpha - GQ(1));
    for (const auto& wit : rep.witnesses) {
        QMat Mt = submatrix(Aw, wit.facet);
        auto T = regular_triangulation(Mt, perturb_weight((int)wit.facet.size(), QVec(wit.facet.size(), Q(0))));
        for (const auto& local : T.simplices) {
            Index sigma;
            for (int k : local.idx) sigma.push_back(wit.facet[k]);
            Simplex s = make_simplex(At, sigma);
            long vol = s.vol().get_num().get_si();
            out.multiplicity += vol;
            for (const auto& e : infinity_exponents(At, bt, s, n, vol)) {
                TruncatedSeries phi = phi_v(At, e, tr.x_degree);
                phi.t_index = n;
                TruncatedSeries psi = upsilon_inverse(phi, GQ(0));
                if (!psi.t_hi || *psi.t_hi > tr.t_order) psi.t_hi = tr.t_order;
                for (auto it = psi.terms.begin(); it != psi.terms.end();) {
                    if (it->first[n] > tr.t_order) it = psi.terms.erase(it);
                    else ++it;
                }
                out.series.push_back(std::move(psi));
                out.exponents.push_back(e);
                out.facets.push_back(wit.facet);
            }
        }
    }
    return out;
}

IVec sigma_weight_vector(const QMat& A, const Simplex& s) {
    int n = (int)A[0].size();
    IVec w(n, 0);
    for (int i = 0; i < n; ++i) {
        Q nrm = simplex_norm(s, column(A, i));
        if (nrm <= 1) continue;
        Q x = s.vol() * (nrm - 1);
        if (x.get_den() != 1) throw Error(ErrorKind::Input, "sigma weight vector is not integral");
        w[i] = x.get_num().get_si();
    }
    return w;
}

bool nsupp_stability_scan(const QMat& A, const GVec& beta, long bound) {
    int d = (int)A.size(), n = (int)A[0].size();
    Index idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    while (true) {
        if (sgn(det(submatrix(A, idx))) != 0) {
            Simplex s = make_simplex(A, idx);
            GVec base = apply_rational(s.inv, beta);
            // det·coordinate non-integral means no integer shift reaches Z
            bool safe = true;
            for (const GQ& x : base)
                if ((x * GQ(s.vol())).is_integer()) safe = false;
            if (!safe) {
                Index off = complement(idx, n);
                QMat M(d, QVec(off.size()));
                for (size_t t = 0; t < off.size(); ++t) {
                    QVec y = mat_vec(s.inv, column(A, off[t]));
                    for (int i = 0; i < d; ++i) M[i][t] = y[i];
                }
                IVec k(off.size());
                bool clean = true;
                std::function<void(size_t, long)> rec = [&](size_t t, long budget) {
                    if (!clean) return;
                    if (t == off.size()) {
                        for (int i = 0; i < d; ++i) {
                            GQ x = base[i];
                            for (size_t q = 0; q < off.size(); ++q) x -= GQ(M[i][q] * k[q]);
                            if (x.is_integer()) clean = false;
                        }
                        return;
                    }
                    for (long a = -budget; a <= budget; ++a) {
                        k[t] = a;
                        rec(t + 1, budget - std::labs(a));
                    }
                };
                rec(0, bound);
                if (!clean) return false;
            }
        }
        int i = d - 1;
        while (i >= 0 && idx[i] == n - d + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int t = i + 1; t < d; ++t) idx[t] = idx[t - 1] + 1;
    }
    return true;
}

GVec generic_parameter_sampler(const ConfigMatrix& A, long degree_bound, std::uint64_t seed) {
    std::vector<long> primes;
    for (long p = 10007; primes.size() < 64; p += 2) {
        bool prime = true;
        for (long q = 3; q * q <= p; q += 2)
            if (p % q == 0) {
                prime = false;
                break;
            }
        if (prime) primes.push_back(p);
    }
    std::mt19937_64 gen(seed);
    QMat M = A.q();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        GVec beta;
        std::vector<long> used;
        for (int i = 0; i < A.d(); ++i) {
            long p;
            do p = primes[gen() % primes.size()];
            while (std::find(used.begin(), used.end(), p) != used.end());
            used.push_back(p);
            long num;
            do num = (long)(gen() % (unsigned long)(6 * p)) - 3 * p;
            while (num % p == 0);
            beta.push_back(GQ(Q(num, p)));
            beta.back().re.canonicalize();
        }
        if (nsupp_stability_scan(M, beta, degree_bound)) return beta;
    }
    throw Error(ErrorKind::BoundExhausted, "no generic parameter found");
}

}  // namespace gkz
