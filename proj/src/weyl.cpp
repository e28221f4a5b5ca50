#include "gkz/weyl.hpp"

#include <algorithm>

namespace gkz {

static IVec concat(const IVec& a, const IVec& b) {
    IVec k = a;
    k.insert(k.end(), b.begin(), b.end());
    return k;
}

static void accumulate(std::map<IVec, GQ>& m, const IVec& k, const GQ& c) {
    if (c.is_zero()) return;
    auto it = m.find(k);
    if (it == m.end()) {
        m.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) m.erase(it);
}

WeylOperator WeylOperator::constant(int N, const GQ& c) {
    WeylOperator P(N);
    P.add_term(IVec(N, 0), IVec(N, 0), c);
    return P;
}

WeylOperator WeylOperator::x(int N, int i) {
    IVec a(N, 0);
    a[i] = 1;
    return monomial(a, IVec(N, 0));
}

WeylOperator WeylOperator::d(int N, int i) {
    IVec b(N, 0);
    b[i] = 1;
    return monomial(IVec(N, 0), b);
}

WeylOperator WeylOperator::monomial(const IVec& a, const IVec& b, const GQ& c) {
    if (a.size() != b.size()) throw Error(ErrorKind::Input, "monomial exponent lengths differ");
    WeylOperator P((int)a.size());
    P.add_term(a, b, c);
    return P;
}

void WeylOperator::add_term(const IVec& a, const IVec& b, const GQ& c) {
    if ((int)a.size() != N_ || (int)b.size() != N_) throw Error(ErrorKind::Input, "operator term has wrong length");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] < 0 || b[i] < 0) throw Error(ErrorKind::Input, "negative exponent in an operator");
    accumulate(terms_, concat(a, b), c);
}

long WeylOperator::order() const {
    long o = 0;
    for (const auto& [k, c] : terms_) {
        long s = 0;
        for (int i = 0; i < N_; ++i) s += k[N_ + i];
        o = std::max(o, s);
    }
    return o;
}

static void check_same(const WeylOperator& P, const WeylOperator& Q) {
    if (P.nvars() != Q.nvars() && !P.is_zero() && !Q.is_zero())
        throw Error(ErrorKind::Input, "operators live in different Weyl algebras");
}

WeylOperator& WeylOperator::operator+=(const WeylOperator& o) {
    check_same(*this, o);
    if (N_ == 0) N_ = o.N_;
    for (const auto& [k, c] : o.terms_) accumulate(terms_, k, c);
    return *this;
}

WeylOperator& WeylOperator::operator-=(const WeylOperator& o) {
    check_same(*this, o);
    if (N_ == 0) N_ = o.N_;
    for (const auto& [k, c] : o.terms_) accumulate(terms_, k, -c);
    return *this;
}

WeylOperator WeylOperator::operator-() const { return scaled(GQ(-1)); }

WeylOperator WeylOperator::scaled(const GQ& c) const {
    WeylOperator P(N_);
    if (c.is_zero()) return P;
    for (const auto& [k, v] : terms_) P.terms_.emplace(k, v * c);
    return P;
}

static std::string monomial_str(const IVec& k, int N, const char* xs, const char* ds) {
    std::string s;
    auto put = [&](const char* name, int i, long e) {
        if (e == 0) return;
        if (!s.empty()) s += "*";
        s += name + std::to_string(i + 1);
        if (e > 1) s += "^" + std::to_string(e);
    };
    for (int i = 0; i < N; ++i) put(xs, i, k[i]);
    for (int i = 0; i < N; ++i) put(ds, i, k[N + i]);
    return s;
}

static std::string sum_str(const std::map<IVec, GQ>& terms, int N, const char* xs, const char* ds) {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms) {
        std::string m = monomial_str(k, N, xs, ds);
        std::string cs = to_string(c);
        if (!c.is_real() && !m.empty()) cs = "(" + cs + ")";
        std::string term;
        if (m.empty()) term = cs;
        else if (c == GQ(1)) term = m;
        else if (c == GQ(-1)) term = "-" + m;
        else term = cs + "*" + m;
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

std::string WeylOperator::str() const { return sum_str(terms_, N_, "x", "d"); }

static Q binom(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
    return Q(r);
}

static Q falling_int(long c, long k) {
    Q r = 1;
    for (long j = 0; j < k; ++j) r *= c - j;
    return r;
}

WeylOperator operator*(const WeylOperator& P, const WeylOperator& Q) {
    check_same(P, Q);
    int N = std::max(P.nvars(), Q.nvars());
    WeylOperator R(N);
    for (const auto& [kp, cp] : P.terms())
        for (const auto& [kq, cq] : Q.terms()) {
            // x^a (∂^b x^c) ∂^e, with ∂^b x^c = Π_i Σ_k C(b_i,k) [c_i]_k x^{c_i−k} ∂^{b_i−k}
            IVec kk(N, 0);
            std::function<void(int, GQ)> rec = [&](int i, GQ coef) {
                if (i == N) {
                    IVec a(N), b(N);
                    for (int j = 0; j < N; ++j) {
                        a[j] = kp[j] + kq[j] - kk[j];
                        b[j] = kp[N + j] - kk[j] + kq[N + j];
                    }
                    R.add_term(a, b, coef);
                    return;
                }
                long bi = kp[N + i], ci = kq[i];
                for (long k = 0; k <= std::min(bi, ci); ++k) {
                    kk[i] = k;
                    rec(i + 1, coef * GQ(binom(bi, k) * falling_int(ci, k)));
                }
            };
            rec(0, cp * cq);
        }
    return R;
}

bool operator==(const WeylOperator& P, const WeylOperator& Q) {
    if (P.is_zero() || Q.is_zero()) return P.is_zero() && Q.is_zero();
    return P.nvars() == Q.nvars() && P.terms() == Q.terms();
}

WeylOperator theta(int N, int i) { return WeylOperator::x(N, i) * WeylOperator::d(N, i); }

static WeylOperator power(const WeylOperator& P, long e) {
    WeylOperator R = WeylOperator::constant(P.nvars(), GQ(1));
    for (long k = 0; k < e; ++k) R = R * P;
    return R;
}

// image of each term: variables other than j unchanged, x_j^a ∂_j^b ↦ img_x^a img_d^b
static WeylOperator substitute(const WeylOperator& P, int j, const WeylOperator& img_x, const WeylOperator& img_d) {
    int N = P.nvars();
    if (j < 0 || j >= N) throw Error(ErrorKind::Input, "Fourier variable out of range");
    WeylOperator R(N);
    for (const auto& [k, c] : P.terms()) {
        IVec a(k.begin(), k.begin() + N), b(k.begin() + N, k.end());
        long aj = a[j], bj = b[j];
        a[j] = 0;
        b[j] = 0;
        WeylOperator rest = WeylOperator::monomial(a, b, c);
        R += rest * (power(img_x, aj) * power(img_d, bj));
    }
    return R;
}

WeylOperator fourier(const WeylOperator& P, int j) {
    int N = P.nvars();
    return substitute(P, j, -WeylOperator::d(N, j), WeylOperator::x(N, j));
}

WeylOperator fourier_inverse(const WeylOperator& P, int j) {
    int N = P.nvars();
    return substitute(P, j, WeylOperator::d(N, j), -WeylOperator::x(N, j));
}

void Poly::add_term(const IVec& e, const GQ& c) {
    if ((int)e.size() != 2 * N) throw Error(ErrorKind::Input, "polynomial term has wrong length");
    accumulate(terms, e, c);
}

std::string Poly::str() const { return sum_str(terms, N, "x", "xi"); }

bool operator==(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.N == b.N && a.terms == b.terms;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r{std::max(a.N, b.N), {}};
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            IVec k(ka.size());
            for (size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
            r.add_term(k, ca * cb);
        }
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    if (r.N == 0) r.N = b.N;
    for (const auto& [k, c] : b.terms) r.add_term(k, -c);
    return r;
}

bool WeightVector::positive() const {
    for (size_t i = 0; i < u.size(); ++i)
        if (u[i] + v[i] <= 0) return false;
    return true;
}

Poly initial_form(const WeylOperator& P, const WeightVector& L) {
    int N = P.nvars();
    Poly r{N, {}};
    if (P.is_zero()) return r;
    if ((int)L.u.size() != N || (int)L.v.size() != N) throw Error(ErrorKind::Input, "weight vector has wrong length");
    std::optional<Q> top;
    for (const auto& [k, c] : P.terms()) {
        Q deg = 0;
        for (int i = 0; i < N; ++i) deg += L.u[i] * k[i] + L.v[i] * k[N + i];
        if (!top || deg > *top) {
            top = deg;
            r.terms.clear();
        }
        if (deg == *top) r.terms.emplace(k, c);
    }
    return r;
}

WeightVector fourier_weight(const WeightVector& L, int j) {
    WeightVector F = L;
    std::swap(F.u[j], F.v[j]);
    return F;
}

Poly fourier_inverse(const Poly& p, int j) {
    Poly r{p.N, {}};
    for (const auto& [k0, c] : p.terms) {
        IVec k = k0;
        long a = k[j], b = k[p.N + j];
        k[j] = b;
        k[p.N + j] = a;
        r.add_term(k, b % 2 ? -c : c);
    }
    return r;
}

Poly fourier(const Poly& p, int j) {
    Poly r{p.N, {}};
    for (const auto& [k0, c] : p.terms) {
        IVec k = k0;
        long a = k[j], b = k[p.N + j];
        k[j] = b;
        k[p.N + j] = a;
        r.add_term(k, a % 2 ? -c : c);
    }
    return r;
}

static bool deglex_less(const IVec& a, const IVec& b) {
    long da = 0, db = 0;
    for (long x : a) da += x;
    for (long x : b) db += x;
    if (da != db) return da < db;
    return a < b;
}

static const IVec& leading(const Poly& p) {
    auto best = p.terms.begin();
    for (auto it = p.terms.begin(); it != p.terms.end(); ++it)
        if (deglex_less(best->first, it->first)) best = it;
    return best->first;
}

bool reduces_to_zero(Poly p, const std::vector<Poly>& divisors) {
    while (!p.is_zero()) {
        IVec lt = leading(p);
        GQ lc = p.terms.at(lt);
        bool reduced = false;
        for (const auto& g : divisors) {
            if (g.is_zero()) continue;
            const IVec& lg = leading(g);
            IVec q(lt.size());
            bool divides = true;
            for (size_t i = 0; i < lt.size(); ++i) {
                q[i] = lt[i] - lg[i];
                if (q[i] < 0) divides = false;
            }
            if (!divides) continue;
            Poly mono{p.N, {}};
            mono.add_term(q, lc / g.terms.at(lg));
            p = p - mono * g;
            reduced = true;
            break;
        }
        if (!reduced) return false;
    }
    return true;
}

const char* system_kind_name(SystemKind k) {
    switch (k) {
    case SystemKind::HA: return "HA";
    case SystemKind::Modified: return "modified";
    case SystemKind::Atilde: return "Atilde";
    case SystemKind::Borel: return "Borel";
    }
    return "";
}

std::vector<WeylOperator> System::all() const {
    std::vector<WeylOperator> r = euler;
    r.insert(r.end(), toric.begin(), toric.end());
    return r;
}

std::vector<IVec> kernel_vectors_by_norm(const IMat& M, long bound) {
    QMat Mq = to_q(M);
    int d = (int)M.size(), n = (int)M[0].size();
    Index idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    while (sgn(det(submatrix(Mq, idx))) == 0) {
        int i = d - 1;
        while (i >= 0 && idx[i] == n - d + i) --i;
        if (i < 0) throw Error(ErrorKind::Input, "matrix does not have full row rank");
        ++idx[i];
        for (int t = i + 1; t < d; ++t) idx[t] = idx[t - 1] + 1;
    }
    Simplex s = make_simplex(Mq, idx);
    Index off = complement(idx, n);
    QMat C(d, QVec(off.size()));
    for (size_t t = 0; t < off.size(); ++t) {
        QVec y = mat_vec(s.inv, column(Mq, off[t]));
        for (int i = 0; i < d; ++i) C[i][t] = y[i];
    }
    std::vector<IVec> out;
    IVec k(off.size());
    std::function<void(size_t, long)> rec = [&](size_t t, long budget) {
        if (t == off.size()) {
            IVec l(n, 0);
            long norm = 0;
            for (size_t q = 0; q < off.size(); ++q) {
                l[off[q]] = k[q];
                norm += std::labs(k[q]);
            }
            if (norm == 0) return;
            for (int i = 0; i < d; ++i) {
                Q x = 0;
                for (size_t q = 0; q < off.size(); ++q) x -= C[i][q] * k[q];
                if (x.get_den() != 1) return;
                l[idx[i]] = x.get_num().get_si();
                norm += std::labs(l[idx[i]]);
            }
            if (norm > bound) return;
            for (long x : l) {
                if (x > 0) break;
                if (x < 0) return;  // keep the representative with a positive leading entry
            }
            out.push_back(l);
            return;
        }
        for (long a = -budget; a <= budget; ++a) {
            k[t] = a;
            rec(t + 1, budget - std::labs(a));
        }
    };
    rec(0, bound);
    std::sort(out.begin(), out.end(), [](const IVec& a, const IVec& b) {
        long na = 0, nb = 0;
        for (long x : a) na += std::labs(x);
        for (long x : b) nb += std::labs(x);
        return na != nb ? na < nb : a > b;
    });
    return out;
}

static void split(const IVec& l, IVec& plus, IVec& minus) {
    plus.assign(l.size(), 0);
    minus.assign(l.size(), 0);
    for (size_t i = 0; i < l.size(); ++i) (l[i] > 0 ? plus[i] : minus[i]) = std::labs(l[i]);
}

static WeylOperator euler_row(const IVec& row, const GQ& beta) {
    int N = (int)row.size();
    WeylOperator E = WeylOperator::constant(N, -beta);
    for (int j = 0; j < N; ++j)
        if (row[j]) E += theta(N, j).scaled(GQ(row[j]));
    return E;
}

System gkz_system(const IMat& M, const GVec& beta, long degree_bound) {
    if (beta.size() != M.size()) throw Error(ErrorKind::Input, "beta has wrong length");
    System S;
    S.kind = SystemKind::HA;
    S.N = (int)M[0].size();
    S.matrix = M;
    S.beta = beta;
    for (size_t i = 0; i < M.size(); ++i) S.euler.push_back(euler_row(M[i], beta[i]));
    IVec zero(S.N, 0);
    for (const IVec& l : kernel_vectors_by_norm(M, degree_bound)) {
        IVec p, m;
        split(l, p, m);
        S.toric.push_back(WeylOperator::monomial(zero, p) - WeylOperator::monomial(zero, m));
        S.kernel.push_back(l);
    }
    return S;
}

System modified_system(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const GVec& beta, long degree_bound) {
    int n = A.n(), N = n + 1;
    if ((int)w.size() != n) throw Error(ErrorKind::Input, "weight vector has wrong length");
    if ((int)beta.size() != A.d()) throw Error(ErrorKind::Input, "beta has wrong length");
    System S;
    S.kind = SystemKind::Modified;
    S.N = N;
    S.matrix = A.rows();
    S.beta = beta;
    S.beta.push_back(alpha);
    for (int i = 0; i < A.d(); ++i) {
        IVec row = A.rows()[i];
        row.push_back(0);
        S.euler.push_back(euler_row(row, beta[i]));
    }
    IVec last = w;
    last.push_back(-1);
    S.euler.push_back(euler_row(last, alpha));
    for (const IVec& l : kernel_vectors_by_norm(A.rows(), degree_bound)) {
        IVec p, m;
        split(l, p, m);
        long wl = 0;
        for (int j = 0; j < n; ++j) wl += w[j] * l[j];
        p.push_back(0);
        m.push_back(0);
        IVec tp(N, 0), tm(N, 0);
        (wl > 0 ? tm : tp)[n] = std::labs(wl);
        S.toric.push_back(WeylOperator::monomial(tp, p) - WeylOperator::monomial(tm, m));
        IVec lt = l;
        lt.push_back(-wl);
        S.kernel.push_back(lt);
    }
    return S;
}

System atilde_system(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const GVec& beta, long degree_bound) {
    int n = A.n(), N = n + 1;
    if ((int)w.size() != n) throw Error(ErrorKind::Input, "weight vector has wrong length");
    if ((int)beta.size() != A.d()) throw Error(ErrorKind::Input, "beta has wrong length");
    System S;
    S.kind = SystemKind::Atilde;
    S.N = N;
    for (int i = 0; i < A.d(); ++i) {
        IVec row = A.rows()[i];
        row.push_back(0);
        S.matrix.push_back(row);
    }
    IVec last = w;
    last.push_back(1);
    S.matrix.push_back(last);
    S.beta = beta;
    S.beta.push_back(alpha - GQ(1));
    for (size_t i = 0; i < S.matrix.size(); ++i) S.euler.push_back(euler_row(S.matrix[i], S.beta[i]));
    IVec zero(N, 0);
    for (const IVec& l : kernel_vectors_by_norm(A.rows(), degree_bound)) {
        long wl = 0;
        for (int j = 0; j < n; ++j) wl += w[j] * l[j];
        IVec lt = l;
        lt.push_back(-wl);
        IVec p, m;
        split(lt, p, m);
        S.toric.push_back(WeylOperator::monomial(zero, p) - WeylOperator::monomial(zero, m));
        S.kernel.push_back(lt);
    }
    return S;
}

SeriesAction as_action(const TruncatedSeries& f) {
    SeriesAction a;
    a.base = f.base;
    a.t_index = f.t_index;
    a.borel = f.borel;
    a.values = f.terms;
    for (const auto& [u, c] : f.terms) a.reached.insert(u);
    a.decided = [f](const IVec& u) { return f.decided(u); };
    return a;
}

SeriesAction apply(const WeylOperator& P, const SeriesAction& f) {
    int N = (int)f.base.size();
    if (!P.is_zero() && P.nvars() != N) throw Error(ErrorKind::Input, "operator and series have different variable counts");
    SeriesAction r;
    r.base = f.base;
    r.t_index = f.t_index;
    r.borel = f.borel;
    std::vector<IVec> shifts;
    for (const auto& [k, c] : P.terms()) {
        IVec sh(N);
        for (int i = 0; i < N; ++i) sh[i] = k[i] - k[N + i];
        shifts.push_back(sh);
        for (const auto& [u, val] : f.values) {
            GQ coef = c * val;
            for (int i = 0; i < N && !coef.is_zero(); ++i) {
                long a = k[i], b = k[N + i];
                GQ e = f.base[i] + GQ(u[i]);
                if (f.borel && i == f.t_index) {
                    // ζ^e/Γ(1+e): ∂ keeps the coefficient, ζ multiplies by (e−b+1)_a rising
                    for (long j = 0; j < a; ++j) coef *= e - GQ(b) + GQ(1 + j);
                } else {
                    coef *= pochhammer(e, b);
                }
            }
            IVec v(N);
            for (int i = 0; i < N; ++i) v[i] = u[i] + sh[i];
            r.reached.insert(v);
            accumulate(r.values, v, coef);
        }
    }
    auto prev = f.decided;
    r.decided = [prev, shifts](const IVec& v) {
        IVec u(v.size());
        for (const auto& sh : shifts) {
            for (size_t i = 0; i < v.size(); ++i) u[i] = v[i] - sh[i];
            if (!prev(u)) return false;
        }
        return true;
    };
    return r;
}

SeriesAction apply(const WeylOperator& P, const TruncatedSeries& f) { return apply(P, as_action(f)); }

bool AnnihilationReport::all_zero() const {
    for (const auto& g : generators)
        if (!g.zero()) return false;
    return true;
}

long AnnihilationReport::checked() const {
    long s = 0;
    for (const auto& g : generators) s += g.checked;
    return s;
}

AnnihilationReport annihilation_report(const std::vector<WeylOperator>& gens, const TruncatedSeries& f) {
    AnnihilationReport rep;
    SeriesAction base = as_action(f);
    for (const auto& P : gens) {
        GeneratorReport g;
        g.op = P;
        if (!P.is_zero()) {
            SeriesAction r = apply(P, base);
            for (const IVec& u : r.reached) {
                if (!r.decided(u)) continue;
                ++g.checked;
                auto it = r.values.find(u);
                if (it != r.values.end()) g.residues.push_back({u, it->second});
            }
        }
        rep.generators.push_back(std::move(g));
    }
    return rep;
}

bool residues_confined(const AnnihilationReport& r, int j, long lo, long hi) {
    for (const auto& g : r.generators)
        for (const auto& res : g.residues)
            if (res.u[j] < lo || res.u[j] > hi) return false;
    return true;
}

}  // namespace gkz
