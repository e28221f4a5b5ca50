#include "gkz/exactla.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace gkz {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::SingularSimplex: return "SingularSimplex";
    case ErrorKind::NonSimplicialCell: return "NonSimplicialCell";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::NoSlope: return "NoSlope";
    case ErrorKind::BoundExhausted: return "BoundExhausted";
    case ErrorKind::NegativeTExponent: return "NegativeTExponent";
    case ErrorKind::GammaPole: return "GammaPole";
    case ErrorKind::SingularDirection: return "SingularDirection";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::Precision: return "PrecisionError";
    case ErrorKind::StepTooClose: return "StepTooClose";
    }
    return "Error";
}

GQ& GQ::operator*=(const GQ& o) {
    Q r = re * o.re - im * o.im;
    Q i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
}

GQ& GQ::operator/=(const GQ& o) {
    Q n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0) throw Error(ErrorKind::DomainViolation, "division by zero");
    Q r = (re * o.re + im * o.im) / n;
    Q i = (im * o.re - re * o.im) / n;
    re = r;
    im = i;
    return *this;
}

static std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

Q parse_rational(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) throw Error(ErrorKind::Input, "empty rational");
    auto bad = [&] { return Error(ErrorKind::Input, "malformed rational: " + raw); };
    if (s.find_first_of(".eE") != std::string::npos) {
        // decimal with optional exponent, converted exactly
        size_t epos = s.find_first_of("eE");
        std::string mant = s.substr(0, epos);
        long ex = 0;
        if (epos != std::string::npos) {
            try {
                ex = std::stol(s.substr(epos + 1));
            } catch (...) {
                throw bad();
            }
        }
        bool neg = false;
        size_t i = 0;
        if (i < mant.size() && (mant[i] == '+' || mant[i] == '-')) neg = mant[i++] == '-';
        std::string digits;
        long frac = 0;
        bool dot = false;
        for (; i < mant.size(); ++i) {
            char c = mant[i];
            if (c == '.' && !dot) {
                dot = true;
            } else if (std::isdigit((unsigned char)c)) {
                digits += c;
                if (dot) ++frac;
            } else {
                throw bad();
            }
        }
        if (digits.empty()) throw bad();
        mpz_class num(digits, 10);
        ex -= frac;
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, (unsigned long)std::labs(ex));
        Q q = ex >= 0 ? Q(num * p10) : Q(num, p10);
        q.canonicalize();
        return neg ? Q(-q) : q;
    }
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (!(std::isdigit((unsigned char)c) || c == '/' || ((c == '-' || c == '+') && i == 0))) throw bad();
    }
    if (s[0] == '+') s = s.substr(1);
    Q q;
    if (q.set_str(s, 10) != 0) throw bad();
    if (q.get_den() == 0) throw bad();
    q.canonicalize();
    return q;
}

GQ parse_gaussian(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) throw Error(ErrorKind::Input, "empty number");
    if (s.back() != 'i') return GQ(parse_rational(s));
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not leading and not part of an exponent
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag = [](std::string t) {
        if (t.empty() || t == "+") return Q(1);
        if (t == "-") return Q(-1);
        return parse_rational(t);
    };
    if (split == std::string::npos) return GQ(Q(0), imag(body));
    return GQ(parse_rational(body.substr(0, split)), imag(body.substr(split)));
}

std::string to_string(const Q& q) {
    Q c = q;
    c.canonicalize();
    return c.get_str();
}

std::string to_string(const GQ& z) {
    if (z.is_real()) return to_string(z.re);
    std::string im = sgn(z.im) < 0 ? to_string(z.im) : "+" + to_string(z.im);
    if (sgn(z.re) == 0) return (sgn(z.im) < 0 ? im : im.substr(1)) + "i";
    return to_string(z.re) + im + "i";
}

double to_double(const Q& q) { return q.get_d(); }

Q dot(const QVec& a, const QVec& b) {
    Q s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

QVec to_q(const IVec& v) {
    QVec r;
    r.reserve(v.size());
    for (long x : v) r.emplace_back(x);
    return r;
}

QMat to_q(const IMat& m) {
    QMat r;
    for (const auto& row : m) r.push_back(to_q(row));
    return r;
}

QMat transpose(const QMat& m) {
    if (m.empty()) return {};
    QMat t(m[0].size(), QVec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

Rref rref(QMat m) {
    Rref r;
    size_t rows = m.size();
    size_t cols = rows ? m[0].size() : 0;
    size_t pr = 0;
    for (size_t c = 0; c < cols && pr < rows; ++c) {
        size_t p = pr;
        while (p < rows && sgn(m[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[pr]);
        Q piv = m[pr][c];
        for (auto& x : m[pr]) x /= piv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == pr || sgn(m[i][c]) == 0) continue;
            Q f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[pr][j];
        }
        r.pivots.push_back((int)c);
        ++pr;
    }
    r.m = std::move(m);
    return r;
}

int rank(const QMat& m) { return (int)rref(m).pivots.size(); }

Q det(const QMat& m) {
    size_t n = m.size();
    QMat a = m;
    Q d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && sgn(a[p][c]) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (sgn(a[i][c]) == 0) continue;
            Q f = a[i][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

QMat inverse(const QMat& m) {
    size_t n = m.size();
    QMat aug(n, QVec(2 * n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    Rref r = rref(aug);
    if (r.pivots.size() < n || r.pivots[n - 1] != (int)n - 1)
        throw Error(ErrorKind::SingularSimplex, "matrix is singular");
    QMat inv(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = r.m[i][n + j];
    return inv;
}

std::optional<QVec> solve(const QMat& m, const QVec& b) {
    size_t rows = m.size();
    size_t cols = rows ? m[0].size() : 0;
    QMat aug = m;
    for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    Rref r = rref(aug);
    QVec x(cols);
    for (size_t i = 0; i < r.pivots.size(); ++i) {
        int c = r.pivots[i];
        if (c == (int)cols) return std::nullopt;
        x[c] = r.m[i][cols];
    }
    return x;
}

std::vector<QVec> kernel(const QMat& m) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    Rref r = rref(m);
    std::vector<bool> is_piv(cols, false);
    for (int c : r.pivots) is_piv[c] = true;
    std::vector<QVec> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        QVec v(cols);
        v[f] = 1;
        for (size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.m[i][f];
        basis.push_back(v);
    }
    return basis;
}

QVec mat_vec(const QMat& m, const QVec& x) {
    QVec y(m.size());
    for (size_t i = 0; i < m.size(); ++i) y[i] = dot(m[i], x);
    return y;
}

ConfigMatrix::ConfigMatrix(IMat rows, bool check_lattice) : rows_(std::move(rows)) {
    d_ = (int)rows_.size();
    if (d_ == 0) throw Error(ErrorKind::Input, "matrix has no rows");
    n_ = (int)rows_[0].size();
    if (n_ == 0) throw Error(ErrorKind::Input, "matrix has no columns");
    for (const auto& r : rows_)
        if ((int)r.size() != n_) throw Error(ErrorKind::Input, "ragged matrix");
    if (rank(q()) != d_) throw Error(ErrorKind::Input, "matrix rank is smaller than its row count");
    if (check_lattice && !generates_lattice())
        throw Error(ErrorKind::Input, "columns do not generate the integer lattice");
}

IVec ConfigMatrix::col(int j) const {
    IVec c(d_);
    for (int i = 0; i < d_; ++i) c[i] = rows_[i][j];
    return c;
}

QVec ConfigMatrix::colq(int j) const { return to_q(col(j)); }

// gcd of all maximal minors equals 1
bool ConfigMatrix::generates_lattice() const {
    QMat m = q();
    mpz_class g = 0;
    Index idx(d_);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        Q dt = det(submatrix(m, idx));
        mpz_class v = abs(dt.get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) return true;
        int i = d_ - 1;
        while (i >= 0 && idx[i] == n_ - d_ + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < d_; ++k) idx[k] = idx[k - 1] + 1;
    }
    return g == 1;
}

QMat submatrix(const QMat& m, const Index& idx) {
    QMat s(m.size(), QVec(idx.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t k = 0; k < idx.size(); ++k) s[i][k] = m[i][idx[k]];
    return s;
}

QVec column(const QMat& m, int j) {
    QVec c(m.size());
    for (size_t i = 0; i < m.size(); ++i) c[i] = m[i][j];
    return c;
}

Simplex make_simplex(const QMat& m, Index idx) {
    std::sort(idx.begin(), idx.end());
    if (idx.size() != m.size()) throw Error(ErrorKind::Input, "simplex must have d columns");
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= (int)m[0].size()) throw Error(ErrorKind::Input, "column label out of range");
        if (i && idx[i] == idx[i - 1]) throw Error(ErrorKind::Input, "repeated column label");
    }
    QMat s = submatrix(m, idx);
    Simplex r;
    r.det = det(s);
    if (sgn(r.det) == 0) throw Error(ErrorKind::SingularSimplex, "columns of simplex are dependent");
    r.inv = inverse(s);
    r.idx = std::move(idx);
    return r;
}

Simplex make_simplex(const ConfigMatrix& A, Index idx) { return make_simplex(A.q(), std::move(idx)); }

Index complement(const Index& idx, int n) {
    Index r;
    for (int j = 0; j < n; ++j)
        if (!std::binary_search(idx.begin(), idx.end(), j)) r.push_back(j);
    return r;
}

std::vector<QVec> rational_kernel_basis(const ConfigMatrix& A) { return kernel(A.q()); }

std::vector<QVec> simplex_kernel_matrix(const QMat& m, const Simplex& s) {
    int n = (int)m[0].size();
    std::vector<QVec> cols;
    for (int j : complement(s.idx, n)) {
        QVec b(n);
        b[j] = 1;
        QVec y = mat_vec(s.inv, column(m, j));
        for (size_t k = 0; k < s.idx.size(); ++k) b[s.idx[k]] = -y[k];
        cols.push_back(b);
    }
    return cols;
}

std::vector<QVec> simplex_kernel_matrix(const ConfigMatrix& A, const Simplex& s) {
    return simplex_kernel_matrix(A.q(), s);
}

bool rowspan_contains(const QMat& m, const QVec& v) {
    return solve(transpose(m), v).has_value();
}

bool rowspan_contains(const ConfigMatrix& A, const QVec& v) { return rowspan_contains(A.q(), v); }

std::optional<QVec> abar_preimage(const ConfigMatrix& A, const QVec& w) {
    QMat m = A.q();
    m.push_back(QVec(A.n(), Q(1)));
    return solve(transpose(m), w);
}

bool in_image_abar(const ConfigMatrix& A, const QVec& w) { return abar_preimage(A, w).has_value(); }

bool in_simplex_lattice(const Simplex& s, const QVec& y) {
    for (const Q& x : mat_vec(s.inv, y))
        if (x.get_den() != 1) return false;
    return true;
}

// all k ≥ 0 with |k| = deg, first coordinate largest first
static void compositions(int parts, long deg, IVec& cur, int pos, std::vector<IVec>& out) {
    if (pos == parts - 1) {
        cur[pos] = deg;
        out.push_back(cur);
        return;
    }
    for (long a = deg; a >= 0; --a) {
        cur[pos] = a;
        compositions(parts, deg - a, cur, pos + 1, out);
    }
}

std::vector<IVec> lattice_representatives(const ConfigMatrix& A, const Simplex& s, long bound) {
    QMat m = A.q();
    Index off = complement(s.idx, A.n());
    mpz_class vol = s.vol().get_num();
    std::vector<IVec> reps;
    std::vector<QVec> images;
    if (off.empty()) {
        if (vol == 1) return {IVec{}};
        throw Error(ErrorKind::BoundExhausted, "no columns outside the simplex to generate the quotient");
    }
    for (long deg = 0; deg <= bound; ++deg) {
        std::vector<IVec> ks;
        IVec cur(off.size());
        compositions((int)off.size(), deg, cur, 0, ks);
        for (const IVec& k : ks) {
            QVec y(A.d());
            for (size_t t = 0; t < off.size(); ++t)
                for (int i = 0; i < A.d(); ++i) y[i] += Q(k[t]) * m[i][off[t]];
            bool fresh = true;
            for (const QVec& z : images) {
                QVec diff(A.d());
                for (int i = 0; i < A.d(); ++i) diff[i] = y[i] - z[i];
                if (in_simplex_lattice(s, diff)) {
                    fresh = false;
                    break;
                }
            }
            if (!fresh) continue;
            reps.push_back(k);
            images.push_back(y);
            if (mpz_class(reps.size()) == vol) return reps;
        }
    }
    throw Error(ErrorKind::BoundExhausted, "lattice representatives not exhausted within bound");
}

std::vector<IVec> integer_kernel_vectors(const QMat& m, const Simplex& s, long box) {
    int n = (int)m[0].size();
    Index off = complement(s.idx, n);
    std::vector<QVec> B = simplex_kernel_matrix(m, s);
    std::vector<IVec> out;
    IVec k(off.size(), -box);
    if (off.empty()) return out;
    while (true) {
        bool zero = std::all_of(k.begin(), k.end(), [](long x) { return x == 0; });
        if (!zero) {
            QVec u(n);
            for (size_t t = 0; t < off.size(); ++t)
                for (int i = 0; i < n; ++i) u[i] += Q(k[t]) * B[t][i];
            bool integral = true;
            IVec ui(n);
            for (int i = 0; i < n && integral; ++i) {
                if (u[i].get_den() != 1) integral = false;
                else ui[i] = u[i].get_num().get_si();
            }
            if (integral) out.push_back(ui);
        }
        size_t p = 0;
        while (p < k.size() && k[p] == box) k[p++] = -box;
        if (p == k.size()) break;
        ++k[p];
    }
    return out;
}

}  // namespace gkz
