#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkz {

using Q = mpq_class;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;  // row major
using IVec = std::vector<long>;
using IMat = std::vector<IVec>;
using Index = std::vector<int>;  // 0-based column labels, sorted

enum class ErrorKind {
    Input,             // malformed or invalid input (rank, lattice, lengths)
    SingularSimplex,
    NonSimplicialCell,
    NotPointed,
    NoSlope,
    BoundExhausted,
    NegativeTExponent,
    GammaPole,
    SingularDirection,
    DomainViolation,
    Precision,
    StepTooClose,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    ErrorKind kind;
};

const char* error_kind_name(ErrorKind k);

// Gaussian rational re + i*im.
struct GQ {
    Q re, im;
    GQ() = default;
    GQ(const Q& r) : re(r), im(0) {}
    GQ(long r) : re(r), im(0) {}
    GQ(const Q& r, const Q& i) : re(r), im(i) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    bool is_integer() const { return is_real() && re.get_den() == 1; }
    bool is_negative_integer() const { return is_integer() && sgn(re) < 0; }
    bool is_nonneg_integer() const { return is_integer() && sgn(re) >= 0; }

    GQ& operator+=(const GQ& o) { re += o.re; im += o.im; return *this; }
    GQ& operator-=(const GQ& o) { re -= o.re; im -= o.im; return *this; }
    GQ& operator*=(const GQ& o);
    GQ& operator/=(const GQ& o);
    GQ operator-() const { return GQ(-re, -im); }
};

inline GQ operator+(GQ a, const GQ& b) { return a += b; }
inline GQ operator-(GQ a, const GQ& b) { return a -= b; }
inline GQ operator*(GQ a, const GQ& b) { return a *= b; }
inline GQ operator/(GQ a, const GQ& b) { return a /= b; }
inline bool operator==(const GQ& a, const GQ& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const GQ& a, const GQ& b) { return !(a == b); }

using GVec = std::vector<GQ>;

Q parse_rational(const std::string& s);
// "p/q", "p", or "a+bi"-free pair form "re,im" is handled by parse_gaussian.
GQ parse_gaussian(const std::string& s);
std::string to_string(const Q& q);
std::string to_string(const GQ& z);
double to_double(const Q& q);

Q dot(const QVec& a, const QVec& b);
QVec to_q(const IVec& v);
QMat to_q(const IMat& m);
QMat transpose(const QMat& m);

struct Rref {
    QMat m;
    std::vector<int> pivots;  // pivot column of each nonzero row
};
Rref rref(QMat m);
int rank(const QMat& m);
Q det(const QMat& m);
QMat inverse(const QMat& m);
std::optional<QVec> solve(const QMat& m, const QVec& b);
std::vector<QVec> kernel(const QMat& m);
QVec mat_vec(const QMat& m, const QVec& x);

// Integer d×n configuration of rank d.  Columns generate Z^d unless the
// lattice check is switched off (extended matrices whose lattice is the
// Z-span of their columns).
class ConfigMatrix {
public:
    ConfigMatrix() = default;
    explicit ConfigMatrix(IMat rows, bool check_lattice = true);

    int d() const { return d_; }
    int n() const { return n_; }
    long operator()(int i, int j) const { return rows_[i][j]; }
    const IMat& rows() const { return rows_; }
    QMat q() const { return to_q(rows_); }
    IVec col(int j) const;
    QVec colq(int j) const;
    bool generates_lattice() const;

private:
    IMat rows_;
    int d_ = 0, n_ = 0;
};

// Columns idx of m as a square matrix.
QMat submatrix(const QMat& m, const Index& idx);
QVec column(const QMat& m, int j);

struct Simplex {
    Index idx;
    Q det;     // signed det of the columns in idx order
    QMat inv;  // inverse of that square matrix
    Q vol() const { return abs(det); }
};

Simplex make_simplex(const QMat& m, Index idx);
Simplex make_simplex(const ConfigMatrix& A, Index idx);
Index complement(const Index& idx, int n);

std::vector<QVec> rational_kernel_basis(const ConfigMatrix& A);

// Columns b_j, j not in σ in increasing order; returned as a list of n-vectors.
std::vector<QVec> simplex_kernel_matrix(const QMat& m, const Simplex& s);
std::vector<QVec> simplex_kernel_matrix(const ConfigMatrix& A, const Simplex& s);

bool rowspan_contains(const QMat& m, const QVec& v);
bool rowspan_contains(const ConfigMatrix& A, const QVec& v);

// (p, q) with p·a_i + q = w_i for all i, if any.
std::optional<QVec> abar_preimage(const ConfigMatrix& A, const QVec& w);
bool in_image_abar(const ConfigMatrix& A, const QVec& w);

// True iff y lies in Z·A_σ.
bool in_simplex_lattice(const Simplex& s, const QVec& y);

// Representatives k ≥ 0 (over the columns outside σ) of Z^d / Z·A_σ.
std::vector<IVec> lattice_representatives(const ConfigMatrix& A, const Simplex& s, long bound);

// Integer vectors of ker A with every entry bounded by `box` in absolute
// value outside σ.  Zero excluded.
std::vector<IVec> integer_kernel_vectors(const QMat& m, const Simplex& s, long box);

}  // namespace gkz
