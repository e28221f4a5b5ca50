#pragma once

#include <functional>
#include <set>
#include <string>

#include "gkz/series.hpp"

namespace gkz {

// Σ c · x^a ∂^b over N variables, x's to the left.  Keys are a followed by b.
class WeylOperator {
public:
    WeylOperator() = default;
    explicit WeylOperator(int N) : N_(N) {}

    static WeylOperator constant(int N, const GQ& c);
    static WeylOperator x(int N, int i);
    static WeylOperator d(int N, int i);
    static WeylOperator monomial(const IVec& a, const IVec& b, const GQ& c = GQ(1));

    int nvars() const { return N_; }
    const std::map<IVec, GQ>& terms() const { return terms_; }
    void add_term(const IVec& a, const IVec& b, const GQ& c);
    bool is_zero() const { return terms_.empty(); }
    long order() const;  // max total ∂-degree

    WeylOperator& operator+=(const WeylOperator& o);
    WeylOperator& operator-=(const WeylOperator& o);
    WeylOperator operator-() const;
    WeylOperator scaled(const GQ& c) const;

    std::string str() const;

private:
    int N_ = 0;
    std::map<IVec, GQ> terms_;
};

inline WeylOperator operator+(WeylOperator a, const WeylOperator& b) { return a += b; }
inline WeylOperator operator-(WeylOperator a, const WeylOperator& b) { return a -= b; }
WeylOperator operator*(const WeylOperator& P, const WeylOperator& Q);
bool operator==(const WeylOperator& P, const WeylOperator& Q);
inline bool operator!=(const WeylOperator& P, const WeylOperator& Q) { return !(P == Q); }

// θ_i = x_i ∂_i
WeylOperator theta(int N, int i);

// Fourier transform in variable j: t ↦ −∂_t, ∂_t ↦ t; the inverse t ↦ ∂_t, ∂_t ↦ −t.
WeylOperator fourier(const WeylOperator& P, int j);
WeylOperator fourier_inverse(const WeylOperator& P, int j);

// Commutative polynomial in (x, ξ); keys are exponents of x followed by ξ.
struct Poly {
    int N = 0;
    std::map<IVec, GQ> terms;
    void add_term(const IVec& e, const GQ& c);
    bool is_zero() const { return terms.empty(); }
    std::string str() const;
};
bool operator==(const Poly& a, const Poly& b);
inline bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
Poly operator*(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);

struct WeightVector {
    QVec u, v;  // weights of x and of ∂
    bool positive() const;  // u_i + v_i > 0
};

// Terms of maximal L-degree with ∂ read as ξ.
Poly initial_form(const WeylOperator& P, const WeightVector& L);
// (u, v) with the entries of variable j swapped between u and v
WeightVector fourier_weight(const WeightVector& L, int j);
// x_j ↦ ξ_j, ξ_j ↦ −x_j
Poly fourier_inverse(const Poly& p, int j);
Poly fourier(const Poly& p, int j);

// True when p reduces to zero by the divisors under degree-lexicographic
// order.  Sound certificate of ideal membership, not a decision procedure.
bool reduces_to_zero(Poly p, const std::vector<Poly>& divisors);

enum class SystemKind { HA, Modified, Atilde, Borel };
const char* system_kind_name(SystemKind k);

struct System {
    SystemKind kind;
    int N = 0;                 // number of variables; the last one is t (or ζ) except for HA
    IMat matrix;               // integer matrix whose kernel feeds the binomials
    GVec beta;                 // parameters matched to the Euler rows
    std::vector<WeylOperator> euler;
    std::vector<WeylOperator> toric;
    std::vector<IVec> kernel;  // ℓ for each toric operator
    std::vector<WeylOperator> all() const;
};

// GKZ system of an integer matrix: Euler rows and degree-bounded binomials.
System gkz_system(const IMat& M, const GVec& beta, long degree_bound);
// Modified system H_{A,w,α}(β) in (x, t).
System modified_system(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const GVec& beta, long degree_bound);
// H_{Ã(w)}(β, α−1).
System atilde_system(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const GVec& beta, long degree_bound);

// Integer ℓ with Mℓ = 0, 0 < |ℓ|_1 ≤ bound, one of ±ℓ (first nonzero entry positive).
std::vector<IVec> kernel_vectors_by_norm(const IMat& M, long bound);

// Result of applying operators to a truncated series: values on the index
// offsets reached, plus the predicate telling which of them are exact.
struct SeriesAction {
    GVec base;
    int t_index = -1;
    bool borel = false;
    std::map<IVec, GQ> values;              // nonzero values only
    std::set<IVec> reached;                 // every offset some term contributed to
    std::function<bool(const IVec&)> decided;
};

SeriesAction as_action(const TruncatedSeries& f);
SeriesAction apply(const WeylOperator& P, const SeriesAction& f);
SeriesAction apply(const WeylOperator& P, const TruncatedSeries& f);

struct Residue {
    IVec u;
    GQ value;
};

struct GeneratorReport {
    WeylOperator op;
    long checked = 0;             // certified offsets inspected
    std::vector<Residue> residues;  // certified nonzero values
    bool zero() const { return residues.empty(); }
};

struct AnnihilationReport {
    std::vector<GeneratorReport> generators;
    bool all_zero() const;
    long checked() const;
};

AnnihilationReport annihilation_report(const std::vector<WeylOperator>& gens, const TruncatedSeries& f);

// Every nonzero residue has coordinate j offset within [lo, hi]: the residue
// involves finitely many powers of that variable, independent of truncation.
bool residues_confined(const AnnihilationReport& r, int j, long lo, long hi);

}  // namespace gkz
