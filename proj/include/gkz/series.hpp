#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "gkz/geometry.hpp"

namespace gkz {

// Falling factorial c(c-1)...(c-k+1).
GQ pochhammer(const GQ& c, long k);

struct Exponent {
    GVec v;
    std::optional<Simplex> sigma;
    IVec k;             // values on the columns outside σ, increasing order
    int infinity = -1;  // column whose k entry is a negative integer
    Index nsupp() const;
};

Exponent exponent_from_k(const QMat& A, const GVec& beta, const Simplex& s, const IVec& k, int infinity = -1);

struct Truncation {
    long t_order = 8;
    long x_degree = 8;
};

// |sign·u[coord] − offset| summed over the window terms is the x-degree of u.
struct WindowTerm {
    int coord;
    long sign;
    long offset;
};

// Finitely many terms c_u · x^{base+u}.  The full index set of the untruncated
// series is described by linear relations plus per-coordinate bounds; the
// truncation window tells which members of that set were kept.
struct TruncatedSeries {
    GVec base;
    std::map<IVec, GQ> terms;
    int t_index = -1;      // coordinate holding t (or ζ), -1 if none
    bool borel = false;    // t coordinate uses the basis t^e / Γ(1+e)

    IMat rel;
    IVec rhs;
    std::vector<std::optional<long>> lo, hi;

    std::vector<WindowTerm> window;
    long x_degree = 0;
    std::optional<long> t_lo, t_hi;

    int size() const { return (int)base.size(); }
    bool in_support(const IVec& u) const;
    bool in_window(const IVec& u) const;
    bool decided(const IVec& u) const { return !in_support(u) || in_window(u); }
    GQ gamma() const { return t_index >= 0 ? base[t_index] : GQ(0); }
    GQ coefficient(const IVec& u) const;
};

// Bounds lo/hi reproducing nsupp(base+u) = nsupp(base) coordinatewise.
void nsupp_bounds(const GVec& base, const Index& coords, std::vector<std::optional<long>>& lo,
                  std::vector<std::optional<long>>& hi);

TruncatedSeries phi_v(const QMat& A, const Exponent& v, long x_degree);
TruncatedSeries phi_v(const ConfigMatrix& A, const Exponent& v, long x_degree);

// True unless some integer kernel vector with entries in [-box, box] outside
// the first simplex shrinks the negative support.
bool nsupp_minimal(const QMat& A, const GVec& v, long box);

TruncatedSeries psi_v(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const Exponent& v, Truncation tr);

std::vector<Exponent> exponents_for_weight(const ConfigMatrix& A, const GVec& beta, const QVec& w, long bound = 64);
long count_formal_solutions(const ConfigMatrix& A, const QVec& w);
std::vector<GQ> indicial_roots(const ConfigMatrix& A, const QVec& w, const GVec& beta);

struct GevreyCoordinate {
    Q s;
    Index Z;  // columns j with |A_σ^{-1} a_j| > 1
};
GevreyCoordinate gevrey_index_coordinate(const QMat& A, const Simplex& s);

// r with index s = r + 1; 0 when no w·b_i is positive.
Q gevrey_index_T(const QMat& A, const QVec& w, const Simplex& s);
// −|b_i| / (w·b_i) for every i outside σ with w·b_i ≠ 0.
std::map<int, Q> gevrey_index_T_ratios(const QMat& A, const QVec& w, const Simplex& s);

// Validated against the slopes at x_j = ∞: σ must lie in a witnessing facet.
std::vector<Exponent> exponents_at_infinity(const ConfigMatrix& A, const GVec& beta, const Simplex& s, int j,
                                            long count = -1, long bound = 64);
// Same enumeration without validation: k_j < 0, other k ≥ 0, distinct classes.
std::vector<Exponent> infinity_exponents(const QMat& A, const GVec& beta, const Simplex& s, int j, long count,
                                         long bound = 64);

TruncatedSeries upsilon(const TruncatedSeries& f, const GQ& gamma);
TruncatedSeries upsilon_inverse(const TruncatedSeries& f, const GQ& gamma);

struct ModConvergent {
    std::vector<TruncatedSeries> series;
    std::vector<Exponent> exponents;  // ṽ for H_{Ã(w)}(β, α−1)
    std::vector<Index> facets;        // witnessing facet per series
    std::vector<Q> slopes;
    long multiplicity = 0;
};

ModConvergent modified_solutions_mod_convergent(const ConfigMatrix& A, const IVec& w, const GQ& alpha,
                                                const GVec& beta, Truncation tr);

IVec sigma_weight_vector(const QMat& A, const Simplex& s);

// Every coordinate of A_σ^{-1}(β − A_σ̄ k), over all simplices σ and all k with
// |k|_1 ≤ bound, is a non-integer.
bool nsupp_stability_scan(const QMat& A, const GVec& beta, long bound);
GVec generic_parameter_sampler(const ConfigMatrix& A, long degree_bound, std::uint64_t seed);

}  // namespace gkz
