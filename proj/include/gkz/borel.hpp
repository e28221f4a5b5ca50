#pragma once

#include <functional>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "gkz/weyl.hpp"

namespace gkz {

using Real = boost::multiprecision::mpfr_float;

// Working precision for every Real created while the guard is alive.
class PrecisionGuard {
public:
    explicit PrecisionGuard(long bits);
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

// GKZ_PRECISION_BITS when set, else 128.
long default_precision_bits();
// Bits used internally for a requested output precision.
long working_bits(long bits);

Real real_pi();
Real to_real(const Q& q);

struct Complex {
    Real re, im;
    Complex() : re(0), im(0) {}
    Complex(const Real& r) : re(r), im(0) {}
    Complex(const Real& r, const Real& i) : re(r), im(i) {}
    Complex(long r) : re(r), im(0) {}

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex operator-() const { return Complex(-re, -im); }
};
inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }

Complex to_complex(const GQ& z);
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex polar(const Real& r, const Real& phi);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex sin(const Complex& z);
// exp(p log z) with arg z taken in (−π, π]
Complex pow(const Complex& z, const Complex& p);
// r^p e^{ip·phi} for a point given in polar form; the branch follows phi
Complex pow_polar(const Real& r, const Real& phi, const Complex& p);

// Decimal string with the given number of significant digits.
std::string decimal(const Real& x, int digits);
std::string decimal(const Complex& z, int digits);
int digits_for_bits(long bits);

// Γ by Spouge's formula, reflection for Re z < 1/2.  The truncation parameter
// is chosen so that the relative error bound a^{-1/2}(2π)^{-(a+1/2)} is below
// 2^{-bits}; arithmetic runs at the current working precision.
Complex gamma(const Complex& z, long bits);
// a for the requested bits and its error bound as log2
long spouge_parameter(long bits);
double spouge_error_log2(long a);

// ---------------------------------------------------------------- exact side

// B̂_1 of ψ(t = z^r) as an exact series: t offsets scaled by r, t coordinate in
// the basis ζ^e/Γ(1+e).  Throws Input when r·(t offset) is not integral.
TruncatedSeries borel_formal(const TruncatedSeries& psi, const Q& r);

enum class BorelVariant { GevreyIndex, Kappa };

struct BorelMatrix {
    IMat matrix;  // rows scaled to integers
    GVec beta;
    QMat raw;     // before scaling
};

// (A 0; w −1/r) with β_B = (β, α) for GevreyIndex; (A 0; w −κ) for Kappa.
BorelMatrix borel_matrix(const ConfigMatrix& A, const IVec& w, const Q& r_or_kappa, BorelVariant variant,
                         const GVec& beta, const GQ& alpha = GQ(0));
// Scale each row by the lcm of its denominators (and the matching β entry).
BorelMatrix normalize_rows(const QMat& M, const GVec& beta);

struct SummabilityReport {
    bool ones_not_in_rowspan_A = false;
    bool ones_in_rowspan_Aw = false;
    bool aw_criterion = false;        // in_image_abar(A,w) ∧ w ∉ rowspan(A)
    bool aw_consistent = false;       // the two computations agree
    bool index_consistent = false;    // −|b_i|/(w·b_i) agree over i ∉ σ
    bool kernel_integrality = false;  // r·w·u ∈ Z on a kernel basis
    bool r_gamma_nonintegral = false;
    bool gamma_ray_case = false;      // rγ a non-negative integer: no Γ poles, the ray formula applies
    Q r = 0;
    GQ gamma;
    GVec beta;
    Simplex sigma;
    bool all_pass() const;
};

// σ and γ come from the first exponent of the w-triangulation at β (sampled
// generically when beta is empty).
SummabilityReport check_summability_hypotheses(const ConfigMatrix& A, const IVec& w, GVec beta = {},
                                               const GQ& alpha = GQ(0));

// --------------------------------------------------------------- numeric side

// Σ_ℓ c_ℓ τ^{ℓ+γ}, c_ℓ = f_ℓ / Γ(1+(ℓ+γ)/κ).
struct BorelSeries {
    GQ gamma;
    Q kappa = 1;
    std::vector<Complex> f;       // f_ℓ(x), ℓ = 0, 1, …
    std::vector<Complex> coeffs;  // c_ℓ
    long complete = -1;           // f_ℓ is exact for ℓ ≤ complete
    long bits = 128;
    std::vector<Complex> x;
    long length() const { return (long)coeffs.size(); }
    // radius estimate from the tail of the coefficient stream, +∞ when finite
    Real radius_estimate() const;
    Complex eval(const Real& r, const Real& phi) const;        // τ = r e^{iφ}, branch along φ
    Complex eval_derivative(const Real& r, const Real& phi, int order) const;
};

// x is evaluated exactly layer by layer, then rounded.
BorelSeries borel_transform(const TruncatedSeries& psi, const GVec& x, const Q& kappa, long bits);

// ψ with x_degree grown until every t layer up to t_order is stable.
TruncatedSeries psi_for_borel(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const Exponent& v,
                              long t_order, long max_doublings = 6);

// Σ_j p_j(ζ) D^j y = 0; coeffs[j] lists p_j in increasing powers.
struct Ode {
    std::vector<std::vector<Complex>> coeffs;
    int order() const { return (int)coeffs.size() - 1; }
    std::vector<Complex> singular_points() const;  // roots of the leading coefficient
};

// Second-order equation for φ_B at x, A=(1,2), w=(0,1).
Ode example12_ode(const std::vector<Complex>& x, const Complex& beta);

struct TaylorPatch {
    Complex center;
    Real radius;
    std::vector<Complex> a;  // Taylor coefficients at center
};

struct ContinuedSolution {
    std::vector<TaylorPatch> patches;
    Real theta;
    Complex eval(const Complex& z) const;
};

// Continue the solution with y^{(k)}(seed) = values[k] along the ray arg ζ = θ up
// to |ζ| = length, steps at most half the distance to the nearest singular point.
ContinuedSolution ode_continue(const Ode& ode, const Complex& seed, const std::vector<Complex>& values,
                               const Real& theta, const Real& length, long bits);

enum class LaplaceMode { Series, Ode, ClosedForm };
const char* laplace_mode_name(LaplaceMode m);

struct LaplaceOptions {
    LaplaceMode mode = LaplaceMode::Series;
    const Ode* ode = nullptr;                               // mode Ode
    std::function<Complex(const Real&, const Real&)> closed;  // mode ClosedForm: B(r e^{iφ})
    long bits = 128;
    int max_level = 12;
};

struct LaplaceResult {
    Complex value;
    Real theta;
    Complex t;
    Real arg_t;          // branch of arg t used for t^γ, within π/(2κ) of θ
    Real quad_error;
    Real tail_bound;
    Real rounding;       // |value|·2^{-bits}
    Real cut;            // integration ran over τ = s e^{iθ}, s ≤ cut
    int levels = 0;
    long evaluations = 0;
    LaplaceMode mode;
    Real error() const { return quad_error + tail_bound + rounding; }
};

// ∫_0^{e^{iθ}∞} e^{−(τ/t)^κ} B(τ) d(τ/t)^κ.
LaplaceResult laplace_sum(const BorelSeries& B, const Real& theta, const Complex& t, const LaplaceOptions& opt);

// t^{ℓ+γ} = L_κ^θ B̂_κ[t^{ℓ+γ}] as a self-check of the transform pair.
Complex laplace_of_monomial(const GQ& p, const Q& kappa, const Real& theta, const Complex& t, long bits);

struct AsymptoticReport {
    double log_C = 0, log_K = 0;  // fitted constants, natural logs
    bool finite = false;
    bool slopes_ok = false;       // finest measurable log-log slope of the remainder ≥ N − 1/2
    bool pass = false;
    int n_max = 0;
    std::vector<std::vector<double>> log_remainder;  // [N−1][grid point], −inf below the noise floor
    std::vector<std::vector<double>> slope;          // [N−1][grid gap]
    double min_slack = 0;
};

// Values S(t_k) against the partial sums Σ_{ℓ<N} f_ℓ t^ℓ, N = 1..n_max.
AsymptoticReport asymptotic_check(const std::vector<LaplaceResult>& values, const BorelSeries& B, int n_max);

// {2 arg x_1 − arg x_2} normalized to (−π, π].
std::vector<Real> singular_directions_example12(const std::vector<Complex>& x);
Real normalize_angle(const Real& a);

}  // namespace gkz
