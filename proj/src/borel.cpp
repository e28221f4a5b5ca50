#include "gkz/borel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "gkz/slopes.hpp"

namespace gkz {

namespace bmp = boost::multiprecision;

int digits_for_bits(long bits) { return (int)std::ceil((double)bits * 0.30102999566398120) + 1; }

PrecisionGuard::PrecisionGuard(long bits) : saved_(Real::default_precision()) {
    Real::default_precision((unsigned)digits_for_bits(bits));
}
PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_); }

long default_precision_bits() {
    if (const char* e = std::getenv("GKZ_PRECISION_BITS")) {
        char* end = nullptr;
        long b = std::strtol(e, &end, 10);
        if (end && *end == '\0' && b >= 16 && b <= 100000) return b;
    }
    return 128;
}

long working_bits(long bits) { return 2 * bits + 64; }

static long current_bits() {
    Real x;
    return (long)mpfr_get_prec(x.backend().data());
}

Real real_pi() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

Real to_real(const Q& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

// copy rounded to the current default precision
static Real at_current(const Real& x) {
    Real r;
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}
static Complex at_current(const Complex& z) { return Complex(at_current(z.re), at_current(z.im)); }

Complex& Complex::operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
}
Complex& Complex::operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}
Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
}
Complex& Complex::operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    if (d == 0) throw Error(ErrorKind::DomainViolation, "complex division by zero");
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = r;
    im = i;
    return *this;
}

Complex to_complex(const GQ& z) { return Complex(to_real(z.re), to_real(z.im)); }
Real abs(const Complex& z) { return bmp::sqrt(z.re * z.re + z.im * z.im); }
Real arg(const Complex& z) {
    if (z.re == 0 && z.im == 0) return Real(0);
    return bmp::atan2(z.im, z.re);
}
Complex polar(const Real& r, const Real& phi) { return Complex(r * bmp::cos(phi), r * bmp::sin(phi)); }
Complex exp(const Complex& z) { return polar(bmp::exp(z.re), z.im); }
Complex log(const Complex& z) {
    if (z.re == 0 && z.im == 0) throw Error(ErrorKind::DomainViolation, "logarithm of zero");
    return Complex(bmp::log(abs(z)), arg(z));
}
Complex sin(const Complex& z) {
    return Complex(bmp::sin(z.re) * bmp::cosh(z.im), bmp::cos(z.re) * bmp::sinh(z.im));
}

static bool is_zero(const Complex& z) { return z.re == 0 && z.im == 0; }

Complex pow(const Complex& z, const Complex& p) {
    if (is_zero(p)) return Complex(1);
    if (is_zero(z)) {
        if (p.re > 0) return Complex(0);
        throw Error(ErrorKind::DomainViolation, "zero raised to a power with non-positive real part");
    }
    return exp(p * log(z));
}

Complex pow_polar(const Real& r, const Real& phi, const Complex& p) {
    if (is_zero(p)) return Complex(1);
    if (r == 0) {
        if (p.re > 0) return Complex(0);
        throw Error(ErrorKind::DomainViolation, "zero raised to a power with non-positive real part");
    }
    return exp(p * Complex(bmp::log(r), phi));
}

std::string decimal(const Real& x, int digits) { return x.str(digits, std::ios_base::scientific); }

std::string decimal(const Complex& z, int digits) {
    std::string im = decimal(bmp::abs(z.im), digits);
    return decimal(z.re, digits) + (z.im < 0 ? "-" : "+") + im + "i";
}

// ------------------------------------------------------------------ Γ

double spouge_error_log2(long a) {
    return -0.5 * std::log2((double)a) - ((double)a + 0.5) * std::log2(2.0 * M_PI);
}

long spouge_parameter(long bits) {
    long a = 2;
    while (spouge_error_log2(a) > -(double)bits) ++a;
    return a;
}

// Γ(z+1) for Re z ≥ −1/2
static Complex spouge(const Complex& z, long a) {
    Real pi = real_pi();
    Complex sum(bmp::sqrt(2 * pi));
    Real fact = 1;  // (k−1)!
    for (long k = 1; k < a; ++k) {
        if (k > 1) fact *= (k - 1);
        Real ak = Real(a - k);
        Real c = bmp::pow(ak, Real(k) - Real(0.5)) * bmp::exp(ak) / fact;
        if (k % 2 == 0) c = -c;
        sum += Complex(c) / (z + Complex(k));
    }
    Complex za = z + Complex(a);
    return pow(za, z + Complex(Real(0.5))) * exp(-za) * sum;
}

Complex gamma(const Complex& z, long bits) {
    long a = spouge_parameter(bits + 8);
    // the alternating coefficients reach about e^a; carry that many extra bits
    long inner = std::max(current_bits(), bits + 16) + (long)(2.0 * (double)a) + 32;
    Complex result;
    {
        PrecisionGuard g(inner);
        Complex w = at_current(z);
        Real half(0.5);
        Complex r;
        if (w.re < half) {
            Real pi = real_pi();
            Complex s = sin(Complex(pi) * w);
            if (is_zero(s) || abs(s) < bmp::pow(Real(2), -Real(inner - 8)))
                throw Error(ErrorKind::GammaPole, "Γ evaluated at a non-positive integer");
            r = Complex(pi) / (s * spouge(Complex(1) - w - Complex(1), a));
        } else {
            r = spouge(w - Complex(1), a);
        }
        result = r;
    }
    return at_current(result);
}

// ------------------------------------------------------------ exact side

static Q floor_q(const Q& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Q(f);
}
static Q ceil_q(const Q& q) {
    mpz_class f;
    mpz_cdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Q(f);
}

TruncatedSeries borel_formal(const TruncatedSeries& psi, const Q& r) {
    if (psi.t_index < 0) throw Error(ErrorKind::Input, "series has no t coordinate");
    if (r <= 0) throw Error(ErrorKind::Input, "Gevrey index r must be positive");
    int t = psi.t_index;
    long p = r.get_num().get_si(), q = r.get_den().get_si();
    for (const auto& w : psi.window)
        if (w.coord == t) throw Error(ErrorKind::Input, "truncation window involves t");
    TruncatedSeries b;
    b.base = psi.base;
    b.base[t] = GQ(r) * psi.base[t];
    b.t_index = t;
    b.borel = true;
    for (const auto& [u, c] : psi.terms) {
        Q s = r * Q(u[t]);
        if (s.get_den() != 1)
            throw Error(ErrorKind::Input, "r times a t offset is not an integer; z = t^r leaves fractional powers");
        IVec v = u;
        v[t] = s.get_num().get_si();
        b.terms.emplace(v, c);
    }
    for (size_t i = 0; i < psi.rel.size(); ++i) {
        IVec row = psi.rel[i];
        long rhs = psi.rhs[i];
        if (row[t] != 0) {
            for (size_t j = 0; j < row.size(); ++j)
                if ((int)j != t) row[j] *= p;
            row[t] *= q;
            rhs *= p;
        }
        b.rel.push_back(row);
        b.rhs.push_back(rhs);
    }
    b.lo = psi.lo;
    b.hi = psi.hi;
    if (b.lo[t]) b.lo[t] = ceil_q(r * Q(*psi.lo[t])).get_num().get_si();
    if (b.hi[t]) b.hi[t] = floor_q(r * Q(*psi.hi[t])).get_num().get_si();
    b.window = psi.window;
    b.x_degree = psi.x_degree;
    if (psi.t_lo) b.t_lo = ceil_q(r * Q(*psi.t_lo)).get_num().get_si();
    if (psi.t_hi) b.t_hi = floor_q(r * Q(*psi.t_hi)).get_num().get_si();
    return b;
}

BorelMatrix normalize_rows(const QMat& M, const GVec& beta) {
    if (beta.size() != M.size()) throw Error(ErrorKind::Input, "parameter length does not match the rows");
    BorelMatrix out;
    out.raw = M;
    for (size_t i = 0; i < M.size(); ++i) {
        mpz_class l = 1;
        for (const Q& x : M[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        IVec row;
        for (const Q& x : M[i]) {
            Q y = x * Q(l);
            row.push_back(y.get_num().get_si());
        }
        out.matrix.push_back(row);
        out.beta.push_back(beta[i] * GQ(Q(l)));
    }
    return out;
}

BorelMatrix borel_matrix(const ConfigMatrix& A, const IVec& w, const Q& r_or_kappa, BorelVariant variant,
                         const GVec& beta, const GQ& alpha) {
    if ((int)w.size() != A.n()) throw Error(ErrorKind::Input, "weight vector has wrong length");
    if ((int)beta.size() != A.d()) throw Error(ErrorKind::Input, "parameter has wrong length");
    if (r_or_kappa <= 0) throw Error(ErrorKind::Input, "index must be positive");
    QMat M;
    for (const auto& row : A.rows()) {
        QVec r = to_q(row);
        r.push_back(0);
        M.push_back(r);
    }
    QVec last = to_q(w);
    last.push_back(variant == BorelVariant::GevreyIndex ? Q(-1 / r_or_kappa) : Q(-r_or_kappa));
    M.push_back(last);
    GVec b = beta;
    b.push_back(alpha);
    return normalize_rows(M, b);
}

bool SummabilityReport::all_pass() const {
    return ones_not_in_rowspan_A && ones_in_rowspan_Aw && aw_consistent && index_consistent && kernel_integrality &&
           (r_gamma_nonintegral || gamma_ray_case);
}

SummabilityReport check_summability_hypotheses(const ConfigMatrix& A, const IVec& w, GVec beta, const GQ& alpha) {
    SummabilityReport rep;
    int n = A.n();
    QVec ones(n, Q(1)), wq = to_q(w);
    rep.ones_not_in_rowspan_A = !rowspan_contains(A, ones);
    rep.ones_in_rowspan_Aw = rowspan_contains(a_w(A, w), ones);
    rep.aw_criterion = in_image_abar(A, wq) && !rowspan_contains(A, wq);
    rep.aw_consistent = rep.ones_in_rowspan_Aw == rep.aw_criterion;
    if (beta.empty()) beta = generic_parameter_sampler(A, 8, 0);
    rep.beta = beta;

    QMat M = A.q();
    std::vector<Exponent> exps = exponents_for_weight(A, beta, wq);
    const Exponent* chosen = nullptr;
    for (const auto& e : exps) {
        if (!e.sigma) continue;
        Q r = gevrey_index_T(M, wq, *e.sigma);
        auto ratios = gevrey_index_T_ratios(M, wq, *e.sigma);
        bool same = r > 0 && !ratios.empty();
        for (const auto& [i, q] : ratios) same = same && q == r;
        if (!chosen) chosen = &e;
        if (same) {
            chosen = &e;
            break;
        }
    }
    if (!chosen) return rep;
    rep.sigma = *chosen->sigma;
    rep.r = gevrey_index_T(M, wq, rep.sigma);
    auto ratios = gevrey_index_T_ratios(M, wq, rep.sigma);
    rep.index_consistent = rep.r > 0 && !ratios.empty();
    for (const auto& [i, q] : ratios) rep.index_consistent = rep.index_consistent && q == rep.r;

    long bound = 1;
    for (int j = 0; j < n; ++j) {
        long c = 0;
        for (int i = 0; i < A.d(); ++i) c += std::labs(A.rows()[i][j]);
        bound = std::max(bound, c);
    }
    rep.kernel_integrality = rep.r > 0;
    for (const IVec& u : kernel_vectors_by_norm(A.rows(), bound + 1)) {
        Q s = 0;
        for (int j = 0; j < n; ++j) s += Q(w[j] * u[j]);
        s *= rep.r;
        if (s.get_den() != 1) rep.kernel_integrality = false;
    }

    rep.gamma = -alpha;
    for (int i = 0; i < n; ++i) rep.gamma += GQ(Q(w[i])) * chosen->v[i];
    GQ rg = GQ(rep.r) * rep.gamma;
    rep.r_gamma_nonintegral = !rg.is_integer();
    rep.gamma_ray_case = rg.is_nonneg_integer();
    return rep;
}

// ------------------------------------------------------------ numeric side

static GQ gpow(const GQ& x, long e) {
    GQ r(1), b = x;
    if (e < 0) {
        if (x.re == 0 && x.im == 0) throw Error(ErrorKind::DomainViolation, "negative power of a zero coordinate");
        b = GQ(1) / x;
        e = -e;
    }
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

BorelSeries borel_transform(const TruncatedSeries& psi, const GVec& x, const Q& kappa, long bits) {
    if (psi.t_index < 0) throw Error(ErrorKind::Input, "series has no t coordinate");
    int t = psi.t_index, N = psi.size();
    if ((int)x.size() != N - 1) throw Error(ErrorKind::Input, "evaluation point has wrong length");
    if (kappa <= 0) throw Error(ErrorKind::Input, "κ must be positive");
    BorelSeries B;
    B.gamma = psi.base[t];
    B.kappa = kappa;
    B.bits = bits;

    long L = 0;
    for (const auto& [u, c] : psi.terms) {
        if (u[t] < 0) throw Error(ErrorKind::Input, "negative t offset in a Gevrey series");
        L = std::max(L, u[t]);
    }
    if (psi.t_hi) L = std::max(L, *psi.t_hi);
    B.complete = psi.t_hi ? *psi.t_hi : L;

    // exact layer sums Σ c_u x^u
    std::vector<GQ> layer(L + 1, GQ(0));
    for (const auto& [u, c] : psi.terms) {
        GQ m = c;
        int k = 0;
        for (int i = 0; i < N; ++i) {
            if (i == t) continue;
            m *= gpow(x[k], u[i]);
            ++k;
        }
        layer[u[t]] += m;
    }

    PrecisionGuard g(working_bits(bits));
    Complex X(1);
    {
        int k = 0;
        for (int i = 0; i < N; ++i) {
            if (i == t) continue;
            Complex xi = to_complex(x[k]);
            B.x.push_back(xi);
            ++k;
            if (psi.base[i].re == 0 && psi.base[i].im == 0) continue;
            if (is_zero(xi)) throw Error(ErrorKind::DomainViolation, "evaluation point has a zero coordinate");
            X *= pow(xi, to_complex(psi.base[i]));
        }
    }
    for (long l = 0; l <= L; ++l) {
        if (layer[l].is_zero()) {
            B.f.emplace_back(0);
            B.coeffs.emplace_back(0);
            continue;
        }
        GQ a = GQ(1) + (GQ(Q(l)) + B.gamma) / GQ(kappa);
        if (a.is_integer() && sgn(a.re) <= 0)
            throw Error(ErrorKind::GammaPole, "Γ(1+(ℓ+γ)/κ) has a pole: the exponent condition fails");
        Complex f = X * to_complex(layer[l]);
        B.f.push_back(f);
        B.coeffs.push_back(f / gamma(to_complex(a), working_bits(bits)));
    }
    return B;
}

Real BorelSeries::radius_estimate() const {
    std::vector<long> nz;
    long last = std::min<long>(complete, length() - 1);
    for (long l = 0; l <= last; ++l)
        if (!is_zero(coeffs[l])) nz.push_back(l);
    if (nz.size() < 2) return Real(std::numeric_limits<double>::infinity());
    // a zero tail longer than both the last support index and every gap: a polynomial
    long gap = 0;
    for (size_t i = 0; i + 1 < nz.size(); ++i) gap = std::max(gap, nz[i + 1] - nz[i]);
    if (last - nz.back() > std::max(nz.back(), gap)) return Real(std::numeric_limits<double>::infinity());
    Real best = Real(std::numeric_limits<double>::infinity());
    size_t from = nz.size() >= 4 ? nz.size() - 4 : 0;
    for (size_t i = from; i + 1 < nz.size(); ++i) {
        long a = nz[i], b = nz[i + 1];
        Real q = bmp::pow(abs(coeffs[a]) / abs(coeffs[b]), Real(1) / Real(b - a));
        if (q < best) best = q;
    }
    return best;
}

static Complex falling(const Complex& x, int k) {
    Complex r(1);
    for (int j = 0; j < k; ++j) r *= x - Complex(j);
    return r;
}

Complex BorelSeries::eval_derivative(const Real& r, const Real& phi, int order) const {
    Complex z = polar(r, phi);
    Complex g = to_complex(gamma);
    Complex s(0);
    for (long l = length() - 1; l >= 0; --l) {
        Complex c = coeffs[l];
        if (order > 0 && !is_zero(c)) c *= falling(g + Complex(l), order);
        s = s * z + c;
    }
    return s * pow_polar(r, phi, g - Complex(order));
}

Complex BorelSeries::eval(const Real& r, const Real& phi) const { return eval_derivative(r, phi, 0); }

TruncatedSeries psi_for_borel(const ConfigMatrix& A, const IVec& w, const GQ& alpha, const Exponent& v,
                              long t_order, long max_doublings) {
    long D = std::max<long>(8, t_order);
    TruncatedSeries prev = psi_v(A, w, alpha, v, {t_order, D});
    for (long k = 0; k < max_doublings; ++k) {
        D *= 2;
        TruncatedSeries next = psi_v(A, w, alpha, v, {t_order, D});
        if (next.terms == prev.terms) return prev;
        prev = std::move(next);
    }
    throw Error(ErrorKind::BoundExhausted, "t layers did not stabilize under x-degree doubling");
}

// ------------------------------------------------------------------- ODE

// Durand–Kerner on a polynomial with nonzero leading coefficient
static std::vector<Complex> poly_roots(std::vector<Complex> c) {
    while (!c.empty() && is_zero(c.back())) c.pop_back();
    std::vector<Complex> roots;
    size_t z = 0;
    while (z < c.size() && is_zero(c[z])) ++z;
    for (size_t i = 0; i < z; ++i) roots.emplace_back(0);
    c.erase(c.begin(), c.begin() + z);
    int deg = (int)c.size() - 1;
    if (deg <= 0) return roots;
    Complex lead = c.back();
    for (auto& x : c) x /= lead;
    if (deg == 1) {
        roots.push_back(-c[0]);
        return roots;
    }
    std::vector<Complex> r(deg);
    Complex seed(Real(0.4), Real(0.9));
    r[0] = Complex(1);
    for (int i = 1; i < deg; ++i) r[i] = r[i - 1] * seed;
    Real eps = bmp::pow(Real(2), -Real(current_bits() - 8));
    for (int it = 0; it < 2000; ++it) {
        Real change = 0;
        for (int i = 0; i < deg; ++i) {
            Complex p(1);
            for (int k = deg - 1; k >= 0; --k) p = p * r[i] + c[k];
            Complex d(1);
            for (int j = 0; j < deg; ++j)
                if (j != i) d *= r[i] - r[j];
            Complex step = p / d;
            r[i] -= step;
            change = std::max(change, abs(step));
        }
        if (change < eps) break;
    }
    roots.insert(roots.end(), r.begin(), r.end());
    return roots;
}

std::vector<Complex> Ode::singular_points() const {
    if (coeffs.empty()) return {};
    return poly_roots(coeffs.back());
}

Ode example12_ode(const std::vector<Complex>& x, const Complex& beta) {
    if (x.size() != 2) throw Error(ErrorKind::Input, "A=(1,2) needs x = (x1, x2)");
    const Complex &x1 = x[0], &x2 = x[1];
    Complex x1s = x1 * x1;
    Ode e;
    e.coeffs.resize(3);
    e.coeffs[2] = {Complex(0), -x1s, Complex(4) * x2};
    e.coeffs[1] = {-x1s, (Complex(6) - Complex(4) * beta) * x2};
    e.coeffs[0] = {(beta * beta - beta) * x2};
    return e;
}

// p(c + h) as a polynomial in h
static std::vector<Complex> shift_poly(const std::vector<Complex>& p, const Complex& c) {
    std::vector<Complex> r(p.size(), Complex(0));
    // Horner: r ← r·(h + c) + p_k
    for (long k = (long)p.size() - 1; k >= 0; --k) {
        std::vector<Complex> s(p.size(), Complex(0));
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            s[i + 1] += r[i];
            s[i] += r[i] * c;
        }
        s[0] += p[k];
        r = s;
    }
    return r;
}

static std::vector<Complex> taylor_at(const Ode& ode, const Complex& c, const std::vector<Complex>& values, long terms) {
    int m = ode.order();
    std::vector<std::vector<Complex>> P;
    for (const auto& p : ode.coeffs) P.push_back(shift_poly(p, c));
    if (P[m].empty() || is_zero(P[m][0])) throw Error(ErrorKind::StepTooClose, "Taylor center is a singular point");
    std::vector<Complex> a(terms + m, Complex(0));
    Real fact = 1;
    for (int k = 0; k < m; ++k) {
        if (k > 0) fact *= k;
        a[k] = values[k] / Complex(fact);
    }
    for (long n = 0; n + m < (long)a.size(); ++n) {
        Complex rest(0);
        for (int j = 0; j <= m; ++j)
            for (long i = 0; i < (long)P[j].size() && i <= n; ++i) {
                if (j == m && i == 0) continue;
                if (is_zero(P[j][i])) continue;
                long q = n - i + j;
                Real ff = 1;
                for (long s = 0; s < j; ++s) ff *= Real(q - s);
                rest += P[j][i] * a[q] * Complex(ff);
            }
        Real ff = 1;
        for (long s = 0; s < m; ++s) ff *= Real(n + m - s);
        a[n + m] = -rest / (P[m][0] * Complex(ff));
    }
    return a;
}

static Complex horner(const std::vector<Complex>& a, const Complex& h, int deriv) {
    Complex s(0);
    for (long n = (long)a.size() - 1; n >= deriv; --n) {
        Real ff = 1;
        for (int k = 0; k < deriv; ++k) ff *= Real(n - k);
        s = s * h + a[n] * Complex(ff);
    }
    return s;
}

Complex ContinuedSolution::eval(const Complex& z) const {
    if (patches.empty()) throw Error(ErrorKind::DomainViolation, "empty continuation");
    Real s = abs(z);
    size_t lo = 0, hi = patches.size();
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (abs(patches[mid].center) <= s) lo = mid;
        else hi = mid;
    }
    const TaylorPatch& p = patches[lo];
    Complex h = z - p.center;
    if (abs(h) > p.radius * Real(1.0001))
        throw Error(ErrorKind::DomainViolation, "point outside the continued region");
    return horner(p.a, h, 0);
}

ContinuedSolution ode_continue(const Ode& ode, const Complex& seed, const std::vector<Complex>& values,
                               const Real& theta, const Real& length, long bits) {
    int m = ode.order();
    if (m < 1) throw Error(ErrorKind::Input, "ODE must have order at least 1");
    if ((int)values.size() != m) throw Error(ErrorKind::Input, "seed needs one value per derivative below the order");
    ContinuedSolution sol;
    sol.theta = theta;
    std::vector<Complex> sing = ode.singular_points();
    long terms = bits + 24;
    Real min_step = bmp::pow(Real(2), -Real(bits / 4 + 8));
    Complex c = seed;
    std::vector<Complex> vals = values;
    Complex dir = polar(Real(1), theta);
    for (int step = 0; step < 100000; ++step) {
        Real d = Real(std::numeric_limits<double>::infinity());
        for (const auto& s : sing) d = std::min(d, abs(s - c));
        Real R = d / 2;
        if (R < min_step) throw Error(ErrorKind::StepTooClose, "continuation path runs into a singular point");
        TaylorPatch p{c, R, taylor_at(ode, c, vals, terms)};
        sol.patches.push_back(p);
        if (abs(c) >= length) return sol;
        Complex h = dir * Complex(R);
        for (int k = 0; k < m; ++k) vals[k] = horner(p.a, h, k);
        c = c + h;
    }
    throw Error(ErrorKind::BoundExhausted, "too many continuation steps");
}

// ---------------------------------------------------------------- Laplace

const char* laplace_mode_name(LaplaceMode m) {
    switch (m) {
    case LaplaceMode::Series: return "series";
    case LaplaceMode::Ode: return "ode";
    case LaplaceMode::ClosedForm: return "closed_form";
    }
    return "?";
}

Real normalize_angle(const Real& a) {
    Real pi = real_pi(), tp = 2 * pi;
    Real r = a - tp * bmp::floor(a / tp);  // [0, 2π)
    if (r > pi) r -= tp;
    return r;
}

namespace {

// tanh-sinh on [0, V] for f(v); nodes refined by halving h
struct TanhSinh {
    long bits;
    int max_level;
    template <class F>
    Complex integrate(const F& f, const Real& V, Real& err, int& levels, long& evals) const {
        Real pi = real_pi();
        Real tiny = bmp::pow(Real(2), -Real(bits + 40));
        Real half = Real(0.5);
        auto node_sum = [&](const Real& h, long k0, long step) {
            Complex s(0);
            for (long k = k0;; k += step) {
                Real kh = h * k;
                Real u = pi / 2 * bmp::sinh(kh);
                Real e2 = bmp::exp(-2 * u);
                Real c = 2 * e2 / (1 + e2);          // 1 − tanh u
                Real wgt = pi / 2 * bmp::cosh(kh) * 4 * e2 / ((1 + e2) * (1 + e2)) * V / 2;
                if (wgt < tiny || c * V / 2 == 0) break;
                Complex fp = f(V * (1 - c / 2)), fm(0);
                s += Complex(wgt) * fp;
                ++evals;
                if (k != 0) {
                    fm = f(V * c / 2);
                    s += Complex(wgt) * fm;
                    ++evals;
                }
            }
            return s;
        };
        Real h = 1;
        Complex sum = node_sum(h, 0, 1);
        Complex I = sum * Complex(h), prev = I;
        err = Real(std::numeric_limits<double>::infinity());
        levels = 0;
        for (int L = 1; L <= max_level; ++L) {
            h *= half;
            sum += node_sum(h, 1, 2);
            prev = I;
            I = sum * Complex(h);
            levels = L;
            err = abs(I - prev);
            Real scale = std::max(abs(I), Real(1e-300));
            if (L >= 3 && err <= scale * bmp::pow(Real(2), -Real(bits + 8))) break;
        }
        return I;
    }
};

}  // namespace

LaplaceResult laplace_sum(const BorelSeries& B, const Real& theta_in, const Complex& t_in, const LaplaceOptions& opt) {
    PrecisionGuard g(working_bits(opt.bits));
    long bits = opt.bits;
    Real theta = at_current(theta_in);
    Complex t = at_current(t_in);
    if (is_zero(t)) throw Error(ErrorKind::DomainViolation, "t must be nonzero");
    Real kappa = to_real(B.kappa);
    Real pi = real_pi();
    Real arg_t = theta + normalize_angle(arg(t) - theta);
    Real delta = theta - arg_t;
    if (bmp::abs(delta) * kappa >= pi / 2)
        throw Error(ErrorKind::DomainViolation, "|arg t − θ| must be below π/(2κ)");
    Real cosd = bmp::cos(kappa * delta);
    Real at = abs(t);
    Complex rot = polar(Real(1), kappa * delta);  // e^{iκδ}

    LaplaceResult res;
    res.theta = theta;
    res.t = t;
    res.arg_t = arg_t;
    res.mode = opt.mode;

    // B(|t| v^{1/κ} e^{iθ})
    std::function<Complex(const Real&)> Bv;
    Real series_limit = Real(std::numeric_limits<double>::infinity());
    ContinuedSolution cont;
    Real seed_r = 0;
    Real rho = B.radius_estimate();

    auto tau_r = [&](const Real& v) { return at * bmp::pow(v, 1 / kappa); };

    Real V = (Real(bits) * bmp::log(Real(2)) + 40) / cosd;
    Real cut = tau_r(V);

    switch (opt.mode) {
    case LaplaceMode::Series:
        if (!(cut < rho / 2))
            throw Error(ErrorKind::DomainViolation,
                        "series mode needs the integration range inside half the radius of convergence; use a smaller |t| or ode mode");
        Bv = [&](const Real& v) { return B.eval(tau_r(v), theta); };
        series_limit = cut;
        break;
    case LaplaceMode::ClosedForm:
        if (!opt.closed) throw Error(ErrorKind::Input, "closed_form mode needs a callable");
        Bv = [&](const Real& v) { return opt.closed(tau_r(v), theta); };
        break;
    case LaplaceMode::Ode: {
        if (!opt.ode) throw Error(ErrorKind::Input, "ode mode needs an equation");
        if (B.kappa != 1) throw Error(ErrorKind::Input, "ode mode expects κ = 1");
        Real tol = bmp::pow(Real(2), -Real(bits / 2));
        Real nearest = Real(std::numeric_limits<double>::infinity());
        for (const auto& s : opt.ode->singular_points()) {
            Real r = abs(s);
            if (r <= tol) continue;
            nearest = std::min(nearest, r);
            if (bmp::abs(normalize_angle(arg(s) - theta)) * r <= tol)
                throw Error(ErrorKind::SingularDirection, "a singular point of the Borel transform lies on the ray");
        }
        seed_r = std::min(nearest, rho) / 4;
        std::vector<Complex> vals;
        for (int k = 0; k < opt.ode->order(); ++k) vals.push_back(B.eval_derivative(seed_r, theta, k));
        cont = ode_continue(*opt.ode, polar(seed_r, theta), vals, theta, cut * Real(1.01), bits);
        series_limit = seed_r;
        Bv = [&](const Real& v) {
            Real r = tau_r(v);
            if (r <= seed_r) return B.eval(r, theta);
            return cont.eval(polar(r, theta));
        };
        break;
    }
    }

    // ∫_0^∞ e^{−v e^{iκδ}} B(...) dv · e^{iκδ}
    long evals = 0;
    auto integrand = [&](const Real& v) { return exp(-(Complex(v) * rot)) * Bv(v); };
    TanhSinh ts{bits, opt.max_level};
    Real qerr;
    int levels = 0;
    Complex I = ts.integrate(integrand, V, qerr, levels, evals);
    res.value = I * rot;
    res.quad_error = qerr;
    res.rounding = abs(res.value) * bmp::pow(Real(2), -Real(bits));
    res.levels = levels;
    res.evaluations = evals;
    res.cut = cut;

    // tail beyond V: |B| sampled at the cut, assumed of at most polynomial growth
    Real bv = abs(Bv(V));
    res.tail_bound = 2 * (bv + 1) * bmp::exp(-V * cosd) / cosd;
    if (opt.mode == LaplaceMode::Series && B.length() > 0 && rho < Real(std::numeric_limits<double>::infinity())) {
        // geometric bound on the dropped terms over the integration range
        Real q = series_limit / rho;
        long Lc = B.length() - 1;
        Real last = 0;
        for (long l = Lc; l >= 0 && l > Lc - 4; --l) last = std::max(last, abs(B.coeffs[l]) * bmp::pow(rho, Real(l)));
        Real gam_re = to_real(B.gamma.re);
        Real trunc = last * bmp::pow(q, Real(Lc + 1)) / (1 - q) * bmp::pow(series_limit, gam_re);
        res.tail_bound += trunc;
    }
    return res;
}

Complex laplace_of_monomial(const GQ& p, const Q& kappa, const Real& theta, const Complex& t, long bits) {
    BorelSeries B;
    B.gamma = p;
    B.kappa = kappa;
    B.bits = bits;
    B.complete = 0;
    {
        PrecisionGuard g(working_bits(bits));
        Complex a = Complex(1) + to_complex(p) / Complex(to_real(kappa));
        B.f.emplace_back(1);
        B.coeffs.push_back(Complex(1) / gamma(a, working_bits(bits)));
    }
    LaplaceOptions o;
    o.bits = bits;
    return laplace_sum(B, theta, t, o).value;
}

AsymptoticReport asymptotic_check(const std::vector<LaplaceResult>& values, const BorelSeries& B, int n_max) {
    PrecisionGuard g(working_bits(B.bits));
    AsymptoticReport rep;
    rep.n_max = n_max;
    if (n_max < 1 || n_max > B.complete + 1 || n_max > B.length())
        throw Error(ErrorKind::Input, "n_max exceeds the exact part of the coefficient stream");
    double kappa = B.kappa.get_d();
    Complex gam = to_complex(B.gamma);
    size_t K = values.size();
    const double ninf = -std::numeric_limits<double>::infinity();
    rep.log_remainder.assign(n_max, std::vector<double>(K, ninf));
    std::vector<double> logt(K);
    for (size_t k = 0; k < K; ++k) {
        const LaplaceResult& r = values[k];
        Real at = abs(r.t);
        logt[k] = static_cast<double>(bmp::log(at));
        Complex tg = pow_polar(at, r.arg_t, -gam);
        Complex lhs = tg * r.value;
        Real floor_ = 16 * (r.error() * abs(tg) + abs(lhs) * bmp::pow(Real(2), -Real(B.bits)));
        Complex partial(0), tl(1);
        Complex tt = polar(at, r.arg_t);
        for (int N = 1; N <= n_max; ++N) {
            partial += B.f[N - 1] * tl;
            tl *= tt;
            Real R = abs(lhs - partial);
            if (R > floor_) rep.log_remainder[N - 1][k] = static_cast<double>(bmp::log(R));
        }
    }
    // fit y = log C + N log K on the measurable entries
    std::vector<std::pair<double, double>> pts;
    for (int N = 1; N <= n_max; ++N)
        for (size_t k = 0; k < K; ++k) {
            double lr = rep.log_remainder[N - 1][k];
            if (lr == ninf) continue;
            pts.push_back({(double)N, lr - N * logt[k] - std::lgamma(1.0 + N / kappa)});
        }
    std::set<double> distinctN;
    for (const auto& p : pts) distinctN.insert(p.first);
    if (distinctN.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, m = (double)pts.size();
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        double a = (sy - b * sx) / m;
        double shift = 0;
        for (const auto& [x, y] : pts) shift = std::max(shift, y - (a + b * x));
        rep.log_C = a + shift;
        rep.log_K = b;
        rep.finite = std::isfinite(rep.log_C) && std::isfinite(rep.log_K);
        rep.min_slack = std::numeric_limits<double>::infinity();
        for (const auto& [x, y] : pts) rep.min_slack = std::min(rep.min_slack, rep.log_C + x * rep.log_K - y);
    }
    // the remainder must shrink like |t|^N
    rep.slope.assign(n_max, {});
    bool ok = true;
    long measured = 0;
    std::vector<size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return logt[a] > logt[b]; });
    // judged on the gap nearest t = 0; coarser gaps still carry subleading terms
    for (int N = 1; N <= n_max; ++N) {
        for (size_t i = 0; i + 1 < K; ++i) {
            size_t a = order[i], b = order[i + 1];
            double la = rep.log_remainder[N - 1][a], lb = rep.log_remainder[N - 1][b];
            if (la == ninf || lb == ninf || logt[a] == logt[b]) continue;
            rep.slope[N - 1].push_back((la - lb) / (logt[a] - logt[b]));
        }
        if (rep.slope[N - 1].empty()) continue;
        ++measured;
        if (rep.slope[N - 1].back() < N - 0.5) ok = false;
    }
    rep.slopes_ok = ok && measured > 0;
    rep.pass = rep.finite && rep.slopes_ok && rep.min_slack >= 0;
    return rep;
}

std::vector<Real> singular_directions_example12(const std::vector<Complex>& x) {
    if (x.size() != 2) throw Error(ErrorKind::Input, "A=(1,2) needs x = (x1, x2)");
    if (is_zero(x[0]) || is_zero(x[1])) throw Error(ErrorKind::DomainViolation, "x1 x2 must be nonzero");
    return {normalize_angle(2 * arg(x[0]) - arg(x[1]))};
}

}  // namespace gkz
