#include "gkz/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gkz::cli {

namespace bmp = boost::multiprecision;

namespace {

constexpr long kGenericScanBound = 12;
constexpr size_t kResidueSample = 8;

Error spec_error(const std::string& msg) { return Error(ErrorKind::Input, msg); }

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string number_string(const json& v, const std::string& what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long>());
    throw spec_error(what + ": expected a rational string");
}

long get_long(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw spec_error(what + ": expected an integer");
    return v.get<long>();
}

IVec int_vector(const json& v, const std::string& what) {
    if (!v.is_array()) throw spec_error(what + ": expected an array");
    IVec out;
    for (const auto& e : v) out.push_back(get_long(e, what));
    return out;
}

json q_list(const QVec& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

json g_list(const GVec& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

json labels(const Index& idx) {
    json a = json::array();
    for (int i : idx) a.push_back(i + 1);
    return a;
}

json opt_long(const std::optional<long>& v) { return v ? json(*v) : json(nullptr); }

std::optional<long> get_opt_long(const json& v, const std::string& what) {
    if (v.is_null()) return std::nullopt;
    return get_long(v, what);
}

json read_json_file(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw spec_error("cannot open " + path);
        buf << in.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw spec_error(path + ": " + e.what());
    }
}

QVec weight_or_ones(const ProblemSpec& s) {
    if (s.w) return to_q(*s.w);
    return QVec(s.A[0].size(), Q(1));
}

const IVec& need_w(const ProblemSpec& s) {
    if (!s.w) throw spec_error("this command needs a weight vector w");
    return *s.w;
}

const GVec& need_beta(const ProblemSpec& s) {
    if (s.beta.empty()) throw spec_error("this command needs beta");
    return s.beta;
}

json precision_json(long bits) {
    json p;
    p["bits"] = bits;
    p["working_bits"] = working_bits(bits);
    p["digits"] = digits_for_bits(bits);
    return p;
}

struct LocusArg {
    Locus kind;
    int j = -1;
};

LocusArg parse_locus(const std::string& s, int n) {
    if (s == "T") return {Locus::T};
    if (s == "Tinf" || s == "Tprime" || s == "T'") return {Locus::Tprime};
    auto colon = s.find(':');
    if (colon == std::string::npos) throw spec_error("locus must be hyperplane:j, infinity:j, T or Tinf");
    std::string head = s.substr(0, colon);
    long j;
    try {
        size_t used = 0;
        j = std::stol(s.substr(colon + 1), &used);
        if (used != s.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw spec_error("bad column in locus " + s);
    }
    if (j < 1 || j > n) throw spec_error("locus column out of range: " + s);
    if (head == "hyperplane") return {Locus::Hyperplane, (int)j - 1};
    if (head == "infinity") return {Locus::Infinity, (int)j - 1};
    throw spec_error("unknown locus " + s);
}

// ---------------------------------------------------------------- commands

json cmd_slopes(const ProblemSpec& s, const std::string& locus) {
    ConfigMatrix A(s.A);
    LocusArg l = parse_locus(locus, A.n());
    SlopeReport r;
    switch (l.kind) {
    case Locus::Hyperplane: r = slopes_along_hyperplane(A, l.j); break;
    case Locus::Infinity: r = slopes_at_infinity(A, l.j); break;
    case Locus::T: r = modified_slopes_along_T(A, need_w(s)); break;
    case Locus::Tprime: r = modified_slopes_along_Tprime(A, need_w(s)); break;
    }
    json out;
    out["command"] = "slopes";
    out["locus"] = locus_name(r.locus);
    out["column"] = r.j >= 0 ? json(r.j + 1) : json(nullptr);
    out["slopes"] = q_list(r.slopes);
    json wit = json::array();
    for (const auto& w : r.witnesses) {
        json e;
        e["slope"] = to_string(w.s);
        e["facet"] = labels(w.facet);
        e["covector"] = q_list(w.covector);
        e["multiplicity"] = to_string(w.multiplicity);
        wit.push_back(e);
    }
    out["witnesses"] = wit;
    out["multiplicity"] = to_string(r.multiplicity());
    return out;
}

json cmd_triangulate(const ProblemSpec& s) {
    ConfigMatrix A(s.A);
    QVec w = weight_or_ones(s);
    Triangulation T = regular_triangulation(A, perturb_weight(A.n(), w));
    json out;
    out["command"] = "triangulate";
    out["w"] = q_list(w);
    json cells = json::array();
    for (size_t i = 0; i < T.simplices.size(); ++i) {
        json c;
        c["sigma"] = labels(T.simplices[i].idx);
        c["volume"] = to_string(T.simplices[i].vol());
        c["certificate"] = q_list(T.certificates[i]);
        cells.push_back(c);
    }
    out["simplices"] = cells;
    out["volume"] = to_string(T.volume());
    out["count_formal_solutions"] = count_formal_solutions(A, w);
    if (!s.beta.empty()) {
        json ex = json::array();
        for (const auto& e : exponents_for_weight(A, s.beta, w)) ex.push_back(exponent_to_json(e));
        out["exponents"] = ex;
    }
    return out;
}

Exponent chosen_exponent(const ProblemSpec& s, const ConfigMatrix& A, int infinity = -1) {
    Simplex sg = make_simplex(A, *s.sigma);
    IVec k = s.k ? *s.k : IVec(A.n() - A.d(), 0);
    return exponent_from_k(A.q(), need_beta(s), sg, k, infinity);
}

json cmd_series(const ProblemSpec& s, std::string kind, const std::string& locus) {
    ConfigMatrix A(s.A);
    if (kind.empty()) kind = s.w ? "psi" : "phi";
    json out;
    out["command"] = "series";
    out["kind"] = kind;
    out["spec"] = spec_to_json(s);
    json sols = json::array();
    QMat M = A.q();

    if (kind == "phi" || kind == "psi") {
        std::vector<Exponent> ex;
        if (s.sigma)
            ex.push_back(chosen_exponent(s, A));
        else
            ex = exponents_for_weight(A, need_beta(s), kind == "psi" ? to_q(need_w(s)) : weight_or_ones(s));
        for (const auto& e : ex) {
            json sol;
            sol["exponent"] = exponent_to_json(e);
            json g;
            if (kind == "phi") {
                auto gc = gevrey_index_coordinate(M, *e.sigma);
                g["s"] = to_string(gc.s);
                g["Z"] = labels(gc.Z);
                sol["gevrey"] = g;
                sol["series"] = series_to_json(phi_v(A, e, s.truncation.x_degree));
            } else {
                QVec w = to_q(need_w(s));
                Q r = gevrey_index_T(M, w, *e.sigma);
                g["r"] = to_string(r);
                g["s"] = to_string(r + 1);
                json ratios = json::object();
                for (const auto& [i, q] : gevrey_index_T_ratios(M, w, *e.sigma)) ratios[std::to_string(i + 1)] = to_string(q);
                g["ratios"] = ratios;
                sol["gevrey"] = g;
                sol["series"] = series_to_json(psi_v(A, need_w(s), s.alpha, e, s.truncation));
            }
            sols.push_back(sol);
        }
    } else if (kind == "at_infinity") {
        if (locus.empty()) throw spec_error("kind at_infinity needs --locus infinity:j");
        LocusArg l = parse_locus(locus, A.n());
        if (l.kind != Locus::Infinity) throw spec_error("kind at_infinity needs --locus infinity:j");
        if (!s.sigma) throw spec_error("kind at_infinity needs sigma in the spec");
        out["column"] = l.j + 1;
        for (const auto& e : exponents_at_infinity(A, need_beta(s), make_simplex(A, *s.sigma), l.j)) {
            json sol;
            sol["exponent"] = exponent_to_json(e);
            sol["series"] = series_to_json(phi_v(A, e, s.truncation.x_degree));
            sols.push_back(sol);
        }
    } else if (kind == "mod_convergent") {
        auto mc = modified_solutions_mod_convergent(A, need_w(s), s.alpha, need_beta(s), s.truncation);
        out["slopes"] = q_list(mc.slopes);
        out["multiplicity"] = mc.multiplicity;
        for (size_t i = 0; i < mc.series.size(); ++i) {
            json sol;
            sol["exponent"] = exponent_to_json(mc.exponents[i]);
            sol["facet"] = labels(mc.facets[i]);
            sol["series"] = series_to_json(mc.series[i]);
            sols.push_back(sol);
        }
    } else {
        throw spec_error("unknown series kind " + kind + " (phi, psi, mod_convergent, at_infinity)");
    }
    out["count"] = sols.size();
    out["solutions"] = sols;
    return out;
}

json cmd_verify(const ProblemSpec& s, const json& doc, bool& all_zero) {
    if (!doc.contains("kind") || !doc.contains("solutions")) throw spec_error("not a series document");
    std::string kind = doc["kind"].get<std::string>();
    ConfigMatrix A(s.A);
    System S;
    if (kind == "phi" || kind == "at_infinity")
        S = gkz_system(A.rows(), need_beta(s), s.degree_bound);
    else if (kind == "psi" || kind == "mod_convergent")
        S = modified_system(A, need_w(s), s.alpha, need_beta(s), s.degree_bound);
    else
        throw spec_error("unknown series kind " + kind);
    auto gens = S.all();

    json out;
    out["command"] = "verify";
    out["kind"] = kind;
    json sys;
    sys["kind"] = system_kind_name(S.kind);
    sys["degree_bound"] = s.degree_bound;
    sys["generators"] = gens.size();
    out["system"] = sys;
    all_zero = true;
    json sols = json::array();
    long idx = 1;
    for (const auto& sol : doc["solutions"]) {
        TruncatedSeries f = series_from_json(sol.at("series"));
        auto rep = annihilation_report(gens, f);
        json r;
        r["solution"] = idx++;
        r["all_zero"] = rep.all_zero();
        r["checked"] = rep.checked();
        json gj = json::array();
        for (const auto& g : rep.generators) {
            json e;
            e["operator"] = g.op.str();
            e["checked"] = g.checked;
            e["residue_count"] = g.residues.size();
            json res = json::array();
            for (size_t i = 0; i < g.residues.size() && i < kResidueSample; ++i) {
                json x;
                x["u"] = g.residues[i].u;
                x["value"] = to_string(g.residues[i].value);
                res.push_back(x);
            }
            e["residues"] = res;
            gj.push_back(e);
        }
        r["generators"] = gj;
        // residues of a solution modulo convergent series sit in finitely many t powers
        json range = nullptr;
        if (f.t_index >= 0) {
            std::optional<long> lo, hi;
            for (const auto& g : rep.generators)
                for (const auto& x : g.residues) {
                    long e = x.u[f.t_index];
                    lo = lo ? std::min(*lo, e) : e;
                    hi = hi ? std::max(*hi, e) : e;
                }
            if (lo) range = json::array({*lo, *hi});
        }
        r["residue_t_range"] = range;
        if (!rep.all_zero()) all_zero = false;
        sols.push_back(r);
    }
    out["solutions"] = sols;
    out["all_zero"] = all_zero;
    return out;
}

struct BorelArgs {
    std::string x, theta, t, mode = "auto";
    int n_max = 15;
};

std::vector<Complex> parse_t_list(const std::string& list, const Real& theta) {
    std::vector<Complex> ts;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto at = item.find('@');
        Real r, phi = theta;
        try {
            r = Real(item.substr(0, at));
        } catch (const std::exception&) {
            throw spec_error("bad t entry " + item);
        }
        if (at != std::string::npos) phi = parse_angle(item.substr(at + 1));
        if (!(r > 0)) throw spec_error("|t| must be positive: " + item);
        ts.push_back(polar(r, phi));
    }
    if (ts.empty()) throw spec_error("empty t list");
    return ts;
}

json cmd_borel(const ProblemSpec& s, const BorelArgs& a) {
    ConfigMatrix A(s.A);
    const IVec& w = need_w(s);
    const GVec& beta = need_beta(s);
    GVec x = a.x.empty() ? s.x : parse_point(a.x);
    if ((int)x.size() != A.n()) throw spec_error("x needs one entry per column of A");
    if (a.theta.empty()) throw spec_error("borel needs --theta");

    Exponent e = s.sigma ? chosen_exponent(s, A) : exponents_for_weight(A, beta, to_q(w)).at(0);
    Q r = gevrey_index_T(A.q(), to_q(w), *e.sigma);
    if (r <= 0) throw Error(ErrorKind::NoSlope, "no positive Gevrey index along T: the series converges");
    Q kappa = 1 / r;
    long bits = s.precision;
    auto psi = psi_for_borel(A, w, s.alpha, e, s.truncation.t_order);
    BorelSeries B = borel_transform(psi, x, kappa, bits);

    PrecisionGuard g(working_bits(bits));
    Real theta = parse_angle(a.theta);
    std::string t_list = a.t.empty() ? "1e-1,1e-2,1e-3,1e-4" : a.t;
    auto ts = parse_t_list(t_list, theta);

    bool ex12 = A.rows() == IMat{{1, 2}} && w == IVec{0, 1} && kappa == 1;
    LaplaceOptions opt;
    opt.bits = bits;
    Ode ode;
    if (a.mode == "ode" || (a.mode == "auto" && ex12)) {
        if (!ex12) throw spec_error("ode mode has an equation only for A=(1,2), w=(0,1)");
        ode = example12_ode(B.x, to_complex(beta[0]));
        opt.mode = LaplaceMode::Ode;
        opt.ode = &ode;
    } else if (a.mode == "series" || a.mode == "auto") {
        opt.mode = LaplaceMode::Series;
    } else {
        throw spec_error("mode must be auto, series or ode");
    }

    json out;
    out["command"] = "borel";
    out["precision"] = precision_json(bits);
    out["exponent"] = exponent_to_json(e);
    out["r"] = to_string(r);
    out["kappa"] = to_string(kappa);
    out["gamma"] = to_string(B.gamma);
    out["x"] = g_list(x);
    out["theta"] = real_json(theta, bits);
    out["mode"] = laplace_mode_name(opt.mode);
    out["coefficients"] = B.length();
    out["exact_layers"] = B.complete + 1;
    out["radius_estimate"] = real_json(B.radius_estimate(), 53);
    if (ex12) {
        json sd = json::array();
        for (const auto& d : singular_directions_example12(B.x)) sd.push_back(real_json(d, bits));
        out["singular_directions"] = sd;
    }

    std::vector<LaplaceResult> vals;
    json res = json::array();
    for (const auto& t : ts) {
        LaplaceResult L = laplace_sum(B, theta, t, opt);
        json e2;
        e2["t"] = complex_json(t, bits);
        e2["value"] = complex_json(L.value, bits);
        e2["error"] = real_json(L.error(), 53);
        e2["quad_error"] = real_json(L.quad_error, 53);
        e2["tail_bound"] = real_json(L.tail_bound, 53);
        e2["rounding"] = real_json(L.rounding, 53);
        e2["cut"] = real_json(L.cut, 53);
        e2["levels"] = L.levels;
        e2["evaluations"] = L.evaluations;
        res.push_back(e2);
        vals.push_back(L);
    }
    out["results"] = res;

    if (vals.size() >= 2) {
        int n_max = (int)std::min<long>({(long)a.n_max, B.complete + 1, B.length()});
        auto rep = asymptotic_check(vals, B, n_max);
        json aj;
        aj["pass"] = rep.pass;
        aj["finite"] = rep.finite;
        aj["slopes_ok"] = rep.slopes_ok;
        aj["n_max"] = rep.n_max;
        aj["log_C"] = fmt_double(rep.log_C);
        aj["log_K"] = fmt_double(rep.log_K);
        aj["min_slack"] = fmt_double(rep.min_slack);
        out["asymptotic"] = aj;
    } else {
        out["asymptotic"] = nullptr;
    }
    return out;
}

json cmd_hypotheses(const ProblemSpec& s) {
    ConfigMatrix A(s.A);
    auto rep = check_summability_hypotheses(A, need_w(s), s.beta, s.alpha);
    json out;
    out["command"] = "hypotheses";
    out["ones_not_in_rowspan_A"] = rep.ones_not_in_rowspan_A;
    out["ones_in_rowspan_Aw"] = rep.ones_in_rowspan_Aw;
    out["aw_criterion"] = rep.aw_criterion;
    out["aw_consistent"] = rep.aw_consistent;
    out["index_consistent"] = rep.index_consistent;
    out["kernel_integrality"] = rep.kernel_integrality;
    out["r_gamma_nonintegral"] = rep.r_gamma_nonintegral;
    out["gamma_ray_case"] = rep.gamma_ray_case;
    out["all_pass"] = rep.all_pass();
    out["r"] = to_string(rep.r);
    out["gamma"] = to_string(rep.gamma);
    out["beta"] = g_list(rep.beta);
    out["sigma"] = labels(rep.sigma.idx);
    if (rep.r > 0) {
        auto M = borel_matrix(A, need_w(s), rep.r, BorelVariant::GevreyIndex, rep.beta, s.alpha);
        json m;
        m["matrix"] = M.matrix;
        m["beta"] = g_list(M.beta);
        out["borel_matrix"] = m;
    } else {
        out["borel_matrix"] = nullptr;
    }
    return out;
}

}  // namespace

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::Input:
    case ErrorKind::SingularSimplex:
    case ErrorKind::NonSimplicialCell: return kSpecError;
    default: return kObstruction;
    }
}

ProblemSpec parse_spec(const json& j, std::optional<std::uint64_t> seed_override) {
    if (!j.is_object()) throw spec_error("spec must be a JSON object");
    ProblemSpec s;
    if (!j.contains("A") || !j["A"].is_array() || j["A"].empty()) throw spec_error("spec needs a nonempty matrix A");
    for (const auto& row : j["A"]) s.A.push_back(int_vector(row, "A"));
    size_t n = s.A[0].size();
    for (const auto& row : s.A)
        if (row.size() != n || n == 0) throw spec_error("A must be rectangular");
    ConfigMatrix A(s.A);  // rank and lattice checks
    int d = A.d();

    if (j.contains("w") && !j["w"].is_null()) {
        s.w = int_vector(j["w"], "w");
        if (s.w->size() != n) throw spec_error("|w| must equal the number of columns");
    }
    if (j.contains("beta") && !j["beta"].is_null()) {
        const auto& b = j["beta"];
        if (b.is_string()) {
            std::string str = b.get<std::string>();
            if (str.rfind("generic:", 0) != 0) throw spec_error("beta must be a list or generic:<seed>");
            std::uint64_t seed;
            try {
                seed = std::stoull(str.substr(8));
            } catch (const std::exception&) {
                throw spec_error("bad seed in " + str);
            }
            if (seed_override) seed = *seed_override;
            s.seed = seed;
            s.beta = generic_parameter_sampler(A, kGenericScanBound, seed);
        } else if (b.is_array()) {
            for (const auto& e : b) s.beta.push_back(parse_gaussian(number_string(e, "beta")));
            if ((int)s.beta.size() != d) throw spec_error("|beta| must equal the number of rows");
        } else {
            throw spec_error("beta must be a list or generic:<seed>");
        }
    }
    s.alpha = j.contains("alpha") ? parse_gaussian(number_string(j["alpha"], "alpha")) : GQ(0);
    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        if (!t.is_object()) throw spec_error("truncation must be an object");
        if (t.contains("t_order")) s.truncation.t_order = get_long(t["t_order"], "t_order");
        if (t.contains("x_degree")) s.truncation.x_degree = get_long(t["x_degree"], "x_degree");
        if (s.truncation.t_order < 0 || s.truncation.x_degree < 0) throw spec_error("truncation must be nonnegative");
    }
    s.precision = j.contains("precision") ? get_long(j["precision"], "precision") : default_precision_bits();
    if (s.precision < 16 || s.precision > 100000) throw spec_error("precision must lie in [16, 100000] bits");
    if (j.contains("degree_bound")) s.degree_bound = get_long(j["degree_bound"], "degree_bound");
    if (s.degree_bound < 1) throw spec_error("degree_bound must be positive");
    if (j.contains("sigma") && !j["sigma"].is_null()) {
        Index idx;
        for (long c : int_vector(j["sigma"], "sigma")) {
            if (c < 1 || c > (long)n) throw spec_error("sigma label out of range");
            idx.push_back((int)c - 1);
        }
        if ((int)idx.size() != d) throw spec_error("sigma needs d labels");
        s.sigma = idx;
    }
    if (j.contains("k") && !j["k"].is_null()) {
        s.k = int_vector(j["k"], "k");
        if ((long)s.k->size() != (long)n - d) throw spec_error("k needs n − d entries");
    }
    if (j.contains("x") && !j["x"].is_null()) {
        if (!j["x"].is_array()) throw spec_error("x must be a list");
        for (const auto& e : j["x"]) s.x.push_back(parse_gaussian(number_string(e, "x")));
    }
    return s;
}

json spec_to_json(const ProblemSpec& s) {
    json j;
    j["A"] = s.A;
    j["w"] = s.w ? json(*s.w) : json(nullptr);
    j["beta"] = g_list(s.beta);
    if (s.seed) j["beta_seed"] = *s.seed;
    j["alpha"] = to_string(s.alpha);
    json t;
    t["t_order"] = s.truncation.t_order;
    t["x_degree"] = s.truncation.x_degree;
    j["truncation"] = t;
    j["precision"] = s.precision;
    j["degree_bound"] = s.degree_bound;
    if (s.sigma) j["sigma"] = labels(*s.sigma);
    if (s.k) j["k"] = *s.k;
    if (!s.x.empty()) j["x"] = g_list(s.x);
    return j;
}

json exponent_to_json(const Exponent& e) {
    json j;
    j["v"] = g_list(e.v);
    j["sigma"] = e.sigma ? labels(e.sigma->idx) : json(nullptr);
    j["k"] = e.k;
    j["infinity"] = e.infinity >= 0 ? json(e.infinity + 1) : json(nullptr);
    j["nsupp"] = labels(e.nsupp());
    return j;
}

json series_to_json(const TruncatedSeries& f) {
    json j;
    j["base"] = g_list(f.base);
    j["t_index"] = f.t_index >= 0 ? json(f.t_index + 1) : json(nullptr);
    j["borel"] = f.borel;
    json terms = json::array();
    for (const auto& [u, c] : f.terms) {
        json e;
        e["u"] = u;
        e["c"] = to_string(c);
        terms.push_back(e);
    }
    j["terms"] = terms;
    j["rel"] = f.rel;
    j["rhs"] = f.rhs;
    json lo = json::array(), hi = json::array();
    for (const auto& v : f.lo) lo.push_back(opt_long(v));
    for (const auto& v : f.hi) hi.push_back(opt_long(v));
    j["lo"] = lo;
    j["hi"] = hi;
    json win = json::array();
    for (const auto& w : f.window) {
        json e;
        e["coord"] = w.coord + 1;
        e["sign"] = w.sign;
        e["offset"] = w.offset;
        win.push_back(e);
    }
    j["window"] = win;
    j["x_degree"] = f.x_degree;
    j["t_lo"] = opt_long(f.t_lo);
    j["t_hi"] = opt_long(f.t_hi);
    return j;
}

TruncatedSeries series_from_json(const json& j) {
    try {
        TruncatedSeries f;
        for (const auto& b : j.at("base")) f.base.push_back(parse_gaussian(b.get<std::string>()));
        int N = f.size();
        f.t_index = j.at("t_index").is_null() ? -1 : j.at("t_index").get<int>() - 1;
        if (f.t_index < -1 || f.t_index >= N) throw spec_error("t_index out of range");
        f.borel = j.at("borel").get<bool>();
        for (const auto& e : j.at("terms")) {
            IVec u = e.at("u").get<IVec>();
            if ((int)u.size() != N) throw spec_error("term offset has wrong length");
            f.terms[u] = parse_gaussian(e.at("c").get<std::string>());
        }
        f.rel = j.at("rel").get<IMat>();
        f.rhs = j.at("rhs").get<IVec>();
        if (f.rel.size() != f.rhs.size()) throw spec_error("rel and rhs differ in length");
        for (const auto& r : f.rel)
            if ((int)r.size() != N) throw spec_error("relation row has wrong length");
        for (const auto& v : j.at("lo")) f.lo.push_back(get_opt_long(v, "lo"));
        for (const auto& v : j.at("hi")) f.hi.push_back(get_opt_long(v, "hi"));
        if ((int)f.lo.size() != N || (int)f.hi.size() != N) throw spec_error("bounds have wrong length");
        for (const auto& e : j.at("window")) {
            int c = e.at("coord").get<int>() - 1;
            if (c < 0 || c >= N) throw spec_error("window coordinate out of range");
            f.window.push_back({c, e.at("sign").get<long>(), e.at("offset").get<long>()});
        }
        f.x_degree = j.at("x_degree").get<long>();
        f.t_lo = get_opt_long(j.at("t_lo"), "t_lo");
        f.t_hi = get_opt_long(j.at("t_hi"), "t_hi");
        return f;
    } catch (const json::exception& e) {
        throw spec_error(std::string("malformed series: ") + e.what());
    }
}

Real parse_angle(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ' && c != '*') s += c;
    auto p = s.find("pi");
    if (p == std::string::npos) {
        try {
            size_t used = 0;
            std::stod(s, &used);  // syntax check only
            if (used != s.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw spec_error("bad angle " + raw);
        }
        return Real(s);
    }
    std::string left = s.substr(0, p), right = s.substr(p + 2);
    Q c = left.empty() || left == "+" ? Q(1) : left == "-" ? Q(-1) : parse_rational(left);
    if (!right.empty()) {
        if (right[0] != '/') throw spec_error("bad angle " + raw);
        c /= parse_rational(right.substr(1));
    }
    return to_real(c) * real_pi();
}

GVec parse_point(const std::string& s) {
    GVec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_gaussian(item));
    return out;
}

json real_json(const Real& x, long bits) {
    if (bmp::isinf(x)) return x > 0 ? "inf" : "-inf";
    return decimal(x, digits_for_bits(bits));
}

json complex_json(const Complex& z, long bits) {
    json j;
    j["re"] = real_json(z.re, bits);
    j["im"] = real_json(z.im, bits);
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Irregularity data, series solutions and Borel sums of GKZ systems"};
    app.require_subcommand(1);
    std::string spec_file, locus, kind, series_file;
    bool pretty = false, compact = false;
    std::optional<long> precision, t_order, x_degree;
    std::optional<std::uint64_t> seed;
    BorelArgs ba;

    auto common = [&](CLI::App* c) {
        c->add_option("--spec", spec_file, "problem spec (JSON file, - for stdin)")->required();
        c->add_option("--precision", precision, "working precision in bits");
        c->add_option("--seed", seed, "seed for beta given as generic:<seed>");
        c->add_option("--t-order", t_order, "truncation order in t");
        c->add_option("--x-degree", x_degree, "truncation degree in x");
        c->add_flag("--json", compact, "compact JSON (default)");
        c->add_flag("--pretty", pretty, "indented JSON");
    };
    auto* slopes = app.add_subcommand("slopes", "slopes along a locus");
    common(slopes);
    slopes->add_option("--locus", locus, "hyperplane:j, infinity:j, T or Tinf")->required();
    auto* tri = app.add_subcommand("triangulate", "regular triangulation and solution count");
    common(tri);
    auto* series = app.add_subcommand("series", "truncated series solutions");
    common(series);
    series->add_option("--kind", kind, "phi, psi, mod_convergent or at_infinity");
    series->add_option("--locus", locus, "infinity:j for kind at_infinity");
    auto* verify = app.add_subcommand("verify", "annihilation check of a series document");
    common(verify);
    verify->get_option("--spec")->required(false);
    verify->add_option("series", series_file, "output of the series command")->required();
    auto* borel = app.add_subcommand("borel", "Borel transform and Laplace sum");
    common(borel);
    borel->add_option("--x", ba.x, "evaluation point, comma separated");
    borel->add_option("--theta", ba.theta, "direction, e.g. pi/2");
    borel->add_option("--t", ba.t, "comma separated |t| values (or r@angle)");
    borel->add_option("--mode", ba.mode, "auto, series or ode");
    borel->add_option("--n-max", ba.n_max, "largest N in the asymptotic check");
    auto* hyp = app.add_subcommand("hypotheses", "summability hypotheses");
    common(hyp);

    std::vector<std::string> argv_store;
    argv_store.push_back("gkz");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kSpecError;
    }

    auto emit = [&](const json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };
    try {
        json doc;
        if (verify->parsed()) {
            doc = read_json_file(series_file);
            if (spec_file.empty() && !doc.contains("spec")) throw spec_error("series document carries no spec; pass --spec");
        }
        json spec_json = spec_file.empty() ? doc["spec"] : read_json_file(spec_file);
        ProblemSpec s = parse_spec(spec_json, seed);
        if (precision) {
            if (*precision < 16 || *precision > 100000) throw spec_error("precision must lie in [16, 100000] bits");
            s.precision = *precision;
        }
        if (t_order) {
            if (*t_order < 0) throw spec_error("t-order must be nonnegative");
            s.truncation.t_order = *t_order;
        } else if (borel->parsed()) {
            // the coefficient stream must resolve the working precision near ζ = 0
            s.truncation.t_order = std::max(s.truncation.t_order, s.precision + 32);
        }
        if (x_degree) {
            if (*x_degree < 0) throw spec_error("x-degree must be nonnegative");
            s.truncation.x_degree = *x_degree;
        }

        if (slopes->parsed()) emit(cmd_slopes(s, locus));
        if (tri->parsed()) emit(cmd_triangulate(s));
        if (series->parsed()) emit(cmd_series(s, kind, locus));
        if (borel->parsed()) emit(cmd_borel(s, ba));
        if (hyp->parsed()) emit(cmd_hypotheses(s));
        if (verify->parsed()) {
            bool ok = false;
            emit(cmd_verify(s, doc, ok));
            return ok ? kOk : kResidue;
        }
        return kOk;
    } catch (const Error& e) {
        json j;
        j["error"] = error_kind_name(e.kind);
        j["message"] = e.what();
        emit(j);
        err << "gkz: " << error_kind_name(e.kind) << ": " << e.what() << '\n';
        return exit_code(e.kind);
    } catch (const std::exception& e) {
        json j;
        j["error"] = "Input";
        j["message"] = e.what();
        emit(j);
        err << "gkz: " << e.what() << '\n';
        return kSpecError;
    }
}

}  // namespace gkz::cli
