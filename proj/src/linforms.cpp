#include "lnag/linforms.hpp"

#include "lnag/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lnag {

using nlohmann::json;

namespace {

const Interval& PI()
{
    static const Interval v = Interval::pi();
    return v;
}

const Interval& E()
{
    static const Interval v = exp(Interval(1.0));
    return v;
}

Interval I(const Int& x) { return Interval(x); }

Int ceil_of(const Interval& x) { return x.ceil_upper(); }

Rat exact(double x) { return Rat(x); }

std::string istr(const Interval& x) { return x.str(12); }

// Interval-valued or double-valued main inequality of the three-log theorem
template <class R>
R from_int(const Int& x);
template <>
double from_int<double>(const Int& x) { return x.get_d(); }
template <>
Interval from_int<Interval>(const Int& x) { return Interval(x); }

template <class R>
R pi_c();
template <>
double pi_c<double>() { return M_PI; }
template <>
Interval pi_c<Interval>() { return PI(); }

template <class R>
std::pair<R, R> main_sides(const ThreeLogParams& P, const ThreeLogForm& f)
{
    using std::log;
    using std::exp;
    R K = from_int<R>(P.K), L = R((double)P.L);
    R N = K * K * L;
    R Rr = from_int<R>(P.R), Sr = from_int<R>(P.S), Tr = from_int<R>(P.T);
    R g = R(0.25) - N / (R(12.0) * Rr * Sr * Tr);
    R b1 = from_int<R>(f.b_max[0]), b2 = from_int<R>(f.b_max[1]), b3 = from_int<R>(f.b_max[2]);
    R pi = pi_c<R>();
    R one(1.0), two(2.0), three(3.0);
    R logK = log(K);
    R logb = log(((Rr - one) * b2 + (Sr - one) * b1) / two) + log(((Tr - one) * b2 + (Sr - one) * b3) / two) -
             two * logK + three - two * log(two * pi * K / exp(R(1.5))) / (K - one) +
             (two + R(6.0) / (pi * pi) + logK) / (three * K * (K - one));
    R Dd((double)f.D_script);
    R lhs = (K * L / two + L / R(4.0) - one - two * K / (three * L)) * log(R(P.rho));
    R rhs = (Dd + one) * log(N) + g * L * (R(P.a[0]) * Rr + R(P.a[1]) * Sr + R(P.a[2]) * Tr) +
            Dd * (K - one) * logb - two * (one - log(two));
    return {lhs, rhs};
}

Int card(const Int& r, const Int& s, const Int& t, int root_index, int nu)
{
    std::array<Int, 3> v{r + 1, s + 1, t + 1};
    Int c = 1;
    for (int i = 0; i < 3; ++i) c *= (i == root_index) ? Int(std::min<Int>(v[i], Int(nu))) : v[i];
    return c;
}

// required lower bounds for a_i
std::array<Interval, 3> required_a(const ThreeLogForm& f, double rho)
{
    std::array<Interval, 3> r;
    for (int i = 0; i < 3; ++i) r[i] = Interval(rho) * f.abs_log[i] + Interval(2.0 * f.D_script) * f.height[i];
    return r;
}

Int dfloor(double x) { return Int(std::floor(x)); }

}  // namespace

Interval lambda_upper(const Int& p, const Interval& log_y, const Int& D1, const Int& D2)
{
    return -(I(p) / Interval(2.0)) * log_y + log(Interval::parse("2.2") * I(D1) * sqrt(I(D2)));
}

Interval matveev_c1(long D_script, long chi)
{
    if (D_script < 1 || chi < 1 || chi > 2) throw std::invalid_argument("matveev_c1: bad parameters");
    Interval Dd((double)D_script), c((double)chi);
    Interval e = E();
    Interval lead = Interval(5.0 * 1048576.0) / (Interval(6.0) * c);  // 5 * 16^5 / (6 chi)
    Interval t = lead * e * e * e * (Interval(7.0) + Interval(2.0) * c) *
                 pow(Interval(3.0) * e / Interval(2.0), c) *
                 (Interval::parse("20.2") + log(pow(Interval(3.0), Interval(5.5)) * Dd * Dd * log(e * Dd)));
    return t;
}

Interval matveev_log_factor(long D_script)
{
    Interval Dd((double)D_script);
    return Interval(1.5) * E() * Dd * log(E() * Dd);
}

MatveevResult matveev_bound_iterate(const Interval& A1, const Interval& A2_coeff, const Interval& A3,
                                    const Interval& log_y, const Int& p_init, const Interval& lambda_const,
                                    long D_script, long chi, int max_iter)
{
    Interval C = matveev_c1(D_script, chi) * Interval((double)(D_script * D_script));
    Interval cf = matveev_log_factor(D_script);
    MatveevResult res;
    Int p = p_init;
    res.trail.push_back(p);
    for (int it = 0; it < max_iter; ++it) {
        // (p/2) log y < C A1 A2 A3 log(cf (p+1)) + const, A2 = coeff log y
        Interval rhs = C * A1 * A2_coeff * log_y * A3 * log(cf * I(p + 1)) + lambda_const;
        Int q = ceil_of(Interval(2.0) * rhs / log_y);
        if (q > p) {
            if (it == 0 && p == p_init) {
                res.bound = p;
                throw std::runtime_error("matveev_bound_iterate: p_init below the first iterate " + q.get_str());
            }
            throw std::runtime_error("matveev_bound_iterate: iteration not contracting");
        }
        if (q == p) break;
        p = q;
        res.trail.push_back(p);
    }
    res.bound = p;
    return res;
}

Interval LogInstance::h_gamma(const Interval& log_y) const { return Interval((double)k) * log_y / Interval(2.0); }

LogInstance log_instance(const Int& D, const Int& d1)
{
    auto [D1, D2] = decompose(D);
    QuadField F = QuadField::make(D2);
    KappaData K = kappa_data(F, D, d1);
    LogInstance r;
    r.D = D;
    r.D1 = D1;
    r.D2 = D2;
    r.d = K.d;
    r.k = K.k;
    r.kappa = K.kappa;
    r.nu = (D2 == 1) ? 4 : 2;
    r.h_alpha = Interval((double)K.k) * log(I(K.d)) / Interval((double)K.kappa);
    // alpha = conj(alpha0)/alpha0 has argument -2 arg(alpha0)
    Interval u(K.alpha0.u), v(K.alpha0.v);
    Interval theta = atan2(v * sqrt(I(D2)), u);
    Interval phi = Interval(-2.0) * theta;
    Interval twopi = Interval(2.0) * PI();
    // reduce into (-pi, pi]
    long j = std::lround(phi.mid() / twopi.mid());
    phi = phi - Interval((double)j) * twopi;
    r.log_alpha_raw = abs(phi);
    r.log_zeta = twopi / Interval((double)r.nu);
    long jj = std::lround(r.log_alpha_raw.mid() / r.log_zeta.mid());
    r.log_alpha = abs(r.log_alpha_raw - Interval((double)jj) * r.log_zeta);
    r.lambda_const = log(Interval::parse("2.2") * Interval((double)K.k) * I(D1) * sqrt(I(D2)));
    return r;
}

std::string to_string(Orientation o) { return o == Orientation::I ? "I" : "II"; }

ThreeLogForm make_form(const LogInstance& inst, Orientation o, const Interval& log_y, const Int& p_max,
                       bool raw_alpha)
{
    ThreeLogForm f;
    f.orient = o;
    f.nu = inst.nu;
    f.D_script = 1;
    Interval la = raw_alpha ? inst.log_alpha_raw : inst.log_alpha;
    Interval lg = inst.log_zeta / Interval(2.0);  // |log(eps gamma)| after choosing eps
    if (raw_alpha) lg = PI() / Interval(2.0);
    Interval hz(0.0);
    if (o == Orientation::I) {
        f.abs_log = {la, lg, inst.log_zeta};
        f.height = {inst.h_alpha, inst.h_gamma(log_y), hz};
        f.root_index = 2;
    } else {
        f.abs_log = {la, inst.log_zeta, lg};
        f.height = {inst.h_alpha, hz, inst.h_gamma(log_y)};
        f.root_index = 1;
    }
    f.b_max = {Int(inst.kappa), p_max, p_max};
    return f;
}

json ThreeLogParams::to_json() const
{
    auto s = [](const Int& x) { return x.get_str(); };
    return json{{"L", L},         {"K", s(K)},   {"rho", rho},  {"chi", chi},  {"m", m},      {"a", a},
                {"R1", s(R1)},    {"S1", s(S1)}, {"T1", s(T1)}, {"R2", s(R2)}, {"S2", s(S2)}, {"T2", s(T2)},
                {"R3", s(R3)},    {"S3", s(S3)}, {"T3", s(T3)}, {"R", s(R)},   {"S", s(S)},   {"T", s(T)}};
}

ThreeLogParams ThreeLogParams::from_json(const json& j)
{
    ThreeLogParams P;
    auto g = [&](const char* k) { return Int(j.at(k).get<std::string>()); };
    P.L = j.at("L").get<long>();
    P.K = g("K");
    P.rho = j.at("rho").get<double>();
    P.chi = j.at("chi").get<double>();
    P.m = j.at("m").get<double>();
    P.a = j.at("a").get<std::array<double, 3>>();
    P.R1 = g("R1"); P.S1 = g("S1"); P.T1 = g("T1");
    P.R2 = g("R2"); P.S2 = g("S2"); P.T2 = g("T2");
    P.R3 = g("R3"); P.S3 = g("S3"); P.T3 = g("T3");
    P.R = g("R"); P.S = g("S"); P.T = g("T");
    return P;
}

ThreeLogParams recipe_params(const ThreeLogForm& f, long L, double rho, double m, double chi)
{
    ThreeLogParams P;
    P.L = L;
    P.rho = rho;
    P.m = m;
    P.chi = chi;
    auto req = required_a(f, rho);
    for (int i = 0; i < 3; ++i) P.a[i] = std::max(1.0, req[i].upper());
    double a1 = P.a[0], a2 = P.a[1], a3 = P.a[2];
    double amin = std::min({a1, a2, a3});
    double mL = m * L;
    P.K = dfloor(mL * a1 * a2 * a3);
    double c1 = std::max(std::pow(chi * mL, 2.0 / 3.0), std::sqrt(2.0 * mL / amin));
    double c2 = std::cbrt(2.0) * std::pow(mL, 2.0 / 3.0);
    if (f.root_index >= 0) c2 = std::max(c2, std::sqrt(m / amin) * L);
    double c3 = std::cbrt(6.0 * m * m) * L;
    P.R1 = dfloor(c1 * a2 * a3); P.S1 = dfloor(c1 * a1 * a3); P.T1 = dfloor(c1 * a1 * a2);
    P.R2 = dfloor(c2 * a2 * a3); P.S2 = dfloor(c2 * a1 * a3); P.T2 = dfloor(c2 * a1 * a2);
    P.R3 = dfloor(c3 * a2 * a3); P.S3 = dfloor(c3 * a1 * a3); P.T3 = dfloor(c3 * a1 * a2);
    P.R = P.R1 + P.R2 + P.R3 + 1;
    P.S = P.S1 + P.S2 + P.S3 + 1;
    P.T = P.T1 + P.T2 + P.T3 + 1;
    return P;
}

namespace {

// integer side conditions; appends failures
void integer_conditions(const ThreeLogParams& P, const ThreeLogForm& f, std::vector<std::string>& fail)
{
    if (P.L < 5) fail.push_back("L < 5");
    if (P.rho <= 1) fail.push_back("rho <= 1");
    if (P.chi <= 0) fail.push_back("chi <= 0");
    for (const Int* x : {&P.K, &P.R1, &P.S1, &P.T1, &P.R2, &P.S2, &P.T2, &P.R3, &P.S3, &P.T3})
        if (*x < 3) {
            fail.push_back("an integer parameter is below 3");
            break;
        }
    if (!(P.R > P.R1 + P.R2 + P.R3)) fail.push_back("R <= R1+R2+R3");
    if (!(P.S > P.S1 + P.S2 + P.S3)) fail.push_back("S <= S1+S2+S3");
    if (!(P.T > P.T1 + P.T2 + P.T3)) fail.push_back("T <= T1+T2+T3");
    Int N = P.K * P.K * P.L;
    if (P.R * P.S * P.T < N) fail.push_back("RST < N");
    if (!fail.empty()) return;
    // (i)
    Int pr1 = (P.R1 + 1) * (P.S1 + 1) * (P.T1 + 1);
    Int ms = std::max({P.R1 + P.S1 + 1, P.S1 + P.T1 + 1, P.R1 + P.T1 + 1});
    Rat chi = exact(P.chi);
    if (!(pr1 > P.K * ms) || !(Rat(pr1) > Rat(P.K * P.K) * chi * chi)) fail.push_back("condition (i)");
    if (!(card(P.R1, P.S1, P.T1, f.root_index, f.nu) > P.L)) fail.push_back("condition (ii)");
    if (!((P.R2 + 1) * (P.S2 + 1) * (P.T2 + 1) > 2 * P.K * P.K)) fail.push_back("condition (iii)");
    if (!(card(P.R2, P.S2, P.T2, f.root_index, f.nu) > 2 * P.K * P.L)) fail.push_back("condition (iv)");
    if (!((P.R3 + 1) * (P.S3 + 1) * (P.T3 + 1) > 6 * P.K * P.K * P.L)) fail.push_back("condition (v)");
}

bool fast_admissible(const ThreeLogParams& P, const ThreeLogForm& f)
{
    std::vector<std::string> fail;
    integer_conditions(P, f, fail);
    if (!fail.empty()) return false;
    auto [l, r] = main_sides<double>(P, f);
    return l >= r;
}

}  // namespace

Admissibility threelog_admissible(const ThreeLogParams& P, const ThreeLogForm& f)
{
    Admissibility A;
    integer_conditions(P, f, A.failures);
    auto req = required_a(f, P.rho);
    for (int i = 0; i < 3; ++i)
        if (!certainly_ge(Interval(P.a[i]), req[i])) A.failures.push_back("a_" + std::to_string(i + 1) + " too small");
    if (A.failures.empty()) {
        Interval N = I(P.K) * I(P.K) * Interval((double)P.L);
        Interval g = Interval(0.25) - N / (Interval(12.0) * I(P.R) * I(P.S) * I(P.T));
        if (!(certainly_gt(g, Interval(0.0)) && certainly_lt(g, Interval(0.25)))) A.failures.push_back("g outside (0, 1/4)");
        auto [l, r] = main_sides<Interval>(P, f);
        A.lhs = l.lower();
        A.rhs = r.upper();
        if (!certainly_ge(l, r)) A.failures.push_back("main inequality");
    }
    A.ok = A.failures.empty();
    return A;
}

Interval threelog_p_bound(const ThreeLogParams& P, const LogInstance& inst, const Interval& log_y)
{
    Int mx = std::max({P.R, P.S, P.T});
    Interval KL = I(P.K) * Interval((double)P.L);
    Interval lower = KL * log(Interval(P.rho)) + log(I(mx) * Interval((double)P.L));
    return Interval(2.0) * (lower + inst.lambda_const) / log_y;
}

json TwoLogParams::to_json() const
{
    return json{{"rho", rho},         {"lambda", istr(lambda)}, {"h", istr(h)},     {"chi", istr(chi)},
                {"a1", istr(a1)},     {"a2", istr(a2)},         {"C0p", istr(C0p)}, {"c1p", istr(c1p)},
                {"c2p", istr(c2p)},   {"D", D_script}};
}

TwoLogParams make_twolog_params(const Interval& abs_log1, const Interval& abs_log2, const Interval& h1,
                                const Interval& h2, long D_script, double rho, const Int& b1, const Int& b2)
{
    TwoLogParams t;
    t.D_script = D_script;
    t.rho = rho;
    Interval Dd((double)D_script);
    t.lambda = log(Interval(rho));
    Interval four(4.0);
    Interval r1 = Interval(rho) * abs_log1 + Interval(2.0) * Dd * h1;
    Interval r2 = Interval(rho) * abs_log2 + Interval(2.0) * Dd * h2;
    t.a1 = Interval(max(max(four, t.lambda), r1).upper());
    t.a2 = Interval(max(max(four, t.lambda), r2).upper());
    Interval hreq = max(max(Interval(7.5), Interval(3.0) * t.lambda),
                        Dd * (log(I(b1) / t.a2 + I(b2) / t.a1) + log(t.lambda) + Interval::parse("1.285")) +
                            Interval::parse("0.023"));
    t.h = Interval(hreq.upper());
    t.chi = t.h / t.lambda;
    Interval a12 = t.a1 * t.a2;
    Interval inner = Interval(1.0) / Interval(9.0) + t.lambda / Interval(12.0) * (Interval(1.0) / t.a1 + Interval(1.0) / t.a2) +
                     sqrt(Interval(2.0)) / (Interval(3.0) * sqrt(a12));
    Interval br = (Interval(2.0) + Interval(1.0) / (Interval(2.0) * t.chi * (t.chi + Interval(1.0)))) *
                  (Interval(1.0) / Interval(3.0) + sqrt(inner));
    t.C0p = br * br / (t.lambda * t.lambda * t.lambda);
    t.c1p = Interval(1.0) / (Interval(2.0) * a12);
    t.c2p = Interval::parse("0.177") * pow(a12, Interval(-0.9));
    return t;
}

Interval twolog_bound(const TwoLogParams& t, const Int& b1, const Int& b2)
{
    Interval lo = exp(Interval(1.5)), hi = exp(Interval(3.0));
    if (!(certainly_le(lo, Interval(t.rho)) && certainly_le(Interval(t.rho), hi)))
        throw std::invalid_argument("twolog_bound: rho outside [e^1.5, e^3]");
    if (!certainly_ge(t.a1 * t.a2, Interval(100.0))) throw std::invalid_argument("twolog_bound: a1 a2 < 100");
    Interval Dd((double)t.D_script);
    for (const Interval* a : {&t.a1, &t.a2})
        if (!certainly_ge(*a, max(Interval(4.0), t.lambda))) throw std::invalid_argument("twolog_bound: a_i below max(4, lambda)");
    Interval hreq = max(max(Interval(7.5), Interval(3.0) * t.lambda),
                        Dd * (log(I(b1) / t.a2 + I(b2) / t.a1) + log(t.lambda) + Interval::parse("1.285")) +
                            Interval::parse("0.023"));
    if (!certainly_ge(t.h, hreq)) throw std::invalid_argument("twolog_bound: h below its floor");
    Interval s = t.lambda + t.h;
    return -(t.C0p + t.c1p + t.c2p) * s * s * t.a1 * t.a2;
}

Interval lmn_legacy_bound(const Interval& logA1, const Interval& logA2, const Int& p)
{
    Interval lp = log(I(p));
    Interval m = max(Interval(21.0), lp);
    return -Interval(31.0) * logA1 * logA2 * m * m;
}

Int lmn_legacy_p_bound(const Interval& logA1, const Interval& logA2, const Interval& log_y,
                       const Interval& lambda_const, const Int& p_init)
{
    Int p = p_init;
    for (int it = 0; it < 100; ++it) {
        Interval lb = lmn_legacy_bound(logA1, logA2, p);
        Int q = ceil_of(Interval(2.0) * (lambda_const - lb) / log_y);
        if (q >= p) break;
        p = q;
    }
    return p;
}

CpFilter cp_case_filter(const ThreeLogParams& P, Orientation o, int nu, const Int& p_floor)
{
    CpFilter c;
    c.orient = o;
    c.c12_bound = (o == Orientation::I) ? std::max(P.S1, P.S2) : std::max(P.T1, P.T2);
    c.c12_excluded = p_floor > c.c12_bound;
    Interval r1 = I(P.R1 + 1), s1 = I(P.S1 + 1), t1 = I(P.T1 + 1);
    Interval chi(P.chi);
    Interval root = chi * sqrt(r1 * s1 * t1);
    auto cap = [&](const Interval& a, const Interval& b, const Int& m1, const Int& m2) {
        Interval den = root - I(std::max(m1, m2));
        if (!certainly_gt(den, Interval(0.0))) throw std::runtime_error("cp_case_filter: chi too small for (C3) caps");
        return a * b / den;
    };
    c.X_RS = cap(r1, s1, P.R1, P.S1);
    c.X_ST = cap(s1, t1, P.S1, P.T1);
    c.X_RT = cap(r1, t1, P.R1, P.T1);
    Interval k103 = Interval::parse("1.03");
    c.t1 = ceil_of(k103 * sqrt(s1 * t1 / r1));
    c.t2 = ceil_of(k103 * sqrt(r1 * t1 / s1));
    c.t1_exact = ceil_of(c.X_ST);
    c.t2_exact = ceil_of(c.X_RT);
    Int kap = 2;  // b1 = kappa <= 2
    if (o == Orientation::I) {
        c.small_branches.push_back({"C3 first alternative", ceil_of(Interval(2.0) * c.X_ST)});
        c.small_branches.push_back({"C3 second alternative, t'' != 0", ceil_of(Interval(4.0) * c.X_ST)});
        c.q_cap = ceil_of(I(kap) * c.X_ST);
    } else {
        Interval cap_nu = Interval(2.0 * nu) / (Interval(nu - 1.0) * chi) * sqrt(s1 * t1 / r1);
        c.q_cap = ceil_of(max(cap_nu, I(kap) * c.X_ST));
        c.small_branches.push_back({"C3 second alternative, t' = 0", ceil_of(c.X_RT)});
        c.small_branches.push_back({"C3 second alternative, t'' q' = 0", ceil_of(I(kap) * c.X_ST)});
    }
    return c;
}

namespace {

// best two-log bound on p over a rho grid; log|mult * Lambda| <= log(mult) - (p/2) log y + const
Branch twolog_branch(const std::string& name, const Interval& l1, const Interval& l2, const Interval& h1,
                     const Interval& h2, const Int& b1, const Int& b2, const Interval& log_mult,
                     const LogInstance& inst, const Interval& log_y)
{
    Branch best;
    best.name = name;
    bool have = false;
    for (int i = 0; i <= 15; ++i) {
        double rho = std::exp(1.5 + 1.5 * i / 15.0);
        rho = std::min(std::max(rho, std::nextafter(std::exp(1.5), 100.0) * (1 + 1e-12)), std::exp(3.0) * (1 - 1e-12));
        try {
            TwoLogParams tp = make_twolog_params(l1, l2, h1, h2, 1, rho, b1, b2);
            Interval lb = twolog_bound(tp, b1, b2);
            Int p = ceil_of(Interval(2.0) * (log_mult + inst.lambda_const - lb) / log_y);
            if (!have || p < best.bound) {
                best.bound = p;
                best.detail = tp.to_json();
                have = true;
            }
        } catch (const std::invalid_argument&) {
        }
    }
    if (!have) throw std::runtime_error("two-log branch " + name + ": no admissible rho");
    return best;
}

}  // namespace

namespace {

// all branch bounds for fixed params in one orientation
std::vector<Branch> branches_for(const ThreeLogParams& P, const ThreeLogForm& f, const LogInstance& inst,
                                 const Interval& log_y, const Int& p_max, bool raw_alpha)
{
    std::vector<Branch> out;
    out.push_back({"three-log", ceil_of(threelog_p_bound(P, inst, log_y)), P.to_json()});
    Int mx = std::max({P.R, P.S, P.T});
    // |Lambda| small enough for the Lambda' conversion
    Interval conv = Interval(2.0) * (inst.lambda_const + log(I(mx) * Interval((double)P.L) / (Interval(2.0) * log(Interval(2.0))))) / log_y;
    out.push_back({"Lambda' conversion", ceil_of(conv), {}});
    CpFilter c = cp_case_filter(P, f.orient, f.nu, 0);
    out.push_back({f.orient == Orientation::I ? "C1/C2: p <= max(S1,S2)" : "C1/C2: p <= max(T1,T2)", c.c12_bound, {}});
    for (auto& [n, b] : c.small_branches) out.push_back({n, b, {}});
    Interval la = raw_alpha ? inst.log_alpha_raw : inst.log_alpha;
    Interval lg = raw_alpha ? PI() / Interval(2.0) : inst.log_zeta / Interval(2.0);
    Interval kap((double)inst.kappa);
    Interval hg = inst.h_gamma(log_y);
    // alpha^kappa zeta^q against gamma
    {
        Interval l1 = kap * la + I(c.q_cap) * inst.log_zeta;
        Interval h1 = kap * inst.h_alpha;
        Branch b = twolog_branch(f.orient == Orientation::I ? "C3 t'' = 0 two-log" : "C3 first alternative two-log", l1,
                                 lg, h1, hg, Int(1), p_max, Interval(0.0), inst, log_y);
        b.detail["q_cap"] = c.q_cap.get_str();
        out.push_back(b);
    }
    if (f.orient == Orientation::II) {
        Interval XST = c.X_ST, XRT = c.X_RT;
        Interval l1 = XRT * la + XST * inst.log_zeta;
        Interval h1 = XRT * inst.h_alpha;
        Interval l2 = XST * lg + kap * la;
        Interval h2 = XST * hg + kap * inst.h_alpha;
        Branch b = twolog_branch("C3 second alternative two-log", l1, l2, h1, h2, p_max, p_max, log(XST), inst, log_y);
        b.detail["t1_cap"] = istr(XST);
        b.detail["t2_cap"] = istr(XRT);
        out.push_back(b);
    }
    return out;
}

Int max_bound(const std::vector<Branch>& bs)
{
    Int m = 0;
    for (auto& b : bs) m = std::max(m, b.bound);
    return m;
}

struct Candidate {
    ThreeLogParams P;
    double score = 0;  // approximate three-log p bound
    bool ok = false;
};

// smallest admissible m on [1, 500] for a cell, by bisection on log m
Candidate best_in_cell(const ThreeLogForm& f, const LogInstance& inst, double logy, long L, double rho, double chi,
                       long& checks)
{
    Candidate c;
    auto adm = [&](double m, ThreeLogParams& out) {
        ++checks;
        out = recipe_params(f, L, rho, m, chi);
        return fast_admissible(out, f);
    };
    ThreeLogParams P;
    double hi = 500.0, lo = 1.0;
    if (!adm(hi, P)) return c;
    ThreeLogParams best = P;
    if (adm(lo, P)) {
        best = P;
    } else {
        for (int it = 0; it < 22; ++it) {
            double mid = std::sqrt(lo * hi);
            if (adm(mid, P)) {
                hi = mid;
                best = P;
            } else {
                lo = mid;
            }
        }
    }
    c.P = best;
    c.ok = true;
    double mx = std::max({best.R, best.S, best.T}).get_d();
    c.score = 2.0 * (best.K.get_d() * L * std::log(rho) + std::log(mx * L) + inst.lambda_const.mid()) / logy;
    return c;
}

struct OrientResult {
    Candidate cand;
    std::vector<Branch> branches;
    Int bound;
    bool ok = false;
};

OrientResult search_orientation(const LogInstance& inst, Orientation o, const Interval& log_y, const Int& p_max,
                                const SearchConfig& cfg, long& checks)
{
    ThreeLogForm f = make_form(inst, o, log_y, p_max, cfg.raw_alpha);
    double logy = log_y.lower();
    std::vector<long> Ls = {5, 6, 8, 10, 12, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 135, 150, 175, 200, 250, 300};
    std::vector<double> rhos;
    for (int i = 0; i < 20; ++i) rhos.push_back(1.2 * std::pow(10.0, i / 19.0));
    std::vector<double> chis = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.25, 1.5, 2.0};
    // a full evaluation includes the (C3) two-log branches; done for the best m of each (L, rho) and chi
    OrientResult best;
    auto evaluate = [&](const Candidate& c) -> std::pair<Int, std::vector<Branch>> {
        try {
            auto bs = branches_for(c.P, f, inst, log_y, p_max, cfg.raw_alpha);
            return {max_bound(bs), bs};
        } catch (const std::runtime_error&) {
            return {Int(-1), {}};
        }
    };
    std::vector<std::pair<double, Candidate>> pool;
    for (long L : Ls)
        for (double rho : rhos)
            for (double chi : chis) {
                if (checks >= cfg.budget) break;
                Candidate c = best_in_cell(f, inst, logy, L, rho, chi, checks);
                if (c.ok) pool.push_back({c.score, c});
            }
    if (pool.empty()) return best;
    std::sort(pool.begin(), pool.end(), [](auto& x, auto& y) { return x.first < y.first; });
    // score with all branches for the leading cells
    size_t top = std::min<size_t>(pool.size(), 40);
    for (size_t i = 0; i < top; ++i) {
        auto [b, bs] = evaluate(pool[i].second);
        if (b < 0) continue;
        if (!best.ok || b < best.bound) {
            best.ok = true;
            best.bound = b;
            best.branches = bs;
            best.cand = pool[i].second;
        }
    }
    if (!best.ok) return best;
    // coordinate refinement on (L, rho, chi)
    double drho = 0.1, dchi = 0.2;
    long dL = 8;
    while ((dL >= 1 || drho > 0.002) && checks < cfg.budget) {
        bool improved = false;
        const ThreeLogParams& P0 = best.cand.P;
        std::vector<std::tuple<long, double, double>> moves = {
            {P0.L + dL, P0.rho, P0.chi},           {P0.L - dL, P0.rho, P0.chi},
            {P0.L, P0.rho * (1 + drho), P0.chi},   {P0.L, P0.rho / (1 + drho), P0.chi},
            {P0.L, P0.rho, P0.chi * (1 + dchi)},   {P0.L, P0.rho, P0.chi / (1 + dchi)}};
        for (auto [L, rho, chi] : moves) {
            if (L < 5 || rho <= 1.01 || chi <= 0.01) continue;
            Candidate c = best_in_cell(f, inst, logy, L, rho, chi, checks);
            if (!c.ok) continue;
            auto [b, bs] = evaluate(c);
            if (b >= 0 && b < best.bound) {
                best.bound = b;
                best.branches = bs;
                best.cand = c;
                improved = true;
                break;
            }
        }
        if (!improved) {
            dL /= 2;
            drho /= 2;
            dchi /= 2;
        }
    }
    // certify; nudge m upward if the interval check is borderline
    for (int tries = 0; tries < 8; ++tries) {
        Admissibility A = threelog_admissible(best.cand.P, f);
        if (A.ok) return best;
        ThreeLogParams P = recipe_params(f, best.cand.P.L, best.cand.P.rho, best.cand.P.m * 1.0001, best.cand.P.chi);
        best.cand.P = P;
        auto [b, bs] = evaluate(best.cand);
        best.bound = b;
        best.branches = bs;
    }
    best.ok = false;
    return best;
}

}  // namespace

json BoundResult::to_json() const
{
    json j;
    j["p_bound"] = p_bound.get_str();
    j["mode"] = mode;
    j["p_max_used"] = p_max_used.get_str();
    j["log_y"] = log_y;
    j["checks"] = checks;
    j["raw_alpha"] = raw_alpha;
    json br = json::array();
    for (auto& b : branches) br.push_back({{"name", b.name}, {"bound", b.bound.get_str()}, {"detail", b.detail}});
    j["branches"] = br;
    json ps = json::array();
    for (auto& [o, P] : params) ps.push_back({{"orientation", to_string(o)}, {"params", P.to_json()}});
    j["params"] = ps;
    json t = json::array();
    for (auto& x : trail) t.push_back(x.get_str());
    j["trail"] = t;
    return j;
}

BoundResult threelog_bound_once(const LogInstance& inst, const Interval& log_y, const Int& p_max,
                                const SearchConfig& cfg)
{
    BoundResult r;
    r.mode = "threelog";
    r.p_max_used = p_max;
    r.log_y = log_y.lower();
    r.raw_alpha = cfg.raw_alpha;
    std::vector<Orientation> os = {Orientation::I};
    if (cfg.both_orientations) os.push_back(Orientation::II);
    r.p_bound = 0;
    for (Orientation o : os) {
        long checks = 0;
        OrientResult res = search_orientation(inst, o, log_y, p_max, cfg, checks);
        r.checks += checks;
        if (!res.ok) throw std::runtime_error("threelog_bound: budget exhausted without admissible parameters");
        for (auto b : res.branches) {
            b.name = "(" + to_string(o) + ") " + b.name;
            r.branches.push_back(b);
        }
        r.params.push_back({o, res.cand.P});
        r.p_bound = std::max(r.p_bound, res.bound);
    }
    return r;
}

BoundResult threelog_bound(const LogInstance& inst, const Interval& log_y, const Int& p_init, const SearchConfig& cfg)
{
    Int P = p_init;
    BoundResult last;
    std::vector<Int> trail = {P};
    long checks = 0;
    for (int it = 0; it < 12; ++it) {
        BoundResult r = threelog_bound_once(inst, log_y, P, cfg);
        checks += r.checks;
        if (r.p_bound >= P) {
            if (it == 0) last = r;
            break;
        }
        last = r;
        trail.push_back(r.p_bound);
        bool small_step = Int(r.p_bound * 100) > Int(P * 99);
        P = r.p_bound;
        if (small_step) break;
    }
    last.trail = trail;
    last.checks = checks;
    return last;
}

namespace {

Interval coupled_log_y(const Int& p)
{
    Interval s = sqrt(I(p)) - Interval(1.0);
    return Interval(2.0) * log(s);
}

}  // namespace

BoundResult threelog_bound_coupled(const LogInstance& inst, const Int& p_init, const SearchConfig& cfg)
{
    // any p > P* has y >= (sqrt(P*) - 1)^2; P* is admissible when the bound at that y is <= P*
    Int P = p_init;
    BoundResult best;
    bool have = false;
    std::vector<Int> trail = {P};
    long checks = 0;
    for (int outer = 0; outer < 8; ++outer) {
        Int lo = 100, hi = P;
        BoundResult at_hi;
        bool hi_ok = false;
        {
            BoundResult r = threelog_bound_once(inst, coupled_log_y(hi), P, cfg);
            checks += r.checks;
            if (r.p_bound <= hi) {
                at_hi = r;
                hi_ok = true;
            }
        }
        if (!hi_ok) break;
        // bisection in log scale down to 0.5 percent
        while (Int(hi * 1000) > Int(lo * 1005)) {
            Int mid = Int(sqrt(Interval(lo) * Interval(hi)).mid());
            if (mid <= lo || mid >= hi) break;
            BoundResult r = threelog_bound_once(inst, coupled_log_y(mid), P, cfg);
            checks += r.checks;
            if (r.p_bound <= mid) {
                hi = mid;
                at_hi = r;
            } else {
                lo = mid;
            }
        }
        at_hi.p_bound = hi;
        at_hi.log_y = coupled_log_y(hi).lower();
        bool small_step = Int(hi * 100) > Int(P * 99);
        best = at_hi;
        have = true;
        trail.push_back(hi);
        P = hi;
        if (small_step) break;
    }
    if (!have) throw std::runtime_error("threelog_bound_coupled: no admissible fixed point");
    best.mode = "threelog-coupled";
    best.trail = trail;
    best.checks = checks;
    return best;
}

bool replay_bound(const BoundResult& r, const LogInstance& inst)
{
    Interval log_y(r.log_y);
    bool raw = r.raw_alpha;
    for (auto& [o, P] : r.params) {
        ThreeLogForm f = make_form(inst, o, log_y, r.p_max_used, raw);
        if (!threelog_admissible(P, f).ok) return false;
        auto bs = branches_for(P, f, inst, log_y, r.p_max_used, raw);
        // the stored bound must dominate every recomputed branch
        if (max_bound(bs) > r.p_bound) return false;
    }
    return true;
}

}  // namespace lnag
