#include "lnag/modmethods.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace lnag {

FormRef FormRef::from_newform(const NewformRecord& f)
{
    FormRef r;
    r.id = f.id();
    r.field = f.field_poly;
    auto coeffs = f.coeffs;
    r.coeff = [coeffs](uint64_t l) -> std::optional<std::vector<Int>> {
        auto it = coeffs.find((uint32_t)l);
        if (it == coeffs.end()) return std::nullopt;
        return it->second;
    };
    return r;
}

FormRef FormRef::from_curve(const CurveRecord& c)
{
    FormRef r;
    r.id = c.label;
    r.field = {Int(0), Int(1)};
    Weierstrass a = c.a;
    r.curve = a;
    r.coeff = [a](uint64_t l) -> std::optional<std::vector<Int>> {
        return std::vector<Int>{Int(a_l(a, l))};
    };
    return r;
}

namespace {

Int nf_norm(const FormRef& f, const std::vector<Int>& e) { return norm_from_field(f.field, e); }

std::vector<Int> shift(const std::vector<Int>& c, const Int& a)  // a - c
{
    return nf_sub({a}, c);
}

std::vector<Int> require_coeff(const FormRef& f, uint64_t l)
{
    auto c = f.coeff(l);
    if (!c) throw std::out_of_range(f.id + ": c_l unavailable for l = " + std::to_string(l));
    return *c;
}

bool divides(unsigned long p, const Int& v) { return v % p == 0; }

uint64_t primitive_root(uint64_t l)
{
    std::vector<uint64_t> qs;
    uint64_t m = l - 1;
    for (uint64_t q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        qs.push_back(q);
        while (m % q == 0) m /= q;
    }
    if (m > 1) qs.push_back(m);
    for (uint64_t g = 2;; ++g) {
        bool ok = true;
        for (uint64_t q : qs)
            if (powmod(g, (l - 1) / q, l) == 1) { ok = false; break; }
        if (ok) return g;
    }
}

uint64_t theta(const Rat& r, uint64_t l)
{
    uint64_t num = mod_of(r.get_num(), l), den = mod_of(r.get_den(), l);
    return mulmod(num, invmod(den, l), l);
}

}  // namespace

long frey_a_l(const FreyCase& c, const Int& d2, uint64_t tau, uint64_t l)
{
    return a_l(frey_mod_l(c, tau, d2, l), l);
}

bool congruence_holds(const Int& t, const FormRef& f, const Signature& sig, const FreyCase& c, uint64_t l,
                      unsigned long p)
{
    if (l == 2 || sig.D % l == 0) throw std::invalid_argument("congruence_holds: l | 2D");
    auto cl = require_coeff(f, l);
    uint64_t tau = mod_of(t, l);
    if ((mulmod(tau, tau, l) + mod_of(sig.d2, l)) % l != 0) {
        long a = frey_a_l(c, sig.d2, tau, l);
        return divides(p, nf_norm(f, shift(cl, a)));
    }
    Int l1 = Int(l) + 1;
    return divides(p, nf_norm(f, shift(cl, l1))) || divides(p, nf_norm(f, nf_sub({l1}, nf_sub({}, cl))));
}

Int method1_bl(const FormRef& f, const Signature& sig, const FreyCase& c, uint64_t l)
{
    if (l == 2 || sig.D % l == 0) throw std::invalid_argument("method1_bl: l | 2D");
    auto cl = require_coeff(f, l);
    Int B = 0;
    bool first = true;
    auto fold = [&](const Int& v) {
        Int a = abs(v);
        if (first) { B = a; first = false; }
        else mpz_lcm(B.get_mpz_t(), B.get_mpz_t(), a.get_mpz_t());
    };
    uint64_t d2 = mod_of(sig.d2, l);
    for (uint64_t tau = 0; tau < l; ++tau) {
        if ((mulmod(tau, tau, l) + d2) % l == 0) continue;
        fold(nf_norm(f, shift(cl, frey_a_l(c, sig.d2, tau, l))));
    }
    if (kronecker(-sig.d2, Int(l)) == 1) {
        Int l1 = Int(l) + 1;
        std::vector<Int> neg = nf_sub({}, cl);
        fold(nf_norm(f, nf_sub({l1}, neg)));  // l + 1 + c_l
        fold(nf_norm(f, shift(cl, l1)));      // l + 1 - c_l
    }
    if (!f.rational()) B *= l;
    return B;
}

Method1Result method1_surviving_exponents(const FormRef& f, const Signature& sig, const FreyCase& c,
                                          const std::vector<uint64_t>& ls)
{
    Method1Result r;
    r.gcd = 0;
    for (uint64_t l : ls) {
        Int b = method1_bl(f, sig, c, l);
        r.bl.emplace_back(l, b);
        if (b != 0) r.gcd = gcd(r.gcd, b);
    }
    if (r.gcd == 0) {
        r.unbounded = true;
        return r;
    }
    if (r.gcd == 1) return r;
    for (auto& [q, e] : factor(r.gcd).terms)
        if (q.fits_ulong_p() && cond_check(sig.D, q.get_ui())) r.survivors.push_back(q.get_ui());
    return r;
}

std::vector<uint64_t> roots_of_unity(unsigned long n, uint64_t l)
{
    if ((l - 1) % n != 0) throw std::invalid_argument("roots_of_unity: n does not divide l - 1");
    uint64_t h = powmod(primitive_root(l), (l - 1) / n, l);
    std::vector<uint64_t> out;
    uint64_t z = 1;
    for (unsigned long k = 0; k < n; ++k) {
        out.push_back(z);
        z = mulmod(z, h, l);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint64_t> A_set(const Int& D, unsigned long n, uint64_t l)
{
    uint64_t Dm = mod_of(D, l);
    std::vector<uint64_t> out;
    for (uint64_t z : roots_of_unity(n, l))
        if (jacobi_u64((z + l - Dm) % l, l) >= 0) out.push_back(z);
    return out;
}

const char* to_string(M2Status s)
{
    switch (s) {
    case M2Status::ok: return "ok";
    case M2Status::l_not_prime: return "l not prime";
    case M2Status::l_divides_D: return "l divides D";
    case M2Status::cond_b: return "condition (b) fails";
    case M2Status::no_coefficient: return "c_l not available";
    case M2Status::cond_c: return "condition (c) fails";
    case M2Status::l_too_large: return "l > p^2/4";
    }
    return "?";
}

namespace {

// delta_zeta with delta^2 = (zeta - D)/d1^2 mod l, smaller root
uint64_t delta_of(uint64_t zeta, const Signature& sig, uint64_t l)
{
    uint64_t v = mulmod((zeta + l - mod_of(sig.D, l)) % l, invmod(mulmod(mod_of(sig.d1, l), mod_of(sig.d1, l), l), l), l);
    uint64_t r;
    if (!sqrtmod(v, l, r)) throw std::logic_error("delta_of: zeta outside A(n, l)");
    return r;
}

std::optional<M2Trial> prefix_checks(const Signature& sig, unsigned long p, unsigned long n, M2Trial& t)
{
    t.n = n;
    uint64_t l = (uint64_t)n * p + 1;
    t.l = l;
    if (!is_prime_u64(l)) { t.status = M2Status::l_not_prime; return t; }
    if (sig.D % l == 0) { t.status = M2Status::l_divides_D; return t; }
    return std::nullopt;
}

}  // namespace

M2Trial method2_trial(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p, unsigned long n)
{
    M2Trial t;
    if (auto r = prefix_checks(sig, p, n, t)) return *r;
    uint64_t l = t.l;
    auto cl = f.coeff(l);
    if (!cl) { t.status = M2Status::no_coefficient; return t; }
    if (kronecker(-sig.d2, Int(l)) != -1) {
        auto c2 = nf_mul(f.field, *cl, *cl);
        if (divides(p, nf_norm(f, shift(c2, 4)))) { t.status = M2Status::cond_b; return t; }
    }
    bool one_mod4 = l % 4 == 1;
    auto c2 = nf_mul(f.field, *cl, *cl);
    for (uint64_t z : A_set(sig.D, n, l)) {
        long a = frey_a_l(c, sig.d2, delta_of(z, sig, l), l);
        Int v = one_mod4 ? nf_norm(f, shift(*cl, a)) : nf_norm(f, shift(c2, Int(a) * a));
        if (divides(p, v)) {
            t.status = M2Status::cond_c;
            t.zeta = z;
            return t;
        }
    }
    t.status = M2Status::ok;
    return t;
}

M2Trial method2_rational_trial(const CurveRecord& E, const Signature& sig, const FreyCase& c, unsigned long p,
                               unsigned long n, bool use_prefilter)
{
    if (!E.has_two_torsion) throw std::invalid_argument("method2_rational: curve without 2-torsion");
    M2Trial t;
    if (auto r = prefix_checks(sig, p, n, t)) return *r;
    uint64_t l = t.l;
    if (4 * (unsigned __int128)l > (unsigned __int128)p * p) { t.status = M2Status::l_too_large; return t; }
    long aE = a_l(E.a, l);
    if (kronecker(-sig.d2, Int(l)) != -1) {
        long v = (aE * aE - 4) % (long)p;
        if (v == 0) { t.status = M2Status::cond_b; return t; }
    }
    bool one_mod4 = l % 4 == 1;
    std::seed_seq seq{(uint64_t)mod_of(sig.D, 1ull << 62), (uint64_t)p, (uint64_t)l};
    std::mt19937_64 rng(seq);
    for (uint64_t z : A_set(sig.D, n, l)) {
        auto model = frey_mod_l(c, delta_of(z, sig, l), sig.d2, l);
        if (use_prefilter) {
            bool maybe = random_point_killed_by(model, l, l + 1 - aE, rng);
            if (!one_mod4 && !maybe) maybe = random_point_killed_by(model, l, l + 1 + aE, rng);
            if (!maybe) continue;
        }
        long a = a_l(model, l);
        if (a == aE || (!one_mod4 && a == -aE)) {
            t.status = M2Status::cond_c;
            t.zeta = z;
            return t;
        }
    }
    t.status = M2Status::ok;
    return t;
}

std::optional<unsigned long> method2_check(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p,
                                           unsigned long n_min, unsigned long n_max, std::vector<M2Trial>* trail)
{
    for (unsigned long n = std::max(2ul, n_min); n <= n_max; ++n) {
        M2Trial t = method2_trial(f, sig, c, p, n);
        if (trail) trail->push_back(t);
        if (t.status == M2Status::ok) return n;
    }
    return std::nullopt;
}

std::optional<unsigned long> method2_rational_check(const CurveRecord& E, const Signature& sig, const FreyCase& c,
                                                    unsigned long p, unsigned long n_min, unsigned long n_max,
                                                    bool use_prefilter)
{
    for (unsigned long n = std::max(2ul, n_min); n <= n_max; ++n) {
        if (4 * (unsigned __int128)(n * p + 1) > (unsigned __int128)p * p) break;
        if (method2_rational_trial(E, sig, c, p, n, use_prefilter).status == M2Status::ok) return n;
    }
    return std::nullopt;
}

std::vector<uint64_t> method3_T(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p, uint64_t l)
{
    auto cl = require_coeff(f, l);
    Int l1 = Int(l) + 1;
    bool mult_ok = divides(p, nf_norm(f, shift(cl, l1))) || divides(p, nf_norm(f, nf_sub({l1}, nf_sub({}, cl))));
    uint64_t d2 = mod_of(sig.d2, l);
    std::vector<uint64_t> T;
    for (uint64_t tau = 0; tau < l; ++tau) {
        if ((mulmod(tau, tau, l) + d2) % l == 0) {
            if (mult_ok) T.push_back(tau);
            continue;
        }
        if (divides(p, nf_norm(f, shift(cl, frey_a_l(c, sig.d2, tau, l))))) T.push_back(tau);
    }
    return T;
}

std::vector<QuadInt> method3_gamma_l(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p,
                                     uint64_t l, const std::vector<QuadInt>& Gamma)
{
    auto [D1, D2] = decompose(sig.D);
    if (l == 2 || sig.D % l == 0) throw std::invalid_argument("method3: l | 2D");
    if ((l - 1) % p != 0) throw std::invalid_argument("method3: l != 1 mod p");
    if (kronecker(-D2, Int(l)) != 1) throw std::invalid_argument("method3: l does not split");
    for (auto& g : Gamma)
        if (g.u.get_den() % l == 0 || g.v.get_den() % l == 0)
            throw std::invalid_argument("method3: gamma not integral at l");
    unsigned long n = (l - 1) / p;
    uint64_t r1;
    sqrtmod((l - mod_of(D2, l)) % l, l, r1);
    uint64_t roots[2] = {r1, (l - r1) % l};
    auto T = method3_T(f, sig, c, p, l);
    uint64_t d1 = mod_of(sig.d1, l), D1m = mod_of(D1, l);
    std::vector<QuadInt> out;
    for (auto& g : Gamma) {
        uint64_t gn[2];
        for (int i = 0; i < 2; ++i) {
            uint64_t th = (theta(g.u, l) + mulmod(theta(g.v, l), roots[i], l)) % l;
            gn[i] = powmod(th, n, l);
        }
        bool keep = false;
        for (uint64_t tau : T) {
            bool both = true;
            for (int i = 0; i < 2 && both; ++i) {
                uint64_t lhs = powmod((mulmod(d1, tau, l) + mulmod(D1m, roots[i], l)) % l, n, l);
                both = lhs == gn[i] || lhs == 0;
            }
            if (both) { keep = true; break; }
        }
        if (keep) out.push_back(g);
    }
    return out;
}

std::vector<QuadInt> method3_intersection(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p,
                                          const std::vector<uint64_t>& S, const std::vector<QuadInt>& Gamma)
{
    std::vector<QuadInt> cur = Gamma;
    for (uint64_t l : S) cur = method3_gamma_l(f, sig, c, p, l, cur);
    return cur;
}

int y_lower_bound_check(const SimplifiedSolution& sol, const Signature& sig)
{
    if (sol.s == 0) throw std::invalid_argument("y_lower_bound_check: s = 0");
    if ((2 * sig.d1) % radical(sol.s) == 0) return 1;
    double b = std::sqrt((double)sol.p) - 1;
    if (Int(abs(sol.s)).get_d() > b * b) return 2;
    throw std::logic_error("y_lower_bound_check: proposition violated");
}

unsigned long beukers_bound(const Int& D)
{
    return (unsigned long)std::floor(18 + 2 * std::log(std::fabs(D.get_d())) / std::log(2.0));
}

std::vector<TwoPower> beukers_2power_solutions(const Int& D)
{
    if (abs(D) < 2) throw std::invalid_argument("beukers: |D| < 2");
    std::vector<TwoPower> out;
    unsigned long M = beukers_bound(D);
    for (unsigned long m = 3; m <= M; ++m) {
        Int v = ipow(2, m) - D, r;
        if (is_square(v, &r)) out.push_back({r, m});
    }
    return out;
}

// ---- certificates ----

nlohmann::json to_json(const Certificate& c)
{
    nlohmann::json j;
    j["D"] = c.D.get_str();
    j["d1"] = c.d1.get_str();
    j["d2"] = c.d2.get_str();
    j["case"] = std::string(1, c.frey_case);
    j["form"] = c.form;
    j["method"] = c.method;
    j["p"] = c.p;
    j["n"] = c.n;
    j["l"] = c.l;
    j["outcome"] = c.outcome;
    if (!c.extra.is_null()) j["extra"] = c.extra;
    return j;
}

Certificate certificate_from_json(const nlohmann::json& j)
{
    Certificate c;
    c.D = Int(j.at("D").get<std::string>());
    c.d1 = Int(j.at("d1").get<std::string>());
    c.d2 = Int(j.at("d2").get<std::string>());
    c.frey_case = j.at("case").get<std::string>().at(0);
    c.form = j.at("form").get<std::string>();
    c.method = j.at("method").get<std::string>();
    c.p = j.at("p").get<unsigned long>();
    c.n = j.at("n").get<unsigned long>();
    c.l = j.at("l").get<uint64_t>();
    c.outcome = j.at("outcome").get<std::string>();
    if (j.contains("extra")) c.extra = j["extra"];
    return c;
}

Catalogs Catalogs::load(const std::string& dir)
{
    return {load_curve_db(dir + "/curves.tsv"), load_newform_db(dir + "/newforms.tsv", dir + "/newform_levels.tsv")};
}

FormRef Catalogs::form(const std::string& id) const
{
    auto pos = id.find(':');
    if (pos == std::string::npos) return FormRef::from_curve(curves.get(id));
    return FormRef::from_newform(forms.get(std::stol(id.substr(0, pos)), std::stoi(id.substr(pos + 1))));
}

bool replay(const Certificate& c, const Catalogs& cat)
{
    Signature sig{c.D, c.d1, c.d2};
    if (!signature_valid(sig)) return false;
    FreyCase fc = frey_case(c.frey_case);
    if (c.method == "II") {
        return method2_trial(cat.form(c.form), sig, fc, c.p, c.n).status == M2Status::ok;
    }
    if (c.method == "II-rational") {
        return method2_rational_trial(cat.curves.get(c.form), sig, fc, c.p, c.n, false).status == M2Status::ok;
    }
    if (c.method == "I") {
        Int B(c.extra.at("B").get<std::string>());
        if (B == 0) return false;
        if (c.extra.contains("ls")) {
            // B is the gcd over the listed l; p = 0 covers every p not dividing it
            Int g = 0;
            FormRef f = cat.form(c.form);
            for (uint64_t l : c.extra["ls"].get<std::vector<uint64_t>>()) g = gcd(g, method1_bl(f, sig, fc, l));
            if (g != B) return false;
        } else if (method1_bl(cat.form(c.form), sig, fc, c.l) != B) {
            return false;
        }
        return c.p == 0 || B % c.p != 0;
    }
    if (c.method == "III") {
        auto [D1, D2] = decompose(c.D);
        QuadField F = QuadField::make(D2);
        auto G = compute_Gamma(F, c.D, c.p);
        std::vector<uint64_t> S = c.extra.at("S").get<std::vector<uint64_t>>();
        auto I = method3_intersection(cat.form(c.form), sig, fc, c.p, S, G);
        return I.size() == c.extra.at("survivors").size();
    }
    return false;
}

}  // namespace lnag
