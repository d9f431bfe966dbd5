#include "lnag/curves.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lnag {

Invariants invariants(const Weierstrass& a)
{
    const Int &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
    Invariants v;
    v.b2 = a1 * a1 + 4 * a2;
    v.b4 = 2 * a4 + a1 * a3;
    v.b6 = a3 * a3 + 4 * a6;
    v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
    return v;
}

ModelModL reduce_model(const Weierstrass& a, uint64_t l)
{
    ModelModL r;
    for (int i = 0; i < 5; ++i) r[i] = mod_of(a[i], l);
    return r;
}

namespace {

struct ModInv {
    uint64_t b2, b4, b6, c4, c6, disc;
};

ModInv mod_invariants(const ModelModL& a, uint64_t l)
{
    auto M = [l](uint64_t x, uint64_t y) { return mulmod(x % l, y % l, l); };
    auto A = [l](uint64_t x, uint64_t y) { return (x % l + y % l) % l; };
    auto S = [l](uint64_t x, uint64_t y) { return (x % l + l - y % l) % l; };
    uint64_t a1 = a[0] % l, a2 = a[1] % l, a3 = a[2] % l, a4 = a[3] % l, a6 = a[4] % l;
    ModInv v;
    v.b2 = A(M(a1, a1), M(4, a2));
    v.b4 = A(M(2, a4), M(a1, a3));
    v.b6 = A(M(a3, a3), M(4, a6));
    uint64_t b8 = S(A(A(M(M(a1, a1), a6), M(M(4, a2), a6)), M(a2, M(a3, a3))), A(M(M(a1, a3), a4), M(a4, a4)));
    v.c4 = S(M(v.b2, v.b2), M(24, v.b4));
    v.c6 = S(M(M(36, v.b2), v.b4), A(M(v.b2, M(v.b2, v.b2)), M(216, v.b6)));
    uint64_t t1 = M(M(v.b2, v.b2), b8), t2 = M(8, M(v.b4, M(v.b4, v.b4))), t3 = M(27, M(v.b6, v.b6)),
             t4 = M(9, M(v.b2, M(v.b4, v.b6)));
    v.disc = S(t4, A(A(t1, t2), t3));
    return v;
}

void require_good(const ModelModL& a, uint64_t l)
{
    ModInv v = mod_invariants(a, l);
    if (v.disc == 0) {
        bool mult = (l >= 5) ? v.c4 != 0 : false;
        throw BadReduction("bad reduction at l = " + std::to_string(l) + (mult ? " (multiplicative)" : " (additive or l <= 3)"), mult);
    }
}

struct Pt {
    uint64_t x = 0, y = 0;
    bool inf = true;
    bool operator==(const Pt& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

struct Short {
    uint64_t A, B, l;

    Pt neg(const Pt& P) const { return P.inf ? P : Pt{P.x, (l - P.y) % l, false}; }
    Pt add(const Pt& P, const Pt& Q) const
    {
        if (P.inf) return Q;
        if (Q.inf) return P;
        uint64_t lam;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % l == 0) return {};
            uint64_t num = (mulmod(3, mulmod(P.x, P.x, l), l) + A) % l;
            lam = mulmod(num, invmod(mulmod(2, P.y, l), l), l);
        } else {
            lam = mulmod((P.y + l - Q.y) % l, invmod((P.x + l - Q.x) % l, l), l);
        }
        uint64_t x3 = (mulmod(lam, lam, l) + 2 * l - P.x - Q.x) % l;
        uint64_t y3 = (mulmod(lam, (P.x + l - x3) % l, l) + l - P.y) % l;
        return {x3, y3, false};
    }
    Pt mul(Pt P, uint64_t k) const
    {
        Pt R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }
    Pt random_point(std::mt19937_64& rng) const
    {
        for (;;) {
            uint64_t x = rng() % l;
            uint64_t f = (mulmod(mulmod(x, x, l), x, l) + mulmod(A, x, l) + B) % l;
            uint64_t r;
            if (!sqrtmod(f, l, r)) continue;
            if (rng() & 1) r = (l - r) % l;
            return {x, r, false};
        }
    }
};

Short to_short(const ModelModL& a, uint64_t l)
{
    ModInv v = mod_invariants(a, l);
    return {mulmod(l - 27 % l, v.c4, l), mulmod(l - 54 % l, v.c6, l), l};
}

std::vector<uint64_t> prime_factors_u64(uint64_t n)
{
    std::vector<uint64_t> ps;
    for (uint64_t q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        ps.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

uint64_t point_order(const Short& E, const Pt& P, uint64_t N)
{
    uint64_t ord = N;
    for (uint64_t q : prime_factors_u64(N))
        while (ord % q == 0 && E.mul(P, ord / q).inf) ord /= q;
    return ord;
}

}  // namespace

uint64_t count_points_exhaustive(const ModelModL& a, uint64_t l)
{
    uint64_t n = 1;
    for (uint64_t x = 0; x < l; ++x) {
        uint64_t rhs = (mulmod(mulmod(x, x, l), x, l) + mulmod(a[1], mulmod(x, x, l), l) + mulmod(a[3], x, l) + a[4]) % l;
        for (uint64_t y = 0; y < l; ++y) {
            uint64_t lhs = (mulmod(y, y, l) + mulmod(a[0], mulmod(x, y, l), l) + mulmod(a[2], y, l)) % l;
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

long a_l_naive(const ModelModL& a, uint64_t l)
{
    require_good(a, l);
    if (l <= 3) return (long)(l + 1) - (long)count_points_exhaustive(a, l);
    ModInv v = mod_invariants(a, l);
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    long s = 0;
    uint64_t c3 = 4 % l, c2 = v.b2, c1 = 2 * v.b4 % l, c0 = v.b6;
    if (l < (1u << 22)) {
        std::vector<signed char> chi(l, -1);
        chi[0] = 0;
        for (uint64_t y = 1; y <= l / 2; ++y) chi[y * y % l] = 1;
        for (uint64_t x = 0; x < l; ++x) {
            uint64_t f = (((c3 * x + c2) % l * x + c1) % l * x + c0) % l;
            s += chi[f];
        }
    } else {
        for (uint64_t x = 0; x < l; ++x) {
            uint64_t f = (mulmod((mulmod((mulmod(c3, x, l) + c2) % l, x, l) + c1) % l, x, l) + c0) % l;
            s += jacobi_u64(f, l);
        }
    }
    return -s;
}

long a_l_bsgs(const ModelModL& a, uint64_t l, uint64_t seed)
{
    require_good(a, l);
    if (l < 229) return a_l_naive(a, l);
    Short E = to_short(a, l);
    std::mt19937_64 rng(seed ^ (l * 0x9e3779b97f4a7c15ull));
    uint64_t r = (uint64_t)std::floor(2.0 * std::sqrt((double)l));
    while ((r + 1) * (r + 1) <= 4 * l) ++r;
    while (r * r > 4 * l) --r;
    uint64_t lo = l + 1 - r, hi = l + 1 + r, w = hi - lo;
    uint64_t m = (uint64_t)std::ceil(std::sqrt((double)w + 1));
    uint64_t L = 1;  // lcm of point orders found so far
    for (int attempt = 0; attempt < 12; ++attempt) {
        Pt P = E.random_point(rng);
        std::unordered_map<uint64_t, uint64_t> baby;
        Pt jP;
        for (uint64_t j = 0; j < m; ++j) {
            if (!jP.inf && !baby.count(jP.x)) baby[jP.x] = j;
            jP = E.add(jP, P);
        }
        Pt mP = E.mul(P, m), R = E.mul(P, lo);
        uint64_t N0 = 0;
        for (uint64_t i = 0; i * m <= w + m && !N0; ++i) {
            std::vector<uint64_t> cands;
            if (R.inf) cands.push_back(i * m);
            else {
                auto it = baby.find(R.x);
                if (it != baby.end()) {
                    cands.push_back(i * m + it->second);
                    if (i * m >= it->second) cands.push_back(i * m - it->second);
                }
            }
            for (uint64_t k : cands) {
                if (k > w) continue;
                if (E.mul(P, lo + k).inf) { N0 = lo + k; break; }
            }
            R = E.add(R, mP);
        }
        if (!N0) break;
        uint64_t ord = point_order(E, P, N0);
        L = std::lcm(L, ord);
        uint64_t first = (lo + L - 1) / L * L;
        if (first <= hi && first + L > hi) return (long)(l + 1) - (long)first;
    }
    return a_l_naive(a, l);
}

long a_l(const ModelModL& a, uint64_t l, uint64_t crossover)
{
    return l > crossover ? a_l_bsgs(a, l) : a_l_naive(a, l);
}

long a_l(const Weierstrass& a, uint64_t l, uint64_t crossover) { return a_l(reduce_model(a, l), l, crossover); }

int multiplicative_a_l(const Weierstrass& a, uint64_t l)
{
    Invariants v = invariants(a);
    if (v.disc % l != 0) throw std::invalid_argument("multiplicative_a_l: good reduction at l");
    if (v.c4 % l == 0) throw BadReduction("multiplicative_a_l: additive reduction at l = " + std::to_string(l), false);
    if (l <= 3) return (int)((long)(l + 1) - (long)count_points_exhaustive(reduce_model(a, l), l));
    // tangent slopes at the node: 12 x0 + b2 = -c6/c4
    return kronecker(-v.c6 * v.c4, Int(l));
}

bool random_point_killed_by(const ModelModL& a, uint64_t l, uint64_t N, std::mt19937_64& rng)
{
    Short E = to_short(a, l);
    return E.mul(E.random_point(rng), N).inf;
}

// ---- data ----

const std::vector<Int>& NewformRecord::c(uint32_t l) const
{
    auto it = coeffs.find(l);
    if (it == coeffs.end())
        throw std::out_of_range("newform " + id() + ": no coefficient stored for l = " + std::to_string(l));
    return it->second;
}

const CurveRecord& CurveDb::get(const std::string& label) const
{
    auto it = curves.find(label);
    if (it == curves.end()) throw std::out_of_range("curve not in data: " + label);
    return it->second;
}

const std::vector<NewformRecord>& NewformDb::at(long level) const
{
    static const std::vector<NewformRecord> none;
    auto it = forms.find(level);
    return it == forms.end() ? none : it->second;
}

const NewformRecord& NewformDb::get(long level, int cls) const
{
    for (auto& f : at(level))
        if (f.cls == cls) return f;
    throw std::out_of_range("newform not in data: " + std::to_string(level) + ":" + std::to_string(cls));
}

long NewformDb::class_count(long level) const
{
    auto it = levels.find(level);
    if (it == levels.end()) return -1;
    if (it->second.dimension == 0) return 0;
    return it->second.classes;
}

std::string data_dir()
{
    if (const char* e = std::getenv("LNAG_DATA")) return e;
#ifdef LNAG_DATA_DIR
    return LNAG_DATA_DIR;
#else
    return "data";
#endif
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

Int parse_int(const std::string& s, const std::string& ctx)
{
    Int v;
    if (s.empty() || v.set_str(s, 10) != 0) throw std::runtime_error(ctx + ": bad integer '" + s + "'");
    return v;
}

}  // namespace

bool has_rational_two_torsion(const Weierstrass& a)
{
    Invariants v = invariants(a);
    // x = X/4: X^3 + b2 X^2 + 8 b4 X + 16 b6, monic so rational roots are integral
    Poly f{16 * v.b6, 8 * v.b4, v.b2, Int(1)};
    auto ev = [&](const Int& X) -> Int { return ((X + f[2]) * X + f[1]) * X + f[0]; };
    if (f[0] == 0) return true;
    for (long double r : real_roots(f)) {
        Int c((double)std::round(r));
        for (int d = -2; d <= 2; ++d)
            if (ev(c + d) == 0) return true;
    }
    return false;
}

CurveDb load_curve_db(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CurveDb db;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty() || line[0] == '#') continue;
        auto f = split(line, '\t');
        std::string ctx = path + ":" + std::to_string(ln);
        if (f.size() != 7) throw std::runtime_error(ctx + ": expected 7 fields");
        CurveRecord r;
        r.label = f[0];
        for (int i = 0; i < 5; ++i) r.a[i] = parse_int(f[1 + i], ctx);
        if (f[6] != "0" && f[6] != "1") throw std::runtime_error(ctx + ": bad two_torsion flag");
        r.has_two_torsion = f[6] == "1";
        if (invariants(r.a).disc == 0) throw std::runtime_error(ctx + ": singular curve " + r.label);
        if (has_rational_two_torsion(r.a) != r.has_two_torsion)
            throw std::runtime_error(ctx + ": two_torsion flag inconsistent for " + r.label);
        if (!db.curves.emplace(r.label, r).second) throw std::runtime_error(ctx + ": duplicate label " + r.label);
    }
    return db;
}

NewformDb load_newform_db(const std::string& forms_path, const std::string& levels_path)
{
    NewformDb db;
    std::string line;
    {
        std::ifstream in(levels_path);
        if (!in) throw std::runtime_error("cannot open " + levels_path);
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            if (line.empty() || line[0] == '#') continue;
            auto f = split(line, '\t');
            std::string ctx = levels_path + ":" + std::to_string(ln);
            if (f.size() != 3) throw std::runtime_error(ctx + ": expected 3 fields");
            long lev = parse_int(f[0], ctx).get_si();
            LevelInfo li{parse_int(f[1], ctx).get_si(), parse_int(f[2], ctx).get_si()};
            if (!db.levels.emplace(lev, li).second) throw std::runtime_error(ctx + ": duplicate level");
        }
    }
    std::ifstream in(forms_path);
    if (!in) throw std::runtime_error("cannot open " + forms_path);
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty() || line[0] == '#') continue;
        auto f = split(line, '\t');
        std::string ctx = forms_path + ":" + std::to_string(ln);
        if (f.size() < 4) throw std::runtime_error(ctx + ": expected level, class, field, coefficients");
        NewformRecord r;
        r.level = parse_int(f[0], ctx).get_si();
        r.cls = (int)parse_int(f[1], ctx).get_si();
        for (auto& c : split(f[2], ',')) r.field_poly.push_back(parse_int(c, ctx));
        if (r.field_poly.size() < 2 || r.field_poly.back() != 1) throw std::runtime_error(ctx + ": field polynomial must be monic");
        for (size_t i = 3; i < f.size(); ++i) {
            auto kv = split(f[i], ':');
            if (kv.size() != 2) throw std::runtime_error(ctx + ": bad coefficient entry");
            uint32_t l = (uint32_t)parse_int(kv[0], ctx).get_ui();
            std::vector<Int> v;
            for (auto& c : split(kv[1], ',')) v.push_back(parse_int(c, ctx));
            if (v.size() > r.degree()) throw std::runtime_error(ctx + ": coefficient vector too long");
            if (!r.coeffs.emplace(l, v).second) throw std::runtime_error(ctx + ": duplicate l");
            r.max_l = std::max(r.max_l, l);
        }
        std::string why;
        if (!hasse_ok(r, &why)) throw std::runtime_error(ctx + ": Hasse bound violated: " + why);
        auto& v = db.forms[r.level];
        for (auto& g : v)
            if (g.cls == r.cls) throw std::runtime_error(ctx + ": duplicate class");
        v.push_back(std::move(r));
    }
    return db;
}

// ---- number fields ----

Int resultant(const Poly& f0, const Poly& g0)
{
    auto trim = [](Poly p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
        return p;
    };
    Poly f = trim(f0), g = trim(g0);
    if (f.empty() || g.empty()) return 0;
    size_t n = f.size() - 1, m = g.size() - 1;
    if (n == 0 && m == 0) return 1;
    if (m == 0) return ipow(g[0], n);
    if (n == 0) return ipow(f[0], m);
    size_t N = n + m;
    std::vector<std::vector<Int>> A(N, std::vector<Int>(N, 0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= n; ++j) A[i][i + j] = f[n - j];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j <= m; ++j) A[m + i][i + j] = g[m - j];
    // Bareiss
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < N; ++k) {
        if (A[k][k] == 0) {
            size_t r = k + 1;
            while (r < N && A[r][k] == 0) ++r;
            if (r == N) return 0;
            std::swap(A[k], A[r]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < N; ++i) {
            for (size_t j = k + 1; j < N; ++j) {
                A[i][j] = A[i][j] * A[k][k] - A[i][k] * A[k][j];
                mpz_divexact(A[i][j].get_mpz_t(), A[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = A[k][k];
    }
    return sign * A[N - 1][N - 1];
}

Int norm_from_field(const Poly& field_poly, const std::vector<Int>& elt)
{
    return resultant(field_poly, elt);
}

std::vector<Int> nf_mul(const Poly& f, const std::vector<Int>& a, const std::vector<Int>& b)
{
    size_t n = f.size() - 1;
    std::vector<Int> r(a.size() + b.size() + 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (size_t k = r.size(); k-- > n;) {
        if (r[k] == 0) continue;
        Int c = r[k];
        for (size_t j = 0; j <= n; ++j) r[k - n + j] -= c * f[j];
    }
    r.resize(n);
    return r;
}

std::vector<Int> nf_sub(const std::vector<Int>& a, const std::vector<Int>& b)
{
    std::vector<Int> r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

std::vector<long double> real_roots(const Poly& f)
{
    using C = std::complex<long double>;
    size_t n = f.size() - 1;
    std::vector<long double> out;
    if (n == 0) return out;
    long double lead = f[n].get_d();
    std::vector<long double> c(n + 1);
    for (size_t i = 0; i <= n; ++i) c[i] = f[i].get_d() / lead;
    if (n == 1) return {-c[0]};
    long double bound = 0;
    for (size_t i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i]));
    bound += 1;
    std::vector<C> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = std::polar(bound, (long double)(2 * M_PI * i / n + 0.4));
    auto ev = [&](C x) {
        C r = 1;
        for (size_t i = n; i-- > 0;) r = r * x + c[i];
        return r;
    };
    for (int it = 0; it < 2000; ++it) {
        long double delta = 0;
        for (size_t i = 0; i < n; ++i) {
            C den = 1;
            for (size_t j = 0; j < n; ++j)
                if (j != i) den *= (z[i] - z[j]);
            C step = ev(z[i]) / den;
            z[i] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-18L * bound) break;
    }
    for (auto& r : z)
        if (std::fabs(r.imag()) < 1e-9L * (1 + std::abs(r))) out.push_back(r.real());
    std::sort(out.begin(), out.end());
    return out;
}

long double eval_at(const std::vector<Int>& elt, long double r)
{
    long double s = 0;
    for (size_t i = elt.size(); i-- > 0;) s = s * r + elt[i].get_d();
    return s;
}

bool hasse_ok(const NewformRecord& f, std::string* why)
{
    auto roots = real_roots(f.field_poly);
    if (roots.size() != f.degree()) {
        if (why) *why = "coefficient field not totally real";
        return false;
    }
    for (auto& [l, v] : f.coeffs) {
        long double bnd = 2.0L * std::sqrt((long double)l) + 1e-9L;
        for (long double r : roots) {
            long double c = eval_at(v, r);
            if (std::fabs(c) > bnd) {
                if (why) *why = "l = " + std::to_string(l);
                return false;
            }
        }
    }
    return true;
}

}  // namespace lnag
