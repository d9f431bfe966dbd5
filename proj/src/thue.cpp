#include "lnag/thue.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace lnag {

namespace {

Int binom(unsigned long n, unsigned long k)
{
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// coefficients of (a U + b V)^e in U^(e-k) V^k order
std::vector<Int> linear_pow(const Int& a, const Int& b, unsigned long e)
{
    std::vector<Int> r(e + 1);
    for (unsigned long k = 0; k <= e; ++k) r[k] = binom(e, k) * ipow(a, e - k) * ipow(b, k);
    return r;
}

std::vector<Int> poly_mul(const std::vector<Int>& x, const std::vector<Int>& y)
{
    std::vector<Int> r(x.size() + y.size() - 1, 0);
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    return r;
}

}  // namespace

Int ThueForm::eval(const Int& U, const Int& V) const
{
    Int s = 0;
    for (unsigned long k = 0; k <= degree; ++k) s += c[k] * ipow(U, degree - k) * ipow(V, k);
    return s;
}

ThueForm build_thue_form(const QuadField& F, const QuadInt& gamma, const Int& D1, unsigned long p)
{
    if (p < 3) throw std::invalid_argument("build_thue_form: degree < 3");
    QuadInt omega = QuadInt::from_omega(F, 0, 1);
    std::vector<Rat> co(p + 1);
    QuadInt g = gamma;
    for (unsigned long k = 0; k <= p; ++k) {
        // (gamma w^k - conj)/(2 sqrt(-D2)) is the sqrt(-D2)-coordinate
        co[k] = binom(p, k) * g.v;
        g = g * omega;
    }
    Int den = 1;
    for (auto& r : co) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
    ThueForm f;
    f.degree = p;
    f.gamma = gamma;
    f.clearing = den;
    for (auto& r : co) f.c.push_back(Rat(r * den).get_num());
    f.rhs = D1 * den;
    return f;
}

ThueForm transform(const ThueForm& f, const Mat2& m)
{
    unsigned long p = f.degree;
    ThueForm g = f;
    g.c.assign(p + 1, 0);
    for (unsigned long k = 0; k <= p; ++k) {
        auto t = poly_mul(linear_pow(m[0], m[1], p - k), linear_pow(m[2], m[3], k));
        for (unsigned long i = 0; i <= p; ++i) g.c[i] += f.c[k] * t[i];
    }
    return g;
}

std::pair<ThueForm, Mat2> unimodular_reduce(const ThueForm& f, long box)
{
    Mat2 id{1, 0, 0, 1};
    Int best = abs(f.c[0]);
    Int ba = 1, bc = 0;
    for (long a = -box; a <= box; ++a)
        for (long c = 0; c <= box; ++c) {
            if (c == 0 && a != 1) continue;
            if (std::gcd(a, c) != 1) continue;
            Int v = abs(f.eval(a, c));
            if (v != 0 && v < best) { best = v; ba = a; bc = c; }
        }
    if (ba == 1 && bc == 0) return {f, id};
    // complete (a, c) to a determinant-one matrix
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), ba.get_mpz_t(), bc.get_mpz_t());
    Mat2 m{ba, -t, bc, s};  // a s + c t = 1
    return {transform(f, m), m};
}

std::vector<std::pair<Int, Int>> search_small_solutions(const ThueForm& f, long box)
{
    if (box < 0) throw std::invalid_argument("search_small_solutions: negative box");
    if ((unsigned long)box > 1000000ul / f.degree) throw std::invalid_argument("search_small_solutions: box too large");
    // residue tables for the first primes coprime to rhs and c0
    struct Table {
        unsigned long q;
        std::vector<char> hit;
    };
    std::vector<Table> tables;
    for (unsigned long q = 3; tables.size() < 10 && q < 1000; q = next_prime_u64(q)) {
        if (f.rhs % q == 0 || f.c[0] % q == 0) continue;
        Table T{q, std::vector<char>(q * q, 0)};
        uint64_t r = mod_of(f.rhs, q);
        for (unsigned long u = 0; u < q; ++u)
            for (unsigned long v = 0; v < q; ++v) T.hit[u * q + v] = mod_of(f.eval(u, v), q) == r;
        tables.push_back(std::move(T));
    }
    std::vector<std::pair<Int, Int>> out;
    for (long U = -box; U <= box; ++U)
        for (long V = -box; V <= box; ++V) {
            bool pass = true;
            for (auto& T : tables) {
                long q = (long)T.q;
                if (!T.hit[((U % q + q) % q) * q + ((V % q + q) % q)]) { pass = false; break; }
            }
            if (pass && f.eval(U, V) == f.rhs) out.emplace_back(U, V);
        }
    return out;
}

Recovered recover_solution(const QuadField& F, const QuadInt& gamma, const Int& D, unsigned long p, const Int& U,
                           const Int& V)
{
    Recovered r;
    QuadInt beta = QuadInt::from_omega(F, Rat(U), Rat(V));
    QuadInt z = gamma * beta.pow(p);
    if (z.u.get_den() != 1) return r;
    r.x = z.u.get_num();
    Int v = r.x * r.x + D, y;
    if (v <= 0) return r;
    if (!mpz_root(y.get_mpz_t(), v.get_mpz_t(), p)) return r;
    r.y = y;
    r.ok = true;
    return r;
}

}  // namespace lnag
