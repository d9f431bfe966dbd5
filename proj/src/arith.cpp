#include "lnag/arith.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lnag {

Int Factorization::value() const
{
    Int v = 1;
    for (auto& [q, e] : terms) v *= ipow(q, e);
    return v;
}

int kronecker(const Int& a, const Int& n)
{
    if (n == 0) throw std::invalid_argument("kronecker: n = 0");
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

unsigned valuation(const Int& q, const Int& a)
{
    if (a == 0) throw std::invalid_argument("valuation: a = 0");
    if (q < 2) throw std::invalid_argument("valuation: bad prime");
    Int r = abs(a);
    return mpz_remove(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
}

Int ipow(const Int& b, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

bool is_square(const Int& a, Int* root)
{
    if (a < 0) return false;
    if (!mpz_perfect_square_p(a.get_mpz_t())) return false;
    if (root) mpz_sqrt(root->get_mpz_t(), a.get_mpz_t());
    return true;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m)
{
    return (unsigned __int128)a * b % m;
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m)
{
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t m)
{
    __int128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    if (t < 0) t += m;
    return (uint64_t)t;
}

int jacobi_u64(uint64_t a, uint64_t n)
{
    a %= n;
    int s = 1;
    while (a) {
        int z = __builtin_ctzll(a);
        a >>= z;
        if ((z & 1) && ((n & 7) == 3 || (n & 7) == 5)) s = -s;
        if ((a & 3) == 3 && (n & 3) == 3) s = -s;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? s : 0;
}

bool sqrtmod(uint64_t a, uint64_t p, uint64_t& r)
{
    a %= p;
    if (a == 0) { r = 0; return true; }
    if (p == 2) { r = a; return true; }
    if (jacobi_u64(a, p) != 1) return false;
    if ((p & 3) == 3) { r = powmod(a, (p + 1) / 4, p); return true; }
    // Tonelli-Shanks
    uint64_t q = p - 1;
    int s = 0;
    while (!(q & 1)) { q >>= 1; ++s; }
    uint64_t z = 2;
    while (jacobi_u64(z, p) != -1) ++z;
    uint64_t c = powmod(z, q, p), x = powmod(a, (q + 1) / 2, p), t = powmod(a, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        uint64_t tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        uint64_t b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        x = mulmod(x, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    r = std::min(x, p - x);
    return true;
}

uint64_t mod_of(const Int& a, uint64_t m)
{
    return mpz_fdiv_ui(a.get_mpz_t(), m);
}

bool is_prime_u64(uint64_t n)
{
    if (n < 2) return false;
    static const uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (uint64_t p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while (!(d & 1)) { d >>= 1; ++s; }
    // these bases are deterministic below 3.3e24
    for (uint64_t a : small) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

Primality primality(const Int& n)
{
    Int a = abs(n);
    if (a.fits_ulong_p()) return is_prime_u64(a.get_ui()) ? Primality::prime : Primality::composite;
    int r = mpz_probab_prime_p(a.get_mpz_t(), 30);
    if (r == 0) return Primality::composite;
    return r == 2 ? Primality::prime : Primality::probable;
}

bool is_prime(const Int& n) { return primality(n) != Primality::composite; }

std::vector<uint32_t> primes_upto(uint32_t n)
{
    std::vector<uint32_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(n + 1, false);
    for (uint64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back((uint32_t)i);
        for (uint64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

uint64_t next_prime_u64(uint64_t n)
{
    uint64_t c = n + 1;
    while (!is_prime_u64(c)) ++c;
    return c;
}

namespace {

Int rho(const Int& n)
{
    // Brent's variant
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 128;
        auto f = [&](const Int& v) { Int w = v * v + c; mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t()); return w; };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    Int d = abs(x - y);
                    q = q * d % n;
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1 && r < (1ul << 26));
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
}

void split(const Int& n, std::vector<Int>& out, bool& probable)
{
    if (n == 1) return;
    Primality pr = primality(n);
    if (pr != Primality::composite) {
        if (pr == Primality::probable) probable = true;
        out.push_back(n);
        return;
    }
    Int r;
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned k = 2;; ++k) {
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k)) break;
        }
        Int m = n;
        while (m % r == 0) { split(r, out, probable); m /= r; }
        split(m, out, probable);
        return;
    }
    Int d = rho(n);
    split(d, out, probable);
    split(n / d, out, probable);
}

}  // namespace

Factorization factor(const Int& a, unsigned digit_limit)
{
    if (a == 0) throw std::invalid_argument("factor: a = 0");
    Int n = abs(a);
    if (mpz_sizeinbase(n.get_mpz_t(), 10) > digit_limit)
        throw std::runtime_error("factor: input exceeds " + std::to_string(digit_limit) + " digits");
    Factorization f;
    std::vector<Int> ps;
    for (unsigned long p : {2ul, 3ul, 5ul}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { ps.emplace_back(p); n /= p; }
    }
    static const std::vector<uint32_t> small = primes_upto(1 << 14);
    for (size_t i = 3; i < small.size() && n > 1; ++i) {
        unsigned long p = small[i];
        if (Int(p) * p > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { ps.emplace_back(p); n /= p; }
    }
    split(n, ps, f.probable);
    std::sort(ps.begin(), ps.end());
    for (auto& p : ps) {
        if (!f.terms.empty() && f.terms.back().first == p) ++f.terms.back().second;
        else f.terms.emplace_back(p, 1);
    }
    return f;
}

Int radical(const Int& a)
{
    Int r = 1;
    for (auto& [q, e] : factor(a).terms) r *= q;
    return r;
}

std::vector<Int> divisors(const Int& a)
{
    std::vector<Int> ds{1};
    for (auto& [q, e] : factor(a).terms) {
        size_t n = ds.size();
        Int pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= q;
            for (size_t i = 0; i < n; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

}  // namespace lnag
