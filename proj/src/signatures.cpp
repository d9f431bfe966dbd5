#include "lnag/signatures.hpp"
#include "lnag/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lnag {

bool cond_check(const Int& D, unsigned long p)
{
    if (p < 7) return false;
    if (D == 0) throw std::invalid_argument("cond_check: D = 0");
    for (auto& [q, e] : factor(D).terms) {
        if (p < e + 1ul) return false;
        if (q == 2 && e % 2 == 0 && p < e + 7ul) return false;
    }
    // v2 = 0 is even: p >= 7 already checked
    return true;
}

bool signature_valid(const Signature& s)
{
    if (s.d1 <= 0 || s.d2 == 0) return false;
    if (s.D != s.d1 * s.d1 * s.d2) return false;
    if (gcd(s.d1, s.d2) != 1) return false;
    for (auto& [q, e] : factor(s.d1).terms) {
        if (q == 2) continue;
        if (kronecker(-s.d2, q) != 1) return false;
    }
    if (s.d1 % 2 == 0) {
        Int r = s.d2 % 8;
        if (r < 0) r += 8;
        if (r != 7) return false;
    }
    return true;
}

std::vector<Signature> enumerate_signatures(const Int& D)
{
    if (D == 0) throw std::invalid_argument("enumerate_signatures: D = 0");
    std::vector<Signature> out;
    Int aD = abs(D);
    for (const Int& d1 : divisors(aD)) {
        Int sq = d1 * d1;
        if (sq > aD) break;
        if (aD % sq != 0) continue;
        Signature s{D, d1, D / sq};
        if (signature_valid(s)) out.push_back(s);
    }
    return out;
}

Int compute_e(const Signature& sig, unsigned long p)
{
    Int e = 1;
    for (auto& [q, v] : factor(sig.d1).terms) {
        if (p < 2ul * v) throw std::invalid_argument("compute_e: exponent p - 2 v_q(d1) negative");
        e *= ipow(q, p - 2ul * v);
    }
    return e;
}

std::pair<Signature, SimplifiedSolution> simplify(const Int& x, const Int& y, const Int& D, unsigned long p)
{
    if (y == 0) throw std::invalid_argument("simplify: y = 0");
    if (x * x + D != ipow(y, p)) throw std::invalid_argument("simplify: not a solution");
    Int g = gcd(x * x, D), d1;
    if (!is_square(g, &d1)) throw std::invalid_argument("simplify: gcd(x^2, D) is not a square");
    Signature sig{D, d1, D / (d1 * d1)};
    if (!signature_valid(sig)) throw std::invalid_argument("simplify: signature conditions fail");
    Int r = radical(d1);
    if (y % r != 0 || x % d1 != 0) throw std::invalid_argument("simplify: inconsistent input");
    SimplifiedSolution s{x / d1, y / r, p, compute_e(sig, p)};
    if (s.t * s.t + sig.d2 != s.e * ipow(s.s, p)) throw std::runtime_error("simplify: simplified equation fails");
    return {sig, s};
}

namespace {

// root search bound for Im((U + b sqrt(-D2))^p) = target
long root_bound(const Int& target, const Int& D2, unsigned long p)
{
    double v = std::fabs(target.get_d()) * std::sqrt(D2.get_d());
    return (long)(2.0 * std::pow(v, 1.0 / double(p - 1))) + 2;
}

}  // namespace

std::vector<Triple> cohn_filter(const Int& D, unsigned long p_max)
{
    if (D <= 0 || D > 10000) throw std::invalid_argument("cohn_filter: D outside [1, 10^4]");
    std::set<Triple> found;
    auto [D1, D2] = decompose(D);
    if (D == 1) {
        for (uint32_t p : primes_upto((uint32_t)p_max))
            if (p >= 7) found.insert({0, 1, p});
    }
    std::vector<Int> bs;
    for (const Int& b : divisors(D1)) { bs.push_back(b); bs.push_back(-b); }

    auto scan = [&, D1 = D1, D2 = D2](const Int& b, unsigned long p, const Int& target, bool halves) {
        long B = root_bound(D1 * ipow(2, p), D2, p);
        for (long a = -B; a <= B; ++a) {
            if (halves && a % 2 == 0) continue;
            QuadInt al(D2, Rat(a), Rat(b));
            QuadInt w = al.pow(p);
            if (w.v != target) continue;
            if (w.u.get_den() != 1) continue;
            Int x = abs(w.u.get_num());
            Int y = (a * a + D2 * b * b);
            if (halves) {
                if (y % 4 != 0) continue;
                y /= 4;
                if (x % ipow(2, p) != 0) continue;
                x /= ipow(2, p);
            }
            if (x * x + D == ipow(y, p)) found.insert({x, y, p});
        }
    };

    // (iv): y = a^2 + D2 b^2, Im((a + b sqrt(-D2))^p) = D1
    for (const Int& b : bs) {
        if (abs(b) == D1) continue;
        Int m = abs(D1 * D1 - b * b);
        for (auto& [q, e] : factor(m).terms) {
            if (q < 7 || !q.fits_ulong_p() || q.get_ui() > p_max) continue;
            scan(b, q.get_ui(), D1, false);
        }
    }
    // (vi): D2 = 3 mod 4, a, b odd, alpha = (a + b sqrt(-D2))/2
    if (D2 % 4 == 3) {
        for (const Int& b : bs) {
            if (b % 2 == 0) continue;
            Int m = abs(4 * D1 * D1 - b * b);
            for (auto& [q, e] : factor(m).terms) {
                if (q < 7 || !q.fits_ulong_p() || q.get_ui() > p_max) continue;
                unsigned long p = q.get_ui();
                scan(b, p, D1 * ipow(2, p), true);
            }
        }
    }
    return {found.begin(), found.end()};
}

bool cohn_class_number_case(const Int& D, unsigned long p)
{
    auto [D1, D2] = decompose(D);
    return class_number(QuadField::make(D2)) % (long)p == 0;
}

std::vector<Triple> recover_even_n(const Int& D)
{
    if (D < 1) throw std::invalid_argument("recover_even_n: D < 1");
    std::set<Triple> found;
    for (const Int& u : divisors(D)) {
        Int w = D / u;
        if (u > w) break;
        if ((w - u) % 2 != 0) continue;
        Int k = (u + w) / 2, x = (w - u) / 2;
        if (k < 2) continue;
        for (unsigned long m = 2; ipow(2, m) <= k; ++m) {
            Int y;
            if (mpz_root(y.get_mpz_t(), k.get_mpz_t(), m)) found.insert({x, y, 2 * m});
        }
    }
    return {found.begin(), found.end()};
}

}  // namespace lnag
