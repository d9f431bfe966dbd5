#include "lnag/curves.hpp"
#include "lnag/modmethods.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace lnag;

namespace {

// #E(F_l) by brute force over all affine (x, y) plus the point at infinity
long a_l_oracle(const Weierstrass& w, uint64_t l)
{
    auto r = [&](const Int& v) -> long { return mod_of(v, l); };
    long a1 = r(w[0]), a2 = r(w[1]), a3 = r(w[2]), a4 = r(w[3]), a6 = r(w[4]);
    long L = (long)l, n = 1;
    for (long x = 0; x < L; ++x)
        for (long y = 0; y < L; ++y) {
            long lhs = (y * y + a1 * x % L * y + a3 * y) % L;
            long rhs = ((x * x % L * x) + a2 * x % L * x + a4 * x + a6) % L;
            n += lhs == rhs;
        }
    return L + 1 - n;
}

}  // namespace

TEST_CASE("a_l small examples")
{
    Weierstrass e14{1, 0, 1, 4, -6};
    CHECK(a_l(e14, 3) == -2);
    CHECK(a_l(e14, 5) == 0);
    CHECK(a_l(e14, 13) == -4);
    Weierstrass cm{0, 0, 0, 1, 0};
    for (uint64_t l : primes_upto(2000))
        if (l > 2 && l % 4 == 3) CHECK(a_l(cm, l) == 0);
    for (uint64_t l : {3ul, 5ul, 11ul, 13ul, 17ul, 101ul}) CHECK(a_l(e14, l) == a_l_oracle(e14, l));
}

TEST_CASE("catalog curves agree with their newforms")
{
    auto cat = Catalogs::load();
    for (auto& [label, rec] : cat.curves.curves) {
        long level = std::stol(label);
        auto& forms = cat.forms.at(level);
        bool matched = false;
        for (auto& f : forms) {
            if (!f.rational()) continue;
            bool all = true;
            for (uint32_t l : primes_upto(200)) {
                if (level % l == 0 || !f.has(l)) continue;
                all = all && a_l(rec.a, l) == f.c(l)[0];
            }
            matched = matched || all;
        }
        CAPTURE(label);
        CHECK(matched);
    }
}

TEST_CASE("naive and BSGS agree")
{
    std::mt19937_64 rng(5);
    auto primes = primes_upto(100000);
    int done = 0;
    while (done < 200) {
        uint64_t l = primes[10 + rng() % (primes.size() - 10)];
        ModelModL a{rng() % l, rng() % l, rng() % l, rng() % l, rng() % l};
        long n;
        try {
            n = a_l_naive(a, l);
        } catch (const std::exception&) {
            continue;
        }
        CHECK(a_l_bsgs(a, l, rng()) == n);
        CHECK((double)n * n <= 4.0 * (double)l);
        ++done;
    }
}

TEST_CASE("two-torsion records have even point counts")
{
    auto cat = Catalogs::load();
    for (auto& [label, rec] : cat.curves.curves) {
        CHECK(rec.has_two_torsion == has_rational_two_torsion(rec.a));
        if (!rec.has_two_torsion) continue;
        for (uint64_t l : primes_upto(100)) {
            if (l == 2 || invariants(rec.a).disc % l == 0) continue;
            CHECK((l + 1 - a_l(rec.a, l)) % 2 == 0);
        }
    }
}

TEST_CASE("multiplicative reduction")
{
    // y^2 = x^2 (x + 1): node with tangents y = +-x, split at every odd l
    Weierstrass split{0, 1, 0, 0, 0};
    // y^2 = x^3 + 5 x^2 at l = 7: 5 is a non-residue mod 7
    CHECK(multiplicative_a_l(split, 7) == 1);
    Weierstrass ns{0, 3, 0, 0, 0};
    CHECK(multiplicative_a_l(ns, 7) == -1);
    CHECK_THROWS(multiplicative_a_l(Weierstrass{1, 0, 1, 4, -6}, 3));
}

TEST_CASE("norm from field")
{
    Poly f{-4, 1, 1};
    CHECK(norm_from_field(f, {0, 1}) == -4);
    CHECK(norm_from_field(f, {4, 1}) == 8);
    CHECK(norm_from_field(f, {4, -1}) == 16);
    CHECK(norm_from_field(Poly{0, 1}, {5}) == 5);
    CHECK(norm_from_field(Poly{-8, 0, 1}, {1, 1}) == -7);
}

TEST_CASE("newform catalog")
{
    auto cat = Catalogs::load();
    CHECK(cat.forms.class_count(190) == 4);
    CHECK(cat.forms.class_count(160) == 3);
    CHECK(cat.forms.class_count(2) == 0);
    CHECK(cat.forms.class_count(123456789) == -1);
    bool sqrt8 = false;
    // the irrational form has c_3 = 2 sqrt 2, so N(c_3) = -8 in any quadratic model
    for (auto& f : cat.forms.at(160))
        sqrt8 = sqrt8 || (f.degree() == 2 && norm_from_field(f.field_poly, f.c(3)) == -8);
    CHECK(sqrt8);
    for (long level : {14, 30, 46, 62, 78, 94, 96, 142, 158, 160, 174, 190, 384, 480, 1056, 20, 42})
        for (auto& f : cat.forms.at(level)) {
            CAPTURE(f.id());
            CHECK(f.max_l >= 997);
            std::string why;
            CHECK_MESSAGE(hasse_ok(f, &why), why);
        }
    for (auto& [level, fs] : cat.forms.forms)
        for (auto& f : fs) CHECK(hasse_ok(f));
}

TEST_CASE("loader rejects malformed data")
{
    CHECK_THROWS(load_curve_db("/nonexistent/curves.tsv"));
}
