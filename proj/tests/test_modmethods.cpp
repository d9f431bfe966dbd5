#include "lnag/modmethods.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace lnag;

namespace {

const Catalogs& catalogs()
{
    static Catalogs c = Catalogs::load();
    return c;
}

struct D95 {
    Signature sig{95, 1, 95};
    FreyCase kase = frey_case('d');
    FormRef f(int cls) const { return catalogs().form("190:" + std::to_string(cls)); }
};

struct D25 {
    Signature sig{25, 5, 1};
    FreyCase kase = frey_case('a');
};

// l + 1 - #E_t(F_l) for the Frey curve of a known solution, computed on the integral model
long frey_oracle(const FreyCase& c, const Int& t, const Int& d2, uint64_t l) { return a_l(build_curve(c, t, d2).a, l); }

}  // namespace

TEST_CASE("Method I constants")
{
    D95 d;
    CHECK(method1_bl(d.f(1), d.sig, d.kase, 3) == 15);
    CHECK(method1_bl(d.f(3), d.sig, d.kase, 3) == 15);
    CHECK(method1_bl(d.f(2), d.sig, d.kase, 3) == 21);
    CHECK(method1_bl(d.f(2), d.sig, d.kase, 7) == 315);
    CHECK(method1_bl(d.f(2), d.sig, d.kase, 11) == 0);
    CHECK(method1_bl(d.f(2), d.sig, d.kase, 13) == 1365);
    CHECK(method1_bl(d.f(2), d.sig, d.kase, 17) == 693);
    CHECK(method1_bl(d.f(4), d.sig, d.kase, 3) == 48);
    CHECK(method1_bl(d.f(4), d.sig, d.kase, 7) == 112);
    D25 e;
    CHECK(method1_bl(catalogs().form("160:3"), e.sig, e.kase, 3) == 24);
}

TEST_CASE("Method I survivors")
{
    D95 d;
    CHECK(method1_surviving_exponents(d.f(1), d.sig, d.kase, {3}).survivors.empty());
    auto r = method1_surviving_exponents(d.f(2), d.sig, d.kase, {3, 7, 13, 17});
    CHECK(r.survivors == std::vector<unsigned long>{7});
    CHECK(r.gcd == 21);
    CHECK_FALSE(r.unbounded);
}

TEST_CASE("Frey a_l agrees with the integral model")
{
    D95 d;
    for (uint64_t l : primes_upto(300)) {
        if (l < 3 || 95 % l == 0 || l == 3) continue;
        Int disc = invariants(build_curve(d.kase, 529, 95).a).disc;
        if (disc % l == 0) continue;
        CHECK(frey_a_l(d.kase, 95, mod_of(Int(529), l), l) == frey_oracle(d.kase, 529, 95, l));
    }
}

TEST_CASE("the known solution is never eliminated")
{
    // (t, s, p) = (529, 6, 7) arises from f2: 7 | B_l(f2) whenever B_l is nonzero
    D95 d;
    for (uint64_t l : primes_upto(100)) {
        if (l == 2 || l == 5 || l == 19) continue;
        Int B = method1_bl(d.f(2), d.sig, d.kase, l);
        if (B != 0) CHECK(B % 7 == 0);
        CHECK(congruence_holds(529, d.f(2), d.sig, d.kase, l, 7));
    }
}

TEST_CASE("roots of unity and A sets")
{
    for (auto [n, l] : {std::pair<unsigned long, uint64_t>{2, 29}, {4, 29}, {14, 29}, {6, 43}, {10, 71}}) {
        auto mu = roots_of_unity(n, l);
        CHECK(mu.size() == n);
        for (uint64_t z : mu) CHECK(powmod(z, n, l) == 1);
        auto A = A_set(95, n, l);
        for (uint64_t z : A) CHECK(std::find(mu.begin(), mu.end(), z) != mu.end());
    }
}

TEST_CASE("Method II")
{
    D95 d;
    std::vector<M2Trial> trail;
    CHECK_FALSE(method2_check(d.f(2), d.sig, d.kase, 7, 2, 100, &trail).has_value());
    CHECK_FALSE(trail.empty());
    D25 e;
    for (const char* lab : {"160A1", "160B1"}) {
        const CurveRecord& E = catalogs().curves.get(lab);
        FormRef f = FormRef::from_curve(E);
        for (uint32_t p : primes_upto(500)) {
            if (p < 7 || !cond_check(25, p)) continue;
            auto r = method2_rational_check(E, e.sig, e.kase, p, 1, 100);
            auto g = method2_check(f, e.sig, e.kase, p, 1, 100);
            CAPTURE(p);
            // p = 7 has no witness with n <= 100 (checked against a brute-force point count)
            if (p <= 100) CHECK((r.has_value() || g.has_value()) == (p != 7));
            if (r && g) CHECK(*r == *g);
            CHECK(method2_rational_check(E, e.sig, e.kase, p, 1, 100, false) == r);
        }
    }
}

TEST_CASE("Method III intersection")
{
    D95 d;
    QuadField F = QuadField::make(95);
    auto G = compute_Gamma(F, 95, 7);
    std::vector<uint64_t> S{113, 127, 239, 337, 491};
    auto I = method3_intersection(d.f(2), d.sig, d.kase, 7, S, G);
    QuadInt target = QuadInt::from_omega(F, Rat(-528, 2187), Rat(-2, 2187));
    REQUIRE(I.size() == 1);
    CHECK((I[0] == target || I[0] == -target));
    auto one = method3_gamma_l(d.f(2), d.sig, d.kase, 7, 113, G);
    CHECK(one.size() >= I.size());
    for (auto& g : one) CHECK(std::find(G.begin(), G.end(), g) != G.end());
    for (auto& g : I) CHECK(std::find(one.begin(), one.end(), g) != one.end());
    CHECK_THROWS(method3_gamma_l(d.f(2), d.sig, d.kase, 7, 29, G));  // 29 is not 1 mod 7
}

TEST_CASE("y lower bound")
{
    CHECK(y_lower_bound_check({529, 6, 1}, {95, 1, 95}) == 2);
    CHECK(y_lower_bound_check({181, 2, 1}, {7, 1, 7}) == 1);
}

TEST_CASE("2-power solutions")
{
    auto s7 = beukers_2power_solutions(7);
    std::vector<TwoPower> want{{1, 3}, {3, 4}, {5, 5}, {11, 7}, {181, 15}};
    CHECK(s7 == want);
    CHECK(beukers_2power_solutions(2).empty());
    CHECK(beukers_bound(100) == 31);
    for (long D = 2; D <= 100; ++D)
        for (auto& t : beukers_2power_solutions(D)) CHECK(t.x * t.x + D == ipow(2, t.m));
}

TEST_CASE("certificate replay")
{
    D95 d;
    Certificate c{95, 1, 95, 'd', "190:1", "I", 0, 0, 3, "eliminated", {{"B", "15"}}};
    CHECK(replay(c, catalogs()));
    c.extra["B"] = "16";
    CHECK_FALSE(replay(c, catalogs()));
    Certificate j = certificate_from_json(to_json(c));
    CHECK(j.form == c.form);
    CHECK(j.extra == c.extra);
    CHECK(j.l == 3);
}
