#include "lnag/thue.hpp"

#include "doctest.h"

#include <complex>
#include <random>

using namespace lnag;

namespace {

using C = std::complex<long double>;

C to_c(const QuadInt& q)
{
    long double s = std::sqrt((long double)q.D2.get_d());
    return {(long double)q.u.get_d(), (long double)q.v.get_d() * s};
}

// (g (U + V w)^p - conj(g) (U + V conj w)^p) / (2 sqrt(-D2)), times the clearing factor
long double direct(const QuadField& F, const ThueForm& f, long U, long V)
{
    C w = to_c(QuadInt::from_omega(F, 0, 1)), g = to_c(f.gamma);
    C z = std::pow(C(U, 0) + (long double)V * w, (int)f.degree);
    C zb = std::pow(C(U, 0) + (long double)V * std::conj(w), (int)f.degree);
    C val = (g * z - std::conj(g) * zb) / (C(0, 2) * std::sqrt((long double)f.gamma.D2.get_d()));
    return val.real() * (long double)f.clearing.get_d();
}

ThueForm d95()
{
    QuadField F = QuadField::make(95);
    return build_thue_form(F, QuadInt::from_omega(F, Rat(-528, 2187), Rat(-2, 2187)), 1, 7);
}

}  // namespace

TEST_CASE("D=95 form")
{
    ThueForm f = d95();
    std::vector<Int> want{-1, -1855, -5061, 214165, 416605, -2834013, -2944375, 2818247};
    CHECK(f.c == want);
    CHECK(f.rhs == 2187);
    CHECK(f.eval(-3, 0) == 2187);
    auto sols = search_small_solutions(f, 50);
    CHECK(sols == std::vector<std::pair<Int, Int>>{{-3, 0}});
    auto [g, m] = unimodular_reduce(f);
    CHECK(m == Mat2{1, 0, 0, 1});
    QuadField F = QuadField::make(95);
    Recovered r = recover_solution(F, f.gamma, 95, 7, -3, 0);
    REQUIRE(r.ok);
    CHECK(abs(r.x) == 529);
    CHECK(r.y == 6);
}

TEST_CASE("form matches direct evaluation")
{
    struct Case { long D2; Rat x, y; unsigned long p; };
    for (auto c : {Case{95, Rat(-528, 2187), Rat(-2, 2187), 7}, Case{1, 0, 1, 3}, Case{7, Rat(1, 2), Rat(3, 4), 5},
                   Case{23, 2, -1, 5}}) {
        QuadField F = QuadField::make(c.D2);
        ThueForm f = build_thue_form(F, QuadInt::from_omega(F, c.x, c.y), 1, c.p);
        long double sign = 0;
        for (long U = -3; U <= 3; ++U)
            for (long V = -3; V <= 3; ++V) {
                long double e = direct(F, f, U, V), v = f.eval(U, V).get_d();
                if (sign == 0 && e != 0) sign = v / e > 0 ? 1 : -1;
                CHECK(std::abs(v - sign * e) <= 1e-6L * (1 + std::abs(e)));
            }
    }
}

TEST_CASE("conjugate gamma negates the form")
{
    // conj(omega) = 1 - omega, so U + V conj(omega) = (U + V) - V omega
    QuadField F = QuadField::make(95);
    ThueForm f = d95(), g = build_thue_form(F, f.gamma.conj(), 1, 7);
    for (long U = -2; U <= 2; ++U)
        for (long V = -2; V <= 2; ++V) CHECK(g.eval(U, V) == -f.eval(U + V, -V));
}

TEST_CASE("search edge cases")
{
    ThueForm f = d95();
    f.rhs = 0;
    CHECK(search_small_solutions(f, 0) == std::vector<std::pair<Int, Int>>{{0, 0}});
    ThueForm h{3, {1, 0, 0, 1}, 3};  // U^3 + V^3 = 3 has no solutions mod 9
    CHECK(search_small_solutions(h, 100).empty());
}

TEST_CASE("reduction undoes a scramble")
{
    std::mt19937_64 rng(3);
    ThueForm f = d95();
    for (int i = 0; i < 10; ++i) {
        long a = (long)(rng() % 5) - 2, b = (long)(rng() % 5) - 2;
        Mat2 m1{1, a, 0, 1}, m2{1, 0, b, 1};
        ThueForm s = transform(transform(f, m1), m2);
        auto [r, m] = unimodular_reduce(s);
        CHECK(abs(r.c[0]) <= abs(s.c[0]));
        CHECK(abs(r.c[0]) == 1);
        for (auto& [U, V] : search_small_solutions(r, 20)) {
            Int X = m[0] * U + m[1] * V, Y = m[2] * U + m[3] * V;
            CHECK(s.eval(X, Y) == s.rhs);
        }
        CHECK_FALSE(search_small_solutions(r, 20).empty());
    }
}
