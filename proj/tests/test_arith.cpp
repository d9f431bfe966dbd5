#include "lnag/arith.hpp"

#include "doctest.h"

#include <random>

using namespace lnag;

namespace {

// Legendre symbol by listing the squares mod q
int legendre_oracle(long a, long q)
{
    long r = ((a % q) + q) % q;
    if (r == 0) return 0;
    for (long x = 1; x < q; ++x)
        if (x * x % q == r) return 1;
    return -1;
}

Int trial_radical(Int a)
{
    a = abs(a);
    Int r = 1;
    for (Int q = 2; q * q <= a; ++q) {
        if (a % q != 0) continue;
        r *= q;
        while (a % q == 0) a /= q;
    }
    if (a > 1) r *= a;
    return r;
}

}  // namespace

TEST_CASE("kronecker symbol")
{
    CHECK(kronecker(-95, 3) == 1);
    CHECK(kronecker(1, 7) == 1);
    CHECK(kronecker(-7, 11) == 1);
    CHECK(kronecker(-7, 23) == 1);
    CHECK_THROWS_AS(kronecker(5, 0), std::invalid_argument);
    for (long q : {3, 5, 7, 11, 13, 101, 997})
        for (long a = -60; a <= 60; ++a) CHECK(kronecker(a, q) == legendre_oracle(a, q));
}

TEST_CASE("kronecker of squares")
{
    for (long q : {3, 5, 7, 11, 13, 17, 19, 23})
        for (long a = -30; a <= 30; ++a) {
            int k = kronecker(Int(a * a), q);
            CHECK((k == 0 || k == 1));
        }
}

TEST_CASE("valuation")
{
    CHECK(valuation(2, 64) == 6);
    CHECK(valuation(3, 2187) == 7);
    CHECK(valuation(5, 99) == 0);
    CHECK_THROWS(valuation(2, 0));
}

TEST_CASE("factor")
{
    auto f = factor(100);
    REQUIRE(f.terms.size() == 2);
    CHECK(f.terms[0] == std::make_pair(Int(2), 2u));
    CHECK(f.terms[1] == std::make_pair(Int(5), 2u));
    auto g = factor(279936);
    REQUIRE(g.terms.size() == 2);
    CHECK(g.terms[0] == std::make_pair(Int(2), 7u));  // 279936 = 6^7
    CHECK(g.terms[1] == std::make_pair(Int(3), 7u));
    CHECK(factor(1).terms.empty());
    // beyond the digit limit is an explicit error
    CHECK_THROWS(factor(Int("1000000000000000000000000000000000000000000000000000000000000000000007") *
                         Int("1000000000000000000000000000000000000000000000000000000000000000000009")));
}

TEST_CASE("factor round trip and radical")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        Int a = Int((unsigned long)(rng() % 100000000ull) + 1);
        auto f = factor(a);
        CHECK(f.value() == a);
        for (size_t j = 1; j < f.terms.size(); ++j) CHECK(f.terms[j - 1].first < f.terms[j].first);
        Int r = radical(a);
        CHECK(a % r == 0);
        if (i < 500) CHECK(r == trial_radical(a));
        for (auto& [q, e] : factor(r).terms) CHECK(e == 1u);
    }
    CHECK(radical(72) == 6);
    CHECK(radical(190) == 190);
    CHECK(radical(-12) == 6);
    CHECK(radical(1) == 1);
}

TEST_CASE("primality")
{
    CHECK(is_prime(2));
    CHECK(is_prime(Int("18446744073709551557")));
    CHECK_FALSE(is_prime(Int("18446744073709551559")));
    CHECK(primality(Int("340282366920938463463374607431768211507")) == Primality::probable);
    auto ps = primes_upto(100);
    CHECK(ps.size() == 25);
    for (uint32_t p : ps) CHECK(is_prime_u64(p));
    CHECK(next_prime_u64(113) == 127);
}

TEST_CASE("modular helpers")
{
    uint64_t r;
    CHECK(sqrtmod(2, 7, r));
    CHECK(r * r % 7 == 2);
    CHECK_FALSE(sqrtmod(3, 7, r));
    CHECK(powmod(3, 6, 7) == 1);
    CHECK(invmod(3, 7) == 5);
    CHECK(mod_of(-1, 7) == 6);
    Int root;
    CHECK(is_square(529 * 529, &root));
    CHECK(root == 529);
    CHECK(divisors(12) == std::vector<Int>{1, 2, 3, 4, 6, 12});
}
