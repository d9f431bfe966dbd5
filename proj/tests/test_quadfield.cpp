#include "lnag/quadfield.hpp"

#include "doctest.h"

#include <cmath>
#include <numeric>

using namespace lnag;

namespace {

// reduced primitive forms |b| <= a <= c, b >= 0 when |b| = a or a = c
long class_number_oracle(long disc)
{
    long n = 0, D = -disc;
    for (long a = 1; 3 * a * a <= D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            if ((b * b - disc) % (4 * a) != 0) continue;
            long c = (b * b - disc) / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            ++n;
        }
    return n;
}

}  // namespace

TEST_CASE("decompose")
{
    CHECK(decompose(100) == std::make_pair(Int(10), Int(1)));
    CHECK(decompose(28) == std::make_pair(Int(2), Int(7)));
    CHECK(decompose(95) == std::make_pair(Int(1), Int(95)));
    CHECK(decompose(72) == std::make_pair(Int(6), Int(2)));
}

TEST_CASE("class numbers")
{
    CHECK(class_number(QuadField::make(71)) == 7);
    CHECK(class_number(QuadField::make(7)) == 1);
    CHECK(class_number(QuadField::make(95)) == 8);
    for (long d2 : {1, 2, 3, 5, 6, 7, 11, 14, 15, 23, 31, 47, 71, 79, 87, 95, 163})
        CHECK(class_number(QuadField::make(d2)) == class_number_oracle(QuadField::make(d2).disc.get_si()));
}

TEST_CASE("class group representatives")
{
    auto r7 = class_group_reps(QuadField::make(7));
    REQUIRE(r7.size() == 1);
    CHECK(r7[0] == unit_ideal(QuadField::make(7)));
    QuadField F = QuadField::make(95);
    auto r = class_group_reps(F);
    REQUIRE(r.size() == 8);
    CHECK(r[0] == unit_ideal(F));
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = i + 1; j < r.size(); ++j) CHECK_FALSE(ideal_class(r[i]) == ideal_class(r[j]));
    auto r71 = class_group_reps(QuadField::make(71));
    CHECK(r71.size() == 7);
    for (size_t i = 1; i < r71.size(); ++i) CHECK(is_prime(r71[i].norm()));
}

TEST_CASE("class group closure for small discriminants")
{
    for (long d2 : {5, 14, 23, 47, 95, 119, 191}) {
        QuadField F = QuadField::make(d2);
        auto reps = class_group_reps(F);
        std::vector<Form> cls;
        for (auto& I : reps) cls.push_back(ideal_class(I));
        for (auto& I : reps)
            for (auto& J : reps) {
                Form k = ideal_class(ideal_mul(I, J));
                CHECK(std::find(cls.begin(), cls.end(), k) != cls.end());
            }
        // I * conj(I) is principal
        for (auto& I : reps) CHECK(ideal_is_principal(ideal_mul(I, I.conj())));
    }
}

TEST_CASE("ideal generators")
{
    QuadField F = QuadField::make(7);
    auto P = primes_above(F, 2);
    REQUIRE(P.size() == 2);
    for (auto& I : P) {
        CHECK(ideal_is_principal(I));
        auto g = ideal_generator(F, I);
        REQUIRE(g);
        CHECK(g->norm() == 2);
        QuadInt s;
        CHECK(ideal_generator_search(F, I, s) == SearchOutcome::found);
        CHECK(s.norm() == 2);
    }
    QfIdeal u = unit_ideal(F);
    CHECK(ideal_mul(u, P[0]) == P[0]);
    QuadField G = QuadField::make(95);
    QuadInt s;
    CHECK(ideal_generator_search(G, primes_above(G, 2)[0], s) == SearchOutcome::not_principal);
}

TEST_CASE("A sets and Gamma")
{
    QuadField F = QuadField::make(95);
    auto A = compute_A_set(F, 95, 7);
    CHECK(std::find(A.begin(), A.end(), unit_ideal(F)) != A.end());
    auto G = compute_Gamma(F, 95, 7);
    QuadInt target = QuadInt::from_omega(F, Rat(-528, 2187), Rat(-2, 2187));
    bool found = false;
    for (auto& g : G) found = found || g == target || g == -target;
    CHECK(found);

    QuadField F7 = QuadField::make(7);
    for (auto& a : compute_A_set(F7, 7, 7)) {
        Int n = a.norm();
        while (n % 2 == 0) n /= 2;
        CHECK(n == 1);
    }
    bool two_power = false;
    for (auto& g : compute_Gamma(F7, 7, 7)) {
        Rat n = g.norm();
        Int num = n.get_num(), den = n.get_den();
        while (num % 2 == 0) num /= 2;
        while (den % 2 == 0) den /= 2;
        two_power = two_power || (num == 1 && den == 1);
    }
    CHECK(two_power);

    QuadField F3 = QuadField::make(3);
    auto G3 = compute_Gamma(F3, 3, 3);
    CHECK(G3.size() % 3 == 0);
}

TEST_CASE("kappa data")
{
    QuadField F = QuadField::make(7);
    KappaData K = kappa_data(F, 7, 1);
    CHECK(K.d == 2);
    CHECK(K.k0 == 1);
    CHECK(K.kappa == 2);
    CHECK(K.k == 1);
    CHECK(K.alpha0.norm() == 2);
    double im = std::atan2(std::fabs(K.alpha0.v.get_d()) * std::sqrt(7.0), K.alpha0.u.get_d());
    CHECK(im == doctest::Approx(1.2094292028).epsilon(1e-10));
    CHECK(K.alpha_height == doctest::Approx(0.5 * std::log(2.0)));
    for (long D : {7, 15, 23, 31, 47, 71, 79, 95}) {
        KappaData k = kappa_data(QuadField::make(D), D, 1);
        CHECK(2 * k.k == (unsigned long)k.kappa * k.k0);
        CHECK(k.alpha0.norm() == Rat(ipow(k.d, k.k0)));
    }
}
