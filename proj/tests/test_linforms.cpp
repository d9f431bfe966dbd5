#include "lnag/linforms.hpp"

#include "doctest.h"

#include <cmath>

using namespace lnag;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Interval L(double x) { return Interval(x); }

}  // namespace

TEST_CASE("Matveev constants")
{
    CHECK(rel((matveev_c1(2, 2) * Interval(4.0)).mid(), 1.80741e11) < 1e-4);
    CHECK(rel((matveev_c1(2, 1) * Interval(4.0)).mid(), 7.25354e10) < 1e-4);
    CHECK(rel(matveev_log_factor(2).mid(), 13.80736) < 1e-5);
    CHECK(matveev_c1(2, 2).width() < 1e-20 * matveev_c1(2, 2).mid());
}

TEST_CASE("Lambda upper bound")
{
    Interval a = lambda_upper(Int(100000000), log(Interval(22.0)), 1, 7);
    double want = -5e7 * std::log(22.0) + std::log(2.2 * std::sqrt(7.0));
    CHECK(rel(a.mid(), want) < 1e-12);
    CHECK(certainly_lt(lambda_upper(Int(100000001), log(Interval(22.0)), 1, 7), a));
    CHECK(certainly_lt(lambda_upper(Int(100000000), log(Interval(23.0)), 1, 7), a));
}

TEST_CASE("Matveev iteration")
{
    // D = 7: A1 = pi/2, A2 = log y, A3 = pi, y >= 22
    LogInstance inst = log_instance(7, 1);
    CHECK(inst.k == 1);
    auto r = matveev_bound_iterate(Interval::pi() / Interval(2.0), Interval(1L), Interval::pi(), log(Interval(22.0)),
                                   ipow(10, 30), inst.lambda_const);
    CHECK(r.bound > Int("681000000000"));
    CHECK(r.bound < Int("68100000000000"));
    for (size_t i = 1; i < r.trail.size(); ++i) CHECK(r.trail[i] <= r.trail[i - 1]);
    // squarefree family: A1 = 7 log 2, A2 = 7 log y
    auto s = matveev_bound_iterate(Interval(7L) * log(Interval(2L)), Interval(7L), Interval::pi(), log(Interval(3L)),
                                   ipow(10, 30), log(Interval(2.2) * Interval(7L) * sqrt(Interval(97L))));
    CHECK(s.bound <= Int("2000000000000000"));
}

TEST_CASE("two-log corollary")
{
    Interval pi = Interval::pi();
    // c1' = 1 / (2 a1 a2)
    TwoLogParams tp = make_twolog_params(pi, pi, L(1.0), L(1.0), 1, 5.0, 1000, 1000);
    CHECK(tp.a1.mid() > 0);
    double prod = (tp.a1 * tp.a2).mid();
    CHECK(rel(tp.c1p.mid(), 1 / (2 * prod)) < 1e-12);
    CHECK_THROWS_AS(twolog_bound(make_twolog_params(pi, pi, L(1.0), L(1.0), 1, 30.0, 1000, 1000), 1000, 1000),
                    std::invalid_argument);
    // C0' decreases as the heights grow
    TwoLogParams big = make_twolog_params(pi, pi, L(5.0), L(5.0), 1, 5.0, 1000, 1000);
    CHECK(certainly_lt(big.C0p, tp.C0p));
}

TEST_CASE("legacy corollary closes the |q| < 880 branch")
{
    Interval logA1 = Interval(882L) * Interval::pi();
    Interval logA2 = max(Interval::pi(), log(Interval(22L))) / Interval(2L);
    LogInstance inst = log_instance(7, 1);
    Int p = lmn_legacy_p_bound(logA1, logA2, log(Interval(22L)), inst.lambda_const, ipow(10, 10));
    CHECK(p < Int(80000000));
}

TEST_CASE("(C3) caps for the coupled run")
{
    ThreeLogParams P;
    P.L = 115;
    P.rho = 5.5;
    P.chi = 1;
    P.R1 = 117653;
    P.S1 = 31819;
    P.T1 = 19991;
    P.S2 = 60000;
    P.T2 = 40000;
    CpFilter c = cp_case_filter(P, Orientation::I, 2, 100000000);
    CHECK(c.t1 == 76);
    CHECK(c.t2_exact == 276);
    CHECK(c.t2 == 281);
    CHECK(c.c12_excluded);
    CpFilter low = cp_case_filter(P, Orientation::I, 2, 1000);
    CHECK_FALSE(low.c12_excluded);
}

TEST_CASE("recipe and admissibility")
{
    LogInstance inst = log_instance(7, 1);
    ThreeLogForm f = make_form(inst, Orientation::I, log(Interval(22L)), Int(3050000000L), true);
    ThreeLogParams P = recipe_params(f, 120, 5, 106.2055121, 0.4);
    CHECK(P.R > P.R1 + P.R2 + P.R3);
    CHECK(P.S > P.S1 + P.S2 + P.S3);
    CHECK(P.T > P.T1 + P.T2 + P.T3);
    // frozen values of our a_i convention (printed: 46385, 54196, 37763)
    CHECK(P.R1 == 50924);
    CHECK(P.S1 == 59497);
    CHECK(P.T1 == 41456);
    ThreeLogParams bad = P;
    bad.R = bad.R1 + bad.R2 + bad.R3;
    Admissibility a = threelog_admissible(bad, f);
    CHECK_FALSE(a.ok);
    CHECK_FALSE(a.failures.empty());
    ThreeLogParams j = ThreeLogParams::from_json(P.to_json());
    CHECK(j.R1 == P.R1);
    CHECK(j.K == P.K);
}

TEST_CASE("three-log bound is certified and monotone in y")
{
    LogInstance inst = log_instance(7, 1);
    SearchConfig sc;
    sc.budget = 20000;
    BoundResult a = threelog_bound_once(inst, log(Interval(22L)), Int("10000000000"), sc);
    BoundResult b = threelog_bound_once(inst, log(Interval(1000L)), Int("10000000000"), sc);
    CHECK(a.p_bound < Int("10000000000"));
    CHECK(b.p_bound <= a.p_bound);
    CHECK(replay_bound(a, inst));
    for (auto& [o, P] : a.params) CHECK(threelog_admissible(P, make_form(inst, o, log(Interval(22L)), a.p_max_used)).ok);
    BoundResult tampered = a;
    tampered.p_bound = a.p_bound / 10;
    CHECK_FALSE(replay_bound(tampered, inst));
}
