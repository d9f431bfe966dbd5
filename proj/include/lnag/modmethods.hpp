#pragma once

#include "lnag/curves.hpp"
#include "lnag/quadfield.hpp"

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace lnag {

// coefficient source for c_l: a stored newform or an elliptic curve
struct FormRef {
    std::string id;
    Poly field;  // {0, 1} for rational forms
    std::function<std::optional<std::vector<Int>>(uint64_t)> coeff;
    std::optional<Weierstrass> curve;  // set for curves

    bool rational() const { return field.size() == 2; }
    static FormRef from_newform(const NewformRecord& f);
    static FormRef from_curve(const CurveRecord& c);
};

// a_l(E_tau) for tau in F_l with tau^2 + d2 != 0 (mod l)
long frey_a_l(const FreyCase& c, const Int& d2, uint64_t tau, uint64_t l);

bool congruence_holds(const Int& t, const FormRef& f, const Signature& sig, const FreyCase& c,
                      uint64_t l, unsigned long p);

Int method1_bl(const FormRef& f, const Signature& sig, const FreyCase& c, uint64_t l);

struct Method1Result {
    bool unbounded = false;  // every B_l vanished
    Int gcd;
    std::vector<std::pair<uint64_t, Int>> bl;
    std::vector<unsigned long> survivors;  // primes p | gcd with cond_check
};
Method1Result method1_surviving_exponents(const FormRef& f, const Signature& sig, const FreyCase& c,
                                          const std::vector<uint64_t>& ls);

// mu_n(F_l) and A(n, l)
std::vector<uint64_t> roots_of_unity(unsigned long n, uint64_t l);
std::vector<uint64_t> A_set(const Int& D, unsigned long n, uint64_t l);

enum class M2Status { ok, l_not_prime, l_divides_D, cond_b, no_coefficient, cond_c, l_too_large };
const char* to_string(M2Status s);

struct M2Trial {
    unsigned long n = 0;
    uint64_t l = 0;
    M2Status status = M2Status::ok;
    uint64_t zeta = 0;  // offending zeta when status == cond_c
};

// one value of n; general form of the method
M2Trial method2_trial(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p, unsigned long n);
// rational variant for a curve with 2-torsion; random-point prefilter when use_prefilter
M2Trial method2_rational_trial(const CurveRecord& E, const Signature& sig, const FreyCase& c, unsigned long p,
                               unsigned long n, bool use_prefilter = true);

std::optional<unsigned long> method2_check(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p,
                                           unsigned long n_min, unsigned long n_max,
                                           std::vector<M2Trial>* trail = nullptr);
std::optional<unsigned long> method2_rational_check(const CurveRecord& E, const Signature& sig, const FreyCase& c,
                                                    unsigned long p, unsigned long n_min, unsigned long n_max,
                                                    bool use_prefilter = true);

// T_l(f) and Gamma_l
std::vector<uint64_t> method3_T(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p, uint64_t l);
std::vector<QuadInt> method3_gamma_l(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p,
                                     uint64_t l, const std::vector<QuadInt>& Gamma);
std::vector<QuadInt> method3_intersection(const FormRef& f, const Signature& sig, const FreyCase& c, unsigned long p,
                                          const std::vector<uint64_t>& S, const std::vector<QuadInt>& Gamma);

// 1: rad(s) | 2 d1, 2: |s| > (sqrt(p) - 1)^2
int y_lower_bound_check(const SimplifiedSolution& sol, const Signature& sig);

struct TwoPower {
    Int x;
    unsigned long m;
    bool operator==(const TwoPower&) const = default;
};
unsigned long beukers_bound(const Int& D);
std::vector<TwoPower> beukers_2power_solutions(const Int& D);

struct Certificate {
    Int D, d1, d2;
    char frey_case = 'a';
    std::string form;    // "level:class" or curve label
    std::string method;  // I, II, II-rational, III
    unsigned long p = 0;
    unsigned long n = 0;
    uint64_t l = 0;
    std::string outcome;
    nlohmann::json extra;
};
nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

struct Catalogs {
    CurveDb curves;
    NewformDb forms;
    static Catalogs load(const std::string& dir = data_dir());
    FormRef form(const std::string& id) const;
};
// re-runs the named method on the witness alone
bool replay(const Certificate& c, const Catalogs& cat);

}  // namespace lnag
