#pragma once

#include "lnag/arith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lnag {

// Q(sqrt(-D2)), D2 > 0 squarefree; order Z[omega]
struct QuadField {
    Int D2;
    Int disc;   // -D2 or -4*D2
    bool half;  // omega = (1+sqrt(-D2))/2, else omega = sqrt(-D2)

    static QuadField make(const Int& D2);
    bool operator==(const QuadField& o) const { return D2 == o.D2; }
};

// u + v*sqrt(-D2)
struct QuadInt {
    Int D2;
    Rat u, v;

    QuadInt() : D2(1), u(0), v(0) {}
    QuadInt(const Int& d2, const Rat& u_, const Rat& v_) : D2(d2), u(u_), v(v_) {}
    static QuadInt from_omega(const QuadField& F, const Rat& x, const Rat& y);  // x + y*omega

    QuadInt conj() const { return {D2, u, -v}; }
    Rat norm() const { return u * u + D2 * v * v; }
    Rat trace() const { return 2 * u; }
    // coordinates (x, y) with self = x + y*omega
    std::pair<Rat, Rat> omega_coords(const QuadField& F) const;
    bool is_integral(const QuadField& F) const;
    Int denominator(const QuadField& F) const;  // least n with n*self integral

    QuadInt operator+(const QuadInt& o) const { return {D2, u + o.u, v + o.v}; }
    QuadInt operator-(const QuadInt& o) const { return {D2, u - o.u, v - o.v}; }
    QuadInt operator-() const { return {D2, -u, -v}; }
    QuadInt operator*(const QuadInt& o) const { return {D2, u * o.u - D2 * v * o.v, u * o.v + v * o.u}; }
    QuadInt operator*(const Rat& r) const { return {D2, u * r, v * r}; }
    QuadInt operator/(const QuadInt& o) const;
    bool operator==(const QuadInt& o) const { return D2 == o.D2 && u == o.u && v == o.v; }
    QuadInt pow(unsigned long e) const;
    std::string str(const QuadField& F) const;  // "(x + y*w)/n"
};

// content * [a, (b + sqrt(disc))/2]
struct QfIdeal {
    Int disc;
    Int content = 1;
    Int a = 1, b;

    Int norm() const { return content * content * a; }
    Int form_c() const { return (b * b - disc) / (4 * a); }
    QfIdeal conj() const;
    bool contains(const Int& X, const Int& Y) const;  // (X + Y sqrt(disc))/2
    bool operator==(const QfIdeal& o) const
    {
        return disc == o.disc && content == o.content && a == o.a && b == o.b;
    }
    bool operator<(const QfIdeal& o) const;
    std::string str() const;
};

QfIdeal unit_ideal(const QuadField& F);
QfIdeal principal_ideal(const QuadField& F, const QuadInt& g);  // g integral
QfIdeal ideal_mul(const QfIdeal& I, const QfIdeal& J);
QfIdeal ideal_pow(const QfIdeal& I, unsigned long e);
// reduced form (a, b, c) of the class of I
struct Form { Int a, b, c; bool operator==(const Form&) const = default; };
Form reduce_form(Form f);
Form ideal_class(const QfIdeal& I);
bool ideal_is_principal(const QfIdeal& I);
std::optional<QuadInt> ideal_generator(const QuadField& F, const QfIdeal& I);
// generator by exhaustive search over norm-N elements; nullopt when the
// search exceeds max_steps or no generator exists
enum class SearchOutcome { found, not_principal, not_found };
SearchOutcome ideal_generator_search(const QuadField& F, const QfIdeal& I, QuadInt& out,
                                     unsigned long max_steps = 100000000ul);
// prime ideals above a rational prime q, sorted by b
std::vector<QfIdeal> primes_above(const QuadField& F, const Int& q);

std::pair<Int, Int> decompose(const Int& D);  // (D1, D2)
long class_number(const QuadField& F);
std::vector<Form> reduced_forms(const Int& disc);
std::vector<QfIdeal> class_group_reps(const QuadField& F);

std::vector<QfIdeal> compute_A_set(const QuadField& F, const Int& D, unsigned long p);
std::vector<QuadInt> compute_Gamma(const QuadField& F, const Int& D, unsigned long p);

struct KappaData {
    Int d, q;
    unsigned c = 0;
    unsigned long k0 = 0, k = 0;
    int kappa = 0;
    QuadInt alpha0;
    double alpha_height = 0;        // k log d / kappa
    double gamma_height_coeff = 0;  // h(gamma) = coeff * log y
};
KappaData kappa_data(const QuadField& F, const Int& D, const Int& d1);

}  // namespace lnag
