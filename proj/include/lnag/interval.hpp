#pragma once

#include "lnag/arith.hpp"

#include <mpfr.h>

#include <string>

namespace lnag {

// closed interval [lo, hi] with outward rounding
class Interval {
public:
    static constexpr mpfr_prec_t kPrec = 256;

    Interval();
    Interval(double x);  // NOLINT(google-explicit-constructor)
    Interval(long x);    // NOLINT(google-explicit-constructor)
    Interval(int x) : Interval((long)x) {}  // NOLINT(google-explicit-constructor)
    explicit Interval(const Int& x);
    explicit Interval(const Rat& x);
    Interval(double lo, double hi);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval pi();
    // decimal literal such as "2.2", enclosed exactly
    static Interval parse(const std::string& s);

    double lower() const;  // rounded down
    double upper() const;  // rounded up
    double mid() const;
    double width() const;
    bool contains(double x) const;
    std::string str(int digits = 20) const;

    Int floor_lower() const;
    Int ceil_upper() const;

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval& operator+=(const Interval& b) { return *this = *this + b; }
    Interval& operator-=(const Interval& b) { return *this = *this - b; }
    Interval& operator*=(const Interval& b) { return *this = *this * b; }
    Interval& operator/=(const Interval& b) { return *this = *this / b; }

    friend Interval log(const Interval& a);
    friend Interval exp(const Interval& a);
    friend Interval sqrt(const Interval& a);
    friend Interval cbrt(const Interval& a);
    friend Interval pow(const Interval& a, const Interval& b);  // a > 0
    friend Interval abs(const Interval& a);
    friend Interval max(const Interval& a, const Interval& b);
    friend Interval min(const Interval& a, const Interval& b);
    friend Interval lgamma_pos(const Interval& a);  // log Gamma on a >= 2
    // argument of x + i y; the box must avoid the origin and the negative real axis
    friend Interval atan2(const Interval& y, const Interval& x);

    // certain comparisons: true only when every pair of points satisfies the relation
    friend bool certainly_lt(const Interval& a, const Interval& b);
    friend bool certainly_le(const Interval& a, const Interval& b);
    friend bool certainly_gt(const Interval& a, const Interval& b) { return certainly_lt(b, a); }
    friend bool certainly_ge(const Interval& a, const Interval& b) { return certainly_le(b, a); }

private:
    mpfr_t lo_, hi_;
};

// uniform comparison for templated code: certain for intervals, plain for doubles
inline bool ge(double a, double b) { return a >= b; }
inline bool gt(double a, double b) { return a > b; }
inline bool ge(const Interval& a, const Interval& b) { return certainly_ge(a, b); }
inline bool gt(const Interval& a, const Interval& b) { return certainly_gt(a, b); }
inline double upper_of(double a) { return a; }
inline double upper_of(const Interval& a) { return a.upper(); }
inline double lower_of(double a) { return a; }
inline double lower_of(const Interval& a) { return a.lower(); }

}  // namespace lnag
