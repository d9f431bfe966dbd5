#include "lnag/interval.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lnag {

Interval::Interval()
{
    mpfr_init2(lo_, kPrec);
    mpfr_init2(hi_, kPrec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(double x) : Interval()
{
    if (!std::isfinite(x)) throw std::invalid_argument("Interval: non-finite value");
    mpfr_set_d(lo_, x, MPFR_RNDD);
    mpfr_set_d(hi_, x, MPFR_RNDU);
}

Interval::Interval(long x) : Interval()
{
    mpfr_set_si(lo_, x, MPFR_RNDD);
    mpfr_set_si(hi_, x, MPFR_RNDU);
}

Interval::Interval(const Int& x) : Interval()
{
    mpfr_set_z(lo_, x.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, x.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const Rat& x) : Interval()
{
    mpfr_set_q(lo_, x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, x.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(double lo, double hi) : Interval()
{
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi");
    mpfr_set_d(lo_, lo, MPFR_RNDD);
    mpfr_set_d(hi_, hi, MPFR_RNDU);
}

Interval::Interval(const Interval& o) : Interval()
{
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : Interval()
{
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o)
{
    if (this != &o) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept
{
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Interval::~Interval()
{
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::pi()
{
    Interval r;
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::parse(const std::string& s)
{
    Interval r;
    if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0 || mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU) != 0)
        throw std::invalid_argument("Interval::parse: bad literal " + s);
    return r;
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const
{
    mpfr_t m;
    mpfr_init2(m, kPrec);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

double Interval::width() const
{
    mpfr_t w;
    mpfr_init2(w, kPrec);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

bool Interval::contains(double x) const { return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0; }

std::string Interval::str(int digits) const
{
    auto fmt = [&](const mpfr_t v, mpfr_rnd_t rnd) {
        char* buf = nullptr;
        mpfr_asprintf(&buf, (rnd == MPFR_RNDD) ? "%.*RDe" : "%.*RUe", digits, v);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    };
    return "[" + fmt(lo_, MPFR_RNDD) + ", " + fmt(hi_, MPFR_RNDU) + "]";
}

Int Interval::floor_lower() const
{
    Int r;
    mpfr_get_z(r.get_mpz_t(), lo_, MPFR_RNDD);
    return r;
}

Int Interval::ceil_upper() const
{
    Int r;
    mpfr_get_z(r.get_mpz_t(), hi_, MPFR_RNDU);
    return r;
}

Interval operator+(const Interval& a, const Interval& b)
{
    Interval r;
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b)
{
    Interval r;
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a)
{
    Interval r;
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b)
{
    Interval r;
    mpfr_t t;
    mpfr_init2(t, Interval::kPrec);
    const __mpfr_struct* xs[2] = {a.lo_, a.hi_};
    const __mpfr_struct* ys[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : xs)
        for (auto y : ys) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw std::domain_error("Interval: division by an interval containing 0");
    Interval inv;
    mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    return a * inv;
}

Interval log(const Interval& a)
{
    if (mpfr_sgn(a.lo_) <= 0) throw std::domain_error("Interval: log of non-positive");
    Interval r;
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval exp(const Interval& a)
{
    Interval r;
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval& a)
{
    if (mpfr_sgn(a.lo_) < 0) throw std::domain_error("Interval: sqrt of negative");
    Interval r;
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval cbrt(const Interval& a)
{
    Interval r;
    mpfr_cbrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_cbrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval pow(const Interval& a, const Interval& b) { return exp(b * log(a)); }

Interval abs(const Interval& a)
{
    if (mpfr_sgn(a.lo_) >= 0) return a;
    if (mpfr_sgn(a.hi_) <= 0) return -a;
    Interval r;
    mpfr_set_zero(r.lo_, 1);
    if (mpfr_cmpabs(a.lo_, a.hi_) > 0)
        mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    else
        mpfr_set(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval max(const Interval& a, const Interval& b)
{
    Interval r;
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval min(const Interval& a, const Interval& b)
{
    Interval r;
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval lgamma_pos(const Interval& a)
{
    // log Gamma is increasing on [2, inf); the callers only use arguments >= 2
    if (mpfr_cmp_ui(a.lo_, 2) < 0) throw std::domain_error("Interval: lgamma_pos needs argument >= 2");
    Interval r;
    mpfr_lngamma(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_lngamma(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval atan2(const Interval& y, const Interval& x)
{
    if (mpfr_sgn(x.hi_) < 0 && mpfr_sgn(y.lo_) <= 0 && mpfr_sgn(y.hi_) >= 0)
        throw std::domain_error("Interval: atan2 across the branch cut");
    Interval ax = abs(x), ay = abs(y);
    Interval rmin = sqrt(Interval(ax.lower()) * Interval(ax.lower()) + Interval(ay.lower()) * Interval(ay.lower()));
    if (rmin.lower() <= 0) throw std::domain_error("Interval: atan2 at the origin");
    // midpoint value widened by (wx + wy) / |z|_min, a Lipschitz bound for the argument
    mpfr_t mx, my, t;
    mpfr_inits2(Interval::kPrec, mx, my, t, (mpfr_ptr)0);
    mpfr_add(mx, x.lo_, x.hi_, MPFR_RNDN);
    mpfr_div_2ui(mx, mx, 1, MPFR_RNDN);
    mpfr_add(my, y.lo_, y.hi_, MPFR_RNDN);
    mpfr_div_2ui(my, my, 1, MPFR_RNDN);
    mpfr_atan2(t, my, mx, MPFR_RNDN);
    Interval r;
    mpfr_set(r.lo_, t, MPFR_RNDD);
    mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_clears(mx, my, t, (mpfr_ptr)0);
    double s = ((Interval(x.width()) + Interval(y.width())) / rmin).upper() + std::ldexp(1.0, -200);
    return r + Interval(-s, s);
}

bool certainly_lt(const Interval& a, const Interval& b) { return mpfr_less_p(a.hi_, b.lo_); }
bool certainly_le(const Interval& a, const Interval& b) { return mpfr_lessequal_p(a.hi_, b.lo_); }

}  // namespace lnag
