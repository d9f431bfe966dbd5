#pragma once

#include "lnag/arith.hpp"

#include <vector>

namespace lnag {

struct Signature {
    Int D, d1, d2;
    bool operator==(const Signature&) const = default;
};

// t^2 + d2 = e * s^p
struct SimplifiedSolution {
    Int t, s;
    unsigned long p = 0;
    Int e;
};

struct Triple {
    Int x, y;
    unsigned long n = 0;
    bool operator==(const Triple&) const = default;
    bool operator<(const Triple& o) const
    {
        if (n != o.n) return n < o.n;
        if (y != o.y) return y < o.y;
        return x < o.x;
    }
};

bool cond_check(const Int& D, unsigned long p);
bool signature_valid(const Signature& s);
std::vector<Signature> enumerate_signatures(const Int& D);
Int compute_e(const Signature& sig, unsigned long p);
std::pair<Signature, SimplifiedSolution> simplify(const Int& x, const Int& y, const Int& D, unsigned long p);

// solutions from the explicit cases of Cohn's argument, |x| reported;
// D = 1 yields (0, 1, p) for every prime 7 <= p <= p_max
std::vector<Triple> cohn_filter(const Int& D, unsigned long p_max);
// true when p | h(Q(sqrt(-D2))), the case Cohn's argument leaves open
bool cohn_class_number_case(const Int& D, unsigned long p);

// even n >= 4 via D = (y^(n/2) - x)(y^(n/2) + x), y >= 2
std::vector<Triple> recover_even_n(const Int& D);

}  // namespace lnag
