#pragma once

#include "lnag/quadfield.hpp"

#include <array>
#include <vector>

namespace lnag {

// c[0] U^p + c[1] U^(p-1) V + ... + c[p] V^p = rhs
struct ThueForm {
    unsigned long degree = 0;
    std::vector<Int> c;
    Int rhs;
    Int clearing = 1;  // denominator cleared from gamma's expansion
    QuadInt gamma;

    Int eval(const Int& U, const Int& V) const;
};

using Mat2 = std::array<Int, 4>;  // (U, V) -> (a U + b V, c U + d V)

ThueForm build_thue_form(const QuadField& F, const QuadInt& gamma, const Int& D1, unsigned long p);
// F(a U + b V, c U + d V)
ThueForm transform(const ThueForm& f, const Mat2& m);
std::pair<ThueForm, Mat2> unimodular_reduce(const ThueForm& f, long box = 40);
std::vector<std::pair<Int, Int>> search_small_solutions(const ThueForm& f, long box);

// x + D1 sqrt(-D2) = gamma (U + V omega)^p; returns (x, y) when it solves x^2 + D = y^p
struct Recovered {
    bool ok = false;
    Int x, y;
};
Recovered recover_solution(const QuadField& F, const QuadInt& gamma, const Int& D, unsigned long p, const Int& U,
                           const Int& V);

}  // namespace lnag
