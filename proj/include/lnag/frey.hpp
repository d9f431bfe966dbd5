#pragma once

#include "lnag/signatures.hpp"

#include <array>
#include <optional>
#include <vector>

namespace lnag {

enum class FreyModel {
    twoT_minus_d2,     // Y^2 = X^3 + 2t X^2 - d2 X
    twoT_plus_norm,    // Y^2 = X^3 + 2t X^2 + (t^2 + d2) X
    xy_norm64,         // Y^2 + XY = X^3 + (t-1)/4 X^2 + (t^2 + d2)/64 X
    t_minus_d2_4,      // Y^2 = X^3 + t X^2 - d2/4 X
    xy_minus_d2_64     // Y^2 + XY = X^3 + (t-1)/4 X^2 - d2/64 X
};

struct FreyCase {
    char label = 'a';
    int level_log2 = 0;  // L = 2^level_log2
    bool t_even = false;
    int t_mod4 = 0;      // required residue of t mod 4 after normalization, 0 if none
    FreyModel model = FreyModel::twoT_minus_d2;
    bool operator==(const FreyCase& o) const { return label == o.label; }
};

FreyCase frey_case(char label);
// cases that can occur for some t under this signature
std::vector<FreyCase> cases_for_signature(const Signature& sig);
std::pair<FreyCase, Int> select_case(const Signature& sig, const Int& t);
std::optional<FreyCase> case_for_level(const Signature& sig, const Int& level);

using Weierstrass = std::array<Int, 5>;  // a1, a2, a3, a4, a6

struct FreyCurve {
    FreyCase kase;
    Weierstrass a;
};

FreyCurve build_curve(const FreyCase& c, const Int& t, const Int& d2);
Int predicted_level(const FreyCase& c, const Int& D);

// model of E_tau reduced mod an odd prime l
std::array<uint64_t, 5> frey_mod_l(const FreyCase& c, uint64_t tau, const Int& d2, uint64_t l);

}  // namespace lnag
