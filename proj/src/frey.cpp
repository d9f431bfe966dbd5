#include "lnag/frey.hpp"

#include <stdexcept>
#include <string>

namespace lnag {

namespace {

Int mod_pos(const Int& a, unsigned long m)
{
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

Int exact_div(const Int& a, unsigned long m, char label)
{
    if (a % m != 0) throw std::invalid_argument(std::string("build_curve: non-exact division in case (") + label + ")");
    return a / m;
}

}  // namespace

FreyCase frey_case(char label)
{
    using M = FreyModel;
    switch (label) {
    case 'a': return {'a', 5, false, 0, M::twoT_minus_d2};
    case 'b': return {'b', 5, false, 0, M::twoT_plus_norm};
    case 'c': return {'c', 5, true, 0, M::twoT_plus_norm};
    case 'd': return {'d', 1, false, 1, M::xy_norm64};
    case 'e': return {'e', 0, false, 1, M::xy_norm64};
    case 'f': return {'f', 6, false, 0, M::twoT_minus_d2};
    case 'g': return {'g', 1, false, 1, M::t_minus_d2_4};
    case 'h': return {'h', 2, false, 3, M::t_minus_d2_4};
    case 'i': return {'i', 4, false, 1, M::t_minus_d2_4};
    case 'j': return {'j', 2, false, 1, M::t_minus_d2_4};
    case 'k': return {'k', -1, false, 1, M::xy_minus_d2_64};
    case 'l': return {'l', 0, false, 1, M::xy_minus_d2_64};
    default: throw std::invalid_argument(std::string("frey_case: unknown label ") + label);
    }
}

std::vector<FreyCase> cases_for_signature(const Signature& sig)
{
    const Int& d2 = sig.d2;
    bool d1_even = sig.d1 % 2 == 0;
    if (d1_even) {
        if (mod_pos(d2, 8) != 7) throw std::invalid_argument("cases_for_signature: d1 even needs d2 = 7 mod 8");
        return {frey_case('e')};
    }
    if (d2 % 2 != 0) {
        Int r4 = mod_pos(d2, 4), r8 = mod_pos(d2, 8);
        if (r4 == 1) return {frey_case('a')};
        if (r8 == 3) return {frey_case('b')};
        return {frey_case('c'), frey_case('d')};
    }
    unsigned v = valuation(2, d2);
    if (v == 1) return {frey_case('f')};
    if (v == 2) return {frey_case(mod_pos(d2, 16) == 4 ? 'g' : 'h')};
    if (v == 3) return {frey_case('i')};
    if (v == 4 || v == 5) return {frey_case('j')};
    if (v == 6) return {frey_case('k')};
    return {frey_case('l')};
}

std::pair<FreyCase, Int> select_case(const Signature& sig, const Int& t)
{
    if (gcd(t, sig.d2) != 1) throw std::invalid_argument("select_case: gcd(t, d2) != 1");
    auto cs = cases_for_signature(sig);
    bool t_even = t % 2 == 0;
    for (const FreyCase& c : cs) {
        if (c.t_even != t_even) continue;
        Int nt = t;
        if (c.t_mod4 != 0 && mod_pos(nt, 4) != c.t_mod4) nt = -nt;
        return {c, nt};
    }
    throw std::invalid_argument("select_case: no case applies (t parity)");
}

std::optional<FreyCase> case_for_level(const Signature& sig, const Int& level)
{
    for (const FreyCase& c : cases_for_signature(sig))
        if (predicted_level(c, sig.D) == level) return c;
    return std::nullopt;
}

FreyCurve build_curve(const FreyCase& c, const Int& t, const Int& d2)
{
    FreyCurve E{c, {}};
    Int z = 0;
    switch (c.model) {
    case FreyModel::twoT_minus_d2: E.a = {z, 2 * t, z, -d2, z}; break;
    case FreyModel::twoT_plus_norm: E.a = {z, 2 * t, z, t * t + d2, z}; break;
    case FreyModel::xy_norm64:
        E.a = {Int(1), exact_div(t - 1, 4, c.label), z, exact_div(t * t + d2, 64, c.label), z};
        break;
    case FreyModel::t_minus_d2_4: E.a = {z, t, z, -exact_div(d2, 4, c.label), z}; break;
    case FreyModel::xy_minus_d2_64:
        E.a = {Int(1), exact_div(t - 1, 4, c.label), z, -exact_div(d2, 64, c.label), z};
        break;
    }
    return E;
}

Int predicted_level(const FreyCase& c, const Int& D)
{
    Int r = radical(D);
    if (c.level_log2 >= 0) return r * ipow(2, c.level_log2);
    Int q = ipow(2, -c.level_log2);
    if (r % q != 0) throw std::invalid_argument("predicted_level: rad(D)/2 not integral");
    return r / q;
}

std::array<uint64_t, 5> frey_mod_l(const FreyCase& c, uint64_t tau, const Int& d2, uint64_t l)
{
    if (l < 3 || l % 2 == 0) throw std::invalid_argument("frey_mod_l: l must be an odd prime");
    tau %= l;
    uint64_t d = mod_of(d2, l);
    uint64_t inv4 = invmod(4, l), inv64 = invmod(64, l);
    uint64_t norm = (mulmod(tau, tau, l) + d) % l;
    uint64_t md = (l - d) % l;
    uint64_t tm1_4 = mulmod((tau + l - 1) % l, inv4, l);
    switch (c.model) {
    case FreyModel::twoT_minus_d2: return {0, 2 * tau % l, 0, md, 0};
    case FreyModel::twoT_plus_norm: return {0, 2 * tau % l, 0, norm, 0};
    case FreyModel::xy_norm64: return {1, tm1_4, 0, mulmod(norm, inv64, l), 0};
    case FreyModel::t_minus_d2_4: return {0, tau, 0, mulmod(md, inv4, l), 0};
    case FreyModel::xy_minus_d2_64: return {1, tm1_4, 0, mulmod(md, inv64, l), 0};
    }
    return {};
}

}  // namespace lnag
