#pragma once

#include "lnag/arith.hpp"
#include "lnag/interval.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace lnag {

// log|Lambda| <= -(p/2) log y + log(2.2 D1 sqrt(D2))
Interval lambda_upper(const Int& p, const Interval& log_y, const Int& D1, const Int& D2);

// Matveev's constant C1 (the bound is -C1 D^2 A1 A2 A3 log(1.5 e D B log(e D)))
Interval matveev_c1(long D_script, long chi);
Interval matveev_log_factor(long D_script);  // 1.5 e D log(e D)

struct MatveevResult {
    Int bound;
    std::vector<Int> trail;
};
// A2 = A2_coeff * log y; iterates p <= (2/log y)(C1 D^2 A1 A2 A3 log(c (p+1)) + const)
MatveevResult matveev_bound_iterate(const Interval& A1, const Interval& A2_coeff, const Interval& A3,
                                    const Interval& log_y, const Int& p_init, const Interval& lambda_const,
                                    long D_script = 2, long chi = 2, int max_iter = 100);

// data of the linear form k Lambda = kappa log(eps alpha) + p log(eps gamma) + q log zeta
struct LogInstance {
    Int D, D1, D2, d;
    unsigned long k = 1;
    int kappa = 1;
    Interval h_alpha;        // h(alpha) = k log d / kappa
    Interval log_alpha_raw;  // |principal log alpha|
    Interval log_alpha;      // minimized over eps in the roots of unity
    Interval log_zeta;       // 2 pi / nu
    int nu = 2;
    Interval lambda_const;  // log(2.2 k D1 sqrt(D2))

    Interval h_gamma(const Interval& log_y) const;  // k log y / 2
};
LogInstance log_instance(const Int& D, const Int& d1);

enum class Orientation { I, II };  // I: b2 = p on gamma; II: b2 = q on zeta, b3 = p on gamma
std::string to_string(Orientation o);

// the three logarithms as seen by the theorem
struct ThreeLogForm {
    Orientation orient = Orientation::I;
    std::array<Interval, 3> abs_log;  // upper bounds for |log alpha_i|
    std::array<Interval, 3> height;
    int root_index = 2;  // which alpha_i is the root of unity
    int nu = 2;
    long D_script = 1;
    std::array<Int, 3> b_max;  // |b_i| <= b_max[i]
};
ThreeLogForm make_form(const LogInstance& inst, Orientation o, const Interval& log_y, const Int& p_max,
                       bool raw_alpha = false);

struct ThreeLogParams {
    long L = 0;
    Int K;
    double rho = 0, chi = 0, m = 0;
    std::array<double, 3> a{};
    Int R1, S1, T1, R2, S2, T2, R3, S3, T3, R, S, T;

    nlohmann::json to_json() const;
    static ThreeLogParams from_json(const nlohmann::json& j);
};

// parameters from the recipe K = floor(m L a1 a2 a3), R_i = floor(c_i a2 a3), ...
ThreeLogParams recipe_params(const ThreeLogForm& f, long L, double rho, double m, double chi);

struct Admissibility {
    bool ok = false;
    std::vector<std::string> failures;
    double lhs = 0, rhs = 0;  // the two sides of the main inequality
};
Admissibility threelog_admissible(const ThreeLogParams& P, const ThreeLogForm& f);

// p bound from Lambda' > rho^(-KL) and the upper bound on log|Lambda|
Interval threelog_p_bound(const ThreeLogParams& P, const LogInstance& inst, const Interval& log_y);

// Corollary bound for two logarithms
struct TwoLogParams {
    long D_script = 1;
    double rho = 0;
    Interval lambda, h, chi, a1, a2, C0p, c1p, c2p;
    nlohmann::json to_json() const;
};
TwoLogParams make_twolog_params(const Interval& abs_log1, const Interval& abs_log2, const Interval& h1,
                                const Interval& h2, long D_script, double rho, const Int& b1, const Int& b2);
// lower bound for log|Lambda|; throws std::invalid_argument on violated hypotheses
Interval twolog_bound(const TwoLogParams& tp, const Int& b1, const Int& b2);
// legacy corollary: log|Lambda| > -31 log A1 log A2 max(21, log p)^2
Interval lmn_legacy_bound(const Interval& logA1, const Interval& logA2, const Int& p);
// iterate p < (2 / log y)(31 log A1 log A2 max(21, log p)^2 + const)
Int lmn_legacy_p_bound(const Interval& logA1, const Interval& logA2, const Interval& log_y,
                       const Interval& lambda_const, const Int& p_init);

struct CpFilter {
    Orientation orient = Orientation::I;
    Int c12_bound;  // (C1) or (C2) forces p <= c12_bound
    bool c12_excluded = false;
    Interval X_RS, X_ST, X_RT;  // the (C3) caps
    Int t1, t2;                 // ceil(1.03 sqrt(...)) shortcuts
    Int t1_exact, t2_exact;     // ceilings of X_ST and X_RT
    Int q_cap;                  // |q| cap on the degenerate branch
    std::vector<std::pair<std::string, Int>> small_branches;
};
CpFilter cp_case_filter(const ThreeLogParams& P, Orientation o, int nu, const Int& p_floor);

struct Branch {
    std::string name;
    Int bound;
    nlohmann::json detail;
};

struct BoundResult {
    Int p_bound;
    std::string mode;  // matveev, threelog, twolog-fallback
    Int p_max_used;
    double log_y = 0;
    std::vector<Branch> branches;
    std::vector<std::pair<Orientation, ThreeLogParams>> params;
    long checks = 0;
    bool raw_alpha = false;
    std::vector<Int> trail;
    nlohmann::json to_json() const;
};

struct SearchConfig {
    long budget = 200000;
    bool raw_alpha = false;   // use the principal |log alpha| instead of the minimized one
    bool both_orientations = true;
};

// one pass: best admissible parameters for p <= p_max and y >= exp(log_y)
BoundResult threelog_bound_once(const LogInstance& inst, const Interval& log_y, const Int& p_max,
                                const SearchConfig& cfg = {});
// iterate one-pass bounds from p_init while they improve
BoundResult threelog_bound(const LogInstance& inst, const Interval& log_y, const Int& p_init,
                           const SearchConfig& cfg = {});
// same with y >= (sqrt(p) - 1)^2 coupled to the bound
BoundResult threelog_bound_coupled(const LogInstance& inst, const Int& p_init, const SearchConfig& cfg = {});

// re-verify a stored result: params admissible and every branch bound recomputes
bool replay_bound(const BoundResult& r, const LogInstance& inst);

}  // namespace lnag
