#pragma once

#include "lnag/frey.hpp"

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnag {

using ModelModL = std::array<uint64_t, 5>;

struct BadReduction : std::runtime_error {
    bool multiplicative;
    BadReduction(const std::string& w, bool mult) : std::runtime_error(w), multiplicative(mult) {}
};

struct Invariants {
    Int b2, b4, b6, b8, c4, c6, disc;
};
Invariants invariants(const Weierstrass& a);

ModelModL reduce_model(const Weierstrass& a, uint64_t l);

// point count over F_l by brute force over all (x, y); includes a singular point if present
uint64_t count_points_exhaustive(const ModelModL& a, uint64_t l);
// a_l at a prime of good reduction
long a_l_naive(const ModelModL& a, uint64_t l);
long a_l_bsgs(const ModelModL& a, uint64_t l, uint64_t seed = 1);
inline constexpr uint64_t kBsgsCrossover = 10000;
long a_l(const ModelModL& a, uint64_t l, uint64_t crossover = kBsgsCrossover);
long a_l(const Weierstrass& a, uint64_t l, uint64_t crossover = kBsgsCrossover);
// +1 split, -1 non-split; throws on good or additive reduction
int multiplicative_a_l(const Weierstrass& a, uint64_t l);

// random affine point of E(F_l) (l >= 5) checked against N*P = O
bool random_point_killed_by(const ModelModL& a, uint64_t l, uint64_t N, std::mt19937_64& rng);

struct CurveRecord {
    std::string label;
    Weierstrass a;
    bool has_two_torsion = false;
};

// polynomial with integer coefficients, constant term first
using Poly = std::vector<Int>;

struct NewformRecord {
    long level = 0;
    int cls = 0;
    Poly field_poly;
    std::map<uint32_t, std::vector<Int>> coeffs;
    uint32_t max_l = 0;

    size_t degree() const { return field_poly.size() - 1; }
    bool rational() const { return degree() == 1; }
    const std::vector<Int>& c(uint32_t l) const;
    bool has(uint32_t l) const { return coeffs.count(l) != 0; }
    std::string id() const { return std::to_string(level) + ":" + std::to_string(cls); }
};

struct LevelInfo {
    long dimension = 0;
    long classes = -1;  // -1 when not split into Galois classes
};

struct CurveDb {
    std::map<std::string, CurveRecord> curves;
    const CurveRecord& get(const std::string& label) const;
};

struct NewformDb {
    std::map<long, std::vector<NewformRecord>> forms;
    std::map<long, LevelInfo> levels;
    const std::vector<NewformRecord>& at(long level) const;
    const NewformRecord& get(long level, int cls) const;
    // -1 when the level is absent from the data
    long class_count(long level) const;
};

std::string data_dir();
CurveDb load_curve_db(const std::string& path);
NewformDb load_newform_db(const std::string& forms_path, const std::string& levels_path);

bool has_rational_two_torsion(const Weierstrass& a);

// number field helpers, K = Q[y]/(f) with f monic
Int resultant(const Poly& f, const Poly& g);
Int norm_from_field(const Poly& field_poly, const std::vector<Int>& elt);
std::vector<Int> nf_mul(const Poly& f, const std::vector<Int>& a, const std::vector<Int>& b);
std::vector<Int> nf_sub(const std::vector<Int>& a, const std::vector<Int>& b);
std::vector<long double> real_roots(const Poly& f);
long double eval_at(const std::vector<Int>& elt, long double r);
// every real embedding of every stored c_l within 2 sqrt(l)
bool hasse_ok(const NewformRecord& f, std::string* why = nullptr);

}  // namespace lnag
