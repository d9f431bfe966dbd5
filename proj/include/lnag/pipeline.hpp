#pragma once

#include "lnag/frey.hpp"
#include "lnag/linforms.hpp"
#include "lnag/modmethods.hpp"
#include "lnag/thue.hpp"

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lnag {

// |x|, |y|, n per D; n = 0 stands for every n >= 3
struct SolutionTable {
    std::map<long, std::vector<Triple>> rows;

    static SolutionTable load(const std::string& path);
    const std::vector<Triple>& at(long D) const;
    bool contains(long D, const Int& x, const Int& y, unsigned long n) const;
    // entries with prime exponent p, wildcard rows included
    std::vector<Triple> with_exponent(long D, unsigned long p) const;
};

struct TableDiscrepancy {
    long D = 0;
    Int x, y;
    unsigned long n = 0;
    std::string what;  // "extra", "bad-entry", "missing", "alias"
};

struct TableReport {
    bool ok = false;
    long entries_checked = 0;
    long scan_hits = 0;
    std::vector<TableDiscrepancy> problems;
    // scan hits with the same x and y^n as a listed entry (e.g. 3^9 = 27^3)
    std::vector<TableDiscrepancy> aliases;
    double seconds = 0;
    nlohmann::json to_json() const;
};

// x_box = 0 means x unrestricted
TableReport verify_tables(const SolutionTable& T, const Int& x_box, unsigned long y_box, unsigned long n_box,
                          long D_max = 100);

// 1 when every predicted level of every signature has no newform, 0 if some level has one, -1 if unknown
int no_newform_shortcut(const Int& D, const NewformDb& db);

enum class BoundMode { none, matveev, threelog, coupled };
BoundMode bound_mode_from(const std::string& s);
std::string to_string(BoundMode m);

struct PipelineConfig {
    unsigned long p_cap = 100000;
    uint64_t method1_lmax = 100;
    unsigned long m2_nmax = 100;
    unsigned m3_max_primes = 16;
    long thue_box = 50;
    long thue_box_small = 200;  // exponents 3 and 5
    unsigned threads = 1;
    BoundMode bound = BoundMode::matveev;
    long budget = 200000;
};

// one newform attached to a Frey case of a signature
struct FormNode {
    Signature sig;
    FreyCase kase;
    Int level;
    std::string form_id;  // "level:class"
    bool rational = false;
    std::string curve;    // isogenous catalog curve, if any
    bool two_torsion = false;
    Method1Result m1;
    std::string key() const;
};

struct LevelNode {
    Signature sig;
    FreyCase kase;
    Int level;
    long classes = -1;
};

struct Stages {
    std::vector<Signature> signatures;
    std::vector<Signature> cohn_live;  // signatures left after the Cohn filter
    std::vector<LevelNode> levels;
    std::vector<FormNode> nodes;
    std::vector<Triple> cohn_solutions;
    std::vector<std::string> notes;
};

// signatures, Cohn filter, Frey levels, newform inventory and Method I
Stages prepare(const Int& D, const Catalogs& cat, const PipelineConfig& cfg);

struct NodeOutcome {
    std::string kind;  // method-I, method-II, method-III, thue-table, thue-bounded, cited, uncovered
    std::optional<Certificate> cert;
    std::vector<Triple> found;
    std::string detail;
};

struct PrimeCoverage {
    unsigned long p = 0;
    std::string kind;  // eliminated, table-match, thue-bounded, cited, cond-fail, uncovered
    std::vector<NodeOutcome> outcomes;
    std::string detail;
};

// per-exponent elimination for every node
PrimeCoverage cover_prime(const Int& D, unsigned long p, const Stages& st, const Catalogs& cat,
                          const SolutionTable& T, const PipelineConfig& cfg);
// deterministic in the number of threads
std::vector<PrimeCoverage> sieve(const Int& D, const std::vector<unsigned long>& primes, const Stages& st,
                                 const Catalogs& cat, const SolutionTable& T, const PipelineConfig& cfg);

struct SieveBench {
    unsigned long p_min = 0, p_max = 0;
    unsigned threads = 1;
    long primes = 0;
    double seconds = 0;
    double per_second = 0;
    std::map<unsigned long, long> witness_n;  // Method II witness n -> count
    std::vector<std::pair<unsigned long, unsigned long>> witnesses;  // (p, n) for the first node
    long uncovered = 0;
    nlohmann::json to_json() const;
};
SieveBench sieve_bench(const Int& D, unsigned long p_min, unsigned long p_max, const Catalogs& cat,
                       const SolutionTable& T, const PipelineConfig& cfg);

// bounded Thue search over all of Gamma for x^2 + D = y^p
struct ThueScan {
    unsigned long p = 0;
    long box = 0;
    size_t gamma_count = 0;
    std::vector<Triple> found;
    std::string error;
    nlohmann::json to_json() const;
};
ThueScan thue_scan(const Int& D, unsigned long p, long box, const std::vector<QuadInt>* gammas = nullptr);

// how a table entry is accounted for
struct TableMapping {
    Triple entry;
    std::string route;  // even-n, small-p, prime-exponent, beyond-cap, cohn, wildcard
    unsigned long p = 0;
    bool reproduced = false;
    std::string tag;
};

struct BoundSummary {
    Signature sig;
    std::string mode;
    Int matveev;
    std::optional<BoundResult> result;
    Int p_bound;
    std::string error;
    nlohmann::json to_json() const;
};

struct YBoundRow {
    Triple sol;
    int which = 0;  // y_lower_bound_check result
};

struct RunReport {
    Int D;
    bool experimental = false;
    unsigned long p_cap = 0;
    int shortcut = 0;
    Stages stages;
    std::vector<Certificate> certificates;
    std::vector<PrimeCoverage> coverage;
    std::vector<ThueScan> small_p;
    std::vector<TableMapping> mapping;
    std::vector<YBoundRow> y_bounds;
    std::vector<TwoPower> two_powers;
    std::vector<BoundSummary> bounds;
    Int covered_to;  // min(p_cap, bound)
    std::vector<unsigned long> uncovered;
    std::vector<std::string> caveats;
    bool ok = false;
    double seconds = 0;
    nlohmann::json to_json(bool with_primes = false) const;
};

RunReport run_pipeline(const Int& D, const Catalogs& cat, const SolutionTable& T, const PipelineConfig& cfg = {});

// cases resolved by externally solved Thue equations
bool cited_result(long D, unsigned long p);

}  // namespace lnag
