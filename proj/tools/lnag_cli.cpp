#include "lnag/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lnag;
using json = nlohmann::json;

namespace {

void emit(const json& j) { std::cout << j.dump() << "\n"; }

Int parse_D(const std::string& s)
{
    Int D;
    if (D.set_str(s, 10) != 0 || D < 1) throw std::invalid_argument("D must be a positive integer: " + s);
    return D;
}

std::vector<uint64_t> parse_list(const std::string& s)
{
    std::vector<uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

Rat parse_rat(const std::string& s)
{
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational " + s);
    r.canonicalize();
    return r;
}

// one element per line: "x y" with gamma = x + y*omega
std::vector<QuadInt> load_gammas(const std::string& path, const QuadField& F)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<QuadInt> G;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!(ss >> a >> b)) throw std::runtime_error("bad gamma line: " + line);
        G.push_back(QuadInt::from_omega(F, parse_rat(a), parse_rat(b)));
    }
    return G;
}

json sig_json(const Signature& s) { return {{"D", s.D.get_str()}, {"d1", s.d1.get_str()}, {"d2", s.d2.get_str()}}; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"x^2 + D = y^n: tables, modular methods, Thue forms and exponent bounds"};
    app.require_subcommand(1);

    auto* vt = app.add_subcommand("verify-tables", "check the solution tables and scan for missing solutions");
    std::string xbox = "0";
    unsigned long ybox = 2000, nbox = 40;
    vt->add_option("--xbox", xbox, "bound on |x|, 0 for none");
    vt->add_option("--ybox", ybox, "bound on y");
    vt->add_option("--nbox", nbox, "bound on n");

    std::string D_arg;
    auto* sg = app.add_subcommand("signatures", "signatures and the Cohn filter");
    sg->add_option("D", D_arg)->required();

    auto* fr = app.add_subcommand("frey", "Frey cases and predicted levels");
    fr->add_option("D", D_arg)->required();

    auto* m1 = app.add_subcommand("method1", "Method I on every newform");
    uint64_t lmax = 100;
    m1->add_option("D", D_arg)->required();
    m1->add_option("--lmax", lmax, "largest auxiliary prime");

    auto* sv = app.add_subcommand("sieve", "per-exponent elimination over a prime range");
    unsigned long pmin = 7, pmax = 1000;
    unsigned threads = 1;
    bool bench = false;
    sv->add_option("D", D_arg)->required();
    sv->add_option("--pmin", pmin)->required();
    sv->add_option("--pmax", pmax)->required();
    sv->add_option("--threads", threads);
    sv->add_flag("--bench", bench, "print throughput statistics only");

    auto* m3 = app.add_subcommand("method3", "Gamma sets, Thue forms and bounded search for one exponent");
    unsigned long p3 = 7;
    std::string primes, form_id, gamma_file;
    long box = 50;
    m3->add_option("D", D_arg)->required();
    m3->add_option("--p", p3)->required();
    m3->add_option("--primes", primes, "auxiliary primes l = 1 mod p")->required();
    m3->add_option("--form", form_id, "restrict to one newform (level:class)");
    m3->add_option("--gamma-file", gamma_file, "external Gamma, lines 'x y' for x + y*omega");
    m3->add_option("--box", box, "Thue search box");

    auto* bd = app.add_subcommand("bound", "exponent bound from linear forms in logarithms");
    std::string ylb = "auto", d1_arg = "1";
    long budget = 200000;
    bool raw = false;
    bd->add_option("D", D_arg)->required();
    bd->add_option("--ylb", ylb, "auto (y >= (sqrt p - 1)^2) or a lower bound for y");
    bd->add_option("--budget", budget);
    bd->add_option("--d1", d1_arg, "signature d1");
    bd->add_flag("--raw-alpha", raw, "principal log alpha instead of the minimized one");

    auto* pl = app.add_subcommand("pipeline", "end-to-end run for one D");
    unsigned long pcap = 100000;
    std::string bound_mode = "matveev";
    bool all_primes = false, certs = true;
    pl->add_option("D", D_arg)->required();
    pl->add_option("--pcap", pcap);
    pl->add_option("--threads", threads);
    pl->add_option("--bound", bound_mode, "none, matveev, threelog or coupled");
    pl->add_option("--budget", budget);
    pl->add_flag("--all-primes", all_primes, "list every prime in the report");
    pl->add_flag("!--no-certificates", certs, "omit certificate lines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*vt) {
            auto T = SolutionTable::load(data_dir() + "/solutions.tsv");
            auto R = verify_tables(T, Int(xbox), ybox, nbox);
            emit(R.to_json());
            return R.ok ? 0 : 1;
        }
        Int D = parse_D(D_arg);
        if (*sg) {
            auto sigs = enumerate_signatures(D);
            for (auto& s : sigs) {
                json j = sig_json(s);
                j["valid"] = signature_valid(s);
                j["cohn_removed"] = s.d1 == 1 && D % 8 != 7;
                emit(j);
            }
            json ev = json::array(), cs = json::array();
            for (auto& t : recover_even_n(D)) ev.push_back({t.x.get_str(), t.y.get_str(), t.n});
            for (auto& t : cohn_filter(D, 1000)) cs.push_back({t.x.get_str(), t.y.get_str(), t.n});
            emit({{"even_n", ev}, {"cohn_solutions", cs}});
            return 0;
        }
        auto cat = Catalogs::load();
        if (*fr) {
            for (auto& s : enumerate_signatures(D))
                for (auto& c : cases_for_signature(s)) {
                    Int L = predicted_level(c, D);
                    json j = sig_json(s);
                    j["case"] = std::string(1, c.label);
                    j["t_even"] = c.t_even;
                    j["level"] = L.get_str();
                    j["classes"] = L.fits_slong_p() ? cat.forms.class_count(L.get_si()) : -1;
                    emit(j);
                }
            emit({{"no_newform_shortcut", no_newform_shortcut(D, cat.forms)}});
            return 0;
        }
        auto T = SolutionTable::load(data_dir() + "/solutions.tsv");
        PipelineConfig cfg;
        cfg.threads = threads;
        cfg.budget = budget;
        if (*m1) {
            cfg.method1_lmax = lmax;
            Stages st = prepare(D, cat, cfg);
            for (auto& nd : st.nodes) {
                json bl = json::array();
                for (auto& [l, B] : nd.m1.bl) bl.push_back({l, B.get_str()});
                emit({{"node", nd.key()}, {"form", nd.form_id}, {"level", nd.level.get_str()},
                      {"unbounded", nd.m1.unbounded}, {"gcd", nd.m1.gcd.get_str()},
                      {"survivors", nd.m1.survivors}, {"B_l", bl}});
            }
            return 0;
        }
        if (*sv) {
            if (bench) {
                auto B = sieve_bench(D, pmin, pmax, cat, T, cfg);
                emit(B.to_json());
                return B.uncovered == 0 ? 0 : 1;
            }
            Stages st = prepare(D, cat, cfg);
            std::vector<unsigned long> ps;
            for (uint32_t p : primes_upto((uint32_t)pmax))
                if (p >= pmin && p >= 7) ps.push_back(p);
            auto cov = sieve(D, ps, st, cat, T, cfg);
            long unc = 0;
            for (auto& pc : cov) {
                if (pc.kind == "uncovered") ++unc;
                for (auto& o : pc.outcomes)
                    if (o.cert) emit(to_json(*o.cert));
                if (pc.kind != "eliminated") emit({{"p", pc.p}, {"kind", pc.kind}, {"detail", pc.detail}});
            }
            emit({{"primes", ps.size()}, {"uncovered", unc}});
            return unc == 0 ? 0 : 1;
        }
        if (*m3) {
            auto [D1, D2] = decompose(D);
            QuadField F = QuadField::make(D2);
            std::vector<QuadInt> G = gamma_file.empty() ? compute_Gamma(F, D, p3) : load_gammas(gamma_file, F);
            auto S = parse_list(primes);
            Stages st = prepare(D, cat, cfg);
            for (auto& nd : st.nodes) {
                if (!form_id.empty() && nd.form_id != form_id) continue;
                FormRef f = nd.curve.empty() ? cat.form(nd.form_id) : FormRef::from_curve(cat.curves.get(nd.curve));
                auto I = method3_intersection(f, nd.sig, nd.kase, p3, S, G);
                json surv = json::array();
                for (auto& g : I) {
                    ThueForm tf = build_thue_form(F, g, D1, p3);
                    json cj = json::array(), sols = json::array();
                    for (auto& c : tf.c) cj.push_back(c.get_str());
                    for (auto& [U, V] : search_small_solutions(tf, box)) {
                        Recovered r = recover_solution(F, g, D, p3, U, V);
                        sols.push_back({{"U", U.get_str()}, {"V", V.get_str()}, {"ok", r.ok}, {"x", r.x.get_str()},
                                        {"y", r.y.get_str()}});
                    }
                    surv.push_back({{"gamma", g.str(F)}, {"coeffs", cj}, {"rhs", tf.rhs.get_str()},
                                    {"solutions", sols}, {"status", "bounded-search verified"}});
                }
                emit({{"node", nd.key()}, {"p", p3}, {"S", S}, {"gamma_count", G.size()}, {"survivors", surv}});
            }
            return 0;
        }
        if (*bd) {
            LogInstance inst = log_instance(D, Int(d1_arg));
            SearchConfig sc;
            sc.budget = budget;
            sc.raw_alpha = raw;
            Interval A1 = max(Interval(2.0) * inst.h_alpha, Interval::pi() / Interval(2.0));
            Interval log_y = ylb == "auto" ? log(Interval(22.0)) : log(Interval(Int(ylb)));
            auto M = matveev_bound_iterate(A1, Interval(Int(inst.k)), Interval::pi(), log_y, ipow(10, 30),
                                           inst.lambda_const);
            BoundResult r = ylb == "auto" ? threelog_bound_coupled(inst, M.bound, sc)
                                          : threelog_bound(inst, log_y, M.bound, sc);
            json j = r.to_json();
            j["matveev"] = M.bound.get_str();
            j["replay"] = replay_bound(r, inst);
            emit(j);
            return 0;
        }
        if (*pl) {
            cfg.p_cap = pcap;
            cfg.bound = bound_mode_from(bound_mode);
            RunReport R = run_pipeline(D, cat, T, cfg);
            if (certs)
                for (auto& c : R.certificates) emit(to_json(c));
            emit(R.to_json(all_primes));
            return R.ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
