// muord: combinatorial invariants of mu-ordinary unitary Shimura data.
//
//   muord analyze --input datum.json
//   muord check   --input datum.json [--eps 1/100]
//   muord verify  --input datum.json [--suite all] [--grid 4] [--prime 2] ...
//
// Exit codes: 0 = pass, 1 = a checked condition failed, 2 = input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "muord/continuation.hpp"
#include "muord/degree_calculus.hpp"
#include "muord/dieudonne.hpp"
#include "muord/hecke.hpp"
#include "muord/io.hpp"

using namespace muord;
using io::Json;

namespace {

struct RunConfig {
    std::string input_path;
    long long grid = 4;
    long long prime = 2;
    int trunc = 0;  // 0: pick the smallest exact truncation
    std::string eps = "1/100";
    std::string alpha = "1/10";
    std::string format = "json";
    std::string suite = "all";
    unsigned long long seed = 1;
    bool relaxed = false;

    Rat eps_rat, alpha_rat;
};

int validate_config(RunConfig& cfg) {
    if (cfg.grid < 2) {
        std::cerr << "error: --grid must be >= 2\n";
        return 2;
    }
    auto e = parse_rat(cfg.eps);
    auto a = parse_rat(cfg.alpha);
    if (!e || *e <= Rat(0) || *e >= Rat(1, 2)) {
        std::cerr << "error: --eps must be a rational in (0, 1/2)\n";
        return 2;
    }
    if (!a || *a <= Rat(0) || *a >= Rat(1)) {
        std::cerr << "error: --alpha must be a rational in (0, 1)\n";
        return 2;
    }
    cfg.eps_rat = *e;
    cfg.alpha_rat = *a;
    if (cfg.format != "json" && cfg.format != "text") {
        std::cerr << "error: --format must be json or text\n";
        return 2;
    }
    for (const char* s : {"all", "dieudonne", "degree", "hecke", "decompo"})
        if (cfg.suite == s) return 0;
    std::cerr << "error: unknown suite '" << cfg.suite << "'\n";
    return 2;
}

std::optional<io::Input> load_input(const RunConfig& cfg) {
    std::ifstream in(cfg.input_path);
    if (!in) {
        std::cerr << "error: cannot open " << cfg.input_path << "\n";
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return io::parse_input(ss.str());
}

void emit(const RunConfig& cfg, const Json& report) {
    if (cfg.format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << io::render_text(report);
}

int cmd_analyze(const RunConfig& cfg) {
    auto in = load_input(cfg);
    if (!in) return 2;
    auto validation = validate(in->datum);
    emit(cfg, io::analyze_report(in->datum, validation));
    return validation.ok() ? 0 : 2;
}

int cmd_check(const RunConfig& cfg) {
    auto in = load_input(cfg);
    if (!in) return 2;
    auto validation = validate(in->datum);
    if (!validation.ok()) {
        emit(cfg, io::analyze_report(in->datum, validation));
        return 2;
    }
    if (!in->weight) {
        std::cerr << "error: check requires a 'weight' block\n";
        return 2;
    }
    auto wissues = validate_weight(in->datum, *in->weight);
    if (!wissues.empty()) {
        std::cerr << "error: " << wissues[0].detail << "\n";
        return 2;
    }
    auto cls = hecke::classicality_check(in->datum, *in->weight, in->valuations);
    auto sched = continuation::extension_schedule(in->datum, *in->weight, in->valuations, cfg.eps_rat);
    auto report = io::check_report(in->datum, cls, sched);
    // per step: the bad-operator norm exponent at the configured margins and
    // the convergence flag of the series ledger it drives
    for (std::size_t s = 0; s < sched.steps.size(); ++s) {
        const auto& st = sched.steps[s];
        auto v = in->valuations.at({st.place, st.k});
        auto exponent =
            hecke::bad_norm_exponent(in->datum.places[st.place], st.k, in->weight->places[st.place],
                                     v, cfg.eps_rat, cfg.alpha_rat, st.eps_choices);
        auto ledger = continuation::series_valuations(exponent, 10);
        report["schedule"]["steps"][s]["bad_norm_exponent"] = io::rat_json(exponent);
        report["schedule"]["steps"][s]["series_convergent"] = ledger.convergent;
    }
    emit(cfg, report);
    return cls.all_pass ? 0 : 1;
}

Json run_dieudonne_suite(const GlobalDatum& datum, const RunConfig& cfg, bool& pass) {
    Json checks = Json::array();
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        int need = (place.kind == PlaceCase::L ? place.f : 2 * place.f) + 1;
        int n = cfg.trunc > 0 ? cfg.trunc : need;
        Json c;
        c["name"] = "frobenius-kernels place " + std::to_string(p);
        try {
            auto mod = dieudonne::assemble_mu_ordinary(place, cfg.prime, n);
            auto reports = dieudonne::frobenius_kernels(mod, place);
            auto heights = canonical_heights(place);
            auto caps = slot_caps(place);
            bool ok = true;
            int unit = place.kind == PlaceCase::L ? place.f : 2 * place.f;
            for (std::size_t k = 0; k < heights.size(); ++k) {
                int A = heights[k];
                int r = 0;
                while (place.a(r) != A) ++r;  // r(k) = min{l : a_l = A_k}
                int idx = r + 1;
                const auto& rep = reports[idx - 1];
                if (rep.height != unit * A) ok = false;
                for (std::size_t t = 0; t < caps.size(); ++t)
                    if (rep.partial_degrees[t] != std::min(caps[t], A)) ok = false;
            }
            if (place.kind == PlaceCase::U) {
                for (int idx = 1; idx <= 2 * place.f; ++idx) {
                    int other = 2 * place.f + 1 - idx;
                    if (reports[idx - 1].height + reports[other - 1].height !=
                        2 * place.f * place.a_plus_b())
                        ok = false;
                }
            }
            c["pass"] = ok;
            pass = pass && ok;
        } catch (const Error& e) {
            c["pass"] = false;
            c["error"] = e.what();
            pass = false;
        }
        checks.push_back(std::move(c));
    }
    return checks;
}

Json run_degree_suite(const GlobalDatum& datum, const RunConfig& cfg, bool& pass) {
    Json checks = Json::array();
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        auto heights = canonical_heights(place);
        int s = static_cast<int>(heights.size());
        for (int k = 1; k <= s; ++k) {
            Json c;
            c["name"] = "uniqueness place " + std::to_string(p) + " k " + std::to_string(k);
            auto r = degree::search_uniqueness(place, k, cfg.grid);
            c["pass"] = !r.counterexample;
            c["configs_checked"] = r.configs_checked;
            if (r.witness) c["witness"] = io::config_json(*r.witness);
            pass = pass && !r.counterexample;
            checks.push_back(std::move(c));
            if (place.kind == PlaceCase::U) {
                Json ci;
                ci["name"] = "isotropy place " + std::to_string(p) + " k " + std::to_string(k);
                auto ri = degree::search_isotropy(place, k, cfg.grid);
                ci["pass"] = !ri.counterexample;
                if (ri.witness) ci["witness"] = io::config_json(*ri.witness);
                pass = pass && !ri.counterexample;
                checks.push_back(std::move(ci));
            }
            if (cfg.relaxed) {
                Json cr;
                cr["name"] = "uniqueness (relaxed) place " + std::to_string(p) + " k " + std::to_string(k);
                auto rr = degree::search_uniqueness(place, k, cfg.grid, true);
                cr["informational"] = true;
                cr["relaxed_feasible"] = rr.counterexample;
                if (rr.witness) cr["witness"] = io::config_json(*rr.witness);
                checks.push_back(std::move(cr));
            }
        }
        for (int i = 1; i <= s; ++i)
            for (int j = i + 1; j <= s; ++j) {
                Json c;
                c["name"] = "inclusion place " + std::to_string(p) + " (" + std::to_string(i) + "," +
                            std::to_string(j) + ")";
                auto r = degree::search_inclusion(place, i, j, cfg.grid);
                c["pass"] = !r.counterexample;
                pass = pass && !r.counterexample;
                checks.push_back(std::move(c));
            }
        for (int k = 1; k <= s; ++k) {
            Json c;
            c["name"] = "technical place " + std::to_string(p) + " k " + std::to_string(k);
            auto r = degree::check_technical(place, k, Rat(1, 4), cfg.grid);
            c["pass"] = !r.counterexample;
            pass = pass && !r.counterexample;
            checks.push_back(std::move(c));
        }
    }
    return checks;
}

Json run_hecke_suite(const GlobalDatum& datum, const RunConfig& cfg, bool& pass) {
    Json checks = Json::array();
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        auto state = hecke::FlagState::all_maximal(place, cfg.grid);
        // sample states below the maximal one as well
        for (int trial = 0; trial < 200; ++trial) {
            int i = 1 + static_cast<int>(rng() % flag_top(place));
            hecke::FlagState st = state;
            if (trial % 2)
                st.lower_column(i, Rat(static_cast<long long>(rng() % 3), cfg.grid));
            auto t = hecke::sample_transition(st, i, rng);
            if (!t) continue;
            bool ok = true;
            for (int j = 1; j <= st.top(); ++j)
                if (t->successor.column_total(j) < st.column_total(j)) ok = false;
            if (t->successor.column_total(i) == st.column_total(i)) {
                if (t->middle) {
                    Rat gap = Rat(degree_cap(place, i)) - st.column_total(i);
                    if (!is_integer(gap) || floor_rat(gap) % 2 != 0) ok = false;
                } else if (!is_integer(st.column_total(i))) {
                    ok = false;
                }
            }
            if (!ok) {
                Json c;
                c["name"] = "monotonicity/fixed-points place " + std::to_string(p);
                c["pass"] = false;
                checks.push_back(std::move(c));
                pass = false;
                return checks;
            }
        }
        Json c;
        c["name"] = "monotonicity/fixed-points place " + std::to_string(p) + " (sampled)";
        c["pass"] = true;
        checks.push_back(std::move(c));
    }
    return checks;
}

Json run_decompo_suite(bool& pass) {
    Json checks = Json::array();
    for (int n = 1; n <= 5; ++n) {
        auto tree = continuation::decompo_expand(n);
        Json c;
        c["name"] = "operator decomposition N=" + std::to_string(n);
        c["pass"] = tree.identity_holds;
        pass = pass && tree.identity_holds;
        checks.push_back(std::move(c));
    }
    return checks;
}

int cmd_verify(const RunConfig& cfg) {
    auto in = load_input(cfg);
    if (!in) return 2;
    auto validation = validate(in->datum);
    if (!validation.ok()) {
        emit(cfg, io::analyze_report(in->datum, validation));
        return 2;
    }
    Json rep;
    rep["tool"] = "muord";
    rep["report"] = "verify";
    rep["grid"] = cfg.grid;
    rep["prime"] = cfg.prime;
    rep["seed"] = cfg.seed;
    bool pass = true;
    Json suites = Json::array();
    auto want = [&](const std::string& s) { return cfg.suite == "all" || cfg.suite == s; };
    if (want("dieudonne")) {
        bool ok = true;
        Json s;
        s["name"] = "dieudonne";
        s["checks"] = run_dieudonne_suite(in->datum, cfg, ok);
        s["pass"] = ok;
        pass = pass && ok;
        suites.push_back(std::move(s));
    }
    if (want("degree")) {
        bool ok = true;
        Json s;
        s["name"] = "degree";
        s["checks"] = run_degree_suite(in->datum, cfg, ok);
        s["pass"] = ok;
        pass = pass && ok;
        suites.push_back(std::move(s));
    }
    if (want("hecke")) {
        bool ok = true;
        Json s;
        s["name"] = "hecke";
        s["checks"] = run_hecke_suite(in->datum, cfg, ok);
        s["pass"] = ok;
        pass = pass && ok;
        suites.push_back(std::move(s));
    }
    if (want("decompo")) {
        bool ok = true;
        Json s;
        s["name"] = "decompo";
        s["checks"] = run_decompo_suite(ok);
        s["pass"] = ok;
        pass = pass && ok;
        suites.push_back(std::move(s));
    }
    rep["suites"] = suites;
    rep["verdict"] = pass ? "pass" : "fail";
    emit(cfg, rep);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial invariants of mu-ordinary unitary Shimura data"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input_path, "input JSON document")->required();
        sub->add_option("--grid", cfg.grid, "grid denominator D (>= 2)");
        sub->add_option("--prime", cfg.prime, "prime p for the Dieudonne checks");
        sub->add_option("--trunc", cfg.trunc, "truncation level n (0 = smallest exact)");
        sub->add_option("--eps", cfg.eps, "epsilon margin, rational in (0,1/2)");
        sub->add_option("--alpha", cfg.alpha, "alpha margin, rational in (0,1)");
        sub->add_option("--format", cfg.format, "json | text");
        sub->add_option("--seed", cfg.seed, "seed for sampled suites");
    };

    auto* analyze = app.add_subcommand("analyze", "heights, degrees, decomposition, partitions");
    add_common(analyze);
    auto* check = app.add_subcommand("check", "classicality conditions and extension schedule");
    add_common(check);
    auto* verify = app.add_subcommand("verify", "property suites: dieudonne, degree, hecke, decompo");
    add_common(verify);
    verify->add_option("--suite", cfg.suite, "all | dieudonne | degree | hecke | decompo");
    verify->add_flag("--relaxed", cfg.relaxed, "also probe relaxed thresholds (informational)");

    CLI11_PARSE(app, argc, argv);

    if (int rc = validate_config(cfg)) return rc;
    try {
        if (app.got_subcommand("analyze")) return cmd_analyze(cfg);
        if (app.got_subcommand("check")) return cmd_check(cfg);
        if (app.got_subcommand("verify")) return cmd_verify(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::ParseError || e.code() == Errc::MissingValuation ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
