// Acceptance suite: every criterion prints one [PASS]/[FAIL] line; the
// process exits nonzero if any criterion fails.  All comparisons are exact.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "muord/continuation.hpp"
#include "muord/degree_calculus.hpp"
#include "muord/dieudonne.hpp"
#include "muord/hecke.hpp"

using namespace muord;
using muord::testing::l_family;
using muord::testing::place_l;
using muord::testing::place_u;
using muord::testing::u_family;

namespace {

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

bool fail(std::string& why, const std::string& msg) {
    why = msg;
    return false;
}

// 1. Closed-form Hecke normalization constants in the ordinary cases.
bool criterion_constants(std::string& why) {
    for (int f = 1; f <= 4; ++f)
        for (int ab = 1; ab <= 6; ++ab) {
            for (int a = 1; a <= ab - 1; ++a) {
                auto place = place_l(std::vector<int>(f, a), ab);
                if (hecke::n_constant(place, a) != static_cast<long long>(f) * a * (ab - a))
                    return fail(why, "L closed form at f=" + std::to_string(f));
            }
            if (ab % 2 == 0) {
                auto place = place_u(std::vector<int>(f, ab / 2), ab);
                if (hecke::n_constant(place, ab / 2) != static_cast<long long>(f) * ab * ab / 4)
                    return fail(why, "U closed form at f=" + std::to_string(f));
            }
        }
    return true;
}

// 2. deg_tau(BT_eps[p]) = eps_tau and FV = VF = p.
bool criterion_dictionary(std::string& why) {
    for (long long p : {2LL, 3LL, 5LL})
        for (int f0 = 1; f0 <= 6; ++f0)
            for (int mask = 0; mask < (1 << f0); ++mask) {
                std::vector<int> eps(f0);
                for (int i = 0; i < f0; ++i) eps[i] = (mask >> i) & 1;
                for (int n = 1; n <= 4; ++n) {
                    auto m = dieudonne::build_epsilon_module(eps, p, n);
                    auto pid = zpn::scalar_mul(m.ring, m.ring.reduce(p), zpn::Mat::identity(f0));
                    if (!zpn::equal(zpn::mul(m.ring, m.F, m.V), pid) ||
                        !zpn::equal(zpn::mul(m.ring, m.V, m.F), pid))
                        return fail(why, "FV != p at p=" + std::to_string(p));
                    if (dieudonne::partial_degrees_p_torsion(m) != eps)
                        return fail(why, "degree dictionary at p=" + std::to_string(p));
                }
            }
    return true;
}

// 3. Frobenius-kernel members at canonical indices carry the maximal data.
bool criterion_kernels(std::string& why) {
    for (const auto& place : l_family(3, 4)) {
        auto mod = dieudonne::assemble_mu_ordinary(place, 2, place.f + 1);
        auto reports = dieudonne::frobenius_kernels(mod, place);
        auto heights = canonical_heights(place);
        for (std::size_t k = 0; k < heights.size(); ++k) {
            int A = heights[k];
            int r = 0;
            while (place.a(r) != A) ++r;
            const auto& rep = reports[r];
            if (rep.height != place.f * A) return fail(why, "L kernel height");
            for (int s = 0; s < place.f; ++s)
                if (rep.partial_degrees[s] != std::min(place.a(s), A))
                    return fail(why, "L kernel degrees");
        }
    }
    for (const auto& place : u_family(2, 4)) {
        auto mod = dieudonne::assemble_mu_ordinary(place, 2, 2 * place.f + 1);
        auto reports = dieudonne::frobenius_kernels(mod, place);
        auto heights = canonical_heights(place);
        auto caps = slot_caps(place);
        for (std::size_t k = 0; k < heights.size(); ++k) {
            int A = heights[k];
            int r = 0;
            while (place.a(r) != A) ++r;
            const auto& rep = reports[r];
            if (rep.height != 2 * place.f * A) return fail(why, "U kernel height");
            for (std::size_t t = 0; t < caps.size(); ++t)
                if (rep.partial_degrees[t] != std::min(caps[t], A))
                    return fail(why, "U kernel degrees");
        }
        for (int i = 1; i <= 2 * place.f; ++i) {
            int other = 2 * place.f + 1 - i;
            if (reports[i - 1].height + reports[other - 1].height !=
                2 * place.f * place.a_plus_b())
                return fail(why, "U height complementarity");
        }
    }
    return true;
}

// 4. No feasible counterexamples to uniqueness, inclusion, isotropy, Siegel.
bool criterion_searches(std::string& why) {
    for (long long D : {2LL, 4LL}) {
        for (const auto& place : l_family(3, 4)) {
            int s = static_cast<int>(canonical_heights(place).size());
            for (int k = 1; k <= s; ++k)
                if (degree::search_uniqueness(place, k, D).counterexample)
                    return fail(why, "uniqueness witness (L)");
            for (int i = 1; i <= s; ++i)
                for (int j = i + 1; j <= s; ++j)
                    if (degree::search_inclusion(place, i, j, D).counterexample)
                        return fail(why, "inclusion witness (L)");
        }
        for (const auto& place : u_family(3, 4)) {
            int s = static_cast<int>(canonical_heights(place).size());
            for (int k = 1; k <= s; ++k) {
                if (degree::search_uniqueness(place, k, D).counterexample)
                    return fail(why, "uniqueness witness (U)");
                if (degree::search_isotropy(place, k, D).counterexample)
                    return fail(why, "isotropy witness (U)");
                for (int j = k + 1; j <= s; ++j)
                    if (degree::search_inclusion(place, k, j, D).counterexample)
                        return fail(why, "inclusion witness (U)");
            }
        }
        for (int g = 0; g <= 3; ++g)
            if (degree::search_siegel(g, D).counterexample) return fail(why, "Siegel witness");
    }
    return true;
}

// 5. The per-slot technical bounds hold on the whole grid.
bool criterion_technical(std::string& why) {
    for (long long D : {2LL, 4LL}) {
        std::vector<Rat> epsilons{Rat(1, 4), Rat(1, 2) * (Rat(1) - Rat(1, D))};
        for (const auto& eps : epsilons) {
            for (const auto& place : l_family(3, 4)) {
                int s = static_cast<int>(canonical_heights(place).size());
                for (int k = 1; k <= s; ++k)
                    if (degree::check_technical(place, k, eps, D).counterexample)
                        return fail(why, "technical witness (L)");
            }
            for (const auto& place : u_family(3, 4)) {
                int s = static_cast<int>(canonical_heights(place).size());
                for (int k = 1; k <= s; ++k)
                    if (degree::check_technical(place, k, eps, D).counterexample)
                        return fail(why, "technical witness (U)");
            }
        }
    }
    return true;
}

// 6. Sampled transitions: monotone degrees, integral/parity fixed points.
bool criterion_sampling(std::string& why) {
    const std::vector<PlaceDatum> data{place_l({1, 2}, 3),    place_l({0, 2}, 2),
                                       place_l({1, 1, 2}, 4), place_l({2, 2}, 4),
                                       place_u({1}, 4),       place_u({1}, 3),
                                       place_u({2}, 4),       place_u({1, 2}, 4)};
    std::mt19937_64 rng(20260809);
    for (const auto& place : data) {
        long long accepted = 0, equalities = 0, attempts = 0;
        while (accepted < 10000) {
            if (++attempts > 20000000) return fail(why, "sampler starved");
            auto st = hecke::FlagState::all_maximal(place, 4);
            int i = 1 + static_cast<int>(rng() % flag_top(place));
            if (rng() % 2)
                for (int j = 1; j <= st.top(); ++j)
                    st.lower_column(j, Rat(static_cast<long long>(rng() % 4), 4));
            if (!st.invariant_violations().empty()) continue;
            auto t = hecke::sample_transition(st, i, rng);
            if (!t) continue;
            ++accepted;
            for (int j = 1; j <= st.top(); ++j)
                if (t->successor.column_total(j) < st.column_total(j))
                    return fail(why, "monotonicity violated");
            if (t->successor.column_total(i) == st.column_total(i)) {
                ++equalities;
                if (t->middle) {
                    Rat gap = Rat(degree_cap(place, i)) - st.column_total(i);
                    if (!is_integer(gap) || floor_rat(gap) % 2 != 0)
                        return fail(why, "middle parity violated");
                } else if (!is_integer(st.column_total(i))) {
                    return fail(why, "fixed-point integrality violated");
                }
            }
        }
        if (equalities < 100) return fail(why, "equality cases not exercised");
    }
    return true;
}

// 7. The all-maximal state is fixed by every operator, exhaustively at D = 2.
bool criterion_multiplicative_stability(std::string& why) {
    auto run = [&](const std::vector<PlaceDatum>& family) {
        for (const auto& place : family) {
            auto st = hecke::FlagState::all_maximal(place, 2);
            for (int i = 1; i <= flag_top(place); ++i) {
                bool fixed = true;
                long long count = 0;
                hecke::for_each_transition(st, i, [&](const hecke::Transition& t) {
                    ++count;
                    for (int j = 1; j <= st.top(); ++j)
                        if (t.successor.deg[j - 1] != st.deg[j - 1]) fixed = false;
                    return !fixed;
                });
                if (!fixed || count == 0) return false;
            }
        }
        return true;
    };
    if (!run(l_family(2, 4))) return fail(why, "L stability");
    if (!run(u_family(2, 4))) return fail(why, "U stability");
    return true;
}

// 8. The formal good/bad expansion of U^N.
bool criterion_decomposition(std::string& why) {
    for (int n = 1; n <= 5; ++n) {
        auto tree = continuation::decompo_expand(n);
        if (!tree.identity_holds || tree.leaves.size() != (std::size_t{1} << n) ||
            tree.grouped.size() != static_cast<std::size_t>(n) + 1)
            return fail(why, "identity at N=" + std::to_string(n));
    }
    return true;
}

// 9. Contraction terminates, with N nondecreasing in gamma.
bool criterion_contraction(std::string& why) {
    auto run = [&](const std::vector<PlaceDatum>& family) {
        for (const auto& place : family)
            for (int A : canonical_heights(place)) {
                int prev = -1;
                for (Rat gamma : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
                    auto res = continuation::contraction_steps(place, A, gamma, Rat(1, 4), 4);
                    if (res.steps < prev) return false;
                    prev = res.steps;
                }
            }
        return true;
    };
    if (!run(l_family(3, 4)) || !run(u_family(3, 4))) return fail(why, "contraction order");
    return true;
}

// 10. Series valuations diverge exactly when the norm exponent contracts, and
// the schedule verdict matches the classicality check below the eps maxima.
bool criterion_coupling(std::string& why) {
    std::mt19937_64 rng(987654321);
    auto place = place_l({1, 2}, 3);
    GlobalDatum datum{{place}};
    for (int trial = 0; trial < 100; ++trial) {
        long long kl1 = static_cast<long long>(rng() % 12);
        long long kl2 = static_cast<long long>(rng() % 12);
        Rat v(static_cast<long long>(rng() % 9), 1 + static_cast<long long>(rng() % 3));
        Rat eps(1, 25 + static_cast<long long>(rng() % 100));
        Rat alpha(1, 10 + static_cast<long long>(rng() % 50));
        Weight w;
        PlaceWeight pw;
        pw.per_sigma.push_back({{static_cast<int>(kl1)}, {0, 0}});
        pw.per_sigma.push_back({{static_cast<int>(kl2), static_cast<int>(kl2)}, {0}});
        w.places.push_back(pw);

        auto exec = hecke::bad_norm_exponent(place, 1, w.places[0], v, eps, alpha,
                                             {EpsChoice::Small, EpsChoice::Small});
        auto ledger = continuation::series_valuations(exec, 40);
        if ((exec < Rat(0)) != ledger.convergent) return fail(why, "convergence flag");
        // A_N = ceil(N c) exactly; unbounded growth is equivalent to c > 0
        for (const auto& row : ledger.rows) {
            long long expect = ledger.convergent ? ceil_rat(Rat(row.n) * -exec) : 0;
            if (row.a_n != expect) return fail(why, "ledger row value");
        }
        if (ledger.convergent && ledger.rows.back().a_n < 1) return fail(why, "ledger growth");

        hecke::ValuationMap vals{{{0, 1}, v}, {{0, 2}, v}};
        auto cls = hecke::classicality_check(datum, w, vals);
        auto sched = continuation::extension_schedule(datum, w, vals, Rat(1, 1000));
        bool below = true;
        for (const auto& st : sched.steps)
            if (st.eps_max <= Rat(1, 1000)) below = false;
        if (below && sched.ok != cls.all_pass) return fail(why, "schedule/classicality verdicts");
        if (!cls.all_pass && sched.ok) return fail(why, "schedule passes a failing datum");
    }
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "closed-form Hecke constants (f <= 4, a+b <= 6)", criterion_constants},
        {2, "Dieudonne degree dictionary and FV = VF = p", criterion_dictionary},
        {3, "Frobenius-kernel heights and partial degrees", criterion_kernels},
        {4, "uniqueness/inclusion/isotropy/Siegel searches", criterion_searches},
        {5, "technical degree bounds on the grid", criterion_technical},
        {6, "sampled Hecke transitions: monotone, integral fixed points", criterion_sampling},
        {7, "mu-ordinary-multiplicative stability (exhaustive, D = 2)", criterion_multiplicative_stability},
        {8, "good/bad operator decomposition identity (N <= 5)", criterion_decomposition},
        {9, "contraction steps finite and monotone in gamma", criterion_contraction},
        {10, "norm exponent / series / schedule coupling", criterion_coupling},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string why;
        bool ok = false;
        try {
            ok = c.run(why);
        } catch (const std::exception& e) {
            why = e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, dt,
                    ok ? "" : " -- ", ok ? "" : why.c_str());
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
