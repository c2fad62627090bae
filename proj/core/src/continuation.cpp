#include "muord/continuation.hpp"

#include <algorithm>
#include <numeric>

namespace muord::continuation {

namespace {

// Minimal feasible image degree of Deg_i = v under one application of U_i.
// The image is deg(ambient) - deg L_0 (resp. 2fi - deg(L/L[pi]), f(a+b) - deg L),
// so the floor is set by the complement caps; staying put is only feasible at
// the integrality (resp. parity) fixed points.
Rat worst_successor(const PlaceDatum& place, int i, const Rat& v, long long D) {
    int ab = place.a_plus_b();
    Rat d(degree_cap(place, i));
    bool mid = place.kind == PlaceCase::U && 2 * i == ab;
    // Lowest image value over all complements, ignoring the current state.
    Rat floor_v(0);
    for (int c : slot_caps(place)) floor_v += std::max(c - (ab - i), 0);
    if (v < floor_v) return floor_v;
    if (!mid) {
        if (is_integer(v)) return v;
        return v + Rat(1, D);
    }
    // Middle case: the gap d - Deg moves on the even grid (2/D)Z and may stay
    // only when it is an even integer.
    Rat gap = d - v;
    if (is_integer(gap / 2)) return v;
    Rat g2 = gap * D / 2;
    if (is_integer(g2)) return v + Rat(2, D);
    return d - Rat(2 * floor_rat(g2), D);
}

}  // namespace

ContractionResult contraction_steps(const PlaceDatum& place, int op_index, const Rat& gamma,
                                    const Rat& eps, long long D) {
    if (gamma <= Rat(0) || gamma >= Rat(1)) throw Error(Errc::IndexOutOfRange, "gamma in (0,1)");
    if (eps <= Rat(0) || eps >= Rat(1, 2)) throw Error(Errc::IndexOutOfRange, "eps in (0,1/2)");
    int ab = place.a_plus_b();
    if (op_index < 1 || op_index > flag_top(place))
        throw Error(Errc::IndexOutOfRange, "operator index");
    int t = place.kind == PlaceCase::U && 2 * op_index == ab ? 2 : 1;
    Rat d(degree_cap(place, op_index));
    Rat lo = grid_ceil(d - Rat(t) * gamma, D);
    Rat target = d - eps;

    ContractionResult res;
    Rat v = lo;
    res.worst_trajectory.push_back(v);
    while (v < target) {
        Rat next = worst_successor(place, op_index, v, D);
        if (next <= v && next < target)
            throw Error(Errc::StuckState, "no strict progress at Deg = " + rat_string(v));
        v = next;
        res.worst_trajectory.push_back(v);
        ++res.steps;
    }
    return res;
}

OperatorTree decompo_expand(int N, const std::string& good, const std::string& bad) {
    if (N < 1) throw Error(Errc::IndexOutOfRange, "N >= 1");
    OperatorTree tree;
    tree.depth = N;
    // Words are composition chains, leftmost factor applied last.
    std::vector<std::string> words{""};
    for (int n = 0; n < N; ++n) {
        std::vector<std::string> next;
        next.reserve(words.size() * 2);
        for (const auto& w : words) {
            next.push_back(w.empty() ? good : w + "." + good);
            next.push_back(w.empty() ? bad : w + "." + bad);
        }
        words = std::move(next);
    }
    tree.leaves = words;

    // T_j = good o bad^j, prefixed by the expansion of U^{N-1-j}; T_N = bad^N.
    auto all_words = [&](int len) {
        std::vector<std::string> out{""};
        for (int n = 0; n < len; ++n) {
            std::vector<std::string> next;
            for (const auto& w : out) {
                next.push_back(w.empty() ? good : w + "." + good);
                next.push_back(w.empty() ? bad : w + "." + bad);
            }
            out = std::move(next);
        }
        return out;
    };
    for (int j = 0; j <= N; ++j) {
        std::vector<std::string> cls;
        std::string tail;
        if (j < N) {
            tail = good;
            for (int r = 0; r < j; ++r) tail += "." + bad;
            for (const auto& prefix : all_words(N - 1 - j))
                cls.push_back(prefix.empty() ? tail : prefix + "." + tail);
        } else {
            tail = bad;
            for (int r = 1; r < N; ++r) tail += "." + bad;
            cls.push_back(tail);
        }
        tree.grouped.push_back(std::move(cls));
    }

    std::vector<std::string> lhs = tree.leaves;
    std::vector<std::string> rhs;
    for (const auto& cls : tree.grouped) rhs.insert(rhs.end(), cls.begin(), cls.end());
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    tree.identity_holds = lhs == rhs;
    return tree;
}

SeriesLedger series_valuations(const Rat& bad_exponent, int n_max) {
    SeriesLedger ledger;
    Rat c = -bad_exponent;
    ledger.convergent = c > Rat(0);
    for (int n = 0; n <= n_max; ++n) {
        LedgerRow row;
        row.n = n;
        row.bad_factors = n;
        row.a_n = ledger.convergent ? ceil_rat(Rat(n) * c) : 0;
        ledger.rows.push_back(row);
    }
    return ledger;
}

Schedule extension_schedule(const GlobalDatum& datum, const Weight& weight,
                            const hecke::ValuationMap& valuations, const Rat& eps) {
    if (eps <= Rat(0) || eps >= Rat(1, 2)) throw Error(Errc::IndexOutOfRange, "eps in (0,1/2)");
    Schedule sched;
    sched.note = "places are processed in input order; the order is immaterial";
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        auto heights = canonical_heights(place);
        auto classes = sigma_classes(place);
        int s = static_cast<int>(heights.size());
        std::vector<Rat> K(s + 1);
        for (int k = 1; k <= s; ++k) {
            bool first = true;
            long long inf = 0;
            for (int sg : classes.classes[k]) {
                long long v = weight.places[p].per_sigma[sg].kappa_extremal() +
                              weight.places[p].per_sigma[sg].lambda_extremal();
                if (first || v < inf) inf = v;
                first = false;
            }
            K[k] = Rat(inf);
        }
        std::vector<int> order(s);
        std::iota(order.begin(), order.end(), 1);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return K[x] > K[y]; });

        std::vector<bool> processed(s + 1, false);
        for (int k : order) {
            ScheduleStep step;
            step.place = static_cast<int>(p);
            step.k = k;
            step.height = heights[k - 1];
            step.K = K[k];
            step.eps_choices.resize(s);
            for (int k2 = 1; k2 <= s; ++k2)
                step.eps_choices[k2 - 1] = processed[k2] ? EpsChoice::Full : EpsChoice::Small;
            auto vit = valuations.find({static_cast<int>(p), k});
            if (vit == valuations.end())
                throw Error(Errc::MissingValuation,
                            "place " + std::to_string(p) + " index " + std::to_string(k));
            Rat nv = Rat(hecke::n_constant(place, step.height)) + vit->second;
            // Admissibility: n + v < (1 - 2 f eps) K; the largest workable eps
            // is (K - n - v) / (2 f K) for K > 0.
            Rat twof(2 * place.f);
            if (step.K > Rat(0) && nv < step.K) {
                step.eps_max = (step.K - nv) / (twof * step.K);
                step.admissible = nv < (Rat(1) - twof * eps) * step.K;
            } else {
                step.eps_max = Rat(0);
                step.admissible = false;
            }
            if (!step.admissible && sched.ok) {
                sched.ok = false;
                sched.failed_step = static_cast<int>(sched.steps.size());
            }
            processed[k] = true;
            sched.steps.push_back(std::move(step));
        }
    }
    return sched;
}

}  // namespace muord::continuation
