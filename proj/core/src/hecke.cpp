#include "muord/hecke.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace muord::hecke {

namespace {

Rat min_rat(const Rat& a, const Rat& b) { return a < b ? a : b; }
Rat max_rat(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat vec_total(const std::vector<Rat>& v) { return std::accumulate(v.begin(), v.end(), Rat(0)); }

}  // namespace

Rat FlagState::column_total(int j) const { return vec_total(deg[j - 1]); }

FlagState FlagState::all_maximal(const PlaceDatum& place, long long D) {
    FlagState st;
    st.place = place;
    st.grid_den = D;
    auto caps = slot_caps(place);
    int top = flag_top(place);
    st.deg.assign(top, std::vector<Rat>(caps.size()));
    for (int j = 1; j <= top; ++j)
        for (std::size_t t = 0; t < caps.size(); ++t) st.deg[j - 1][t] = Rat(std::min(caps[t], j));
    return st;
}

void FlagState::lower_column(int j, const Rat& delta) {
    Rat left = delta;
    auto& col = deg[j - 1];
    for (int t = static_cast<int>(col.size()) - 1; t >= 0 && left > Rat(0); --t) {
        Rat take = min_rat(col[t], left);
        col[t] -= take;
        left -= take;
    }
}

std::vector<std::string> FlagState::invariant_violations() const {
    std::vector<std::string> out;
    auto caps = slot_caps(place);
    const int m = static_cast<int>(caps.size());
    if (top() != flag_top(place)) out.push_back("flag length");
    for (int j = 1; j <= top(); ++j) {
        if (static_cast<int>(deg[j - 1].size()) != m) {
            out.push_back("column " + std::to_string(j) + ": slot count");
            continue;
        }
        for (int t = 0; t < m; ++t) {
            const Rat& v = deg[j - 1][t];
            if (!on_grid(v, grid_den)) out.push_back("column " + std::to_string(j) + ": off grid");
            if (v < Rat(0) || v > Rat(std::min(caps[t], j)))
                out.push_back("column " + std::to_string(j) + " slot " + std::to_string(t) + ": cap");
            Rat prev = j > 1 ? deg[j - 2][t] : Rat(0);
            Rat step = v - prev;
            if (step < Rat(0) || step > Rat(1))
                out.push_back("column " + std::to_string(j) + " slot " + std::to_string(t) + ": step");
        }
    }
    return out;
}

// --- normalization constants ---------------------------------------------------

long long n_constant(const PlaceDatum& place, int i) {
    int ab = place.a_plus_b();
    if (place.kind == PlaceCase::L) {
        if (i < 1 || i > ab - 1) throw Error(Errc::IndexOutOfRange, "L operator index");
        long long n = 0;
        for (const auto& [a, b] : place.signatures)
            n += static_cast<long long>(std::min(i, a)) * std::min(ab - i, b);
        return n;
    }
    if (i < 1 || i > ab / 2) throw Error(Errc::IndexOutOfRange, "U operator index");
    long long n = 0;
    if (2 * i == ab) {
        for (const auto& [a, b] : place.signatures) n += static_cast<long long>(ab) / 2 * a;
    } else {
        for (const auto& [a, b] : place.signatures) n += static_cast<long long>(ab) * std::min(i, a);
    }
    return n;
}

long long N_constant(const PlaceDatum& place, int i, const PlaceWeight& weight) {
    long long N = n_constant(place, i);
    int ab = place.a_plus_b();
    for (int s = 0; s < place.f; ++s) {
        int a = place.a(s), b = place.b(s);
        long long ks = weight.per_sigma[s].kappa_extremal();
        long long ls = weight.per_sigma[s].lambda_extremal();
        if (place.kind == PlaceCase::L) {
            N += std::max(a - i, 0) * ks + std::max(i - a, 0) * ls;
        } else if (2 * i == ab) {
            N += static_cast<long long>(b - a) / 2 * ls;
        } else {
            N += std::max(a - i, 0) * ks + static_cast<long long>(std::max(b - a, b - i)) * ls;
        }
    }
    return N;
}

ComplementBounds complement_bounds(const PlaceDatum& place, int i) {
    int ab = place.a_plus_b();
    if (place.kind == PlaceCase::L) {
        if (i < 1 || i > ab - 1) throw Error(Errc::IndexOutOfRange, "L operator index");
    } else if (i < 1 || i > ab / 2) {
        throw Error(Errc::IndexOutOfRange, "U operator index");
    }
    ComplementBounds out;
    for (int s = 0; s < place.f; ++s) {
        int a = place.a(s), b = place.b(s);
        if (place.kind == PlaceCase::L) {
            out.first.emplace_back(std::max(a - i, 0));
            out.second.emplace_back(std::max(i - a, 0));
        } else if (2 * i == ab) {
            out.first.emplace_back(0);
            out.second.emplace_back(Rat(b - a, 2));
        } else {
            out.first.emplace_back(std::max(a - i, 0));
            out.second.emplace_back(std::max(b - i, b - a));
        }
    }
    return out;
}

// --- the transition engine -------------------------------------------------------
//
// A transition is resolved by drawing grid variables in a fixed order; each
// variable has an interval computed from the values drawn so far, and coupling
// constraints are checked at column boundaries.  The same plan drives the
// explicit, exhaustive and sampling modes, so all three agree on feasibility.

namespace {

struct Engine {
    enum class Shape { L, UMid, U };

    const FlagState& st;
    int i;
    Shape shape;
    long long D;
    int m = 0, f = 0, top = 0, AB = 0;
    std::vector<Rat> caps;
    Rat caps_total;

    // working assignment
    std::vector<Rat> comp, lpi, lq;
    std::vector<std::vector<Rat>> sumA, interA;  // by column j (1-based)
    std::vector<std::vector<Rat>> succ;          // by column j, succ[0] = zeros
    Rat P{0}, Q{0};

    struct Step {
        bool is_draw = false;
        std::function<std::pair<Rat, Rat>()> range;  // draws
        std::function<void(const Rat&)> set;
        std::function<bool()> check;  // checks; may also fill derived values
        const char* name = "";
    };
    std::vector<Step> steps;

    explicit Engine(const FlagState& state, int op) : st(state), i(op) {
        const auto& place = st.place;
        D = st.grid_den;
        AB = place.a_plus_b();
        f = place.f;
        top = flag_top(place);
        if (i < 1 || i > top) throw Error(Errc::IndexOutOfRange, "operator index");
        for (int c : slot_caps(place)) caps.emplace_back(c);
        m = static_cast<int>(caps.size());
        caps_total = vec_total(caps);
        if (place.kind == PlaceCase::L)
            shape = Shape::L;
        else if (AB % 2 == 0 && 2 * i == AB)
            shape = Shape::UMid;
        else
            shape = Shape::U;
        comp.assign(m, Rat(0));
        lpi.assign(m, Rat(0));
        lq.assign(m, Rat(0));
        sumA.assign(top + 1, {});
        interA.assign(top + 1, {});
        succ.assign(top + 1, std::vector<Rat>(m, Rat(0)));
        build();
    }

    int conj(int t) const { return st.place.kind == PlaceCase::U ? m - 1 - t : t; }

    void draw(std::function<std::pair<Rat, Rat>()> range, std::function<void(const Rat&)> set,
              const char* name) {
        Step s;
        s.is_draw = true;
        s.range = std::move(range);
        s.set = std::move(set);
        s.name = name;
        steps.push_back(std::move(s));
    }

    void check(std::function<bool()> fn, const char* name) {
        Step s;
        s.check = std::move(fn);
        s.name = name;
        steps.push_back(std::move(s));
    }

    bool fixed_point_ok(const Rat& succ_i_total) const {
        Rat cur = st.column_total(i);
        if (succ_i_total != cur) return true;
        if (shape == Shape::UMid) {
            Rat gap = Rat(degree_cap(st.place, i)) - cur;
            return is_integer(gap) && floor_rat(gap) % 2 == 0;
        }
        return is_integer(cur);
    }

    void build() {
        if (shape == Shape::U) {
            build_u();
            return;
        }
        // Shape L and U middle: complement of height AB - i, successor derived.
        const bool paired = shape == Shape::UMid;
        const int free_slots = paired ? f : m;
        for (int t = 0; t < free_slots; ++t) {
            draw(
                [this, t] {
                    Rat lo = max_rat(Rat(0), caps[t] - Rat(i));
                    Rat hi = min_rat(caps[t], Rat(AB - i));
                    return std::pair{lo, hi};
                },
                [this, t, paired](const Rat& v) {
                    comp[t] = v;
                    if (paired) comp[conj(t)] = v + Rat(st.place.b(t) - st.place.a(t), 2);
                },
                "complement-bounds");
        }
        check(
            [this] {
                if (st.column_total(i) + vec_total(comp) > caps_total) return false;
                for (int t = 0; t < m; ++t) succ[i][t] = caps[t] - comp[t];
                return true;
            },
            "submodularity");
        check([this] { return fixed_point_ok(vec_total(succ[i])); }, "fixed-point-integrality");

        for (int j = 1; j < i; ++j) {
            sumA[j].assign(m, Rat(0));
            for (int t = 0; t < m; ++t) {
                draw(
                    [this, j, t] {
                        const auto& prevS = j == 1 ? comp : sumA[j - 1];
                        const auto& prev_succ = succ[j - 1];
                        Rat lo = max_rat(st.deg[j - 1][t], prevS[t]);
                        lo = max_rat(lo, prev_succ[t] + comp[t]);
                        Rat hi = min_rat(caps[t], Rat(j + AB - i));
                        hi = min_rat(hi, prevS[t] + min_rat(caps[t], Rat(1)));
                        hi = min_rat(hi, st.deg[j - 1][t] + min_rat(caps[t], Rat(AB - i)));
                        hi = min_rat(hi, comp[t] + min_rat(caps[t], Rat(j)));
                        hi = min_rat(hi, prev_succ[t] + Rat(1) + comp[t]);
                        if (j == i - 1) {
                            lo = max_rat(lo, succ[i][t] - Rat(1) + comp[t]);
                            hi = min_rat(hi, succ[i][t] + comp[t]);
                        }
                        return std::pair{lo, hi};
                    },
                    [this, j, t](const Rat& v) {
                        sumA[j][t] = v;
                        succ[j][t] = v - comp[t];
                    },
                    "aux-bounds");
            }
            check([this, j] { return st.column_total(j) + vec_total(comp) <= vec_total(sumA[j]); },
                  "submodularity");
        }

        for (int j = i + 1; j <= top; ++j) {
            interA[j].assign(m, Rat(0));
            for (int t = 0; t < m; ++t) {
                draw(
                    [this, j, t] {
                        const auto& prevI = interA[j - 1];  // empty column at j == i+1
                        Rat pI = j == i + 1 ? Rat(0) : prevI[t];
                        Rat lo = max_rat(Rat(0), st.deg[j - 1][t] + comp[t] - caps[t]);
                        lo = max_rat(lo, pI);
                        Rat hi = min_rat(comp[t], st.deg[j - 1][t]);
                        hi = min_rat(hi, min_rat(caps[t], Rat(j - i)));
                        hi = min_rat(hi, pI + min_rat(caps[t], Rat(1)));
                        hi = min_rat(hi, min_rat(caps[t], Rat(j)) - caps[t] + comp[t]);
                        return std::pair{lo, hi};
                    },
                    [this, j, t](const Rat& v) {
                        interA[j][t] = v;
                        succ[j][t] = caps[t] + v - comp[t];
                    },
                    "aux-bounds");
            }
            check(
                [this, j] {
                    return st.column_total(j) + vec_total(comp) <= caps_total + vec_total(interA[j]);
                },
                "submodularity");
        }
    }

    void build_u() {
        for (int t = 0; t < m; ++t) {
            draw(
                [this, t] {
                    Rat lo = max_rat(Rat(0), caps[t] - Rat(i));
                    Rat hi = min_rat(caps[t], Rat(AB - i));
                    return std::pair{lo, hi};
                },
                [this, t](const Rat& v) { lpi[t] = v; }, "complement-bounds");
        }
        check(
            [this] {
                P = vec_total(lpi);
                return st.column_total(i) + P <= caps_total;
            },
            "submodularity");

        // deg L/L[pi]: sigma_1 slots are free, sigma_2 follows from isotropy,
        // and the image flag member H_i' is forced by the duality formulas.
        for (int t = 0; t < f; ++t) {
            draw(
                [this, t] {
                    int ct = conj(t);
                    int ba = st.place.b(t) - st.place.a(t);
                    Rat lo(0), hi(i);
                    // conjugate slot stays in [0, i]
                    Rat shift = Rat(ba) + lpi[t] - lpi[ct];
                    lo = max_rat(lo, -shift);
                    hi = min_rat(hi, Rat(i) - shift);
                    // forced successor slots stay in their boxes
                    Rat base1 = Rat(2) * caps[t] - Rat(AB - i) + lpi[ct] - lpi[t];
                    lo = max_rat(lo, base1 - min_rat(caps[t], Rat(i)));
                    hi = min_rat(hi, base1);
                    Rat base2 = Rat(2) * caps[ct] - Rat(AB - i) + lpi[t] - lpi[ct];
                    // lq[ct] = lq[t] + shift
                    lo = max_rat(lo, base2 - min_rat(caps[ct], Rat(i)) - shift);
                    hi = min_rat(hi, base2 - shift);
                    return std::pair{lo, hi};
                },
                [this, t](const Rat& v) {
                    int ct = conj(t);
                    lq[t] = v;
                    lq[ct] = v + Rat(st.place.b(t) - st.place.a(t)) + lpi[t] - lpi[ct];
                },
                "complement-bounds");
        }
        check(
            [this] {
                Q = vec_total(lq);
                if (Q > Rat(2 * f * i) - caps_total + P) return false;
                for (int t = 0; t < m; ++t)
                    succ[i][t] = Rat(2) * caps[t] - Rat(AB - i) + lpi[conj(t)] - lpi[t] - lq[t];
                return true;
            },
            "isotropy");
        check([this] { return fixed_point_ok(vec_total(succ[i])); }, "fixed-point-integrality");

        for (int j = 1; j < i; ++j) {
            sumA[j].assign(m, Rat(0));
            for (int t = 0; t < m; ++t) {
                draw(
                    [this, j, t] {
                        const auto& prevS = j == 1 ? lpi : sumA[j - 1];
                        Rat lo = max_rat(st.deg[j - 1][t], prevS[t]);
                        Rat hi = min_rat(caps[t], Rat(j + AB - i));
                        hi = min_rat(hi, prevS[t] + min_rat(caps[t], Rat(1)));
                        hi = min_rat(hi, st.deg[j - 1][t] + min_rat(caps[t], Rat(AB - i)));
                        hi = min_rat(hi, lpi[t] + min_rat(caps[t], Rat(j)));
                        return std::pair{lo, hi};
                    },
                    [this, j, t](const Rat& v) { sumA[j][t] = v; }, "aux-bounds");
            }
            check([this, j] { return st.column_total(j) + P <= vec_total(sumA[j]); }, "submodularity");
        }
        for (int j = i + 1; j <= top; ++j) {
            interA[j].assign(m, Rat(0));
            for (int t = 0; t < m; ++t) {
                draw(
                    [this, j, t] {
                        Rat pI = j == i + 1 ? Rat(0) : interA[j - 1][t];
                        Rat lo = max_rat(Rat(0), st.deg[j - 1][t] + lpi[t] - caps[t]);
                        lo = max_rat(lo, pI);
                        Rat hi = min_rat(lpi[t], st.deg[j - 1][t]);
                        hi = min_rat(hi, min_rat(caps[t], Rat(j - i)));
                        hi = min_rat(hi, pI + min_rat(caps[t], Rat(1)));
                        return std::pair{lo, hi};
                    },
                    [this, j, t](const Rat& v) { interA[j][t] = v; }, "aux-bounds");
            }
            check(
                [this, j] { return st.column_total(j) + P <= caps_total + vec_total(interA[j]); },
                "submodularity");
        }
        // Remaining successor columns are free up to the staircase invariants
        // and the proved total lower bounds.
        for (int j = 1; j <= top; ++j) {
            if (j == i) continue;
            for (int t = 0; t < m; ++t) {
                draw(
                    [this, j, t] {
                        Rat lo = succ[j - 1][t];  // succ[i] already set when j = i+1
                        Rat hi = min_rat(caps[t], Rat(j));
                        hi = min_rat(hi, succ[j - 1][t] + Rat(1));
                        if (j + 1 == i) {
                            lo = max_rat(lo, succ[i][t] - Rat(1));
                            hi = min_rat(hi, succ[i][t]);
                        }
                        return std::pair{lo, hi};
                    },
                    [this, j, t](const Rat& v) { succ[j][t] = v; }, "successor-staircase");
            }
            check(
                [this, j] {
                    Rat total = vec_total(succ[j]);
                    if (total < st.column_total(j)) return false;
                    if (j > i && total < caps_total + vec_total(interA[j]) - P) return false;
                    return true;
                },
                "monotonicity");
        }
    }

    Transition make_transition() const {
        Transition t;
        t.state = st;
        t.op_index = i;
        t.middle = shape == Shape::UMid;
        t.successor = st;
        for (int j = 1; j <= top; ++j) t.successor.deg[j - 1] = succ[j];
        if (shape == Shape::L) {
            t.complement_sigma = comp;
            t.complement_total = vec_total(comp);
        } else if (shape == Shape::UMid) {
            t.complement_sigma.assign(comp.begin(), comp.begin() + f);
            t.complement_total = vec_total(comp);
        } else {
            t.complement_sigma.resize(f);
            for (int s = 0; s < f; ++s) t.complement_sigma[s] = lpi[s] + lq[s];
            t.lpi_total = P;
            t.lq_total = Q;
            t.complement_total = P + Q;
        }
        return t;
    }

    // Explicit mode: values come from the provider in step order.
    TransitionResult run_explicit(const std::function<std::optional<Rat>(std::size_t)>& provider) {
        std::size_t draw_idx = 0;
        for (const auto& s : steps) {
            if (s.is_draw) {
                auto v = provider(draw_idx++);
                if (!v) return {false, std::string(s.name) + " (missing value)", std::nullopt};
                auto [lo, hi] = s.range();
                if (*v < lo || *v > hi || !on_grid(*v, D))
                    return {false, s.name, std::nullopt};
                s.set(*v);
            } else if (!s.check()) {
                return {false, s.name, std::nullopt};
            }
        }
        return {true, "", make_transition()};
    }

    bool run_exhaustive(std::size_t idx, const std::function<bool(const Transition&)>& visit) {
        if (idx == steps.size()) return visit(make_transition());
        const auto& s = steps[idx];
        if (!s.is_draw) {
            if (!s.check()) return false;
            return run_exhaustive(idx + 1, visit);
        }
        auto [lo, hi] = s.range();
        const Rat step(1, D);
        for (Rat v = grid_ceil(lo, D); v <= grid_floor(hi, D); v += step) {
            s.set(v);
            if (run_exhaustive(idx + 1, visit)) return true;
        }
        return false;
    }

    std::optional<Transition> run_sample(std::mt19937_64& rng) {
        for (const auto& s : steps) {
            if (s.is_draw) {
                auto [lo, hi] = s.range();
                Rat glo = grid_ceil(lo, D), ghi = grid_floor(hi, D);
                if (glo > ghi) return std::nullopt;
                long long count = floor_rat((ghi - glo) * D) + 1;
                long long pick = std::uniform_int_distribution<long long>(0, count - 1)(rng);
                s.set(glo + Rat(pick, D));
            } else if (!s.check()) {
                return std::nullopt;
            }
        }
        return make_transition();
    }
};

// Providers mapping the explicit choice structs onto the engine's draw order.
std::vector<Rat> flatten_choice(const Engine& e, const ChoiceL& c) {
    std::vector<Rat> v = c.complement;
    for (int j = 1; j < e.i; ++j) {
        auto it = c.sum_aux.find(j);
        if (it == c.sum_aux.end()) return {};
        v.insert(v.end(), it->second.begin(), it->second.end());
    }
    for (int j = e.i + 1; j <= e.top; ++j) {
        auto it = c.inter_aux.find(j);
        if (it == c.inter_aux.end()) return {};
        v.insert(v.end(), it->second.begin(), it->second.end());
    }
    return v;
}

std::vector<Rat> flatten_choice(const Engine& e, const ChoiceUMid& c) {
    std::vector<Rat> v = c.complement_sigma1;
    for (int j = 1; j < e.i; ++j) {
        auto it = c.sum_aux.find(j);
        if (it == c.sum_aux.end()) return {};
        v.insert(v.end(), it->second.begin(), it->second.end());
    }
    return v;
}

std::vector<Rat> flatten_choice(const Engine& e, const ChoiceU& c) {
    std::vector<Rat> v = c.lpi;
    v.insert(v.end(), c.lq_sigma1.begin(), c.lq_sigma1.end());
    for (int j = 1; j < e.i; ++j) {
        auto it = c.sum_aux.find(j);
        if (it == c.sum_aux.end()) return {};
        v.insert(v.end(), it->second.begin(), it->second.end());
    }
    for (int j = e.i + 1; j <= e.top; ++j) {
        auto it = c.inter_aux.find(j);
        if (it == c.inter_aux.end()) return {};
        v.insert(v.end(), it->second.begin(), it->second.end());
    }
    for (int j = 1; j <= e.top; ++j) {
        if (j == e.i) continue;
        auto it = c.successor.find(j);
        if (it == c.successor.end()) return {};
        v.insert(v.end(), it->second.begin(), it->second.end());
    }
    return v;
}

template <typename Choice>
TransitionResult apply_impl(const FlagState& state, int i, const Choice& choice) {
    Engine e(state, i);
    auto vals = flatten_choice(e, choice);
    return e.run_explicit([&](std::size_t idx) -> std::optional<Rat> {
        if (idx >= vals.size()) return std::nullopt;
        return vals[idx];
    });
}

}  // namespace

TransitionResult apply_transition(const FlagState& state, int i, const ChoiceL& choice) {
    if (state.place.kind != PlaceCase::L) throw Error(Errc::WrongCase, "ChoiceL on a case-U place");
    return apply_impl(state, i, choice);
}

TransitionResult apply_transition(const FlagState& state, int i, const ChoiceUMid& choice) {
    if (state.place.kind != PlaceCase::U || 2 * i != state.place.a_plus_b())
        throw Error(Errc::WrongCase, "ChoiceUMid needs the middle U operator");
    return apply_impl(state, i, choice);
}

TransitionResult apply_transition(const FlagState& state, int i, const ChoiceU& choice) {
    if (state.place.kind != PlaceCase::U || 2 * i == state.place.a_plus_b())
        throw Error(Errc::WrongCase, "ChoiceU needs a non-middle U operator");
    return apply_impl(state, i, choice);
}

bool for_each_transition(const FlagState& state, int i,
                         const std::function<bool(const Transition&)>& visit) {
    Engine e(state, i);
    return e.run_exhaustive(0, visit);
}

std::optional<Transition> sample_transition(const FlagState& state, int i, std::mt19937_64& rng) {
    Engine e(state, i);
    return e.run_sample(rng);
}

bool bad_test(const Transition& t, const Rat& alpha) {
    if (alpha <= Rat(0) || alpha >= Rat(1)) throw Error(Errc::IndexOutOfRange, "alpha in (0,1)");
    int tfac = t.middle ? 2 : 1;
    Rat d(degree_cap(t.state.place, t.op_index));
    return t.successor.column_total(t.op_index) <= d - Rat(tfac) * (Rat(1) - alpha);
}

LSigmaProfile l_sigma_profile(const Transition& t, const Rat& eps,
                              const std::vector<EpsChoice>& choices, const Rat& alpha) {
    const auto& place = t.state.place;
    auto heights = canonical_heights(place);
    auto it = std::find(heights.begin(), heights.end(), t.op_index);
    if (it == heights.end())
        throw Error(Errc::IndexOutOfRange, "operator index is not a canonical height");
    int k = static_cast<int>(it - heights.begin()) + 1;
    auto part = partition_sigma(place, choices, k);
    auto dk = max_degrees(place);
    for (int k2 = 1; k2 <= static_cast<int>(heights.size()); ++k2) {
        if (k2 == k) continue;
        Rat epsk = choices[k2 - 1] == EpsChoice::Full ? Rat(dk[k2 - 1]) : eps;
        if (t.state.column_total(heights[k2 - 1]) < Rat(dk[k2 - 1]) - epsk)
            throw Error(Errc::BadChoice, "state lies outside the U-opens at index " + std::to_string(k2));
    }

    LSigmaProfile prof;
    prof.s1 = part.s1;
    prof.s2 = part.s2;
    prof.l.resize(place.f);
    for (int s = 0; s < place.f; ++s)
        prof.l[s] = t.complement_sigma[s] - Rat(std::max(place.a(s) - t.op_index, 0));
    prof.is_bad = bad_test(t, alpha);
    Rat s1_cap = place.kind == PlaceCase::L ? eps : Rat(2) * eps;
    for (int s : prof.s1)
        if (prof.l[s] > s1_cap) prof.s1_cap_ok = false;
    prof.s2_sum = Rat(0);
    for (int s : prof.s2) prof.s2_sum += prof.l[s];
    int tf = place.kind == PlaceCase::L ? place.f : 2 * place.f;
    prof.s2_bound = Rat(1) - alpha - Rat(tf) * eps;
    return prof;
}

bool assert_bad_sum(const LSigmaProfile& profile) {
    if (!profile.is_bad)
        throw Error(Errc::NotBad, "S_2 sum bound is only asserted on bad transitions");
    return profile.s2_sum >= profile.s2_bound;
}

Rat bad_norm_exponent(const PlaceDatum& place, int canonical_index, const PlaceWeight& weight,
                      const Rat& v_alpha, const Rat& eps, const Rat& alpha,
                      const std::vector<EpsChoice>& choices) {
    if (eps <= Rat(0) || eps >= Rat(1, 2)) throw Error(Errc::IndexOutOfRange, "eps in (0,1/2)");
    if (alpha <= Rat(0) || alpha >= Rat(1)) throw Error(Errc::IndexOutOfRange, "alpha in (0,1)");
    auto heights = canonical_heights(place);
    if (canonical_index < 1 || canonical_index > static_cast<int>(heights.size()))
        throw Error(Errc::IndexOutOfRange, "canonical index");
    auto part = partition_sigma(place, choices, canonical_index);
    if (part.s2.empty()) throw Error(Errc::EmptyS2, "no sigma in S_2");
    long long inf = 0;
    bool first = true;
    for (int s : part.s2) {
        long long v = weight.per_sigma[s].kappa_extremal() + weight.per_sigma[s].lambda_extremal();
        if (first || v < inf) inf = v;
        first = false;
    }
    long long n = n_constant(place, heights[canonical_index - 1]);
    return v_alpha + Rat(n) - (Rat(1) - alpha - Rat(2 * place.f) * eps) * Rat(inf);
}

ClassicalityReport classicality_check(const GlobalDatum& datum, const Weight& weight,
                                      const ValuationMap& valuations) {
    ClassicalityReport rep;
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        auto heights = canonical_heights(place);
        auto classes = sigma_classes(place);
        bool ordinary = ordinary_exists(place);
        for (int k = 1; k <= static_cast<int>(heights.size()); ++k) {
            ConditionReport c;
            c.place = static_cast<int>(p);
            c.k = k;
            c.height = heights[k - 1];
            c.n = n_constant(place, c.height);
            auto vit = valuations.find({static_cast<int>(p), k});
            if (vit == valuations.end())
                throw Error(Errc::MissingValuation,
                            "place " + std::to_string(p) + " index " + std::to_string(k));
            c.valuation = vit->second;
            bool first = true;
            for (int s : classes.classes[k]) {
                long long v = weight.places[p].per_sigma[s].kappa_extremal() +
                              weight.places[p].per_sigma[s].lambda_extremal();
                if (first || v < c.weight_inf) c.weight_inf = v;
                first = false;
            }
            c.pass = Rat(c.n) + c.valuation < Rat(c.weight_inf);
            if (ordinary) {
                int ab = place.a_plus_b();
                if (place.kind == PlaceCase::L) {
                    c.closed_form = "f*a*b = " + std::to_string(static_cast<long long>(place.f) *
                                                                place.a(0) * place.b(0));
                } else {
                    c.closed_form =
                        "f*(a+b)^2/4 = " + std::to_string(static_cast<long long>(place.f) * ab * ab / 4);
                }
            }
            rep.conditions.push_back(std::move(c));
            rep.all_pass = rep.all_pass && rep.conditions.back().pass;
        }
    }
    return rep;
}

}  // namespace muord::hecke
