#include "muord/degree_calculus.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace muord::degree {

Rat GroupNode::total() const {
    return std::accumulate(deg.begin(), deg.end(), Rat(0));
}

const std::vector<Rat>& DegreeConfig::caps_of(int node) const {
    return sides[node] == Side::Primal ? caps : dual_caps;
}

int DegreeConfig::add_node(GroupNode n, Side side) {
    nodes.push_back(std::move(n));
    sides.push_back(side);
    return static_cast<int>(nodes.size()) - 1;
}

DegreeConfig config_for(const PlaceDatum& place, long long grid_den) {
    DegreeConfig c;
    c.kind = place.kind;
    c.grid_den = grid_den;
    c.ambient_height = place.a_plus_b();
    for (int cap : slot_caps(place)) c.caps.emplace_back(cap);
    if (place.kind == PlaceCase::L) {
        for (int s = 0; s < place.f; ++s) c.dual_caps.emplace_back(place.b(s));
    } else {
        c.dual_caps = c.caps;
    }
    return c;
}

namespace {

int conj_of(const DegreeConfig& c, int t) {
    return c.kind == PlaceCase::U ? static_cast<int>(c.caps.size()) - 1 - t : t;
}

Rat min_rat(const Rat& a, const Rat& b) { return a < b ? a : b; }
Rat max_rat(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace

std::vector<Rat> orthogonal_degrees(const DegreeConfig& config, const GroupNode& node, Side side) {
    const auto& dual_caps = side == Side::Primal ? config.dual_caps : config.caps;
    std::vector<Rat> out(node.deg.size());
    for (std::size_t t = 0; t < node.deg.size(); ++t)
        out[t] = dual_caps[t] - node.height + node.deg[conj_of(config, static_cast<int>(t))];
    return out;
}

std::vector<AxiomViolation> check_config(const DegreeConfig& config) {
    std::vector<AxiomViolation> out;
    const int nslots = static_cast<int>(config.caps.size());
    auto valid_node = [&](int i) { return i >= 0 && i < static_cast<int>(config.nodes.size()); };
    if (config.dual_caps.size() != config.caps.size() || config.sides.size() != config.nodes.size())
        throw Error(Errc::MalformedDiagram, "caps/sides tables are inconsistent");

    for (std::size_t i = 0; i < config.nodes.size(); ++i) {
        const auto& nd = config.nodes[i];
        if (static_cast<int>(nd.deg.size()) != nslots)
            throw Error(Errc::MalformedDiagram, "node " + nd.label + ": wrong slot count");
        if (nd.height < 0 || nd.height > config.ambient_height)
            out.push_back({"node-range", nd.label + ": height outside [0, a+b]"});
        const auto& caps = config.caps_of(static_cast<int>(i));
        for (int t = 0; t < nslots; ++t) {
            if (!on_grid(nd.deg[t], config.grid_den))
                out.push_back({"grid", nd.label + " slot " + std::to_string(t)});
            if (nd.deg[t] < Rat(0) || nd.deg[t] > min_rat(caps[t], Rat(nd.height)))
                out.push_back({"node-range", nd.label + " slot " + std::to_string(t)});
        }
    }

    auto check_containment = [&](int sub, int sup, const std::string& where) {
        if (!valid_node(sub) || !valid_node(sup))
            throw Error(Errc::MalformedDiagram, where + ": missing node");
        const auto& X = config.nodes[sub];
        const auto& Y = config.nodes[sup];
        if (config.sides[sub] != config.sides[sup])
            throw Error(Errc::MalformedDiagram, where + ": containment across sides");
        if (X.height > Y.height)
            out.push_back({"monotone-containment", where + ": heights " + X.label + " > " + Y.label});
        const auto& caps = config.caps_of(sup);
        for (int t = 0; t < nslots; ++t) {
            Rat diff = Y.deg[t] - X.deg[t];
            if (diff < Rat(0) || diff > min_rat(caps[t], Rat(Y.height - X.height)))
                out.push_back({"monotone-containment",
                               where + ": " + X.label + " in " + Y.label + " slot " + std::to_string(t)});
        }
    };

    for (const auto& c : config.containments)
        check_containment(c.sub, c.sup, "containment");

    for (const auto& q : config.quotients) {
        if (!valid_node(q.sub) || !valid_node(q.sup) || !valid_node(q.quot))
            throw Error(Errc::MalformedDiagram, "quotient: missing node");
        const auto& X = config.nodes[q.sub];
        const auto& Y = config.nodes[q.sup];
        const auto& Q = config.nodes[q.quot];
        if (X.height + Q.height != Y.height)
            out.push_back({"additivity", "quotient heights: " + Y.label});
        for (int t = 0; t < nslots; ++t)
            if (X.deg[t] + Q.deg[t] != Y.deg[t])
                out.push_back({"additivity", Y.label + " = " + X.label + " + " + Q.label +
                                                 " slot " + std::to_string(t)});
        check_containment(q.sub, q.sup, "quotient");
    }

    for (const auto& si : config.sum_intersections) {
        if (!valid_node(si.x) || !valid_node(si.y) || !valid_node(si.sum) || !valid_node(si.inter))
            throw Error(Errc::MalformedDiagram, "sum/intersection: missing node");
        const auto& X = config.nodes[si.x];
        const auto& Y = config.nodes[si.y];
        const auto& S = config.nodes[si.sum];
        const auto& I = config.nodes[si.inter];
        if (X.height + Y.height != S.height + I.height)
            out.push_back({"height-additivity", S.label + "/" + I.label});
        if (X.total() + Y.total() > S.total() + I.total())
            out.push_back({"submodularity", X.label + " + " + Y.label});
        check_containment(si.inter, si.x, "sum/intersection");
        check_containment(si.inter, si.y, "sum/intersection");
        check_containment(si.x, si.sum, "sum/intersection");
        check_containment(si.y, si.sum, "sum/intersection");
    }

    for (const auto& o : config.orthogonals) {
        if (!valid_node(o.node) || !valid_node(o.dual))
            throw Error(Errc::MalformedDiagram, "orthogonal: missing node");
        const auto& H = config.nodes[o.node];
        const auto& P = config.nodes[o.dual];
        if (config.kind == PlaceCase::L && config.sides[o.node] == config.sides[o.dual])
            throw Error(Errc::MalformedDiagram, "orthogonal must cross sides in case L");
        if (H.height + P.height != config.ambient_height)
            out.push_back({"duality", H.label + " vs " + P.label + ": heights"});
        const auto& dual_caps = config.caps_of(o.dual);
        for (int t = 0; t < nslots; ++t) {
            Rat expect = dual_caps[t] - H.height + H.deg[conj_of(config, t)];
            if (P.deg[t] != expect)
                out.push_back({"duality", P.label + " slot " + std::to_string(t)});
        }
    }

    return out;
}

// --- grid enumeration --------------------------------------------------------

namespace {

// Lexicographic sweep of the box prod [lo_t, hi_t] on the 1/D grid restricted
// to total in [tot_lo, tot_hi]; suffix bounds prune dead branches exactly.
bool enumerate_box(const std::vector<Rat>& lo, const std::vector<Rat>& hi, const Rat& tot_lo,
                   const Rat& tot_hi, long long D,
                   const std::function<bool(const std::vector<Rat>&)>& visit,
                   long long* counter = nullptr) {
    const int m = static_cast<int>(lo.size());
    std::vector<Rat> glo(m), ghi(m);
    for (int t = 0; t < m; ++t) {
        glo[t] = grid_ceil(lo[t], D);
        ghi[t] = grid_floor(hi[t], D);
        if (glo[t] > ghi[t]) return false;
    }
    std::vector<Rat> suf_lo(m + 1, Rat(0)), suf_hi(m + 1, Rat(0));
    for (int t = m - 1; t >= 0; --t) {
        suf_lo[t] = suf_lo[t + 1] + glo[t];
        suf_hi[t] = suf_hi[t + 1] + ghi[t];
    }
    std::vector<Rat> x(m);
    const Rat step(1, D);
    std::function<bool(int, Rat)> rec = [&](int t, Rat sum) -> bool {
        if (sum + suf_lo[t] > tot_hi || sum + suf_hi[t] < tot_lo) return false;
        if (t == m) {
            if (counter) ++*counter;
            return visit(x);
        }
        for (Rat v = glo[t]; v <= ghi[t]; v += step) {
            x[t] = v;
            if (rec(t + 1, sum + v)) return true;
        }
        return false;
    };
    return rec(0, Rat(0));
}

struct PairSearchSpec {
    std::vector<Rat> caps;
    PlaceCase kind = PlaceCase::L;
    std::vector<Rat> dual_caps;
    int ambient_height = 0;
    long long D = 4;
    int h1 = 0, h2 = 0;        // node heights, h1 <= h2
    Rat min_total1, min_total2;  // inclusive lower bounds for the totals
    bool derive_second = false;  // isotropy: second node fixed by duality
    std::string label1 = "H1", label2 = "H2";
};

// Box of admissible per-slot degrees for a height-h subgroup of the ambient.
void node_box(const PairSearchSpec& s, int h, std::vector<Rat>& lo, std::vector<Rat>& hi) {
    const int m = static_cast<int>(s.caps.size());
    lo.assign(m, Rat(0));
    hi.assign(m, Rat(0));
    for (int t = 0; t < m; ++t) {
        lo[t] = max_rat(Rat(0), s.caps[t] - Rat(s.ambient_height - h));
        hi[t] = min_rat(s.caps[t], Rat(h));
    }
}

DegreeConfig make_witness(const PairSearchSpec& s, int h, const std::vector<Rat>& d1,
                          const std::vector<Rat>& d2, const std::vector<Rat>& di,
                          const std::vector<Rat>& dp) {
    DegreeConfig c;
    c.kind = s.kind;
    c.caps = s.caps;
    c.dual_caps = s.dual_caps.empty() ? s.caps : s.dual_caps;
    c.ambient_height = s.ambient_height;
    c.grid_den = s.D;
    std::vector<Rat> amb = s.caps;
    int a = c.add_node({"ambient", s.ambient_height, amb});
    int n1 = c.add_node({s.label1, s.h1, d1});
    int n2 = c.add_node({s.label2, s.h2, d2});
    int ni = c.add_node({"inter", h, di});
    int np = c.add_node({"plus", s.h1 + s.h2 - h, dp});
    c.sum_intersections.push_back({n1, n2, np, ni});
    for (int n : {n1, n2, ni, np}) c.containments.push_back({n, a});
    return c;
}

SearchResult run_pair_search(const PairSearchSpec& s) {
    SearchResult res;
    const int m = static_cast<int>(s.caps.size());
    std::vector<Rat> lo1, hi1, lo2, hi2;
    node_box(s, s.h1, lo1, hi1);
    node_box(s, s.h2, lo2, hi2);
    Rat cap_total1 = std::accumulate(hi1.begin(), hi1.end(), Rat(0));
    Rat cap_total2 = std::accumulate(hi2.begin(), hi2.end(), Rat(0));

    // Intersection height below h1 is what makes the two nodes distinct
    // subgroups (resp. defeats the inclusion / the isotropy).
    int h_min = std::max(0, s.h1 + s.h2 - s.ambient_height);
    for (int h = h_min; h <= s.h1 - 1 && !res.counterexample; ++h) {
        const int hp = s.h1 + s.h2 - h;
        auto try_pair = [&](const std::vector<Rat>& d1, const std::vector<Rat>& d2) -> bool {
            Rat need = std::accumulate(d1.begin(), d1.end(), Rat(0)) +
                       std::accumulate(d2.begin(), d2.end(), Rat(0));
            // inter box
            std::vector<Rat> li(m), hi_i(m);
            for (int t = 0; t < m; ++t) {
                li[t] = max_rat(Rat(0), s.caps[t] - Rat(s.ambient_height - h));
                li[t] = max_rat(li[t], d1[t] - min_rat(s.caps[t], Rat(s.h1 - h)));
                li[t] = max_rat(li[t], d2[t] - min_rat(s.caps[t], Rat(s.h2 - h)));
                hi_i[t] = min_rat(min_rat(d1[t], d2[t]), min_rat(s.caps[t], Rat(h)));
                if (li[t] > hi_i[t]) return false;
            }
            // plus box
            std::vector<Rat> lp(m), hp_p(m);
            for (int t = 0; t < m; ++t) {
                lp[t] = max_rat(max_rat(d1[t], d2[t]), s.caps[t] - Rat(s.ambient_height - hp));
                hp_p[t] = min_rat(s.caps[t], Rat(hp));
                hp_p[t] = min_rat(hp_p[t], d1[t] + min_rat(s.caps[t], Rat(hp - s.h1)));
                hp_p[t] = min_rat(hp_p[t], d2[t] + min_rat(s.caps[t], Rat(hp - s.h2)));
                if (lp[t] > hp_p[t]) return false;
            }
            Rat max_ip = std::accumulate(hi_i.begin(), hi_i.end(), Rat(0)) +
                         std::accumulate(hp_p.begin(), hp_p.end(), Rat(0));
            if (max_ip < need) return false;  // submodularity can never hold
            return enumerate_box(li, hi_i, Rat(0), max_ip, s.D, [&](const std::vector<Rat>& di) {
                Rat have_i = std::accumulate(di.begin(), di.end(), Rat(0));
                return enumerate_box(lp, hp_p, need - have_i, max_ip, s.D,
                                     [&](const std::vector<Rat>& dp) {
                                         res.counterexample = true;
                                         res.witness = make_witness(s, h, d1, d2, di, dp);
                                         return true;
                                     },
                                     &res.configs_checked);
            });
        };
        enumerate_box(lo1, hi1, s.min_total1, cap_total1, s.D, [&](const std::vector<Rat>& d1) {
            if (s.derive_second) {
                // duality formula; always lands inside the admissible box
                std::vector<Rat> d2(m);
                for (int t = 0; t < m; ++t) {
                    int ct = s.kind == PlaceCase::U ? m - 1 - t : t;
                    d2[t] = (s.dual_caps.empty() ? s.caps[t] : s.dual_caps[t]) - s.h1 + d1[ct];
                }
                return try_pair(d1, d2);
            }
            return enumerate_box(lo2, hi2, s.min_total2, cap_total2, s.D,
                                 [&](const std::vector<Rat>& d2) { return try_pair(d1, d2); });
        });
    }
    return res;
}

Rat strict_above(const Rat& bound, long long D) { return bound + Rat(1, D); }

}  // namespace

SearchResult search_uniqueness(const PlaceDatum& place, int canonical_index, long long D,
                               bool relaxed_threshold) {
    auto heights = canonical_heights(place);
    if (heights.empty()) return {};
    if (canonical_index < 1 || canonical_index > static_cast<int>(heights.size()))
        throw Error(Errc::IndexOutOfRange, "canonical index");
    int A = heights[canonical_index - 1];
    PairSearchSpec s;
    s.kind = place.kind;
    for (int c : slot_caps(place)) s.caps.emplace_back(c);
    if (place.kind == PlaceCase::L)
        for (int t = 0; t < place.f; ++t) s.dual_caps.emplace_back(place.b(t));
    s.ambient_height = place.a_plus_b();
    s.D = D;
    s.h1 = s.h2 = A;
    Rat bound = Rat(degree_cap(place, A)) - Rat(1, 2);
    s.min_total1 = s.min_total2 = relaxed_threshold ? bound : strict_above(bound, D);
    return run_pair_search(s);
}

SearchResult search_inclusion(const PlaceDatum& place, int canonical_i, int canonical_j, long long D,
                              const Rat& threshold_slack) {
    auto heights = canonical_heights(place);
    if (canonical_i >= canonical_j)
        throw Error(Errc::IndexOutOfRange, "inclusion search needs i < j");
    if (canonical_i < 1 || canonical_j > static_cast<int>(heights.size()))
        throw Error(Errc::IndexOutOfRange, "canonical index");
    PairSearchSpec s;
    s.kind = place.kind;
    for (int c : slot_caps(place)) s.caps.emplace_back(c);
    if (place.kind == PlaceCase::L)
        for (int t = 0; t < place.f; ++t) s.dual_caps.emplace_back(place.b(t));
    s.ambient_height = place.a_plus_b();
    s.D = D;
    s.h1 = heights[canonical_i - 1];
    s.h2 = heights[canonical_j - 1];
    s.min_total1 = strict_above(Rat(degree_cap(place, s.h1)) - Rat(1, 2) - threshold_slack, D);
    s.min_total2 = strict_above(Rat(degree_cap(place, s.h2)) - Rat(1, 2) - threshold_slack, D);
    s.label1 = "H_i";
    s.label2 = "H_j";
    return run_pair_search(s);
}

SearchResult search_isotropy(const PlaceDatum& place, int canonical_index, long long D) {
    if (place.kind != PlaceCase::U)
        throw Error(Errc::WrongCase, "isotropy search is a case-U statement");
    auto heights = canonical_heights(place);
    if (heights.empty()) return {};
    if (canonical_index < 1 || canonical_index > static_cast<int>(heights.size()))
        throw Error(Errc::IndexOutOfRange, "canonical index");
    int A = heights[canonical_index - 1];
    PairSearchSpec s;
    s.kind = PlaceCase::U;
    for (int c : slot_caps(place)) s.caps.emplace_back(c);
    s.ambient_height = place.a_plus_b();
    s.D = D;
    s.h1 = A;
    s.h2 = place.a_plus_b() - A;
    s.min_total1 = strict_above(Rat(degree_cap(place, A)) - Rat(1, 2), D);
    s.min_total2 = Rat(0);  // determined by duality
    s.derive_second = true;
    s.label1 = "H";
    s.label2 = "H_perp";
    return run_pair_search(s);
}

SearchResult search_siegel(int g, long long D, bool relaxed_threshold) {
    if (g <= 0) return {};
    PairSearchSpec s;
    s.kind = PlaceCase::L;
    s.caps = {Rat(g)};
    s.dual_caps = {Rat(g)};
    s.ambient_height = 2 * g;
    s.D = D;
    s.h1 = s.h2 = g;
    Rat bound = Rat(g) - Rat(1, 2);
    s.min_total1 = s.min_total2 = relaxed_threshold ? bound : strict_above(bound, D);
    return run_pair_search(s);
}

TechnicalResult check_technical(const PlaceDatum& place, int canonical_index, const Rat& eps, long long D) {
    auto heights = canonical_heights(place);
    TechnicalResult res;
    if (heights.empty()) return res;
    if (canonical_index < 1 || canonical_index > static_cast<int>(heights.size()))
        throw Error(Errc::IndexOutOfRange, "canonical index");
    int A = heights[canonical_index - 1];
    int AB = place.a_plus_b();
    auto caps = slot_caps(place);
    const int m = static_cast<int>(caps.size());
    Rat dk(degree_cap(place, A));
    Rat amb_deg(0);
    for (int c : caps) amb_deg += c;

    // Height A_k, total >= d_k - eps: per-slot degree >= min(cap, A_k) - eps.
    {
        std::vector<Rat> lo(m), hi(m);
        for (int t = 0; t < m; ++t) {
            lo[t] = Rat(std::max(caps[t] - (AB - A), 0));
            hi[t] = Rat(std::min(caps[t], A));
        }
        Rat tot_hi = std::accumulate(hi.begin(), hi.end(), Rat(0));
        enumerate_box(lo, hi, dk - eps, tot_hi, D,
                      [&](const std::vector<Rat>& x) {
                          for (int t = 0; t < m; ++t)
                              if (x[t] < Rat(std::min(caps[t], A)) - eps) {
                                  res.counterexample = true;
                                  res.witness = x;
                                  res.dual_side = false;
                                  return true;
                              }
                          return false;
                      },
                      &res.vectors_checked);
    }
    if (res.counterexample) return res;

    // Height a+b-A_k, total <= deg(ambient) - d_k + eps: per-slot degree
    // <= max(cap - A_k, 0) + eps.
    {
        std::vector<Rat> lo(m), hi(m);
        for (int t = 0; t < m; ++t) {
            lo[t] = Rat(std::max(caps[t] - A, 0));
            hi[t] = Rat(std::min(caps[t], AB - A));
        }
        enumerate_box(lo, hi, Rat(0), amb_deg - dk + eps, D,
                      [&](const std::vector<Rat>& x) {
                          for (int t = 0; t < m; ++t)
                              if (x[t] > Rat(std::max(caps[t] - A, 0)) + eps) {
                                  res.counterexample = true;
                                  res.witness = x;
                                  res.dual_side = true;
                                  return true;
                              }
                          return false;
                      },
                      &res.vectors_checked);
    }
    return res;
}

}  // namespace muord::degree
