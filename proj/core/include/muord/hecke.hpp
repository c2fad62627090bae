#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "muord/datum.hpp"
#include "muord/errors.hpp"
#include "muord/rational.hpp"

namespace muord::hecke {

// Degree matrix of an Iwahori flag member H_j, j = 1..flag_top(place), one
// rational per slot on the 1/D grid.
struct FlagState {
    PlaceDatum place;
    long long grid_den = 4;
    std::vector<std::vector<Rat>> deg;  // deg[j-1][slot]

    int top() const { return static_cast<int>(deg.size()); }
    Rat column_total(int j) const;  // j in 1..top

    static FlagState all_maximal(const PlaceDatum& place, long long D);

    // Lower the total of column j by delta, taking the reduction from the
    // highest slots first; keeps the staircase invariants intact when delta
    // is small.  Used to build test states deterministically.
    void lower_column(int j, const Rat& delta);

    std::vector<std::string> invariant_violations() const;
};

// One feasible degree move of U_{pi,i}.  `complement_sigma[s]` is
// deg_sigma(L_0) in case L, deg_{sigma_1}(L) in case U (both middle and not).
struct Transition {
    FlagState state;
    int op_index = 0;  // i
    bool middle = false;
    FlagState successor;
    std::vector<Rat> complement_sigma;  // f entries
    Rat complement_total;               // deg L_0 (L), deg L (U)
    Rat lpi_total, lq_total;            // case U, i < (a+b)/2: deg L[pi], deg L/L[pi]
};

struct TransitionResult {
    bool feasible = false;
    std::string violated;  // named constraint, when infeasible
    std::optional<Transition> transition;
};

// Explicit choices; aux columns are keyed by the flag index j.
struct ChoiceL {
    std::vector<Rat> complement;                     // per slot
    std::map<int, std::vector<Rat>> sum_aux;         // j < i: deg(H_j + L_0)
    std::map<int, std::vector<Rat>> inter_aux;       // j > i: deg(H_j cap L_0)
};

struct ChoiceUMid {
    std::vector<Rat> complement_sigma1;              // f entries; sigma_2 forced by isotropy
    std::map<int, std::vector<Rat>> sum_aux;         // j < i
};

struct ChoiceU {
    std::vector<Rat> lpi;                            // deg L[pi] per slot
    std::vector<Rat> lq_sigma1;                      // deg L/L[pi], sigma_1 slots
    std::map<int, std::vector<Rat>> sum_aux;         // j < i: deg(H_j + L[pi])
    std::map<int, std::vector<Rat>> inter_aux;       // j > i: deg(H_j cap L[pi])
    std::map<int, std::vector<Rat>> successor;       // j != i columns
};

TransitionResult apply_transition(const FlagState& state, int i, const ChoiceL& choice);
TransitionResult apply_transition(const FlagState& state, int i, const ChoiceUMid& choice);
TransitionResult apply_transition(const FlagState& state, int i, const ChoiceU& choice);

// Exhaustive enumeration of every feasible grid choice, in a fixed
// deterministic order.  The visitor returns true to stop early; the function
// returns true when stopped.
bool for_each_transition(const FlagState& state, int i,
                         const std::function<bool(const Transition&)>& visit);

// One attempt at a uniformly drawn choice; nullopt when the draw ran into an
// empty range or a violated coupling constraint.
std::optional<Transition> sample_transition(const FlagState& state, int i, std::mt19937_64& rng);

// --- normalization constants -------------------------------------------------

long long n_constant(const PlaceDatum& place, int i);
long long N_constant(const PlaceDatum& place, int i, const PlaceWeight& weight);

// The forced lower bounds on the complement degrees.  Case L: (L_0, L_0^bot)
// per sigma; case U, i < (a+b)/2: (sigma_1, sigma_2) of L; middle: the same
// with the sigma_1 bound zero.
struct ComplementBounds {
    std::vector<Rat> first, second;
};

ComplementBounds complement_bounds(const PlaceDatum& place, int i);

// bad iff deg H_i' <= d_i - t(1-alpha), t = 2 exactly in the U middle case.
bool bad_test(const Transition& t, const Rat& alpha);

// --- the l_sigma profile ------------------------------------------------------

struct LSigmaProfile {
    std::vector<Rat> l;       // per sigma, always >= 0
    bool is_bad = false;
    std::vector<int> s1, s2;  // the partition used
    bool s1_cap_ok = true;    // every sigma in S_1 has l_sigma <= eps (L) / 2 eps (U)
    Rat s2_sum;
    Rat s2_bound;             // 1 - alpha - f eps (L) / 1 - alpha - 2 f eps (U)
};

// Requires the operator index to be a canonical height A_k and the state to
// lie in the U-opens for every other canonical index.
LSigmaProfile l_sigma_profile(const Transition& t, const Rat& eps,
                              const std::vector<EpsChoice>& choices, const Rat& alpha);

// Throws NotBad when the transition is good; otherwise returns whether the
// S_2 sum bound holds.
bool assert_bad_sum(const LSigmaProfile& profile);

// --- norm exponent and classicality -------------------------------------------

// v + n_{A_k} - (1 - alpha - 2 f eps) inf_{sigma in S_2}(kappa + lambda).
Rat bad_norm_exponent(const PlaceDatum& place, int canonical_index, const PlaceWeight& weight,
                      const Rat& v_alpha, const Rat& eps, const Rat& alpha,
                      const std::vector<EpsChoice>& choices);

using ValuationMap = std::map<std::pair<int, int>, Rat>;  // (place, canonical k) -> v(alpha)

struct ConditionReport {
    int place = 0;
    int k = 0;       // canonical index
    int height = 0;  // A_k
    long long n = 0;
    Rat valuation;
    long long weight_inf = 0;  // inf over Sigma_k of kappa+lambda
    bool pass = false;
    std::string closed_form;  // set for the classical ordinary specials
};

struct ClassicalityReport {
    std::vector<ConditionReport> conditions;
    bool all_pass = true;
};

ClassicalityReport classicality_check(const GlobalDatum& datum, const Weight& weight,
                                      const ValuationMap& valuations);

}  // namespace muord::hecke
