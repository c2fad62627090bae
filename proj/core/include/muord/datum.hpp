#pragma once

#include <string>
#include <utility>
#include <vector>

#include "muord/errors.hpp"
#include "muord/rational.hpp"

namespace muord {

enum class PlaceCase { L, U };

// One place of F_0 above p.  Case L: the place splits in the CM field, the
// relevant group is linear; case U: inert, unitary.  Signatures are stored
// sorted by a_sigma ascending; `input_order[k]` is the position the k-th
// sorted signature had in the constructor argument.
struct PlaceDatum {
    PlaceCase kind = PlaceCase::L;
    int f = 0;
    std::vector<std::pair<int, int>> signatures;  // (a_sigma, b_sigma), sorted
    std::vector<int> input_order;

    PlaceDatum() = default;
    PlaceDatum(PlaceCase k, std::vector<std::pair<int, int>> sig);

    int a_plus_b() const { return signatures.empty() ? 0 : signatures[0].first + signatures[0].second; }
    int a(int sigma) const { return signatures[sigma].first; }
    int b(int sigma) const { return signatures[sigma].second; }
};

struct GlobalDatum {
    std::vector<PlaceDatum> places;

    int degree() const {  // degree of F_0 over Q
        int d = 0;
        for (const auto& p : places) d += p.f;
        return d;
    }
    int a_plus_b() const { return places.empty() ? 0 : places[0].a_plus_b(); }
};

struct ValidationIssue {
    Errc code;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

ValidationReport validate(const GlobalDatum& datum);

// --- per-place combinatorial invariants ------------------------------------

// A_1 < ... < A_s: distinct signature values a_sigma inside [1, a+b-1]
// (case L) resp. [1, (a+b)/2] (case U).
std::vector<int> canonical_heights(const PlaceDatum& place);

// Case U only: (alpha_0, ..., alpha_{2f+1}) with alpha_0 = 0,
// alpha_i = a_i for i <= f, alpha_i = b_{2f+1-i} for i > f, alpha_{2f+1} = a+b.
std::vector<int> alpha_sequence(const PlaceDatum& place);

// d_k = sum_sigma min(a_sigma, A_k) (L), resp. sum_j min(alpha_j, A_k) (U).
std::vector<int> max_degrees(const PlaceDatum& place);

struct DecompositionFactor {
    std::vector<int> epsilon;  // length f (L) or 2f (U)
    int multiplicity = 0;
};

// The generic Newton stratum as a product of BT_epsilon factors; factors of
// multiplicity zero are omitted.  Multiplicities always sum to a+b.
std::vector<DecompositionFactor> mu_ordinary_decomposition(const PlaceDatum& place);

// True iff the mu-ordinary locus is the classical ordinary locus.
bool ordinary_exists(const PlaceDatum& place);

// Bundle of the canonical invariants of a place.
struct CanonicalData {
    int s = 0;
    std::vector<int> heights;      // A_1 < ... < A_s
    std::vector<int> max_degrees;  // d_k <= f A_k (L), resp. 2 f A_k (U)
    std::vector<int> alpha_seq;    // case U only, length 2f+2
};

CanonicalData canonical_data(const PlaceDatum& place);

// classes[0] = {sigma : a_sigma = 0}, classes[k] = {sigma : a_sigma = A_k}
// for 1 <= k <= s, classes[s+1] = {sigma : a_sigma = a+b}.
struct SigmaClasses {
    std::vector<std::vector<int>> classes;
    int s() const { return static_cast<int>(classes.size()) - 2; }
};

SigmaClasses sigma_classes(const PlaceDatum& place);

enum class EpsChoice { Small, Full };  // epsilon_k = epsilon, resp. d_k

struct SigmaPartition {
    SigmaClasses classes;
    std::vector<int> s1, s2;  // disjoint, s1 u s2 = {0..f-1}
};

// choices has one entry per canonical index (1-based index k -> choices[k-1]).
// i is the distinguished canonical index and must carry the Small choice.
// When s = 0 the split is degenerate: everything lands in s1 and i is ignored.
SigmaPartition partition_sigma(const PlaceDatum& place, const std::vector<EpsChoice>& choices, int i);

// --- degree-slot helpers shared by the degree calculus and Hecke layers ----

// Case L: f slots with caps a_sigma.  Case U: 2f slots with caps
// alpha_1..alpha_2f (sorted embedding order); slot t and conj_slot(t) carry
// the two embeddings above the same sigma.
int slot_count(const PlaceDatum& place);
std::vector<int> slot_caps(const PlaceDatum& place);
int conj_slot(const PlaceDatum& place, int t);

// Maximal total degree of a height-h member of the flag.
int degree_cap(const PlaceDatum& place, int h);

// Flag length: a+b-1 (L) resp. floor((a+b)/2) (U).
int flag_top(const PlaceDatum& place);

// --- weights ----------------------------------------------------------------

struct SigmaWeight {
    std::vector<int> kappa;   // length a_sigma, weakly decreasing
    std::vector<int> lambda;  // length b_sigma, weakly decreasing

    // Extremal entries; an empty tuple contributes 0.
    int kappa_extremal() const { return kappa.empty() ? 0 : kappa.back(); }
    int lambda_extremal() const { return lambda.empty() ? 0 : lambda.back(); }
};

struct PlaceWeight {
    std::vector<SigmaWeight> per_sigma;  // aligned with the sorted signatures
};

struct Weight {
    std::vector<PlaceWeight> places;
};

std::vector<ValidationIssue> validate_weight(const GlobalDatum& datum, const Weight& weight);

}  // namespace muord
