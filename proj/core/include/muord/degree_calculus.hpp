#pragma once

#include <optional>
#include <string>
#include <vector>

#include "muord/datum.hpp"
#include "muord/rational.hpp"

namespace muord::degree {

// A finite flat subgroup in the degree model: O_F-height h and one rational
// partial degree per slot, each in [0, min(cap_slot, h)].
struct GroupNode {
    std::string label;
    int height = 0;
    std::vector<Rat> deg;

    Rat total() const;
};

enum class Side { Primal, Dual };  // case L: A[pi^+] vs A[pi^-]; case U: self-dual

struct Containment { int sub = 0, sup = 0; };
struct SumIntersection { int x = 0, y = 0, sum = 0, inter = 0; };
struct Quotient { int sub = 0, sup = 0, quot = 0; };  // quot = sup / sub
struct Orthogonal { int node = 0, dual = 0; };

// A diagram of subgroups with declared relations, checked against the degree
// axioms by exact rational arithmetic.  Slot caps come from the ambient
// torsion group: a_sigma / b_sigma on the two sides in case L, the alpha
// values in case U (where the dual side permutes slots by conjugation).
struct DegreeConfig {
    PlaceCase kind = PlaceCase::L;
    std::vector<Rat> caps;       // primal side
    std::vector<Rat> dual_caps;  // case L: b_sigma; case U: alpha again
    int ambient_height = 0;      // a+b
    long long grid_den = 4;

    std::vector<GroupNode> nodes;
    std::vector<Side> sides;  // one per node
    std::vector<Containment> containments;
    std::vector<SumIntersection> sum_intersections;
    std::vector<Quotient> quotients;
    std::vector<Orthogonal> orthogonals;

    const std::vector<Rat>& caps_of(int node) const;
    int add_node(GroupNode n, Side side = Side::Primal);
};

DegreeConfig config_for(const PlaceDatum& place, long long grid_den);

struct AxiomViolation {
    std::string axiom;
    std::string detail;
};

// Empty result = feasible.  Throws MalformedDiagram on dangling references or
// slot-count mismatches.
std::vector<AxiomViolation> check_config(const DegreeConfig& config);

// Partial degrees of the orthogonal of a node of O_F-height h, by the duality
// formulas: case L flips the ambient side, case U conjugates the slots.
std::vector<Rat> orthogonal_degrees(const DegreeConfig& config, const GroupNode& node, Side side);

// --- exhaustive grid searches ------------------------------------------------

struct SearchResult {
    bool counterexample = false;
    std::optional<DegreeConfig> witness;  // lexicographically first, if any
    long long configs_checked = 0;
};

// Two distinct nodes of O_F-height A_i, both of total degree above
// sum_t min(cap_t, A_i) - 1/2 (strict unless relaxed), with intersection
// height < A_i: searches every grid config satisfying the degree axioms.
SearchResult search_uniqueness(const PlaceDatum& place, int canonical_index, long long D,
                               bool relaxed_threshold = false);

// Nodes at canonical heights A_i < A_j, both above their degree thresholds,
// with intersection height < A_i (i.e. failure of the inclusion).
// `threshold_slack` lowers both thresholds (0 = the proven bounds).
SearchResult search_inclusion(const PlaceDatum& place, int canonical_i, int canonical_j, long long D,
                              const Rat& threshold_slack = Rat(0));

// Case U only: the isotropy half of the uniqueness statement.  One node H at
// height A_i above its threshold, its orthogonal determined by the duality
// formula, and a grid search for a configuration with ht(H cap H_perp) < A_i.
SearchResult search_isotropy(const PlaceDatum& place, int canonical_index, long long D);

// Siegel: ambient A[p] of height 2g and degree g, two height-g nodes of
// degree above g - 1/2.
SearchResult search_siegel(int g, long long D, bool relaxed_threshold = false);

// Grid sweep of the one-group technical bounds: every height-A_k grid vector
// with caps min(cap_t, A_k) and total >= d_k - eps has per-slot degrees
// >= min(cap_t, A_k) - eps, and dually for height a+b-A_k.  Returns the first
// violating vector if any.
struct TechnicalResult {
    bool counterexample = false;
    std::vector<Rat> witness;
    bool dual_side = false;
    long long vectors_checked = 0;
};

TechnicalResult check_technical(const PlaceDatum& place, int canonical_index, const Rat& eps, long long D);

}  // namespace muord::degree
