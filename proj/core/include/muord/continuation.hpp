#pragma once

#include <string>
#include <vector>

#include "muord/datum.hpp"
#include "muord/hecke.hpp"
#include "muord/rational.hpp"

namespace muord::continuation {

// Worst-case contraction of Deg_i towards d_i under the operator U_i: from
// each grid value take the minimal feasible image degree and count the steps
// needed to climb from [d_i - t*gamma, d_i] into [d_i - eps, d_i].
struct ContractionResult {
    int steps = 0;
    std::vector<Rat> worst_trajectory;  // starts at the lowest grid point
};

ContractionResult contraction_steps(const PlaceDatum& place, int op_index, const Rat& gamma,
                                    const Rat& eps, long long D);

// Formal expansion of U^N with U = good |_| bad, grouped into the classes
// T_0 = good, T_j = good o bad^j, T_N = bad^N with U-power prefixes.
struct OperatorTree {
    int depth = 0;
    std::vector<std::string> leaves;                 // 2^N words, expansion of U^N
    std::vector<std::vector<std::string>> grouped;   // N+1 classes, expanded back to words
    bool identity_holds = false;                     // multiset equality of the two sides
};

OperatorTree decompo_expand(int N, const std::string& good = "good", const std::string& bad = "bad");

// Valuation ledger of the glued series: each bad factor gains c = -exponent,
// A_N = ceil(N c) when c > 0 and 0 otherwise.
struct LedgerRow {
    int n = 0;
    int bad_factors = 0;
    long long a_n = 0;
};

struct SeriesLedger {
    std::vector<LedgerRow> rows;
    bool convergent = false;  // A_N unbounded
};

SeriesLedger series_valuations(const Rat& bad_exponent, int n_max);

// The operator schedule of the continuation argument: within each place the
// canonical operators are applied by decreasing K_i = inf over Sigma_i of
// kappa+lambda, with already-processed indices released to the full interval.
struct ScheduleStep {
    int place = 0;
    int k = 0;       // canonical index
    int height = 0;  // A_k
    Rat K;
    Rat eps_max;     // largest admissible eps for this step (0 when none)
    bool admissible = false;
    std::vector<EpsChoice> eps_choices;
};

struct Schedule {
    std::vector<ScheduleStep> steps;
    bool ok = true;
    int failed_step = -1;  // first inadmissible step
    std::string note;
};

Schedule extension_schedule(const GlobalDatum& datum, const Weight& weight,
                            const hecke::ValuationMap& valuations, const Rat& eps);

}  // namespace muord::continuation
