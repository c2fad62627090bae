#pragma once

#include <string>

#include <json.hpp>

#include "muord/continuation.hpp"
#include "muord/datum.hpp"
#include "muord/degree_calculus.hpp"
#include "muord/hecke.hpp"

namespace muord::io {

using Json = nlohmann::ordered_json;

// Input document:
//   {
//     "places": [{"case": "L"|"U", "f": int, "signatures": [[a, b], ...]}, ...],
//     "weight": [[{"kappa": [...], "lambda": [...]}, ...], ...],       (optional)
//     "valuations": {"<place>/<k>": "num/den", ...}                     (optional)
//   }
// Weight blocks follow the input signature order and are permuted alongside
// the sorting of the signatures.  Valuation keys pair the place index with
// the canonical index k (1-based).
struct Input {
    GlobalDatum datum;
    std::optional<Weight> weight;
    hecke::ValuationMap valuations;
};

// Throws Error(ParseError) with a location hint on malformed documents.
Input parse_input(const std::string& text);

Json rat_json(const Rat& r);

Json analyze_report(const GlobalDatum& datum, const ValidationReport& validation);
Json check_report(const GlobalDatum& datum, const hecke::ClassicalityReport& cls,
                  const continuation::Schedule& schedule);

// Full dump of a degree diagram (search witnesses and certificates).
Json config_json(const degree::DegreeConfig& config);

std::string render_text(const Json& report);

}  // namespace muord::io
