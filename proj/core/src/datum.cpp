#include "muord/datum.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace muord {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::EmptyDatum: return "EmptyDatum";
        case Errc::ConstantSumViolation: return "ConstantSumViolation";
        case Errc::ConventionViolation: return "ConventionViolation";
        case Errc::WrongCase: return "WrongCase";
        case Errc::BadEpsilon: return "BadEpsilon";
        case Errc::TruncationTooSmall: return "TruncationTooSmall";
        case Errc::MalformedDiagram: return "MalformedDiagram";
        case Errc::BadChoice: return "BadChoice";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::EmptyS2: return "EmptyS2";
        case Errc::MissingValuation: return "MissingValuation";
        case Errc::NotBad: return "NotBad";
        case Errc::StuckState: return "StuckState";
        case Errc::ParseError: return "ParseError";
    }
    return "UnknownError";
}

std::string rat_string(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::optional<Rat> parse_rat(const std::string& s) {
    auto slash = s.find('/');
    auto parse_ll = [](const std::string& t, long long& out) {
        if (t.empty()) return false;
        std::size_t pos = 0;
        try {
            out = std::stoll(t, &pos);
        } catch (...) {
            return false;
        }
        return pos == t.size();
    };
    long long num = 0, den = 1;
    if (slash == std::string::npos) {
        if (!parse_ll(s, num)) return std::nullopt;
    } else {
        if (!parse_ll(s.substr(0, slash), num)) return std::nullopt;
        if (!parse_ll(s.substr(slash + 1), den)) return std::nullopt;
        if (den == 0) return std::nullopt;
    }
    return Rat(num, den);
}

PlaceDatum::PlaceDatum(PlaceCase k, std::vector<std::pair<int, int>> sig) : kind(k) {
    f = static_cast<int>(sig.size());
    input_order.resize(sig.size());
    std::iota(input_order.begin(), input_order.end(), 0);
    std::stable_sort(input_order.begin(), input_order.end(),
                     [&](int x, int y) { return sig[x].first < sig[y].first; });
    signatures.reserve(sig.size());
    for (int idx : input_order) signatures.push_back(sig[idx]);
}

ValidationReport validate(const GlobalDatum& datum) {
    ValidationReport rep;
    if (datum.places.empty()) {
        rep.errors.push_back({Errc::EmptyDatum, "datum has no places"});
        return rep;
    }
    int ab = -1;
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        if (place.f == 0 || place.signatures.empty()) {
            rep.errors.push_back({Errc::EmptyDatum, "place " + std::to_string(p) + " has no signatures"});
            continue;
        }
        for (int s = 0; s < place.f; ++s) {
            auto [a, b] = place.signatures[s];
            if (a < 0 || b < 0) {
                rep.errors.push_back({Errc::ConventionViolation,
                                      "place " + std::to_string(p) + ": negative signature entry"});
            }
            int sum = a + b;
            if (ab < 0) ab = sum;
            if (sum != ab) {
                rep.errors.push_back({Errc::ConstantSumViolation,
                                      "place " + std::to_string(p) + " sigma " + std::to_string(s) + ": " +
                                          std::to_string(sum) + " != " + std::to_string(ab)});
            }
            if (place.kind == PlaceCase::U && a > b) {
                rep.errors.push_back({Errc::ConventionViolation,
                                      "place " + std::to_string(p) + " sigma " + std::to_string(s) +
                                          ": case U requires a_sigma <= b_sigma"});
            }
        }
    }
    if (rep.ok() && datum.degree() == 1 && datum.a_plus_b() == 2 &&
        datum.places[0].signatures[0] == std::pair<int, int>{1, 1}) {
        rep.warnings.push_back("excluded modular-curve case: d = 1 and (a,b) = (1,1)");
    }
    return rep;
}

std::vector<int> canonical_heights(const PlaceDatum& place) {
    int ab = place.a_plus_b();
    int upper = place.kind == PlaceCase::L ? ab - 1 : ab / 2;
    std::set<int> vals;
    for (const auto& [a, b] : place.signatures)
        if (a >= 1 && a <= upper) vals.insert(a);
    return {vals.begin(), vals.end()};
}

std::vector<int> alpha_sequence(const PlaceDatum& place) {
    if (place.kind != PlaceCase::U)
        throw Error(Errc::WrongCase, "alpha_sequence requires a case-U place");
    int f = place.f;
    std::vector<int> alpha(2 * f + 2);
    alpha[0] = 0;
    for (int i = 1; i <= f; ++i) alpha[i] = place.a(i - 1);
    for (int i = f + 1; i <= 2 * f; ++i) alpha[i] = place.b(2 * f - i);  // b_{2f+1-i}, 1-based
    alpha[2 * f + 1] = place.a_plus_b();
    return alpha;
}

int slot_count(const PlaceDatum& place) {
    return place.kind == PlaceCase::L ? place.f : 2 * place.f;
}

std::vector<int> slot_caps(const PlaceDatum& place) {
    if (place.kind == PlaceCase::L) {
        std::vector<int> caps(place.f);
        for (int s = 0; s < place.f; ++s) caps[s] = place.a(s);
        return caps;
    }
    auto alpha = alpha_sequence(place);
    return {alpha.begin() + 1, alpha.end() - 1};
}

int conj_slot(const PlaceDatum& place, int t) {
    return place.kind == PlaceCase::L ? t : 2 * place.f - 1 - t;
}

int degree_cap(const PlaceDatum& place, int h) {
    int d = 0;
    for (int c : slot_caps(place)) d += std::min(c, h);
    return d;
}

int flag_top(const PlaceDatum& place) {
    int ab = place.a_plus_b();
    return place.kind == PlaceCase::L ? ab - 1 : ab / 2;
}

std::vector<int> max_degrees(const PlaceDatum& place) {
    std::vector<int> d;
    for (int A : canonical_heights(place)) d.push_back(degree_cap(place, A));
    return d;
}

CanonicalData canonical_data(const PlaceDatum& place) {
    CanonicalData data;
    data.heights = canonical_heights(place);
    data.s = static_cast<int>(data.heights.size());
    data.max_degrees = max_degrees(place);
    if (place.kind == PlaceCase::U) data.alpha_seq = alpha_sequence(place);
    return data;
}

std::vector<DecompositionFactor> mu_ordinary_decomposition(const PlaceDatum& place) {
    // Jumps of the slope filtration: a_0=0 <= a_1 <= ... <= a_f <= a_{f+1}=a+b
    // in case L, and the alpha sequence in case U.
    std::vector<int> jumps;
    int len;
    if (place.kind == PlaceCase::L) {
        len = place.f;
        jumps.push_back(0);
        for (int s = 0; s < place.f; ++s) jumps.push_back(place.a(s));
        jumps.push_back(place.a_plus_b());
    } else {
        len = 2 * place.f;
        jumps = alpha_sequence(place);
    }
    std::vector<DecompositionFactor> factors;
    for (int i = 0; i <= len; ++i) {
        int mult = jumps[i + 1] - jumps[i];
        if (mult == 0) continue;
        DecompositionFactor fac;
        fac.multiplicity = mult;
        fac.epsilon.assign(len, 0);
        for (int j = i; j < len; ++j) fac.epsilon[j] = 1;  // epsilon_{i,j} = 1 iff j >= i+1
        factors.push_back(std::move(fac));
    }
    return factors;
}

bool ordinary_exists(const PlaceDatum& place) {
    if (place.kind == PlaceCase::L) {
        for (const auto& [a, b] : place.signatures)
            if (a != place.a(0)) return false;
        return true;
    }
    int ab = place.a_plus_b();
    if (ab % 2 != 0) return false;
    for (const auto& [a, b] : place.signatures)
        if (a != ab / 2 || b != ab / 2) return false;
    return true;
}

SigmaClasses sigma_classes(const PlaceDatum& place) {
    auto heights = canonical_heights(place);
    int s = static_cast<int>(heights.size());
    int ab = place.a_plus_b();
    SigmaClasses out;
    out.classes.assign(s + 2, {});
    for (int sigma = 0; sigma < place.f; ++sigma) {
        int a = place.a(sigma);
        if (a == 0) {
            out.classes[0].push_back(sigma);
        } else if (a == ab) {
            out.classes[s + 1].push_back(sigma);
        } else {
            auto it = std::find(heights.begin(), heights.end(), a);
            // Every 0 < a_sigma < a+b below the case bound is a canonical height.
            if (it != heights.end()) {
                out.classes[1 + (it - heights.begin())].push_back(sigma);
            } else {
                // Case U with a_sigma > (a+b)/2 cannot happen under the convention.
                out.classes[s + 1].push_back(sigma);
            }
        }
    }
    return out;
}

SigmaPartition partition_sigma(const PlaceDatum& place, const std::vector<EpsChoice>& choices, int i) {
    SigmaPartition part;
    part.classes = sigma_classes(place);
    int s = part.classes.s();
    if (static_cast<int>(choices.size()) != s)
        throw Error(Errc::BadChoice, "expected " + std::to_string(s) + " epsilon choices");
    if (s == 0) {
        part.s1.resize(place.f);
        std::iota(part.s1.begin(), part.s1.end(), 0);
        return part;
    }
    if (i < 1 || i > s) throw Error(Errc::IndexOutOfRange, "canonical index i out of range");
    if (choices[i - 1] != EpsChoice::Small)
        throw Error(Errc::BadChoice, "choice at the distinguished index must be the small epsilon");
    std::vector<bool> in_s2(place.f, false);
    for (int k = 1; k <= s; ++k) {
        bool s2 = (k == i) || choices[k - 1] == EpsChoice::Full;
        if (!s2) continue;
        for (int sigma : part.classes.classes[k]) in_s2[sigma] = true;
    }
    for (int sigma = 0; sigma < place.f; ++sigma)
        (in_s2[sigma] ? part.s2 : part.s1).push_back(sigma);
    return part;
}

std::vector<ValidationIssue> validate_weight(const GlobalDatum& datum, const Weight& weight) {
    std::vector<ValidationIssue> issues;
    if (weight.places.size() != datum.places.size()) {
        issues.push_back({Errc::ParseError, "weight must list one block per place"});
        return issues;
    }
    auto decreasing = [](const std::vector<int>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i - 1] < v[i]) return false;
        return true;
    };
    for (std::size_t p = 0; p < datum.places.size(); ++p) {
        const auto& place = datum.places[p];
        const auto& wp = weight.places[p];
        if (static_cast<int>(wp.per_sigma.size()) != place.f) {
            issues.push_back({Errc::ParseError, "place " + std::to_string(p) + ": weight needs f sigma blocks"});
            continue;
        }
        for (int s = 0; s < place.f; ++s) {
            const auto& w = wp.per_sigma[s];
            if (static_cast<int>(w.kappa.size()) != place.a(s) ||
                static_cast<int>(w.lambda.size()) != place.b(s)) {
                issues.push_back({Errc::ParseError, "place " + std::to_string(p) + " sigma " +
                                                        std::to_string(s) + ": weight tuple lengths"});
            }
            if (!decreasing(w.kappa) || !decreasing(w.lambda)) {
                issues.push_back({Errc::ParseError, "place " + std::to_string(p) + " sigma " +
                                                        std::to_string(s) + ": weight tuples must decrease"});
            }
        }
    }
    return issues;
}

}  // namespace muord
