#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace muord {

// All degree arithmetic is exact; verdicts hinge on strict inequalities.
using Rat = boost::rational<long long>;

inline bool is_integer(const Rat& r) { return r.denominator() == 1; }

inline long long floor_rat(const Rat& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

inline long long ceil_rat(const Rat& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
    return q;
}

// Canonical "num/den" form used in every report.
std::string rat_string(const Rat& r);

// Accepts "3", "-3", "3/4", "-3/4". Rejects zero denominators and junk.
std::optional<Rat> parse_rat(const std::string& s);

inline bool on_grid(const Rat& r, long long den) {
    return (r * den).denominator() == 1;
}

// Largest grid point <= r, resp. smallest >= r, on the 1/den grid.
inline Rat grid_floor(const Rat& r, long long den) {
    return Rat(floor_rat(r * den), den);
}
inline Rat grid_ceil(const Rat& r, long long den) {
    return Rat(ceil_rat(r * den), den);
}

}  // namespace muord
