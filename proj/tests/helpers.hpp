#pragma once

#include <utility>
#include <vector>

#include "muord/datum.hpp"

namespace muord::testing {

inline PlaceDatum place_l(std::vector<int> a, int ab) {
    std::vector<std::pair<int, int>> sig;
    for (int x : a) sig.emplace_back(x, ab - x);
    return PlaceDatum(PlaceCase::L, sig);
}

inline PlaceDatum place_u(std::vector<int> a, int ab) {
    std::vector<std::pair<int, int>> sig;
    for (int x : a) sig.emplace_back(x, ab - x);
    return PlaceDatum(PlaceCase::U, sig);
}

// Every case-L place with f <= fmax and a+b <= abmax.
inline std::vector<PlaceDatum> l_family(int fmax, int abmax) {
    std::vector<PlaceDatum> out;
    for (int ab = 1; ab <= abmax; ++ab)
        for (int f = 1; f <= fmax; ++f) {
            std::vector<int> a(f, 0);
            while (true) {
                bool sorted = true;
                for (int i = 1; i < f; ++i)
                    if (a[i - 1] > a[i]) sorted = false;
                if (sorted) out.push_back(place_l(a, ab));
                int i = f - 1;
                while (i >= 0 && a[i] == ab) a[i--] = 0;
                if (i < 0) break;
                ++a[i];
            }
        }
    return out;
}

// Every case-U place with f <= fmax and a+b <= abmax (so a_sigma <= b_sigma).
inline std::vector<PlaceDatum> u_family(int fmax, int abmax) {
    std::vector<PlaceDatum> out;
    for (int ab = 1; ab <= abmax; ++ab)
        for (int f = 1; f <= fmax; ++f) {
            std::vector<int> a(f, 0);
            while (true) {
                bool ok = true;
                for (int i = 0; i < f; ++i)
                    if (2 * a[i] > ab) ok = false;
                for (int i = 1; i < f; ++i)
                    if (a[i - 1] > a[i]) ok = false;
                if (ok) out.push_back(place_u(a, ab));
                int i = f - 1;
                while (i >= 0 && a[i] == ab) a[i--] = 0;
                if (i < 0) break;
                ++a[i];
            }
        }
    return out;
}

}  // namespace muord::testing
