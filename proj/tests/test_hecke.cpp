#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "muord/hecke.hpp"

using namespace muord;
using namespace muord::hecke;
using muord::testing::place_l;
using muord::testing::place_u;

namespace {

PlaceWeight constant_weight(const PlaceDatum& place, int kappa, int lambda) {
    PlaceWeight w;
    for (int s = 0; s < place.f; ++s) {
        SigmaWeight sw;
        sw.kappa.assign(place.a(s), kappa);
        sw.lambda.assign(place.b(s), lambda);
        w.per_sigma.push_back(std::move(sw));
    }
    return w;
}

}  // namespace

TEST_CASE("normalization constants") {
    CHECK(n_constant(place_l({1, 2}, 3), 1) == 3);
    CHECK(n_constant(place_l({2, 2}, 3), 2) == 2 * 2 * 1);            // f a b
    CHECK(n_constant(place_u({2, 2}, 4), 2) == 2 * 4 * 4 / 4);        // f (a+b)^2/4
    CHECK(n_constant(place_u({1}, 4), 1) == 4);                       // (a+b) min(i, a)
    CHECK_THROWS_AS((void)n_constant(place_l({1, 2}, 3), 3), Error);
    CHECK_THROWS_AS((void)n_constant(place_u({1}, 4), 3), Error);
}

TEST_CASE("weighted normalization") {
    auto place = place_l({1, 2}, 3);
    CHECK(N_constant(place, 1, constant_weight(place, 0, 0)) == n_constant(place, 1));
    CHECK(N_constant(place, 1, constant_weight(place, 5, 3)) == 8);

    auto uplace = place_u({1}, 4);
    CHECK(N_constant(uplace, 2, constant_weight(uplace, 9, 4)) == 2 + (3 - 1) / 2 * 4);
}

TEST_CASE("complement lower bounds") {
    auto lb = complement_bounds(place_l({1, 2}, 3), 1);
    CHECK(lb.first == std::vector<Rat>{Rat(0), Rat(1)});
    CHECK(lb.second == std::vector<Rat>{Rat(0), Rat(0)});
    CHECK(complement_bounds(place_l({1, 2}, 3), 2).first == std::vector<Rat>{Rat(0), Rat(0)});

    auto ub = complement_bounds(place_u({1}, 4), 1);
    CHECK(ub.first == std::vector<Rat>{Rat(0)});
    CHECK(ub.second == std::vector<Rat>{Rat(2)});

    auto mb = complement_bounds(place_u({1}, 4), 2);
    CHECK(mb.second == std::vector<Rat>{Rat(1)});
}

TEST_CASE("flag state invariants") {
    auto st = FlagState::all_maximal(place_l({1, 2}, 3), 4);
    CHECK(st.top() == 2);
    CHECK(st.column_total(1) == Rat(2));
    CHECK(st.column_total(2) == Rat(3));
    CHECK(st.invariant_violations().empty());

    st.deg[0][0] = Rat(5);  // over the cap
    CHECK_FALSE(st.invariant_violations().empty());
}

TEST_CASE("case-L transition: worked example") {
    auto place = place_l({1, 2}, 3);
    FlagState st;
    st.place = place;
    st.grid_den = 4;
    st.deg = {{Rat(1, 2), Rat(1)}, {Rat(1), Rat(2)}};
    REQUIRE(st.invariant_violations().empty());

    ChoiceL choice;
    choice.complement = {Rat(0), Rat(1)};              // deg L_0 = 1
    choice.inter_aux[2] = {Rat(0), Rat(1)};
    auto res = apply_transition(st, 1, choice);
    REQUIRE(res.feasible);
    CHECK(res.transition->successor.column_total(1) == Rat(2));  // deg A - deg L_0
    CHECK(res.transition->successor.column_total(2) == Rat(3));
    CHECK(res.transition->complement_total == Rat(1));

    // a complement below the forced bounds is rejected by name
    ChoiceL badc = choice;
    badc.complement = {Rat(0), Rat(1, 2)};
    auto bad = apply_transition(st, 1, badc);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.violated == "complement-bounds");
}

TEST_CASE("fixed points of the degree move require integral degrees") {
    auto place = place_l({1, 2}, 3);
    FlagState st;
    st.place = place;
    st.grid_den = 4;
    st.deg = {{Rat(3, 4), Rat(3, 4)}, {Rat(1), Rat(7, 4)}};
    REQUIRE(st.invariant_violations().empty());

    // deg H_1 = 3/2 is not an integer: holding it fixed must be infeasible
    ChoiceL choice;
    choice.complement = {Rat(1, 2), Rat(1)};  // deg L_0 = deg A - 3/2
    choice.inter_aux[2] = {Rat(1, 2), Rat(1)};
    auto res = apply_transition(st, 1, choice);
    CHECK_FALSE(res.feasible);
    CHECK(res.violated == "fixed-point-integrality");

    // at an integral column the same move is a legal fixed point
    FlagState sti;
    sti.place = place;
    sti.grid_den = 4;
    sti.deg = {{Rat(1), Rat(1)}, {Rat(1), Rat(2)}};
    ChoiceL fix;
    fix.complement = {Rat(0), Rat(1)};
    fix.inter_aux[2] = {Rat(0), Rat(1)};
    auto ok = apply_transition(sti, 1, fix);
    REQUIRE(ok.feasible);
    CHECK(ok.transition->successor.column_total(1) == Rat(2));

    bool found_eq = false;
    for_each_transition(sti, 1, [&](const Transition& t) {
        if (t.successor.column_total(1) == sti.column_total(1)) found_eq = true;
        CHECK(t.successor.column_total(1) >= sti.column_total(1));
        return false;
    });
    CHECK(found_eq);  // integral states do admit equality moves
}

TEST_CASE("the all-maximal state is a fixed point of every operator") {
    auto stable = [](const PlaceDatum& place) {
        auto st = FlagState::all_maximal(place, 2);
        for (int i = 1; i <= flag_top(place); ++i) {
            long long count = 0;
            for_each_transition(st, i, [&](const Transition& t) {
                ++count;
                for (int j = 1; j <= st.top(); ++j) CHECK(t.successor.deg[j - 1] == st.deg[j - 1]);
                return false;
            });
            CHECK(count > 0);
        }
    };
    stable(place_l({1, 2}, 3));
    stable(place_l({0, 2}, 2));
    stable(place_u({1}, 4));   // covers U_1 and the middle U_2
    stable(place_u({1, 2}, 4));
}

TEST_CASE("sampled transitions are monotone with integral fixed points") {
    std::mt19937_64 rng(2024);
    for (const auto& place : {place_l({1, 2}, 3), place_l({1, 1, 2}, 4), place_u({1}, 4),
                              place_u({1, 2}, 4), place_u({1}, 3)}) {
        int accepted = 0;
        for (int trial = 0; trial < 60000 && accepted < 500; ++trial) {
            auto st = FlagState::all_maximal(place, 4);
            int i = 1 + static_cast<int>(rng() % flag_top(place));
            for (int j = 1; j <= st.top(); ++j)
                st.lower_column(j, Rat(static_cast<long long>(rng() % 4), 4));
            if (!st.invariant_violations().empty()) continue;
            auto t = sample_transition(st, i, rng);
            if (!t) continue;
            ++accepted;
            for (int j = 1; j <= st.top(); ++j)
                CHECK(t->successor.column_total(j) >= st.column_total(j));
            if (t->successor.column_total(i) == st.column_total(i)) {
                if (t->middle) {
                    Rat gap = Rat(degree_cap(place, i)) - st.column_total(i);
                    CHECK(is_integer(gap));
                    CHECK(floor_rat(gap) % 2 == 0);
                } else {
                    CHECK(is_integer(st.column_total(i)));
                }
            }
        }
        CHECK(accepted >= 300);
    }
}

TEST_CASE("bad test at the degree thresholds") {
    auto place = place_l({1, 2}, 3);
    auto st = FlagState::all_maximal(place, 4);
    ChoiceL choice;
    choice.complement = {Rat(0), Rat(1)};
    choice.inter_aux[2] = {Rat(0), Rat(1)};
    auto good = apply_transition(st, 1, choice);
    REQUIRE(good.feasible);
    CHECK(good.transition->successor.column_total(1) == Rat(2));
    CHECK_FALSE(bad_test(*good.transition, Rat(1, 10)));  // image at d_i is good

    // U middle with t = 2: image degree 1/2 against d = 2 is still good
    auto uplace = place_u({1}, 2);
    FlagState ust;
    ust.place = uplace;
    ust.grid_den = 4;
    ust.deg = {{Rat(0), Rat(1, 4)}};
    ChoiceUMid mid;
    mid.complement_sigma1 = {Rat(3, 4)};
    auto um = apply_transition(ust, 1, mid);
    REQUIRE(um.feasible);
    CHECK(um.transition->successor.column_total(1) == Rat(1, 2));
    CHECK_FALSE(bad_test(*um.transition, Rat(1, 10)));
    CHECK(bad_test(*um.transition, Rat(3, 4)));  // 1/2 <= 2 - 2*(1/4)
}

TEST_CASE("l_sigma profile on a good transition") {
    auto place = place_l({1, 2}, 3);
    FlagState st;
    st.place = place;
    st.grid_den = 4;
    st.deg = {{Rat(1, 2), Rat(3, 4)}, {Rat(1), Rat(7, 4)}};
    REQUIRE(st.invariant_violations().empty());

    ChoiceL choice;
    choice.complement = {Rat(1, 4), Rat(5, 4)};
    choice.inter_aux[2] = {Rat(1, 4), Rat(1)};
    auto res = apply_transition(st, 1, choice);
    REQUIRE(res.feasible);

    auto prof = l_sigma_profile(*res.transition, Rat(1, 4),
                                {EpsChoice::Small, EpsChoice::Small}, Rat(1, 10));
    CHECK(prof.l == std::vector<Rat>{Rat(1, 4), Rat(1, 4)});
    CHECK_FALSE(prof.is_bad);
    CHECK(prof.s1_cap_ok);
    CHECK_THROWS_AS((void)assert_bad_sum(prof), Error);
}

TEST_CASE("l_sigma profile on a bad transition") {
    auto place = place_l({1, 2}, 3);
    FlagState st;
    st.place = place;
    st.grid_den = 4;
    st.deg = {{Rat(0), Rat(3, 4)}, {Rat(1), Rat(7, 4)}};
    REQUIRE(st.invariant_violations().empty());

    ChoiceL choice;
    choice.complement = {Rat(3, 4), Rat(5, 4)};
    choice.inter_aux[2] = {Rat(3, 4), Rat(1)};
    auto res = apply_transition(st, 1, choice);
    REQUIRE(res.feasible);
    CHECK(res.transition->successor.column_total(1) == Rat(1));

    auto prof = l_sigma_profile(*res.transition, Rat(1, 4),
                                {EpsChoice::Small, EpsChoice::Small}, Rat(1, 10));
    CHECK(prof.is_bad);
    CHECK(prof.l == std::vector<Rat>{Rat(3, 4), Rat(1, 4)});
    CHECK(prof.s1_cap_ok);
    CHECK(prof.l[0] + prof.l[1] >= Rat(1) - Rat(1, 10));  // bad forces sum l >= 1 - alpha
    CHECK(prof.s2_sum == Rat(3, 4));
    CHECK(prof.s2_bound == Rat(1) - Rat(1, 10) - Rat(2) * Rat(1, 4));
    CHECK(assert_bad_sum(prof));
}

TEST_CASE("l vanishes at the multiplicative point") {
    auto place = place_l({1, 2}, 3);
    auto st = FlagState::all_maximal(place, 2);
    for_each_transition(st, 1, [&](const Transition& t) {
        auto prof = l_sigma_profile(t, Rat(1, 4), {EpsChoice::Small, EpsChoice::Small}, Rat(1, 10));
        for (const Rat& l : prof.l) CHECK(l == Rat(0));
        return false;
    });
}

TEST_CASE("case-L S_1 caps hold on every feasible transition in the opens") {
    // With the quotient-embedding constraints the S_1 bound l_sigma <= eps is
    // a consequence of feasibility in case L; sampling must never break it.
    std::mt19937_64 rng(5150);
    auto place = place_l({1, 2}, 3);
    const Rat eps(1, 4);
    int checked = 0;
    for (int trial = 0; trial < 20000 && checked < 400; ++trial) {
        auto st = FlagState::all_maximal(place, 4);
        int k = 1 + static_cast<int>(rng() % 2);
        int i = canonical_heights(place)[k - 1];
        // stay inside the opens: other canonical column within eps of maximal
        st.lower_column(i == 1 ? 2 : 1, Rat(static_cast<long long>(rng() % 2), 4));
        st.lower_column(i, Rat(static_cast<long long>(rng() % 5), 4));
        if (!st.invariant_violations().empty()) continue;
        auto t = sample_transition(st, i, rng);
        if (!t) continue;
        auto prof = l_sigma_profile(*t, eps, {EpsChoice::Small, EpsChoice::Small}, Rat(1, 10));
        CHECK(prof.s1_cap_ok);
        for (const Rat& l : prof.l) CHECK(l >= Rat(0));
        if (prof.is_bad) CHECK(prof.s2_sum >= prof.s2_bound);
        ++checked;
    }
    CHECK(checked >= 400);
}

TEST_CASE("bad norm exponent") {
    auto place = place_l({1, 2}, 3);
    auto w = constant_weight(place, 7, 3);  // kappa + lambda = 10 everywhere
    auto e = bad_norm_exponent(place, 1, w, Rat(0), Rat(1, 100), Rat(1, 20),
                               {EpsChoice::Small, EpsChoice::Small});
    CHECK(e == Rat(-61, 10));  // 3 - (1 - 1/20 - 1/25) * 10

    auto zero = bad_norm_exponent(place, 1, constant_weight(place, 0, 0), Rat(1, 2), Rat(1, 100),
                                  Rat(1, 20), {EpsChoice::Small, EpsChoice::Small});
    CHECK(zero == Rat(7, 2));  // v + n, never contracting
    CHECK(zero >= Rat(0));

    // strictly decreasing in the weight bound, increasing in v, eps, alpha
    auto base = bad_norm_exponent(place, 1, w, Rat(1), Rat(1, 100), Rat(1, 20),
                                  {EpsChoice::Small, EpsChoice::Small});
    CHECK(base > e);
    CHECK(bad_norm_exponent(place, 1, constant_weight(place, 8, 3), Rat(0), Rat(1, 100), Rat(1, 20),
                            {EpsChoice::Small, EpsChoice::Small}) < e);
    CHECK(bad_norm_exponent(place, 1, w, Rat(0), Rat(1, 50), Rat(1, 20),
                            {EpsChoice::Small, EpsChoice::Small}) > e);
    CHECK(bad_norm_exponent(place, 1, w, Rat(0), Rat(1, 100), Rat(1, 10),
                            {EpsChoice::Small, EpsChoice::Small}) > e);
}

TEST_CASE("classicality conditions") {
    GlobalDatum ord{{place_l({2}, 3)}};
    Weight w;
    w.places.push_back(constant_weight(ord.places[0], 2, 1));  // kappa+lambda = 3
    ValuationMap v{{{0, 1}, Rat(0)}};
    auto rep = classicality_check(ord, w, v);
    REQUIRE(rep.conditions.size() == 1);
    CHECK(rep.conditions[0].n == 2);  // f a b = 1*2*1
    CHECK(rep.conditions[0].closed_form.find("f*a*b") != std::string::npos);
    CHECK(rep.all_pass);

    ValuationMap v1{{{0, 1}, Rat(1)}};
    CHECK_FALSE(classicality_check(ord, w, v1).all_pass);  // 3 < 3 is strict

    GlobalDatum two{{place_l({1, 2}, 3)}};
    Weight w2;
    w2.places.push_back(constant_weight(two.places[0], 2, 2));
    ValuationMap v2{{{0, 1}, Rat(0)}, {{0, 2}, Rat(0)}};
    auto rep2 = classicality_check(two, w2, v2);
    CHECK(rep2.conditions[0].n == 3);
    CHECK(rep2.conditions[1].n == 3);
    CHECK(rep2.all_pass);

    CHECK_THROWS_AS((void)classicality_check(two, w2, ValuationMap{{{0, 1}, Rat(0)}}), Error);
}

TEST_CASE("classicality is invariant under permuting places") {
    GlobalDatum d1{{place_l({1, 2}, 3), place_u({1}, 3)}};
    GlobalDatum d2{{place_u({1}, 3), place_l({1, 2}, 3)}};
    Weight w1, w2;
    w1.places = {constant_weight(d1.places[0], 3, 2), constant_weight(d1.places[1], 9, 1)};
    w2.places = {constant_weight(d2.places[0], 9, 1), constant_weight(d2.places[1], 3, 2)};
    ValuationMap v1{{{0, 1}, Rat(1, 2)}, {{0, 2}, Rat(1, 2)}, {{1, 1}, Rat(1, 3)}};
    ValuationMap v2{{{1, 1}, Rat(1, 2)}, {{1, 2}, Rat(1, 2)}, {{0, 1}, Rat(1, 3)}};
    CHECK(classicality_check(d1, w1, v1).all_pass == classicality_check(d2, w2, v2).all_pass);
}
