#include <doctest.h>

#include <random>

#include "k3bps/verify.hpp"
#include "k3bps/wallcross.hpp"

using namespace k3bps;

namespace {

Cutoff qt_box(int q_min, int q_max, int t_max) {
    Cutoff c;
    c.q_min = q_min;
    c.q_max = q_max;
    c.t_max = {t_max};
    return c;
}

Monomial qt(const Cutoff& box, int q, int t) {
    Monomial m = var_monomial(box, Var::Q, q);
    m.t[0] = t;
    return m;
}

} // namespace

TEST_CASE("behrend_to_reduced: single stratum expansion") {
    Cutoff box = qt_box(0, 3, 3);
    Series z = Series::monomial(box, qt(box, 1, 1), Rational(5));
    Series red = behrend_to_reduced(z);
    CHECK(red.coefficient(qt(box, 1, 1)) == Rational(-5));
    CHECK(red.coefficient(qt(box, 2, 2)) == Rational(25, 2));
    CHECK(red.coefficient(qt(box, 3, 3)) == Rational(-125, 3));
    CHECK(behrend_to_reduced(Series::zero(box)).is_zero());
}

TEST_CASE("stratification_oracle: single charge is a geometric log") {
    Cutoff box = qt_box(0, 6, 6);
    Charge alpha;
    alpha.n = 1;
    alpha.beta = {1};
    Series s = stratification_oracle({{alpha, Rational(1)}}, box);
    for (int k = 1; k <= 6; ++k)
        CHECK(s.coefficient(qt(box, k, k)) ==
              Rational(k % 2 == 0 ? 1 : -1, k));
    CHECK(stratification_oracle({}, box).is_zero());
}

TEST_CASE("stratification_oracle: agrees with -log(1+Z) on small tables") {
    Cutoff box = qt_box(-4, 4, 4);
    std::map<Charge, Rational> table;
    Charge a{2, {1}}, b{-1, {2}};
    table[a] = Rational(3);
    table[b] = Rational(-1, 2);
    table[b].canonicalize();
    Series z = Series::zero(box);
    for (const auto& [c, p] : table) {
        Monomial m = qt(box, static_cast<int>(c.n), c.beta[0]);
        z.add_term(m, p);
    }
    CHECK(stratification_oracle(table, box) == behrend_to_reduced(z));
}

TEST_CASE("behrend identity on random charge tables") {
    for (unsigned long seed : {1UL, 2UL, 3UL}) {
        std::mt19937_64 rng(seed);
        auto P = random_charge_table(rng, 3, 4);
        VerifyReport r = verify_behrend(P, qt_box(-4, 5, 4));
        CHECK(r.pass);
    }
}

TEST_CASE("pt_wallcross_rhs: degenerate tables") {
    Cutoff box = qt_box(0, 4, 4);
    CountingTable t;
    Charge origin{0, {0}};
    t.L[origin] = Rational(1);
    CHECK(pt_wallcross_rhs(t, box) == Series::one(box));

    Charge c{1, {1}};
    t.N[c] = Rational(7);
    Series expect = exp(Series::monomial(box, qt(box, 1, 1), Rational(7)));
    CHECK(pt_wallcross_rhs(t, box) == expect);
}

TEST_CASE("bps_product: base cases") {
    Cutoff box = qt_box(-2, 4, 3);
    CHECK(bps_product({}, box) == Series::one(box));

    // single n_0 = 1: product of (1-(-q)^j t)^j
    BpsMap g0{{{0, {1}}, 1}};
    Series direct = Series::one(box);
    for (int j = 1; j <= 4; ++j) {
        Series f = Series::one(box);
        f.add_term(qt(box, j, 1), Rational(j % 2 == 0 ? -1 : 1));
        direct = direct * pow_int(f, j);
    }
    CHECK(bps_product(g0, box) == direct);

    // single genus-1 entry c: the only factor is (1 - t)^{-c}
    BpsMap g1{{{1, {1}}, 3}};
    Series f = Series::one(box);
    f.add_term(qt(box, 0, 1), Rational(-1));
    CHECK(bps_product(g1, box) == pow_int(f, -3));
}

TEST_CASE("L_from_bps: low-genus shapes") {
    Cutoff box = qt_box(-1, 1, 2);
    // genus 0 only: no f_g contributions
    CHECK(L_from_bps({{{0, {1}}, 24}}, box) == Series::one(box));

    // n_1 = c on primitive beta: L_beta = c (f_1 = 1)
    BpsMap b1{{{1, {1}}, 5}};
    Series l1 = L_from_bps(b1, box);
    CHECK(l1.coefficient(qt(box, 0, 1)) == Rational(5));
    // t^2 collects exp's c^2/2 plus the a=2 divisor term c/2
    CHECK(l1.coefficient(qt(box, 0, 2)) == Rational(25, 2) + Rational(5, 2));

    // n_2 = c on primitive beta: L_beta = c(1/q + 2 + q)
    BpsMap b2{{{2, {1}}, 1}};
    Series l2 = L_from_bps(b2, box);
    CHECK(l2.coefficient(qt(box, -1, 1)) == Rational(1));
    CHECK(l2.coefficient(qt(box, 0, 1)) == Rational(2));
    CHECK(l2.coefficient(qt(box, 1, 1)) == Rational(1));
}

TEST_CASE("f_g_series: palindromic in q <-> 1/q") {
    // Laurent polynomials only for g >= 1; f_0 is a one-sided expansion
    for (int g = 1; g <= 10; ++g) {
        Cutoff box = qt_box(-10, 10, 0);
        Series f = f_g_series(g, box);
        CHECK(!f.is_zero());
        for (const auto& [m, c] : f.terms()) {
            Monomial flip = m;
            flip.q = -m.q;
            CHECK(f.coefficient(flip) == c);
        }
    }
}

TEST_CASE("bps_from_L: inverts L_from_bps") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<long> val(-4, 4);
    for (int trial = 0; trial < 6; ++trial) {
        BpsMap bps;
        for (int b = 1; b <= 3; ++b)
            for (int g = 1; g <= 3; ++g) {
                long n = val(rng);
                if (n != 0) bps[{g, {b}}] = n;
            }
        // wide q-window: nothing clips at t <= 3, so exp/log invert exactly
        Cutoff box = qt_box(-6, 6, 3);
        Series lseries = L_from_bps(bps, box);
        // expose the per-beta Laurent polynomials via log
        Series arg = log1p(lseries - Series::one(box));
        std::map<std::vector<int>, Series> l_beta;
        for (int b = 1; b <= 3; ++b) {
            Series lb = Series::zero(box);
            for (const auto& [m, c] : arg.terms())
                if (m.t[0] == b) lb.add_term(qt(box, m.q, 0), c);
            l_beta.insert_or_assign({b}, lb);
        }
        auto rec = bps_from_L(l_beta, box);
        BpsMap round;
        for (const auto& [key, n] : rec) {
            REQUIRE(is_integer(n));
            if (n != 0) round[key] = n.get_num().get_si();
        }
        CHECK(round == bps);
    }
}

TEST_CASE("bps_from_L: rejects input outside the f_g span") {
    Cutoff box = qt_box(-2, 2, 1);
    // q^{-1} alone is not a combination of palindromic f_g
    std::map<std::vector<int>, Series> l_beta;
    l_beta.insert_or_assign({1}, Series::monomial(box, qt(box, -1, 0), Rational(1)));
    CHECK_THROWS_AS(bps_from_L(l_beta, box), NotInSpan);
    l_beta.insert_or_assign({1}, Series::zero(box));
    CHECK(bps_from_L(l_beta, box).empty());
}

TEST_CASE("pipeline identity: wall-crossing product equals BPS product") {
    // fixed small table touching every factor shape
    BpsMap bps{{{0, {1}}, 24}, {{0, {2}}, 324}, {{1, {1}}, -2},
               {{2, {2}}, 5},  {{1, {2}}, 7}};
    VerifyReport r = verify_pt_bps(bps, qt_box(-2, 5, 3));
    CHECK(r.pass);

    for (unsigned long seed : {4UL, 9UL}) {
        std::mt19937_64 rng(seed);
        BpsMap random_bps = random_bps_table(rng, 2, 3);
        VerifyReport rr = verify_pt_bps(random_bps, qt_box(-2, 5, 3));
        CHECK(rr.pass);
    }
}

TEST_CASE("gv_resummation: leading u-coefficients are divisor sums") {
    BpsMap bps{{{0, {1}}, 24}, {{0, {2}}, 324}, {{1, {1}}, -2}, {{1, {2}}, 6}};
    Cutoff box;
    box.u_min = -2;
    box.u_max = 2;
    box.t_max = {2};
    Series F = gv_resummation(bps, box);

    Monomial u2t1 = var_monomial(box, Var::U, -2);
    u2t1.t[0] = 1;
    CHECK(F.coefficient(u2t1) == Rational(24)); // k=1 only
    Monomial u2t2 = u2t1;
    u2t2.t[0] = 2;
    // sum over k | 2 of n_0^{beta/k}/k^3
    CHECK(F.coefficient(u2t2) == Rational(324) + Rational(3));

    Monomial u0t1 = var_monomial(box, Var::U, 0);
    u0t1.t[0] = 1;
    // genus-1 constant plus the u^0 part of n_0 (2 sin(ku/2))^{-2}:
    // (2 sin(u/2))^{-2} = u^{-2} + 1/12 + O(u^2)
    CHECK(F.coefficient(u0t1) == Rational(-2) + Rational(2));

    CHECK(gv_resummation({}, box).is_zero());
}

TEST_CASE("gerbe_rescale: coefficientwise r^{2g-1}") {
    Cutoff box;
    box.u_min = -2;
    box.u_max = 4;
    box.t_max = {1};
    Series F = Series::zero(box);
    Monomial g0 = var_monomial(box, Var::U, -2);
    g0.t[0] = 1;
    Monomial g1 = var_monomial(box, Var::U, 0);
    g1.t[0] = 1;
    Monomial g2 = var_monomial(box, Var::U, 2);
    g2.t[0] = 1;
    F.add_term(g0, Rational(8));
    F.add_term(g1, Rational(5));
    F.add_term(g2, Rational(-3));

    CHECK(gerbe_rescale(F, 1) == F);
    Series G = gerbe_rescale(F, 2);
    CHECK(G.coefficient(g0) == Rational(4)); // r^{-1}
    CHECK(G.coefficient(g1) == Rational(10));   // r^{1}
    CHECK(G.coefficient(g2) == Rational(-24));  // r^{3}

    CHECK(gerbe_rescale(gerbe_rescale(F, 2), 3) == gerbe_rescale(F, 6));

    std::mt19937_64 rng(55);
    CHECK(verify_gerbe_rescale(F, {1, 2, 3, 5}));
}

TEST_CASE("gerbe_partition_power: power law and exp/log consistency") {
    Cutoff box;
    box.u_min = 0;
    box.u_max = 6;
    box.t_max = {2};
    CHECK(gerbe_partition_power(Series::one(box), 4) == Series::one(box));

    Series F = Series::zero(box);
    Monomial m1 = var_monomial(box, Var::U, 2);
    m1.t[0] = 1;
    Monomial m2 = var_monomial(box, Var::U, 4);
    m2.t[0] = 2;
    F.add_term(m1, Rational(3));
    F.add_term(m2, Rational(-1, 2));
    Series Z = exp(F);
    CHECK(gerbe_partition_power(Z, 1) == Z);
    for (long r : {2L, 3L}) {
        Series direct = gerbe_partition_power(Z, r);
        Series via = exp(gerbe_rescale(log1p(Z - Series::one(box)), r));
        CHECK(direct == via);
    }

    Series bad = Series::zero(box);
    CHECK_THROWS_AS(gerbe_partition_power(bad, 2), NonzeroConstantTerm);
}
