#include <doctest.h>

#include "rlcm/identifiability.hpp"
#include "rlcm/tmatrix.hpp"
#include "support.hpp"

using namespace rlcm;
using namespace testsupport;

TEST_CASE("completeness") {
    auto r = is_complete(QMatrix({{1, 0}, {0, 1}, {1, 1}}));
    CHECK(r.complete);
    CHECK(r.witness[0] == 0);
    CHECK(r.witness[1] == 1);
    auto r2 = is_complete(QMatrix({{1, 1}, {0, 1}}));
    CHECK_FALSE(r2.complete);
    CHECK_FALSE(r2.witness[0].has_value());
    CHECK(r2.witness[1] == 1);
}

TEST_CASE("C1 needs two copies of every singleton") {
    CHECK_FALSE(check_c1(QMatrix({{1, 0}, {0, 1}, {1, 1}})).holds);
    auto c = check_c1(QMatrix({{0, 1}, {1, 0}, {1, 1}, {1, 0}, {0, 1}}));
    REQUIRE(c.holds);
    CHECK(c.blocks->block_a == std::vector<int>{1, 0});
    CHECK(c.blocks->block_b == std::vector<int>{3, 4});
    CHECK(c.singleton_rows[0] == std::vector<int>{1, 3});
}

TEST_CASE("C2 on triple identity for every family") {
    std::mt19937_64 rng(21);
    for (int K = 2; K <= 3; ++K) {
        QMatrix Q = QMatrix::stack({QMatrix::identity(K), QMatrix::identity(K), QMatrix::identity(K)});
        for (Family f : {Family::DINA, Family::DINO, Family::GDINA, Family::LLM, Family::RRUM}) {
            for (int rep = 0; rep < 5; ++rep) {
                auto th = theta_from_params(Q, random_params(Q, f, rng));
                auto rep_ = verdict(Q, th);
                CHECK(rep_.c1_holds());
                CHECK(rep_.c2_holds() == true);
                CHECK(rep_.verdict == Verdict::IdentifiableByTheorem1);
            }
        }
    }
}

TEST_CASE("check_c2 rejects malformed blocks") {
    QMatrix Q = QMatrix::stack({QMatrix::identity(2), QMatrix::identity(2)});
    std::mt19937_64 rng(1);
    auto th = theta_from_params(Q, random_params(Q, Family::DINA, rng));
    CHECK_THROWS_AS(check_c2(Q, th, IdentityBlocks{{0, 1}, {0, 3}}), InvalidParameterError);
    CHECK_THROWS_AS(check_c2(Q, th, IdentityBlocks{{1, 0}, {2, 3}}), InvalidParameterError);
    CHECK_FALSE(check_c2(Q, th, IdentityBlocks{{0, 1}, {2, 3}}).holds);
}

TEST_CASE("verdicts") {
    CHECK(verdict(QMatrix({{1, 1}, {0, 1}})).verdict == Verdict::NonIdentifiableIncomplete);
    CHECK(verdict(QMatrix({{1, 0}, {0, 1}, {1, 1}})).verdict == Verdict::NotCoveredBySufficientConditions);
    auto three = verdict(QMatrix::stack({QMatrix::identity(2), QMatrix::identity(2), QMatrix::identity(2)}));
    CHECK(three.verdict == Verdict::IdentifiableByTheorem1);
    CHECK(three.three_identity_sufficient);
    CHECK_FALSE(three.c2.has_value());
}

TEST_CASE("designation search is exhaustive when C2 fails") {
    // Only a spare e2 row is left outside the blocks, so no designation separates e1.
    QMatrix Q({{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {1, 1}});
    std::vector<ItemParams> params{Dina{0.2, 0.1}, Dina{0.2, 0.1}, Dina{0.2, 0.1},
                                   Dina{0.2, 0.1}, Dina{0.2, 0.1}, Dina{0.2, 0.1}};
    auto th = theta_from_params(Q, params);
    auto rep = verdict(Q, th);
    CHECK(rep.c1_holds());
    CHECK(rep.c2_holds() == false);
    CHECK(rep.designation_search == DesignationSearch::Exhaustive);
    CHECK(rep.designations_available >= 3);
    CHECK(rep.verdict == Verdict::NotCoveredBySufficientConditions);
}

TEST_CASE("distribution comparison uses exhaustive enumeration") {
    std::mt19937_64 rng(8);
    auto th = random_theta(4, 2, rng);
    auto p = random_p(2, rng);
    ModelPoint a{th, p}, b{th, p};
    CHECK(distributions_equal(a, b) == 0.0);
    CHECK(parameter_distance(a, b) == 0.0);
    CHECK_THROWS_AS(NonIdentifiablePair(a, b), DegeneratePairError);
    ModelPoint c{random_theta(4, 2, rng), p};
    CHECK_THROWS_AS(NonIdentifiablePair(a, c), ConsistencyError);
}

TEST_CASE("incomplete counterexample keeps the distribution") {
    QMatrix Q({{1, 1}, {0, 1}});
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        auto th = theta_from_params(Q, random_params(Q, Family::DINA, rng));
        auto p = random_p(2, rng);
        auto pair = incomplete_counterexample(Q, th, p);
        CHECK(max_abs(oracle_distribution(pair.first().theta, pair.first().p),
                      oracle_distribution(pair.second().theta, pair.second().p)) <= 1e-12);
        CHECK(pair.parameter_distance() > 1e-6);
    }
    // the joint item separates e1 from 0 here, so no two columns coincide
    CHECK_THROWS_AS(incomplete_counterexample(Q, theta_from_params(Q, random_params(Q, Family::GDINA, rng)),
                                              random_p(2, rng)),
                    NotApplicableError);
    CHECK_THROWS_AS(incomplete_counterexample(QMatrix::identity(2), random_theta(2, 2, rng), random_p(2, rng)),
                    NotApplicableError);
}

TEST_CASE("two-item construction against hand values") {
    Prop2Design d;
    d.K = 2;
    d.extra_rows = {{1}};
    d.items.assign(5, Dina{0.2, 0.1});
    d.rho = 1.0;
    d.anchor1 = 0.2;
    d.anchor2 = 0.02;
    auto Q = prop2_qmatrix(2, d.extra_rows);
    CHECK(Q.items() == 5);
    CHECK(Q.row(0) == 1u);
    CHECK(Q.row(4) == 2u);
    auto alt = prop2_alternative_items(d);
    // a = 0.6, b = -0.1, c = 0.78, d = 0.08
    CHECK(1.0 - alt[0].s == doctest::Approx(0.2 + 0.46 / 0.86).epsilon(1e-12));
    CHECK(1.0 - alt[1].s == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(alt[0].g == doctest::Approx(0.2));
    CHECK(alt[1].g == doctest::Approx(0.02));
    for (int j = 2; j < 5; ++j) {
        CHECK(alt[j].s == d.items[j].s);
        CHECK(alt[j].g == d.items[j].g);
    }
    auto pair = prop2_counterexample(d);
    CHECK(max_abs(oracle_distribution(pair.first().theta, pair.first().p),
                  oracle_distribution(pair.second().theta, pair.second().p)) <= 1e-12);
    CHECK(pair.parameter_distance() > 0.05);
}

TEST_CASE("two-item construction over random feasible designs") {
    std::mt19937_64 rng(10);
    int built = 0;
    for (int rep = 0; rep < 40; ++rep) {
        Prop2Design d;
        d.K = 2 + rep % 2;
        d.extra_rows = {std::vector<int>(d.K - 1, 1)};
        int J = 2 * d.K + 1;
        for (int j = 0; j < J; ++j) d.items.push_back(Dina{unif(rng, 0.05, 0.25), unif(rng, 0.05, 0.25)});
        d.rho = unif(rng, 0.3, 2.0);
        d.anchor1 = unif(rng, 0.0, 0.3);
        d.anchor2 = unif(rng, 0.0, 0.3);
        try {
            auto pair = prop2_counterexample(d);
            ++built;
            CHECK(max_abs(oracle_distribution(pair.first().theta, pair.first().p),
                          oracle_distribution(pair.second().theta, pair.second().p)) <= 1e-12);
        } catch (const InfeasibleConstructionError&) {
        }
    }
    CHECK(built > 10);
}

TEST_CASE("infeasible two-item construction is reported") {
    Prop2Design d;
    d.K = 2;
    d.extra_rows = {{1}};
    d.items.assign(5, Dina{0.2, 0.1});
    d.anchor1 = 0.8;  // a = 0
    d.anchor2 = 0.1;  // d = 0
    CHECK_THROWS_AS(prop2_counterexample(d), InfeasibleConstructionError);
}
