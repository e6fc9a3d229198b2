#include <doctest.h>

#include "rlcm/io.hpp"
#include "support.hpp"

using namespace rlcm;
using namespace testsupport;

TEST_CASE("Q-matrix CSV round trip with comments") {
    auto Q = io::parse_qmatrix_csv("# items x attributes\n1,0\n\n0,1\n1,1\n");
    CHECK(Q == QMatrix({{1, 0}, {0, 1}, {1, 1}}));
    CHECK(io::parse_qmatrix_csv(io::format_qmatrix_csv(Q)) == Q);
}

TEST_CASE("CSV errors carry a location") {
    try {
        io::parse_qmatrix_csv("1,0\n0,x\n");
        FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(io::parse_qmatrix_csv("1,0\n1\n"), io::ParseError);
    CHECK_THROWS_AS(io::parse_responses_csv("1,0\n1,0,1\n"), io::ParseError);
}

TEST_CASE("responses CSV round trip") {
    ResponseData d(3, {0, 5, 7, 2});
    auto back = io::parse_responses_csv(io::format_responses_csv(d));
    CHECK(back.items() == 3);
    CHECK(std::equal(back.patterns().begin(), back.patterns().end(), d.patterns().begin()));
}

TEST_CASE("JSON diagnostics") {
    try {
        io::parse_json("{\n  \"a\": ,\n}");
        FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("theta and proportions round trip") {
    std::mt19937_64 rng(1);
    auto th = random_theta(3, 2, rng);
    auto p = random_p(2, rng);
    auto th2 = io::theta_from_json(io::parse_json(io::theta_to_json(th).dump()));
    auto p2 = io::proportions_from_json(io::parse_json(io::proportions_to_json(p).dump()));
    CHECK(max_abs_diff(th, th2) == 0.0);
    CHECK(max_abs_diff(p, p2) == 0.0);
    CHECK(io::theta_to_json(th).at("column_order") == io::kColumnOrder);
}

TEST_CASE("item parameters round trip for every family") {
    std::mt19937_64 rng(2);
    QMatrix Q({{1, 0, 1}, {0, 1, 0}, {1, 1, 1}});
    for (Family f : {Family::DINA, Family::DINO, Family::GDINA, Family::LLM, Family::RRUM}) {
        auto params = random_params(Q, f, rng);
        auto back = io::item_params_from_json(io::parse_json(io::item_params_to_json(params, 3).dump()), 3);
        CHECK(max_abs_diff(theta_from_params(Q, params), theta_from_params(Q, back)) <= 1e-15);
    }
    CHECK_THROWS(io::item_from_json(io::json{{"family", "DINA"}, {"s", 0.1}}, 2));
}

TEST_CASE("pair JSON round trip keeps the distribution equality") {
    QMatrix Q({{1, 1}, {0, 1}});
    std::mt19937_64 rng(3);
    auto th = theta_from_params(Q, random_params(Q, Family::DINA, rng));
    auto pair = incomplete_counterexample(Q, th, random_p(2, rng));
    auto [a, b] = io::pair_points_from_json(io::parse_json(io::pair_to_json(pair).dump()));
    CHECK(distributions_equal(a, b) <= 1e-12);
    CHECK(parameter_distance(a, b) == doctest::Approx(pair.parameter_distance()));
}

TEST_CASE("design JSON round trip") {
    Prop2Design d;
    d.K = 2;
    d.extra_rows = {{1}};
    d.items.assign(5, Dina{0.2, 0.1});
    d.anchor1 = 0.2;
    d.anchor2 = 0.02;
    d.rho = 0.5;
    auto back = io::prop2_design_from_json(io::prop2_design_to_json(d));
    CHECK(back.K == 2);
    CHECK(back.extra_rows == d.extra_rows);
    CHECK(back.rho == 0.5);
    CHECK(back.anchor2 == 0.02);
    CHECK(back.items.size() == 5);
}

TEST_CASE("T-matrix CSV orders") {
    ThetaMatrix th(2, 1, {0.1, 0.8, 0.2, 0.9});
    auto t = build_tmatrix(th);
    auto bin = io::format_tmatrix_csv(t, false);
    auto graded = io::format_tmatrix_csv(t, true);
    CHECK(bin.find("r11") != std::string::npos);
    // J = 2: graded order equals binary order, so only headers may differ
    CHECK(std::count(bin.begin(), bin.end(), '\n') == std::count(graded.begin(), graded.end(), '\n'));
}

TEST_CASE("schemas cover every format") {
    auto s = io::schemas();
    for (const char* key : {"rlcm.theta", "rlcm.proportions", "rlcm.item_params", "rlcm.pair", "rlcm.prop2_design"})
        CHECK(s.contains(key));
}
