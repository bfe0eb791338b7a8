#include <doctest.h>

#include "generators.hpp"
#include "exset/io.hpp"

using namespace exset;

TEST_CASE("scalar serialization round trips") {
    CHECK(rat_str(Rat(3, 2)) == "3/2");
    CHECK(rat_str(Rat(-7)) == "-7/1");
    CHECK(rat_str(Rat(0)) == "0/1");
    CHECK(rat_from_json(json("4/6")) == Rat(2, 3));
    CHECK_THROWS_AS(rat_from_json(json("3/0")), BadRational);
    CHECK_THROWS_AS(rat_from_json(json(1.5)), BadRational);
    CHECK_THROWS_AS(gauss_from_json(json::array({"1/1"})), BadRational);

    testgen::Rng g(13);
    for (int i = 0; i < 25; ++i) {
        Rat r = testgen::rat(g);
        CHECK(rat_from_json(json(rat_str(r))) == r);
        GaussRat z = testgen::gauss(g);
        CHECK(gauss_from_json(gauss_to_json(z)) == z);
        PiExpr v = testgen::pi_expr(g);
        CHECK(piexpr_from_json(piexpr_to_json(v)) == v);
        MPoly p = testgen::mpoly(g, 1 + i % 3);
        CHECK(mpoly_from_json(mpoly_to_json(p)) == p);
        Point u = testgen::point(g, 2);
        CHECK(point_from_json(point_to_json(u)) == u);
    }
}

TEST_CASE("canonical term order in polynomial output") {
    MPoly p(2);
    p.add_term({1, 3}, PiExpr(1));
    p.add_term({1, 1}, PiExpr(2));
    p.add_term({3, 1}, PiExpr(3));
    json j = mpoly_to_json(p);
    // degree ascending, then lexicographically descending
    CHECK(j["terms"][0][0] == json::array({1, 1}));
    CHECK(j["terms"][1][0] == json::array({3, 1}));
    CHECK(j["terms"][2][0] == json::array({1, 3}));
}

TEST_CASE("problem parsing") {
    json j = {
        {"variables", 2},
        {"seed", 7},
        {"policy", "smallest-denominator"},
        {"points",
         json::array(
             {{{"coords", json::array({json::array({"1/1", "0/1"}),
                                       json::array({"2/1", "0/1"})})},
               {"target", {{"kind", "gaussian_k"}}}},
              {{"coords", json::array({json::array({"1/2", "0/1"}),
                                       json::array({"1/1", "0/1"})})},
               {"target", {{"kind", "pi_power"}, {"n", 2}}}},
              {{"coords", json::array({json::array({"0/1", "0/1"}),
                                       json::array({"0/1", "0/1"})})},
               {"target", {{"kind", "explicit"}, {"value", json::array({json::array({"1/1", "0/1"})})}}}}})}};
    ProblemFile f = parse_problem(j);
    CHECK(f.variables == 2);
    CHECK(f.seed == 7);
    CHECK(f.policy == SelectorPolicy::SmallestDenominator);
    CHECK(f.mode == RunMode::Prescribe);
    REQUIRE(f.points.size() == 3);
    CHECK(f.points[0].selector.kind == TargetKind::GaussianK);
    CHECK(f.points[1].selector.kind == TargetKind::PiPowerScaled);
    CHECK(f.points[1].selector.pi_power == 2);
    CHECK(f.points[2].selector.kind == TargetKind::ExplicitValue);
    CHECK(f.points[2].selector.explicit_value == PiExpr(1));
    CHECK(validate(f).empty());

    CHECK_THROWS(parse_problem(json{{"variables", 0}, {"points", json::array()}}));
    CHECK_THROWS(parse_problem(json{{"variables", 1}, {"mode", "other"}, {"points", json::array()}}));
    json badkind = j;
    badkind["points"][0]["target"]["kind"] = "mystery";
    CHECK_THROWS(parse_problem(badkind));
    json zero_pi = j;
    zero_pi["points"][1]["target"]["n"] = 0;
    CHECK_THROWS(parse_problem(zero_pi));
}

TEST_CASE("problem validation") {
    auto coords = [](const char* re1, const char* re2) {
        return json::array({json::array({re1, "0/1"}), json::array({re2, "0/1"})});
    };
    auto s_point = [&](const char* re1, const char* re2) {
        return json{{"coords", coords(re1, re2)}, {"role", "S"}};
    };

    json ok = {{"variables", 2},
               {"mode", "exceptional"},
               {"points", json::array({s_point("0/1", "0/1"), s_point("1/1", "1/1")})}};
    CHECK(validate(parse_problem(ok)).empty());

    json no_origin = ok;
    no_origin["points"].erase(0);
    auto errs = validate(parse_problem(no_origin));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("OriginMissing") == 0);

    json lopsided = ok;
    lopsided["points"].push_back(
        json{{"coords", json::array({json::array({"0/1", "1/1"}), json::array({"1/1", "0/1"})})},
             {"role", "S"}});
    errs = validate(parse_problem(lopsided));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("NotConjClosed") == 0);

    json dup = ok;
    dup["points"].push_back(s_point("1/1", "1/1"));
    errs = validate(parse_problem(dup));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("DuplicatePoint") == 0);

    json arity = ok;
    arity["points"].push_back(json{{"coords", json::array({json::array({"1/1", "0/1"})})},
                                   {"role", "S"}});
    errs = validate(parse_problem(arity));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("ArityMismatch") == 0);

    // prescribe-mode origin must be able to land in K
    json pi_origin = {
        {"variables", 1},
        {"points", json::array({{{"coords", json::array({json::array({"0/1", "0/1"})})},
                                 {"target", {{"kind", "pi_power"}, {"n", 1}}}}})}};
    errs = validate(parse_problem(pi_origin));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("OriginTargetNotInK") == 0);

    json too_many = {
        {"variables", 1},
        {"stages", 2},
        {"points", json::array({{{"coords", json::array({json::array({"1/1", "0/1"})})},
                                 {"target", {{"kind", "gaussian_k"}}}}})}};
    errs = validate(parse_problem(too_many));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("stages exceeds") == 0);
}

TEST_CASE("artifact serialization is deterministic") {
    std::vector<Point> pts{{GaussRat(1)}, {GaussRat(2)}};
    std::vector<TargetSelector> sels(2);
    ConstructionState st = run(1, pts, std::vector<PiExpr>(2, PiExpr(1)), sels, 0, 2,
                               SelectorPolicy::SmallestDenominator);

    json log = stagelog_engine_json(st);
    CHECK(log["finalized_degree"] == 2);
    CHECK(log["stages"].size() == 2);
    CHECK(log["stages"][0]["pinned_value"] == json::array({json::array({"3/2", "0/1"})}));
    CHECK(log["stages"][1]["delta0"] == json::array({json::array({"1/16", "0/1"})}));

    ConstructionState st2 = run(1, pts, std::vector<PiExpr>(2, PiExpr(1)), sels, 0, 2,
                                SelectorPolicy::SmallestDenominator);
    CHECK(log.dump(2) == stagelog_engine_json(st2).dump(2));

    Certificate cert = check_all(st);
    json cj = certificate_to_json(cert);
    CHECK(cj["pass"] == true);
    CHECK(cj["checks"].size() == cert.checks.size());

    PointSpec origin;
    origin.coords = {GaussRat(0), GaussRat(0)};
    PointSpec mixed;
    mixed.coords = {GaussRat(1), GaussRat(2)};
    FunctionBundle b =
        build_bundle(2, projection_closure({origin, mixed}, 2), 3);
    FunctionBundle b2 =
        build_bundle(2, projection_closure({origin, mixed}, 2), 3);
    CHECK(stagelog_bundle_json(b).dump(2) == stagelog_bundle_json(b2).dump(2));
    CHECK(stagelog_bundle_json(b)["subfunctions"].size() == b.subfunctions.size());
}
