#include <doctest.h>

#include "generators.hpp"
#include "exset/bundle.hpp"

using namespace exset;

namespace {

PointSpec spec_at(Point u, TargetKind kind = TargetKind::GaussianK, unsigned pi_pow = 0) {
    PointSpec ps;
    ps.coords = std::move(u);
    ps.selector.kind = kind;
    ps.selector.pi_power = pi_pow;
    return ps;
}

// achieved base value lies in the point's target set
void check_membership(const FunctionBundle& b) {
    for (const auto& ps : b.specs) {
        const PiExpr& y = b.achieved_base.at(ps.coords);
        switch (ps.selector.kind) {
            case TargetKind::GaussianK:
                CHECK(y.is_pi_free());
                CHECK(y.as_gauss().in_K());
                break;
            case TargetKind::PiPowerScaled:
                CHECK(y.pi_degree() == static_cast<int>(ps.selector.pi_power));
                for (unsigned k = 0; k < ps.selector.pi_power; ++k)
                    CHECK(y.coeff(k).is_zero());
                CHECK(y.coeff(ps.selector.pi_power).in_K());
                break;
            case TargetKind::ExplicitValue:
                CHECK(y == ps.selector.explicit_value);
                break;
        }
        CHECK(y == ps.selector.shift +
                       b.pinned.at(ps.coords).scalar_mul(ps.selector.scale));
    }
}

}  // namespace

TEST_CASE("support masks and projections") {
    Point u{GaussRat(1), GaussRat(0), GaussRat(2, 3)};
    CHECK(support_mask(u) == 0b101u);
    CHECK(project_to_mask(u, 0b001) == Point{GaussRat(1), GaussRat(0), GaussRat(0)});
    CHECK(restrict_to_mask(u, 0b101) == Point{GaussRat(1), GaussRat(2, 3)});
    CHECK(support_mask(Point(2, GaussRat(0))) == 0u);
}

TEST_CASE("projection closure") {
    // {(1,2)} closes to {(1,2),(1,0),(0,2),(0,0)}
    auto closed = projection_closure({spec_at({GaussRat(1), GaussRat(2)})}, 2);
    CHECK(closed.size() == 4);
    std::map<Point, PointRole, PointLess> roles;
    for (const auto& s : closed) roles[s.coords] = s.role;
    CHECK(roles.count(Point{GaussRat(1), GaussRat(0)}));
    CHECK(roles.count(Point{GaussRat(0), GaussRat(2)}));
    CHECK(roles.count(Point{GaussRat(0), GaussRat(0)}));

    // idempotent
    auto twice = projection_closure(closed, 2);
    CHECK(twice.size() == closed.size());

    // commutes with coordinatewise conjugation
    Point c{GaussRat(0, 1), GaussRat(2)};
    auto a = projection_closure({spec_at(c)}, 2);
    auto bset = projection_closure({spec_at(conj_point(c))}, 2);
    std::map<Point, bool, PointLess> conj_pts;
    for (const auto& s : bset) conj_pts[s.coords] = true;
    for (const auto& s : a) CHECK(conj_pts.count(conj_point(s.coords)));

    // empty input still gains the origin
    CHECK(projection_closure({}, 3).size() == 1);

    CHECK_THROWS_AS(projection_closure({spec_at({GaussRat(1)}), spec_at({GaussRat(1)})}, 1),
                    DuplicatePoint);
}

TEST_CASE("single-variable bundle reproduces the staged run") {
    PointSpec origin = spec_at({GaussRat(0)}, TargetKind::ExplicitValue);
    origin.selector.explicit_value = PiExpr(1);
    std::vector<PointSpec> specs{origin, spec_at({GaussRat(1)}), spec_at({GaussRat(2)})};
    FunctionBundle b =
        build_bundle(1, std::move(specs), 0, SelectorPolicy::SmallestDenominator);

    CHECK(b.a0 == GaussRat(1));
    CHECK(b.pinned.at({GaussRat(0)}) == PiExpr(1));
    CHECK(b.pinned.at({GaussRat(1)}) == PiExpr(GaussRat{Rat(3, 2), Rat(0)}));
    CHECK(b.pinned.at({GaussRat(2)}) == PiExpr(GaussRat{Rat(5, 2), Rat(0)}));
    CHECK(b.subfunctions.empty());

    // prefix = 1 + z/2 - z^2/8, the finalized part only
    CHECK(b.prefix.coeff({0}) == PiExpr(1));
    CHECK(b.prefix.coeff({1}) == PiExpr(GaussRat{Rat(1, 2), Rat(0)}));
    CHECK(b.prefix.coeff({2}) == PiExpr(GaussRat{Rat(-1, 8), Rat(0)}));
    CHECK(b.prefix.degree() == 2);

    check_membership(b);
    CHECK_THROWS_AS(b.eval_exact({GaussRat(7)}), NotPinned);
}

TEST_CASE("mixed-support bundle") {
    std::vector<PointSpec> specs{spec_at({GaussRat(1), GaussRat(2)}),
                                 spec_at({GaussRat(3), GaussRat(0)})};
    FunctionBundle b = build_bundle(2, projection_closure(std::move(specs), 2), 5);

    // subfunctions for both axes, one engine stage for the full-support point
    REQUIRE(b.subfunctions.count(0b01));
    REQUIRE(b.subfunctions.count(0b10));
    CHECK(b.engine.stages.size() == 1);
    CHECK(b.pinned.size() == 5);  // (1,2),(3,0),(1,0),(0,2),(0,0)
    check_membership(b);

    // prefix coefficients are pi-free values in K
    for (const auto& [e, c] : b.prefix.terms()) {
        CHECK(c.is_pi_free());
        CHECK(c.as_gauss().in_K());
    }

    // prefix decomposition: constant is a0, axis terms carry the shift-by-one
    CHECK(b.prefix.coeff(ExpVec{0, 0}) == PiExpr(b.a0));
    CHECK(b.prefix.coeff(ExpVec{1, 0}) ==
          PiExpr(b.subfunctions.at(0b01).a0) + b.engine.fstar.coeff(ExpVec{1, 0}));
}

TEST_CASE("bundle determinism and seed sensitivity") {
    auto make = [](uint64_t seed) {
        std::vector<PointSpec> specs{spec_at({GaussRat(1), GaussRat(1)}),
                                     spec_at({GaussRat(2), GaussRat(1)})};
        return build_bundle(2, projection_closure(std::move(specs), 2), seed);
    };
    FunctionBundle a = make(1), a2 = make(1), c = make(2);
    CHECK(a.prefix == a2.prefix);
    CHECK(a.pinned == a2.pinned);
    CHECK(a.prefix != c.prefix);
    check_membership(a);
    check_membership(c);
}

TEST_CASE("symmetrization") {
    // conjugation-closed: i and -i both constrained
    std::vector<PointSpec> specs{spec_at({GaussRat(0, 1)}), spec_at({GaussRat(0, -1)}),
                                 spec_at({GaussRat(2)})};
    FunctionBundle b = build_bundle(1, projection_closure(std::move(specs), 1), 3);
    PsiBundle psi = symmetrize(b);

    for (const auto& [e, c] : psi.prefix.terms()) {
        CHECK(c.as_gauss().im.is_zero());
        CHECK_FALSE(c.is_zero());
        CHECK(c.as_gauss() == GaussRat(b.prefix.coeff(e).as_gauss().re, Rat(0)));
    }

    // psi(conj u) = conj(psi(u)) on the pinned set
    for (const auto& [u, v] : psi.values) CHECK(psi.values.at(conj_point(u)) == v.conj());

    // real points keep real psi values
    CHECK(psi.values.at({GaussRat(2)}).conj() == psi.values.at({GaussRat(2)}));

    // an unpaired complex constraint cannot be symmetrized
    FunctionBundle lop =
        build_bundle(1, projection_closure({spec_at({GaussRat(0, 1)})}, 1), 3);
    CHECK_THROWS_AS(symmetrize(lop), NotConjClosed);
}

TEST_CASE("exceptional pipeline on a small instance") {
    std::vector<Point> s_pts{{GaussRat(0), GaussRat(0)}, {GaussRat(1), GaussRat(1)}};
    std::vector<Point> v_pts{{GaussRat(2), GaussRat(3)}};
    PipelineResult res = exceptional_pipeline(s_pts, v_pts, 2, 4);

    REQUIRE(res.report.size() == 3);
    for (const auto& pv : res.report) {
        if (pv.role == PointRole::Exceptional) {
            CHECK(pv.f_value.is_pi_free());
            CHECK_FALSE(pv.transcendental);
            CHECK(pv.psi_value.is_pi_free());
        } else {
            CHECK(pv.f_value.pi_degree() == 1);
            CHECK(pv.transcendental);
            CHECK(pv.psi_value.pi_degree() >= 1);
        }
    }
    // psi is real-rational on the emitted prefix
    for (const auto& [e, c] : res.psi.prefix.terms()) CHECK(c.as_gauss().im.is_zero());
    check_membership(res.bundle);
}

TEST_CASE("pipeline input validation") {
    Point o{GaussRat(0)}, one{GaussRat(1)}, i{GaussRat(0, 1)}, mi{GaussRat(0, -1)};
    CHECK_THROWS_AS(exceptional_pipeline({one}, {}, 1, 0), OriginMissing);
    CHECK_THROWS_AS(exceptional_pipeline({o, one}, {one}, 1, 0), OverlapSV);
    CHECK_THROWS_AS(exceptional_pipeline({o, one}, {i}, 1, 0), NotConjClosed);
    CHECK_THROWS_AS(exceptional_pipeline({o, i}, {}, 1, 0), NotConjClosed);
    CHECK_THROWS_AS(exceptional_pipeline({o}, {i, i}, 1, 0), DuplicatePoint);
    CHECK_NOTHROW(exceptional_pipeline({o}, {i, mi}, 1, 0));
}
