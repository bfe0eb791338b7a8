#include <doctest.h>

#include "generators.hpp"
#include "exset/interval.hpp"

using namespace exset;

TEST_CASE("pi enclosure width and containment") {
    // oracle: 3.14159265 < pi < 3.14159266
    Rat lo(314159265, 100000000), hi(314159266, 100000000);

    RatInterval p2 = pi_enclosure(2);
    CHECK(p2.lo >= Rat(3));
    CHECK(p2.hi <= Rat(13, 4));
    CHECK(p2.lo <= hi);
    CHECK(p2.hi >= lo);

    RatInterval p10 = pi_enclosure(10);
    CHECK(p10.width() <= Rat(1, 1024));
    CHECK(p10.lo <= hi);
    CHECK(p10.hi >= lo);

    for (unsigned p = 2; p <= 40; p += 7) {
        RatInterval a = pi_enclosure(p), b = pi_enclosure(p + 1);
        CHECK(a.width() <= pow2(-static_cast<long>(p)));
        CHECK(b.intersect(a).subset_of(a));  // nesting after canonical intersection
        CHECK(b.subset_of(a));               // Machin brackets nest outright
    }
}

TEST_CASE("enclose") {
    PiExpr oi(GaussRat(1, 1));
    ComplexBox b = enclose(oi, 5);
    CHECK(b.re.lo == Rat(1));
    CHECK(b.re.hi == Rat(1));
    CHECK(b.im.lo == Rat(1));
    CHECK(b.im.hi == Rat(1));

    ComplexBox bp = enclose(PiExpr::pi_power(1), 12);
    RatInterval pi = pi_enclosure(12);
    CHECK(bp.re.lo == pi.lo);
    CHECK(bp.re.hi == pi.hi);
    CHECK(bp.im.lo == Rat(0));
    CHECK(bp.im.hi == Rat(0));

    // pi - 22/7 is strictly negative
    PiExpr v = PiExpr::pi_power(1) - PiExpr(GaussRat{Rat(22, 7), Rat(0)});
    ComplexBox bn = enclose(v, 12);
    CHECK(bn.re.hi < Rat(0));
}

TEST_CASE("value membership of midpoint evaluations") {
    testgen::Rng g(7);
    for (int i = 0; i < 25; ++i) {
        PiExpr v = testgen::pi_expr(g);
        for (unsigned p : {8u, 16u, 32u}) {
            RatInterval pi = pi_enclosure(p);
            Rat pi_hat = (pi.lo + pi.hi) / Rat(2);
            GaussRat val(0);
            Rat pk(1);
            for (unsigned k = 0; k < v.coeffs().size(); ++k) {
                val = val + GaussRat{v.coeff(k).re * pk, v.coeff(k).im * pk};
                pk = pk * pi_hat;
            }
            CHECK(enclose(v, p).contains(val));
        }
    }
}

TEST_CASE("cert_abs_lt") {
    CHECK(cert_abs_lt(PiExpr(GaussRat{Rat(1, 2), Rat(0)}), Rat(1), 64) == CertResult::Proved);
    CHECK(cert_abs_lt(PiExpr::pi_power(1), Rat(3), 64) == CertResult::Disproved);
    CHECK(cert_abs_lt(PiExpr::pi_power(1) - PiExpr::pi_power(1), Rat(1, 1000), 64) ==
          CertResult::Proved);
    // exact boundary is undecidable
    CHECK(cert_abs_lt(PiExpr(GaussRat(1)), Rat(1), 64) == CertResult::Undecided);
    CHECK(cert_abs_lt(PiExpr::pi_power(1), Rat(4), 64) == CertResult::Proved);
}

TEST_CASE("cert_abs_lt soundness under refinement") {
    testgen::Rng g(11);
    for (int i = 0; i < 25; ++i) {
        PiExpr v = testgen::pi_expr(g);
        Rat bound = testgen::rat(g).abs() + Rat(1, 3);
        CertResult low = cert_abs_lt(v, bound, 16);
        CertResult high = cert_abs_lt(v, bound, 256);
        if (low == CertResult::Proved) CHECK(high == CertResult::Proved);
        if (low == CertResult::Disproved) CHECK(high == CertResult::Disproved);
    }
}
