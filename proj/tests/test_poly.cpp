#include "doctest.h"

#include "brst/bracket.hpp"
#include "brst/io.hpp"
#include "fixtures.hpp"

using namespace brst;

TEST_CASE("product basics") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    GradedPoly one = th.poly(1);
    GradedPoly p1 = th.pVar(0), q1 = th.qVar(0);

    CHECK(one * p1 == p1);  // 1 * x = x

    // odd variables anticommute and square to zero
    GradedPoly th1 = th.v(th.cat.ghostC(0, 0, 1, 0));
    GradedPoly th2 = th.v(th.cat.momP(0, 0, 1, 0));
    CHECK(th1 * th2 == -(th2 * th1));
    CHECK((th1 * th1).isZero());

    // distributive expansion oracle, term by term
    GradedPoly lhs = (p1 + q1) * (p1 - q1);
    GradedPoly oracle = p1 * p1 - q1 * p1 + p1 * q1 - q1 * q1;
    CHECK(lhs == oracle);
    CHECK(lhs == p1 * p1 - q1 * q1);
}

TEST_CASE("derivative handedness") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    GradedPoly p1 = th.pVar(0), q1 = th.qVar(0);
    VarId vp1 = th.cat.xi(0);

    CHECK((p1 * q1).leftDerivative(vp1) == q1);
    CHECK(q1.leftDerivative(vp1).isZero());

    // odd pair: theta_c theta_q with the coordinate-side factor last
    VarId vP = th.cat.momP(0, 0, 1, 0), vc = th.cat.ghostC(0, 0, 1, 0);
    GradedPoly thP = th.v(vP), thc = th.v(vc);
    GradedPoly x = thP * thc;  // canonical order: P before c
    CHECK(x.rightDerivative(vc) == thP);
    CHECK(x.leftDerivative(vc) == -thP);
    CHECK(x.rightDerivative(vP) == -thc);
    CHECK(x.leftDerivative(vP) == thc);

    // even exponent rule
    GradedPoly p1sq = p1 * p1;
    CHECK(p1sq.leftDerivative(vp1) == Rat(2) * p1);
}

TEST_CASE("poisson bracket on generators") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    GradedPoly p1 = th.pVar(0), q1 = th.qVar(0), p2 = th.pVar(1);

    CHECK(poissonBracket(q1, p1) == th.poly(1));
    CHECK(poissonBracket(p1, p2).isZero());
    CHECK(poissonBracket(p1, q1) == th.poly(-1));

    // odd conjugate pair: both orders give +1
    GradedPoly thc = th.v(th.cat.ghostC(0, 0, 1, 0));
    GradedPoly thP = th.v(th.cat.momP(0, 0, 1, 0));
    CHECK(poissonBracket(thc, thP) == th.poly(1));
    CHECK(poissonBracket(thP, thc) == th.poly(1));

    CHECK(diamondBracket(thc, thP) == th.poly(1));
    CHECK(xiBracket(thc, thP).isZero());
}

TEST_CASE("algebra laws on random homogeneous samples") {
    auto lt = loadFixture("model_b.brst");
    Theory& th = lt.get();
    auto vars = unprimedVars(th);
    Rng rng(20140801);

    for (int i = 0; i < 40; ++i) {
        int ex = static_cast<int>(rng.below(2)), ey = static_cast<int>(rng.below(2)),
            ez = static_cast<int>(rng.below(2));
        GradedPoly x = sampleHomogeneous(th, vars, rng, ex);
        GradedPoly y = sampleHomogeneous(th, vars, rng, ey);
        GradedPoly z = sampleHomogeneous(th, vars, rng, ez);

        // supercommutativity and associativity
        GradedPoly xy = x * y;
        GradedPoly yx = y * x;
        CHECK(xy == ((ex & ey) ? -yx : yx));
        CHECK((x * y) * z == x * (y * z));

        // graded antisymmetry
        GradedPoly bxy = poissonBracket(x, y);
        GradedPoly byx = poissonBracket(y, x);
        CHECK(bxy == ((ex & ey) ? byx : -byx));

        // Leibniz {x, yz} = {x,y} z + (-1)^{ex ey} y {x,z}
        GradedPoly lhs = poissonBracket(x, y * z);
        GradedPoly rhs = bxy * z + ((ex & ey) ? -(y * poissonBracket(x, z)) : y * poissonBracket(x, z));
        CHECK(lhs == rhs);

        // graded Jacobi
        auto J = [&](const GradedPoly& a, const GradedPoly& b, const GradedPoly& c, int ea, int ec) {
            GradedPoly t = poissonBracket(a, poissonBracket(b, c));
            return (ea & ec) ? -t : t;
        };
        GradedPoly jac = J(x, y, z, ex, ez) + J(y, z, x, ey, ex) + J(z, x, y, ez, ey);
        CHECK(jac.isZero());

        // grade bookkeeping
        if (!bxy.isZero()) {
            CHECK(bxy.parity().value() == ((ex + ey) & 1));
            if (x.ngh() && y.ngh()) CHECK(bxy.ngh().value() == x.ngh().value() + y.ngh().value());
        }

        // bracket split identity
        GradedPoly split = xiBracket(x, y) + diamondBracket(x, y) -
                           ((ex & ey) ? -diamondBracket(y, x) : diamondBracket(y, x));
        CHECK(bxy == split);
    }
}

TEST_CASE("evalEven") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    GradedPoly p1 = th.pVar(0), q1 = th.qVar(0);
    GradedPoly x = p1 * p1 - q1 * q1;
    std::map<VarId, Rat> pt{{th.cat.xi(0), Rat(2)}, {th.cat.xi(2), Rat(1)}};
    CHECK(x.evalEven(pt) == th.poly(3));
    CHECK(GradedPoly(&th.cat).evalEven(pt).isZero());

    GradedPoly th1 = th.v(th.cat.ghostC(0, 0, 1, 0));
    GradedPoly y = th1 * p1;
    std::map<VarId, Rat> pt2{{th.cat.xi(0), Rat(3)}};
    CHECK(y.evalEven(pt2) == Rat(3) * th1);

    CHECK_THROWS_AS(x.evalEven(pt2), Error);  // q1 unassigned
}

TEST_CASE("canonical print and parse round trip") {
    auto lt = loadFixture("model_b.brst");
    Theory& th = lt.get();
    auto vars = unprimedVars(th);
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        GradedPoly x = randomPoly(th.cat, vars, rng, 4, 3);
        std::string s = printPoly(x);
        CHECK(parsePoly(th.cat, s) == x);
        CHECK(printPoly(parsePoly(th.cat, s)) == s);
    }
    CHECK(printPoly(GradedPoly(&th.cat)) == "0");
    CHECK(parsePoly(th.cat, "0").isZero());
    CHECK_THROWS_AS(parsePoly(th.cat, "p1 + nope"), Error);
}
