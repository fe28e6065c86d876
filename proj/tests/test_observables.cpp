#include "doctest.h"

#include "brst/io.hpp"
#include "brst/observables.hpp"
#include "fixtures.hpp"

using namespace brst;

namespace {

struct Built {
    LoadedTheory lt;
    IndexSplit split;
    ChargeExpansion charge;
};

Built build(const char* fixture, int cutoff = 3) {
    Built b;
    b.lt = loadFixture(fixture);
    Theory& th = b.lt.get();
    b.split = computeSplit(th);
    SolveOptions opts;
    opts.cutoff = cutoff;
    Omega1Params params = solveLowest(th, b.split, opts);
    Sp2Tensor pi = solveHigher(th, b.split, params, opts);
    b.charge = assembleAndVerify(th, b.split, params, pi, cutoff);
    return b;
}

} // namespace

TEST_CASE("first-class check with certificates") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();

    CHECK(checkFirstClass(th, th.qVar(1)).firstClass);   // spectator q2
    CHECK(checkFirstClass(th, th.model.T[0]).firstClass); // T itself

    FirstClassCheck bad = checkFirstClass(th, th.qVar(0));
    CHECK(!bad.firstClass);
    CHECK(bad.failingConstraint == 0);
    CHECK(bad.remainder == th.poly(1));  // {q1, p1} = 1 is not in the ideal

    CHECK_THROWS_AS(checkFirstClass(th, th.v(th.cat.ghostC(0, 0, 1, 0))), Error);
}

TEST_CASE("lifts on the irreducible model") {
    Built b = build("model_a.brst");
    Theory& th = b.lt.get();

    // phi0 = q2 commutes with Omega outright: K = 0
    ObservableLift l1 = liftObservable(th, b.split, b.charge, th.qVar(1), 3);
    CHECK(l1.K.isZero());
    CHECK(l1.residual.isZero());

    ObservableLift l2 = liftObservable(th, b.split, b.charge, th.pVar(0), 3);
    CHECK(l2.residualZeroToCutoff);
    CHECK(l2.residual.isZero());

    // restrict inverts the lift
    CHECK(restrictObservable(th, b.split, b.charge.params, l1.phiPrime) == th.qVar(1));
    CHECK(restrictObservable(th, b.split, b.charge.params, l2.phiPrime) == th.pVar(0));
    // ghost-free functions restrict to themselves; pure ghost terms die
    CHECK(restrictObservable(th, b.split, b.charge.params, th.qVar(1) * th.qVar(1)) ==
          th.qVar(1) * th.qVar(1));
    CHECK(restrictObservable(th, b.split, b.charge.params,
                             th.v(th.cat.ghostC(0, 0, 1, 0)) * th.v(th.cat.pi(0, 0, 0, 0)))
              .isZero());

    // rejection with certificate
    CHECK_THROWS_WITH_AS(liftObservable(th, b.split, b.charge, th.qVar(0), 3),
                         doctest::Contains("does not reduce to zero"), Error);
}

TEST_CASE("homomorphism identities on the irreducible model") {
    Built b = build("model_a.brst");
    Theory& th = b.lt.get();
    ObservableLift lq = liftObservable(th, b.split, b.charge, th.qVar(1), 3);
    ObservableLift lp = liftObservable(th, b.split, b.charge, th.pVar(1), 3);

    HomomorphismReport rep = verifyHomomorphism(th, b.split, b.charge, lq, lp);
    CHECK(rep.bracketEqual);
    CHECK(rep.productEqual);
    // the bracket relation evaluates to {q2, p2} = 1 on both sides
    GradedPoly br = poissonBracket(lq.phiPrime, lp.phiPrime);
    CHECK(restrictObservable(th, b.split, b.charge.params, br) == th.poly(1));

    // lifts of constants multiply like constants
    ObservableLift lc = liftObservable(th, b.split, b.charge, th.poly(5), 3);
    CHECK(lc.K.isZero());
    HomomorphismReport rep2 = verifyHomomorphism(th, b.split, b.charge, lc, lp);
    CHECK(rep2.productEqual);
}

TEST_CASE("lifts on the reducible model") {
    Built b = build("model_b.brst");
    Theory& th = b.lt.get();
    for (const GradedPoly& phi : {th.qVar(2), th.pVar(2), th.pVar(0)}) {
        ObservableLift l = liftObservable(th, b.split, b.charge, phi, 3);
        CHECK(l.residual.isZero());
        CHECK(restrictObservable(th, b.split, b.charge.params, l.phiPrime) == phi);
        if (l.phiPrime.ngh()) CHECK(l.phiPrime.ngh().value() == 0);
    }
    ObservableLift l1 = liftObservable(th, b.split, b.charge, th.qVar(2), 3);
    ObservableLift l2 = liftObservable(th, b.split, b.charge, th.pVar(2), 3);
    HomomorphismReport rep = verifyHomomorphism(th, b.split, b.charge, l1, l2);
    CHECK(rep.bracketEqual);
    CHECK(rep.productEqual);
}

TEST_CASE("lifts on the curved model need ghost corrections") {
    Built b = build("model_d.brst");
    Theory& th = b.lt.get();

    // p1 generates a nontrivial correction: {Omega, p1} != 0
    ObservableLift lp = liftObservable(th, b.split, b.charge, th.pVar(0), 3);
    CHECK(!lp.K.isZero());
    CHECK(lp.residualZeroToCutoff);
    CHECK(restrictObservable(th, b.split, b.charge.params, lp.phiPrime) == th.pVar(0));
    // boundary condition: the correction has no ghost-free part
    CHECK(lp.K.ghostDegreePart(0).isZero());

    // T2 lifts as well
    ObservableLift lt2 = liftObservable(th, b.split, b.charge, th.model.T[1], 3);
    CHECK(lt2.residualZeroToCutoff);
    CHECK(restrictObservable(th, b.split, b.charge.params, lt2.phiPrime) == th.model.T[1]);

    HomomorphismReport rep = verifyHomomorphism(th, b.split, b.charge, lp, lt2);
    CHECK(rep.bracketEqual);
    CHECK(rep.productEqual);

    // sigma-bar kills the primed correction (boundary condition pps2)
    PrimedWorld pw(th, b.split, b.charge.params);
    GradedPoly Kp = pw.toPrimed(lp.K);
    GradedPoly sbar = pw.sigma(1).apply(pw.sigma(2).apply(Kp)) -
                      pw.sigma(2).apply(pw.sigma(1).apply(Kp));
    CHECK(sbar.isZero());
}
