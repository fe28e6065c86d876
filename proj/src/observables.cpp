#include "brst/observables.hpp"

namespace brst {

FirstClassCheck checkFirstClass(const Theory& th, const GradedPoly& phi0) {
    for (VarId v : phi0.support())
        if (th.cat.info(v).kind != VarKind::Xi)
            throw Error("checkFirstClass: observable must depend on xi only");
    FirstClassCheck out;
    out.firstClass = true;
    for (size_t a = 0; a < th.model.T.size(); ++a) {
        GradedPoly br = poissonBracket(phi0, th.model.T[a]);
        ReductionResult red = reduceModulo(br, th.model.T);
        if (!red.remainder.isZero()) {
            out.firstClass = false;
            out.failingConstraint = static_cast<int>(a);
            out.remainder = red.remainder;
            return out;
        }
    }
    return out;
}

ObservableLift liftObservable(Theory& th, const IndexSplit& split, const ChargeExpansion& charge,
                              const GradedPoly& phi0, int cutoff) {
    FirstClassCheck fc = checkFirstClass(th, phi0);
    if (!fc.firstClass)
        throw Error("liftObservable: {phi0, T_" + std::to_string(fc.failingConstraint) +
                    "} does not reduce to zero modulo the constraints");

    KoszulOps ops(th, charge.params);
    PrimedWorld pw(th, split, charge.params);
    Sp2Tensor omega = ops.omega1Tensor() + charge.pi;

    Sp2Tensor br(&th.cat, 1);
    br.at(1, 0) = poissonBracket(omega.at(1, 0), phi0);
    br.at(0, 1) = poissonBracket(omega.at(0, 1), phi0);
    Sp2Tensor brP = pw.toPrimed(br).ghostDegreeAtMost(cutoff);

    auto step = [&](const GradedPoly& kP) {
        GradedPoly K = pw.fromPrimed(kP);
        Sp2Tensor AK = ops.operatorA(K);
        Sp2Tensor adK(&th.cat, 1);
        adK.at(1, 0) = poissonBracket(charge.pi.at(1, 0), K);
        adK.at(0, 1) = poissonBracket(charge.pi.at(0, 1), K);
        Sp2Tensor tot = pw.toPrimed(AK + adK).ghostDegreeAtMost(cutoff);
        return pw.deltaPlus(tot).at(0, 0);
    };

    GradedPoly seed = -pw.deltaPlus(brP).at(0, 0);
    GradedPoly Kp = seed, cur = seed;
    const int maxIter = 60;
    int it = 0;
    while (!cur.isZero()) {
        if (++it > maxIter) throw Error("liftObservable: iteration did not stabilize");
        cur = -step(cur);
        Kp += cur;
    }

    ObservableLift lift;
    lift.phi0 = phi0;
    lift.K = pw.fromPrimed(Kp);
    lift.phiPrime = phi0 + lift.K;
    lift.cutoff = cutoff;
    lift.residual = Sp2Tensor(&th.cat, 1);
    lift.residual.at(1, 0) = poissonBracket(omega.at(1, 0), lift.phiPrime);
    lift.residual.at(0, 1) = poissonBracket(omega.at(0, 1), lift.phiPrime);
    lift.residualZeroToCutoff = lift.residual.ghostDegreeAtMost(cutoff).isZero();
    return lift;
}

GradedPoly restrictObservable(Theory& th, const IndexSplit& split, const Omega1Params& params,
                              const GradedPoly& phiPrime) {
    PrimedWorld pw(th, split, params);
    GradedPoly xp = pw.toPrimed(phiPrime);
    GradedPoly kept(&th.cat);
    for (const auto& [m, c] : xp.terms()) {
        bool keep = true;
        for (const auto& f : m) {
            VarKind k = th.cat.info(f.var).kind;
            if (k == VarKind::MomentumPPrime || k == VarKind::LambdaPrime ||
                k == VarKind::GhostC || k == VarKind::Pi) {
                keep = false;
                break;
            }
        }
        if (keep) kept.addTerm(m, c);
    }
    return pw.fromPrimed(kept);
}

HomomorphismReport verifyHomomorphism(Theory& th, const IndexSplit& split,
                                      const ChargeExpansion& charge, const ObservableLift& l1,
                                      const ObservableLift& l2) {
    HomomorphismReport rep;
    GradedPoly br = poissonBracket(l1.phiPrime, l2.phiPrime);
    GradedPoly lhs = restrictObservable(th, split, charge.params, br);
    GradedPoly rhs = poissonBracket(restrictObservable(th, split, charge.params, l1.phiPrime),
                                    restrictObservable(th, split, charge.params, l2.phiPrime));
    rep.bracketEqual = (lhs == rhs);
    GradedPoly prod = l1.phiPrime * l2.phiPrime;
    GradedPoly plhs = restrictObservable(th, split, charge.params, prod);
    GradedPoly prhs = restrictObservable(th, split, charge.params, l1.phiPrime) *
                      restrictObservable(th, split, charge.params, l2.phiPrime);
    rep.productEqual = (plhs == prhs);
    return rep;
}

} // namespace brst
