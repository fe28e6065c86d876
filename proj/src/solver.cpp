#include "brst/solver.hpp"

namespace brst {

namespace {

void checkFreeTerm(PrimedWorld& pw, const Sp2Tensor& y, const char* which) {
    if (y.isZero()) return;
    if (!pw.inV(y)) throw Error(std::string(which) + " free term is not in V");
    auto p = y.parity();
    if (!p || *p != 1) throw Error(std::string(which) + " free term must be odd");
    auto g = y.ngh();
    if (!g || *g != 1) throw Error(std::string(which) + " free term must have ngh 1");
    if (!pw.deltaPrimedLift(y).isZero())
        throw Error(std::string(which) + " free term is not delta-closed");
}

Sp2Tensor poissonPair(const Theory& th, const Sp2Tensor& x, const Sp2Tensor& y) {
    // rank-2 tensor with components {x^a, y^b}
    Sp2Tensor r(&th.cat, 2);
    r.at(2, 0) = poissonBracket(x.at(1, 0), y.at(1, 0));
    r.at(1, 1) = poissonBracket(x.at(1, 0), y.at(0, 1));
    r.at(0, 2) = poissonBracket(x.at(0, 1), y.at(0, 1));
    return r;
}

} // namespace

Omega1Params solveLowest(Theory& th, const IndexSplit& split, const SolveOptions& opts,
                         SolveStats* stats) {
    const int L = th.L();
    Omega1Params params = Omega1Params::zeros(th);
    if (stats) { stats->neumannTermsB = 0; stats->paramRounds = 0; }

    for (int round = 0; round <= L + 2; ++round) {
        PrimedWorld pw(th, split, params);
        KoszulOps ops(th, params);

        Sp2Tensor Yp = opts.freeTermY ? *opts.freeTermY : Sp2Tensor(&th.cat, 1);
        checkFreeTerm(pw, Yp, "Y'");

        Sp2Tensor Qp = pw.toPrimed(ops.computeQ());

        auto applyBHat = [&](const Sp2Tensor& Xp) {
            Sp2Tensor X = pw.fromPrimed(Xp);
            OperatorPair b{[&](const GradedPoly& p) { return ops.applyB(1, p); },
                           [&](const GradedPoly& p) { return ops.applyB(2, p); }};
            return pw.toPrimed(liftPair(b, X, /*normalized=*/false));
        };

        // W' = sum_m (-d+ B')^m (Y' - d+ Q'); the series must die within
        // L+1 terms (B' raises the constraint stage)
        Sp2Tensor Wp = Yp - pw.deltaPlus(Qp);
        Sp2Tensor cur = Wp;
        int terms = 0;
        while (!cur.isZero()) {
            if (terms > L + 1)
                throw Error("Neumann series for (I+d+B')^{-1} exceeded L+1 terms");
            cur = -pw.deltaPlus(applyBHat(cur));
            ++terms;
            Wp += cur;
        }
        if (stats) stats->neumannTermsB = std::max(stats->neumannTermsB, terms);

        if (Wp.maxGhostDegree() > 1)
            throw Error("solveLowest: W' left the ghost-degree-1 sector");

        // extraction: pair components are plain coordinate derivatives of W'
        Omega1Params next = Omega1Params::zeros(th);
        const Catalog& cat = th.cat;
        for (int s = 1; s <= L; ++s) {
            for (int al = 0; al < th.mk(s); ++al) {
                Sp2Tensor Mp(&cat, s), Np(&cat, s == 0 ? 0 : s - 1);
                for (int t = 0; t <= s; ++t) {
                    int r = s - t;
                    // two extraction routes must agree
                    GradedPoly via1 = frac(s + 1, r + 1) *
                                      Wp.at(1, 0).rightDerivative(cat.ghostC(s, al, r + 1, t));
                    GradedPoly via2 = frac(s + 1, t + 1) *
                                      Wp.at(0, 1).rightDerivative(cat.ghostC(s, al, r, t + 1));
                    if (via1 != via2)
                        throw Error("solveLowest: W' is not of the substituted (reduced) form");
                    Mp.at(r, t) = via1;
                }
                for (int t = 0; t <= s - 1; ++t) {
                    int r = s - 1 - t;
                    GradedPoly n1 = Wp.at(1, 0).rightDerivative(cat.pi(s, al, r + 1, t));
                    GradedPoly n2 = Wp.at(0, 1).rightDerivative(cat.pi(s, al, r, t + 1));
                    GradedPoly via1 = frac(s + 1, r + 1) * n1;
                    GradedPoly via2 = frac(s + 1, t + 1) * n2;
                    if (via1 != via2)
                        throw Error("solveLowest: W' is not of the substituted (reduced) form (N)");
                    Np.at(r, t) = n1 + n2;
                }
                // back-substitution to the original variables
                next.Mred[static_cast<size_t>(s)][static_cast<size_t>(al)] = pw.fromPrimed(Mp);
                next.Nred[static_cast<size_t>(s)][static_cast<size_t>(al)] = pw.fromPrimed(Np);
            }
        }
        if (stats) stats->paramRounds = round + 1;
        if (next == params) {
            auto errs = params.validate(th);
            if (!errs.empty()) throw Error("solveLowest produced invalid parameters: " + errs.front());
            if (!KoszulOps(th, params).lowestResidual().isZero())
                throw Error("solveLowest: parameters do not solve the lowest-order equation");
            return params;
        }
        params = next;
    }
    throw Error("solveLowest did not stabilize within L+2 rounds");
}

Sp2Tensor solveHigher(Theory& th, const IndexSplit& split, const Omega1Params& params,
                      const SolveOptions& opts) {
    const int cutoff = opts.cutoff;
    KoszulOps ops(th, params);
    PrimedWorld pw(th, split, params);

    Sp2Tensor Up = opts.freeTermUpsilon ? *opts.freeTermUpsilon : Sp2Tensor(&th.cat, 1);
    if (!Up.isZero()) {
        checkFreeTerm(pw, Up, "Upsilon");
        for (int t = 0; t <= 1; ++t)
            if (!Up.byT(t).ghostDegreeAtMost(1).isZero())
                throw Error("Upsilon must have (c,pi)-degree >= 2");
    }

    Sp2Tensor Fp = pw.toPrimed(ops.computeF()).ghostDegreeAtMost(cutoff);

    auto applyAHat = [&](const Sp2Tensor& Xp) {
        Sp2Tensor X = pw.fromPrimed(Xp);
        return pw.toPrimed(ops.liftA(X)).ghostDegreeAtMost(cutoff);
    };
    auto neumannA = [&](Sp2Tensor seed) {
        Sp2Tensor acc = seed, cur = std::move(seed);
        for (int it = 0; it < opts.maxIterations; ++it) {
            if (cur.isZero()) return acc;
            cur = -pw.deltaPlus(applyAHat(cur));
            acc += cur;
        }
        throw Error("Neumann series for (I+d+A')^{-1} did not terminate");
    };

    Sp2Tensor Pi0 = neumannA(Up - pw.deltaPlus(Fp));
    Sp2Tensor PiP = Pi0;
    for (int it = 0; it < opts.maxIterations; ++it) {
        Sp2Tensor Pi = pw.fromPrimed(PiP);
        Sp2Tensor brP = pw.toPrimed(poissonPair(th, Pi, Pi)).ghostDegreeAtMost(cutoff);
        Sp2Tensor nextP = Pi0 - neumannA(pw.deltaPlus(brP));
        if (nextP == PiP) {
            Sp2Tensor pi = pw.fromPrimed(PiP);
            for (int t = 0; t <= 1; ++t)
                if (!pi.byT(t).ghostDegreeAtMost(1).isZero())
                    throw Error("solveHigher: Pi acquired (c,pi)-degree <= 1 terms");
            return pi;
        }
        PiP = nextP;
    }
    throw Error("solveHigher did not stabilize within maxIterations");
}

ChargeExpansion assembleAndVerify(Theory& th, const IndexSplit& split,
                                  const Omega1Params& params, const Sp2Tensor& pi, int cutoff) {
    (void)split;
    KoszulOps ops(th, params);
    ChargeExpansion ch;
    ch.params = params;
    ch.omega1 = ops.omega1Tensor();
    ch.pi = pi;
    ch.cutoff = cutoff;
    Sp2Tensor omega = ch.omega1 + ch.pi;
    ch.residual = poissonPair(th, omega, omega);
    ch.residualZeroToCutoff = ch.residual.ghostDegreeAtMost(cutoff).isZero();
    ch.residualZeroExact = ch.residual.isZero();
    return ch;
}

} // namespace brst
