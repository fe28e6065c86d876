#include "brst/koszul.hpp"

namespace brst {

namespace {
// eps^{12} = +1 = -eps^{21}
int epsUp(int a, int b) { return (a == 1 && b == 2) ? 1 : (a == 2 && b == 1) ? -1 : 0; }
} // namespace

KoszulOps::KoszulOps(const Theory& th, const Omega1Params& params) : th_(&th), params_(params) {
    buildTables();
}

void KoszulOps::buildTables() {
    const Theory& th = *th_;
    const Catalog& cat = th.cat;
    const Model& mo = th.model;
    const int L = th.L();

    auto mEntry = [&](int s, int a, int r, int t) -> GradedPoly {
        if (r < 0 || t < 0) return GradedPoly(&cat);
        if (s >= 1 && s < static_cast<int>(params_.Mred.size()))
            return params_.Mred[static_cast<size_t>(s)][static_cast<size_t>(a)].at(r, t);
        return GradedPoly(&cat);
    };
    auto nEntry = [&](int s, int a, int r, int t) -> GradedPoly {
        if (r < 0 || t < 0) return GradedPoly(&cat);
        if (s >= 1 && s < static_cast<int>(params_.Nred.size()))
            return params_.Nred[static_cast<size_t>(s)][static_cast<size_t>(a)].at(r, t);
        return GradedPoly(&cat);
    };

    for (int a = 1; a <= 2; ++a) {
        for (int freePass = 0; freePass <= 1; ++freePass) {
            Derivation& D = freePass ? deltaFree_[a - 1] : delta_[a - 1];
            D.cat = &cat;
            D.parityShift = 1;
            // delta^a P_{alpha_0|(r,t)} = (a==1 ? r : t) T_{alpha_0}
            for (int al = 0; al < mo.mk(0); ++al) {
                for (int t = 0; t <= 1; ++t) {
                    int r = 1 - t;
                    int w = (a == 1) ? r : t;
                    if (w == 0) continue;
                    D.set(cat.momP(0, al, r, t), Rat(w) * mo.T[static_cast<size_t>(al)]);
                }
            }
            // stage s >= 1 momenta
            for (int s = 1; s <= L; ++s) {
                const Stage& st = mo.stages[static_cast<size_t>(s - 1)];
                for (int al = 0; al < mo.mk(s); ++al) {
                    for (int t = 0; t <= s + 1; ++t) {
                        int r = s + 1 - t;
                        GradedPoly val(&cat);
                        int w = (a == 1) ? r : t;
                        if (w == 0) continue;
                        int rr = (a == 1) ? r - 1 : r;
                        int tt = (a == 1) ? t : t - 1;
                        for (int b = 0; b < mo.mk(s - 1); ++b)
                            val += GradedPoly::variable(&cat, cat.momP(s - 1, b, rr, tt)) *
                                   st.Z[static_cast<size_t>(b)][static_cast<size_t>(al)];
                        if (!freePass) val += mEntry(s, al, rr, tt);
                        val *= frac(w, s + 1);
                        D.set(cat.momP(s, al, r, t), val);
                    }
                }
            }
            // lambda variables
            for (int s = 0; s <= L; ++s) {
                for (int al = 0; al < mo.mk(s); ++al) {
                    for (int t = 0; t <= s; ++t) {
                        int r = s - t;
                        GradedPoly val(&cat);
                        if (a == 1) {
                            val += GradedPoly::variable(&cat, cat.momP(s, al, r, t + 1));
                        } else {
                            val -= GradedPoly::variable(&cat, cat.momP(s, al, r + 1, t));
                        }
                        int w = (a == 1) ? r : t;
                        if (s >= 1 && w > 0) {
                            int rr = (a == 1) ? r - 1 : r;
                            int tt = (a == 1) ? t : t - 1;
                            GradedPoly inner(&cat);
                            const Stage& st = mo.stages[static_cast<size_t>(s - 1)];
                            for (int b = 0; b < mo.mk(s - 1); ++b)
                                inner += GradedPoly::variable(&cat, cat.lambda(s - 1, b, rr, tt)) *
                                         st.Z[static_cast<size_t>(b)][static_cast<size_t>(al)];
                            if (!freePass) inner -= nEntry(s, al, rr, tt);
                            val -= frac(w, s + 1) * inner;
                        }
                        D.set(cat.lambda(s, al, r, t), val);
                    }
                }
            }
        }
    }

    for (int a = 1; a <= 2; ++a) {
        omega1_[a - 1] = assemble(delta_[0], delta_[1], a, false);
        freeOmega1_[a - 1] = assemble(deltaFree_[0], deltaFree_[1], a, false);
        vB_[a - 1] = assemble(deltaFree_[0], deltaFree_[1], a, true);
    }
    (void)epsUp;
}

GradedPoly KoszulOps::assemble(const Derivation& d1, const Derivation& d2, int a,
                               bool skipStage0Lambda) const {
    const Catalog& cat = th_->cat;
    const Derivation& D = (a == 1) ? d1 : d2;
    GradedPoly out(&cat);
    for (VarId v = 0; v < cat.size(); ++v) {
        const VarInfo& vi = cat.info(v);
        const GradedPoly* val = D.entry(v);
        if (!val) continue;
        if (vi.kind == VarKind::MomentumP) {
            out += (*val) * GradedPoly::variable(&cat, vi.conj);
        } else if (vi.kind == VarKind::Lambda) {
            if (skipStage0Lambda && vi.stage == 0) continue;
            out += (*val) * GradedPoly::variable(&cat, vi.conj);
        }
    }
    return out;
}

Sp2Tensor KoszulOps::omega1Tensor() const {
    Sp2Tensor r(&th_->cat, 1);
    r.at(1, 0) = omega1_[0];
    r.at(0, 1) = omega1_[1];
    return r;
}

Sp2Tensor KoszulOps::deltaOnScalar(const GradedPoly& x) const {
    Sp2Tensor r(&th_->cat, 1);
    r.at(1, 0) = delta_[0].apply(x);
    r.at(0, 1) = delta_[1].apply(x);
    return r;
}

Sp2Tensor KoszulOps::deltaLift(const Sp2Tensor& x) const {
    OperatorPair u{[this](const GradedPoly& p) { return delta_[0].apply(p); },
                   [this](const GradedPoly& p) { return delta_[1].apply(p); }};
    return liftPair(u, x, /*normalized=*/false);
}

Sp2Tensor KoszulOps::deltaLiftNormalized(const Sp2Tensor& x) const {
    OperatorPair u{[this](const GradedPoly& p) { return delta_[0].apply(p); },
                   [this](const GradedPoly& p) { return delta_[1].apply(p); }};
    return liftPair(u, x, /*normalized=*/true);
}

GradedPoly KoszulOps::applyA(int a, const GradedPoly& x) const {
    GradedPoly out(&th_->cat);
    for (int p = 0; p <= 1; ++p) {
        GradedPoly xp = x.parityPart(p);
        if (xp.isZero()) continue;
        GradedPoly term = xiBracket(omega1_[a - 1], xp);
        GradedPoly dia = diamondBracket(xp, omega1_[a - 1]);
        if (p & 1) term += dia;
        else term -= dia;
        out += term;
    }
    return out;
}

Sp2Tensor KoszulOps::operatorA(const GradedPoly& x) const {
    Sp2Tensor r(&th_->cat, 1);
    r.at(1, 0) = applyA(1, x);
    r.at(0, 1) = applyA(2, x);
    return r;
}

Sp2Tensor KoszulOps::liftA(const Sp2Tensor& x) const {
    OperatorPair u{[this](const GradedPoly& p) { return applyA(1, p); },
                   [this](const GradedPoly& p) { return applyA(2, p); }};
    return liftPair(u, x, /*normalized=*/false);
}

GradedPoly KoszulOps::applyB(int a, const GradedPoly& x) const {
    return diamondBracket(x, vB_[a - 1]);
}

Sp2Tensor KoszulOps::operatorB(const GradedPoly& x) const {
    Sp2Tensor r(&th_->cat, 1);
    r.at(1, 0) = applyB(1, x);
    r.at(0, 1) = applyB(2, x);
    return r;
}

Sp2Tensor KoszulOps::computeF() const {
    Sp2Tensor F(&th_->cat, 2);
    F.at(2, 0) = xiBracket(omega1_[0], omega1_[0]);
    F.at(1, 1) = xiBracket(omega1_[0], omega1_[1]);
    F.at(0, 2) = xiBracket(omega1_[1], omega1_[1]);
    return F;
}

Sp2Tensor KoszulOps::computeQ() const {
    Sp2Tensor Q(&th_->cat, 2);
    GradedPoly d1v1 = deltaFree_[0].apply(freeOmega1_[0]);
    GradedPoly d1v2 = deltaFree_[0].apply(freeOmega1_[1]);
    GradedPoly d2v1 = deltaFree_[1].apply(freeOmega1_[0]);
    GradedPoly d2v2 = deltaFree_[1].apply(freeOmega1_[1]);
    Q.at(2, 0) = d1v1 + d1v1;
    Q.at(1, 1) = d1v2 + d2v1;
    Q.at(0, 2) = d2v2 + d2v2;
    return Q;
}

Sp2Tensor KoszulOps::computeW() const {
    Sp2Tensor W(&th_->cat, 1);
    W.at(1, 0) = omega1_[0] - freeOmega1_[0];
    W.at(0, 1) = omega1_[1] - freeOmega1_[1];
    return W;
}

Sp2Tensor KoszulOps::lowestResidual() const {
    Sp2Tensor W = computeW();
    Sp2Tensor Q = computeQ();
    const GradedPoly& w1 = W.at(1, 0);
    const GradedPoly& w2 = W.at(0, 1);
    Sp2Tensor R(&th_->cat, 2);
    GradedPoly d1w1 = delta_[0].apply(w1), d1w2 = delta_[0].apply(w2);
    GradedPoly d2w1 = delta_[1].apply(w1), d2w2 = delta_[1].apply(w2);
    R.at(2, 0) = d1w1 + d1w1 + Q.at(2, 0) + applyB(1, w1) + applyB(1, w1);
    R.at(1, 1) = d1w2 + d2w1 + Q.at(1, 1) + applyB(2, w1) + applyB(1, w2);
    R.at(0, 2) = d2w2 + d2w2 + Q.at(0, 2) + applyB(2, w2) + applyB(2, w2);
    return R;
}

Sp2Tensor KoszulOps::ruuResidual() const {
    Sp2Tensor R(&th_->cat, 2);
    GradedPoly d1o1 = delta_[0].apply(omega1_[0]);
    GradedPoly d1o2 = delta_[0].apply(omega1_[1]);
    GradedPoly d2o1 = delta_[1].apply(omega1_[0]);
    GradedPoly d2o2 = delta_[1].apply(omega1_[1]);
    R.at(2, 0) = d1o1 + d1o1;
    R.at(1, 1) = d1o2 + d2o1;
    R.at(0, 2) = d2o2 + d2o2;
    return R;
}

Sp2Tensor buildOmega1(const Theory& th, const Omega1Params& params) {
    return KoszulOps(th, params).omega1Tensor();
}

Omega1Params closedFormL2Params(const Theory& th) {
    if (th.L() != 2) throw Error("closedFormL2Params: model is not second-stage reducible");
    const Catalog& cat = th.cat;
    const Model& mo = th.model;
    const AFunctions* af = nullptr;
    for (const auto& a : mo.aFuns)
        if (a.k == 0) af = &a;
    if (!af) throw Error("closedFormL2Params: no A-functions for k=0");

    Omega1Params p = Omega1Params::zeros(th);
    const int m0 = mo.mk(0);
    const int m2 = mo.mk(2);

    auto pVar = [&](int a0, int idx) {
        // P_{alpha_0 | a} for single Sp(2) index value idx in {1,2}
        return GradedPoly::variable(&cat, cat.momP(0, a0, idx == 1 ? 1 : 0, idx == 1 ? 0 : 1));
    };
    auto lamVar = [&](int a0) { return GradedPoly::variable(&cat, cat.lambda(0, a0, 0, 0)); };

    // pair-form components on tuples, then reduced via the a=1 route; the
    // a=2 route must agree (checked).
    for (int a2 = 0; a2 < m2; ++a2) {
        // M^a on 3-tuples
        auto mPair = [&](int a, const std::vector<int>& tup) {
            GradedPoly acc(&cat);
            std::vector<int> rot = tup;
            for (int k = 0; k < 3; ++k) {
                int a1 = rot[0], a2i = rot[1], a3 = rot[2];
                if (a3 == a) {
                    for (int al = 0; al < m0; ++al) {
                        for (int be = 0; be < m0; ++be) {
                            const GradedPoly& A =
                                af->A[static_cast<size_t>(be)][static_cast<size_t>(al)][static_cast<size_t>(a2)];
                            if (A.isZero()) continue;
                            GradedPoly term = pVar(al, a1) * pVar(be, a2i) * A;
                            if (mo.tParity[static_cast<size_t>(al)] & 1) term = -term;
                            acc += term;
                        }
                    }
                }
                std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            }
            return frac(1, 6) * acc;
        };
        // The relative sign of the N block is fixed by the lowest-order
        // equation itself: the pi-sector cancellation needs
        // delta^1 N^1_(r,t) = -M^1_(r,t+1), hence the -1/6.
        auto nPair = [&](int a, const std::vector<int>& tup) {
            GradedPoly acc(&cat);
            int combos[2][2] = {{tup[0], tup[1]}, {tup[1], tup[0]}};
            for (auto& cmb : combos) {
                if (cmb[1] != a) continue;
                for (int al = 0; al < m0; ++al) {
                    for (int be = 0; be < m0; ++be) {
                        const GradedPoly& A =
                            af->A[static_cast<size_t>(be)][static_cast<size_t>(al)][static_cast<size_t>(a2)];
                        if (A.isZero()) continue;
                        GradedPoly term = lamVar(al) * pVar(be, cmb[0]) * A;
                        if (mo.tParity[static_cast<size_t>(al)] & 1) term = -term;
                        acc += term;
                    }
                }
            }
            return frac(-1, 6) * acc;
        };

        auto tupleOf = [](int r, int t) {
            std::vector<int> tup;
            for (int i = 0; i < r; ++i) tup.push_back(1);
            for (int i = 0; i < t; ++i) tup.push_back(2);
            return tup;
        };

        // reduced M_{alpha_2|(r,t)}, r+t = 2:  (3/(r+1)) M^1_{(r+1,t)}
        Sp2Tensor Mred(&cat, 2);
        for (int t = 0; t <= 2; ++t) {
            int r = 2 - t;
            GradedPoly viaA1 = frac(3, r + 1) * mPair(1, tupleOf(r + 1, t));
            GradedPoly viaA2 = frac(3, t + 1) * mPair(2, tupleOf(r, t + 1));
            if (viaA1 != viaA2) throw Error("closedFormL2Params: inconsistent M reduction");
            Mred.at(r, t) = viaA1;
        }
        // reduced N_{alpha_2|(r,t)}, r+t = 1:  N^1_{(r+1,t)} + N^2_{(r,t+1)}
        Sp2Tensor Nred(&cat, 1);
        for (int t = 0; t <= 1; ++t) {
            int r = 1 - t;
            Nred.at(r, t) = nPair(1, tupleOf(r + 1, t)) + nPair(2, tupleOf(r, t + 1));
        }
        p.Mred[2][static_cast<size_t>(a2)] = Mred;
        p.Nred[2][static_cast<size_t>(a2)] = Nred;
    }
    return p;
}

} // namespace brst
