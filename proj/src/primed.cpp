#include "brst/primed.hpp"

#include <sstream>

namespace brst {

namespace {
std::string famName(const char* base, int k, int a, int r, int t) {
    std::ostringstream os;
    os << base << "[" << k << "," << a << "|" << r << "," << t << "]";
    return os.str();
}
} // namespace

PrimedWorld::PrimedWorld(Theory& th, const IndexSplit& split, const Omega1Params& params)
    : th_(&th), split_(split) {
    fwd_.assign(static_cast<size_t>(th.cat.size()), std::nullopt);
    ensureVars();
    fwd_.resize(static_cast<size_t>(th_->cat.size()));
    bwd_.assign(static_cast<size_t>(th_->cat.size()), std::nullopt);
    buildXiChange();
    buildTables(params);
    buildDeltaSigma();

    // exact round trip on every generator that has a substitution
    for (VarId v = 0; v < th_->cat.size(); ++v) {
        if (fwd_[static_cast<size_t>(v)]) {
            GradedPoly back = fromPrimed(*fwd_[static_cast<size_t>(v)]);
            if (back != GradedPoly::variable(&th_->cat, v))
                throw Error("primed change of variables failed round trip on " + th_->cat.info(v).name);
        }
    }
    for (VarId v = 0; v < th_->cat.size(); ++v) {
        if (bwd_[static_cast<size_t>(v)]) {
            GradedPoly there = toPrimed(*bwd_[static_cast<size_t>(v)]);
            if (there != GradedPoly::variable(&th_->cat, v))
                throw Error("primed change of variables failed reverse round trip on " +
                            th_->cat.info(v).name);
        }
    }

    for (VarId v = 0; v < th_->cat.size(); ++v) {
        const VarInfo& vi = th_->cat.info(v);
        if (th_->cat.isPrimedKind(v) || vi.kind == VarKind::GhostC || vi.kind == VarKind::Pi)
            primedVars_.push_back(v);
    }
}

void PrimedWorld::ensureVars() {
    Theory& th = *th_;
    Catalog& cat = th.cat;
    const Model& mo = th.model;
    const int L = th.L();

    // default regularity coordinates when no F functions are given
    if (mo.F.empty() && split_.scriptA.empty()) {
        const auto& A0 = split_.A[0];
        QMatrix coeffs(static_cast<int>(A0.size()), 2 * mo.m);
        for (size_t i = 0; i < A0.size(); ++i) {
            const GradedPoly& T = mo.T[static_cast<size_t>(A0[i])];
            for (const auto& [mono, c] : T.terms()) {
                if (mono.size() == 1 && mono[0].exp == 1)
                    coeffs.at(static_cast<int>(i), cat.info(mono[0].var).base) = c;
                else if (!mono.empty() && totalDegree(mono) > 1)
                    throw Error("default regularity functions need affine T_{A0}; supply F");
            }
        }
        auto pivots = rowEchelonPivots(coeffs);
        if (pivots.size() != A0.size())
            throw Error("T_{A0} are not independent (rank " + std::to_string(pivots.size()) + ")");
        std::vector<bool> pivotCol(static_cast<size_t>(2 * mo.m), false);
        for (auto& [r, c] : pivots) pivotCol[static_cast<size_t>(c)] = true;
        for (int j = 0; j < 2 * mo.m; ++j)
            if (!pivotCol[static_cast<size_t>(j)]) split_.scriptA.push_back(j);
    } else if (split_.scriptA.empty()) {
        // user F functions must be single coordinates (kept simple: the
        // inverse substitution stays polynomial)
        for (const GradedPoly& f : mo.F) {
            if (f.termCount() != 1) throw Error("regularity functions must be single coordinates");
            const auto& [mono, c] = *f.terms().begin();
            if (mono.size() != 1 || mono[0].exp != 1 || c != 1)
                throw Error("regularity functions must be single coordinates");
            split_.scriptA.push_back(cat.info(mono[0].var).base);
        }
    }
    if (static_cast<int>(split_.scriptA.size() + split_.A[0].size()) != 2 * mo.m)
        throw Error("regularity: |scriptA| + |A0| != 2m");

    if (cat.find(VarKind::XiPrime, Sub::A0, 0, 0, 0, 0) != kNoVar) return;  // already built

    // xi'
    for (size_t i = 0; i < split_.scriptA.size(); ++i) {
        VarInfo vi;
        vi.kind = VarKind::XiPrime;
        vi.sub = Sub::ScriptA;
        vi.base = static_cast<int>(i);
        vi.parity = cat.info(cat.xi(split_.scriptA[i])).parity;
        vi.ngh = 0;
        vi.isMomentum = false;
        vi.resolution = false;
        vi.name = "xF[" + std::to_string(i) + "]";
        cat.add(vi);
    }
    for (size_t j = 0; j < split_.A[0].size(); ++j) {
        VarInfo vi;
        vi.kind = VarKind::XiPrime;
        vi.sub = Sub::A0;
        vi.base = static_cast<int>(j);
        vi.parity = mo.tParity[static_cast<size_t>(split_.A[0][j])] & 1;
        vi.ngh = 0;
        vi.isMomentum = false;
        vi.resolution = true;
        vi.name = "xT[" + std::to_string(j) + "]";
        cat.add(vi);
    }
    // P' families, slot order with f before g
    for (int s = 0; s <= L; ++s) {
        if (s + 1 <= L) {
            int k = s + 1;
            const auto& Ak = split_.A[static_cast<size_t>(k)];
            for (size_t a = 0; a < Ak.size(); ++a) {
                for (int t = 0; t <= s + 1; ++t) {
                    VarInfo vi;
                    vi.kind = VarKind::MomentumPPrime;
                    vi.sub = Sub::F;
                    vi.stage = k;
                    vi.base = static_cast<int>(a);
                    vi.r = s + 1 - t;
                    vi.t = t;
                    vi.parity = (mo.stageParity(k, Ak[a]) + s + 1) & 1;
                    vi.ngh = -(s + 1);
                    vi.isMomentum = true;
                    vi.resolution = true;
                    vi.name = famName("Pf", k, static_cast<int>(a), vi.r, vi.t);
                    cat.add(vi);
                }
            }
        }
        const auto& As = split_.A[static_cast<size_t>(s)];
        for (size_t a = 0; a < As.size(); ++a) {
            for (int t = 0; t <= s + 1; ++t) {
                VarInfo vi;
                vi.kind = VarKind::MomentumPPrime;
                vi.sub = Sub::G;
                vi.stage = s;
                vi.base = static_cast<int>(a);
                vi.r = s + 1 - t;
                vi.t = t;
                vi.parity = (mo.stageParity(s, As[a]) + s + 1) & 1;
                vi.ngh = -(s + 1);
                vi.isMomentum = true;
                vi.resolution = true;
                vi.name = famName("Pg", s, static_cast<int>(a), vi.r, vi.t);
                cat.add(vi);
            }
        }
    }
    // lambda' families
    for (int s = 0; s <= L; ++s) {
        if (s + 1 <= L) {
            int k = s + 1;
            const auto& Ak = split_.A[static_cast<size_t>(k)];
            for (size_t a = 0; a < Ak.size(); ++a) {
                for (int t = 0; t <= s; ++t) {
                    VarInfo vi;
                    vi.kind = VarKind::LambdaPrime;
                    vi.sub = Sub::F;
                    vi.stage = k;
                    vi.base = static_cast<int>(a);
                    vi.r = s - t;
                    vi.t = t;
                    vi.parity = (mo.stageParity(k, Ak[a]) + s) & 1;
                    vi.ngh = -(s + 2);
                    vi.isMomentum = true;
                    vi.resolution = true;
                    vi.name = famName("lf", k, static_cast<int>(a), vi.r, vi.t);
                    cat.add(vi);
                }
            }
        }
        const auto& As = split_.A[static_cast<size_t>(s)];
        for (size_t a = 0; a < As.size(); ++a) {
            for (int t = 0; t <= s; ++t) {
                VarInfo vi;
                vi.kind = VarKind::LambdaPrime;
                vi.sub = Sub::G;
                vi.stage = s;
                vi.base = static_cast<int>(a);
                vi.r = s - t;
                vi.t = t;
                vi.parity = (mo.stageParity(s, As[a]) + s) & 1;
                vi.ngh = -(s + 2);
                vi.isMomentum = true;
                vi.resolution = true;
                vi.name = famName("lg", s, static_cast<int>(a), vi.r, vi.t);
                cat.add(vi);
            }
        }
    }
}

void PrimedWorld::buildXiChange() {
    Theory& th = *th_;
    Catalog& cat = th.cat;
    const Model& mo = th.model;
    const auto& A0 = split_.A[0];
    const auto& sA = split_.scriptA;
    const int nF = static_cast<int>(sA.size());
    const int nT = static_cast<int>(A0.size());

    // coordinates: fwd/bwd for the scriptA variables are direct
    for (int i = 0; i < nF; ++i) {
        VarId x = cat.xi(sA[static_cast<size_t>(i)]);
        VarId xp = cat.xiPrimeF(i);
        fwd_[static_cast<size_t>(x)] = GradedPoly::variable(&cat, xp);
        bwd_[static_cast<size_t>(xp)] = GradedPoly::variable(&cat, x);
    }
    for (int j = 0; j < nT; ++j)
        bwd_[static_cast<size_t>(cat.xiPrimeA(j))] = mo.T[static_cast<size_t>(A0[static_cast<size_t>(j)])];

    // unknowns: the xi variables not used as coordinates
    std::vector<int> unknown;
    {
        std::vector<bool> isCoord(static_cast<size_t>(2 * mo.m), false);
        for (int i : sA) isCoord[static_cast<size_t>(i)] = true;
        for (int j = 0; j < 2 * mo.m; ++j)
            if (!isCoord[static_cast<size_t>(j)]) unknown.push_back(j);
    }
    if (static_cast<int>(unknown.size()) != nT) throw Error("regularity bookkeeping error");

    // T_{A0} = sum_u C[i][u] xi_u + d[i], C depending on coordinates only
    std::vector<std::vector<GradedPoly>> C(static_cast<size_t>(nT),
                                           std::vector<GradedPoly>(static_cast<size_t>(nT), GradedPoly(&cat)));
    std::vector<GradedPoly> d(static_cast<size_t>(nT), GradedPoly(&cat));
    std::vector<std::optional<GradedPoly>> killUnknown(static_cast<size_t>(cat.size()), std::nullopt);
    for (int u : unknown) killUnknown[static_cast<size_t>(cat.xi(u))] = GradedPoly(&cat);
    for (int i = 0; i < nT; ++i) {
        const GradedPoly& T = mo.T[static_cast<size_t>(A0[static_cast<size_t>(i)])];
        d[static_cast<size_t>(i)] = T.substitute(killUnknown);
        GradedPoly rebuilt = d[static_cast<size_t>(i)];
        for (int uIdx = 0; uIdx < nT; ++uIdx) {
            VarId u = cat.xi(unknown[static_cast<size_t>(uIdx)]);
            GradedPoly coeff = T.leftDerivative(u);
            auto cp = coeff.parity();
            if (!coeff.isZero() && (!cp || *cp != 0))
                throw Error("T_{A0} must be linear in the non-coordinate variables with even coefficients");
            for (VarId v : coeff.support()) {
                const VarInfo& vi = cat.info(v);
                if (vi.kind != VarKind::Xi) throw Error("T_{A0} coefficient outside xi sector");
                bool coord = false;
                for (int s : sA)
                    if (s == vi.base) coord = true;
                if (!coord)
                    throw Error("T_{A0} must be linear in the non-coordinate variables "
                                "(coefficients may involve coordinates only)");
            }
            C[static_cast<size_t>(i)][static_cast<size_t>(uIdx)] = coeff;
            rebuilt += coeff * GradedPoly::variable(&cat, u);
        }
        if (rebuilt != T)
            throw Error("T_{A0} is not linear in the non-coordinate variables; "
                        "supply different regularity functions");
    }

    // exact inverse of C over the even subring: adjugate / det, det must be
    // a nonzero rational constant
    std::function<GradedPoly(const std::vector<std::vector<GradedPoly>>&)> det =
        [&](const std::vector<std::vector<GradedPoly>>& M) -> GradedPoly {
        size_t n = M.size();
        if (n == 0) return GradedPoly::constant(&cat, 1);
        if (n == 1) return M[0][0];
        GradedPoly acc(&cat);
        for (size_t j = 0; j < n; ++j) {
            if (M[0][j].isZero()) continue;
            std::vector<std::vector<GradedPoly>> minor;
            for (size_t i = 1; i < n; ++i) {
                std::vector<GradedPoly> row;
                for (size_t jj = 0; jj < n; ++jj)
                    if (jj != j) row.push_back(M[i][jj]);
                minor.push_back(std::move(row));
            }
            GradedPoly term = M[0][j] * det(minor);
            if (j & 1) term = -term;
            acc += term;
        }
        return acc;
    };
    GradedPoly detC = det(C);
    Rat detVal;
    {
        if (detC.isZero()) throw Error("T_{A0} coefficient matrix is singular");
        if (detC.termCount() != 1 || !detC.terms().begin()->first.empty())
            throw Error("T_{A0} coefficient matrix has non-constant determinant; "
                        "the change of variables is not polynomially invertible");
        detVal = detC.terms().begin()->second;
    }
    // cofactor inverse: Cinv[u][i] = (-1)^{i+u} det(minor_{i,u}) / det
    std::vector<std::vector<GradedPoly>> Cinv(static_cast<size_t>(nT),
                                              std::vector<GradedPoly>(static_cast<size_t>(nT), GradedPoly(&cat)));
    for (int u = 0; u < nT; ++u) {
        for (int i = 0; i < nT; ++i) {
            std::vector<std::vector<GradedPoly>> minor;
            for (int ii = 0; ii < nT; ++ii) {
                if (ii == i) continue;
                std::vector<GradedPoly> row;
                for (int jj = 0; jj < nT; ++jj)
                    if (jj != u) row.push_back(C[static_cast<size_t>(ii)][static_cast<size_t>(jj)]);
                minor.push_back(std::move(row));
            }
            GradedPoly cof = det(minor);
            if ((i + u) & 1) cof = -cof;
            Cinv[static_cast<size_t>(u)][static_cast<size_t>(i)] = cof * (Rat(1) / detVal);
        }
    }

    // xi_u = sum_i Cinv[u][i] (xT_i - d_i), all expressed in primed vars
    for (int u = 0; u < nT; ++u) {
        GradedPoly expr(&cat);
        for (int i = 0; i < nT; ++i) {
            GradedPoly rhs = GradedPoly::variable(&cat, cat.xiPrimeA(i)) - d[static_cast<size_t>(i)];
            expr += Cinv[static_cast<size_t>(u)][static_cast<size_t>(i)].substitute(fwd_) * rhs.substitute(fwd_);
        }
        fwd_[static_cast<size_t>(cat.xi(unknown[static_cast<size_t>(u)]))] = expr;
    }
}

void PrimedWorld::buildTables(const Omega1Params& params) {
    Theory& th = *th_;
    Catalog& cat = th.cat;
    const Model& mo = th.model;
    const int L = th.L();

    auto substFwd = [&](const GradedPoly& p) {
        GradedPoly r = p.substitute(fwd_);
        for (VarId v : r.support()) {
            VarKind k = cat.info(v).kind;
            if (k == VarKind::Xi || k == VarKind::MomentumP || k == VarKind::Lambda)
                throw Error("internal staging error: toPrimed left variable " + cat.info(v).name);
        }
        return r;
    };

    // g-families are identities both ways
    for (int s = 0; s <= L; ++s) {
        const auto& As = split_.A[static_cast<size_t>(s)];
        for (size_t a = 0; a < As.size(); ++a) {
            for (int t = 0; t <= s + 1; ++t) {
                VarId up = cat.momP(s, As[a], s + 1 - t, t);
                VarId pr = cat.pPrime(Sub::G, s, static_cast<int>(a), s + 1 - t, t);
                fwd_[static_cast<size_t>(up)] = GradedPoly::variable(&cat, pr);
                bwd_[static_cast<size_t>(pr)] = GradedPoly::variable(&cat, up);
            }
            for (int t = 0; t <= s; ++t) {
                VarId up = cat.lambda(s, As[a], s - t, t);
                VarId pr = cat.lPrime(Sub::G, s, static_cast<int>(a), s - t, t);
                fwd_[static_cast<size_t>(up)] = GradedPoly::variable(&cat, pr);
                bwd_[static_cast<size_t>(pr)] = GradedPoly::variable(&cat, up);
            }
        }
    }

    // f-families and the solved substitution for the alpha'-indexed
    // variables, stage by stage (the M'/N' appearing at slot s only need
    // substitutions through slot s-1)
    for (int s = 0; s + 1 <= L; ++s) {
        int k = s + 1;
        const auto& Ak = split_.A[static_cast<size_t>(k)];
        const auto& As = split_.A[static_cast<size_t>(s)];
        const auto& ap = split_.aprime[static_cast<size_t>(s)];
        const Stage& st = mo.stages[static_cast<size_t>(s)];
        int q = static_cast<int>(Ak.size());

        // bwd for Pf/lf
        for (int a = 0; a < q; ++a) {
            int alpha = Ak[static_cast<size_t>(a)];
            const Sp2Tensor& Mred = params.Mred[static_cast<size_t>(k)][static_cast<size_t>(alpha)];
            const Sp2Tensor& Nred = params.Nred[static_cast<size_t>(k)][static_cast<size_t>(alpha)];
            for (int t = 0; t <= s + 1; ++t) {
                int r = s + 1 - t;
                GradedPoly val(&cat);
                for (int b = 0; b < mo.mk(s); ++b)
                    val += GradedPoly::variable(&cat, cat.momP(s, b, r, t)) *
                           st.Z[static_cast<size_t>(b)][static_cast<size_t>(alpha)];
                val += Mred.at(r, t);
                val *= frac((r + 1) * (t + 1), s + 2);
                bwd_[static_cast<size_t>(cat.pPrime(Sub::F, k, a, r, t))] = val;
            }
            for (int t = 0; t <= s; ++t) {
                int r = s - t;
                GradedPoly val(&cat);
                for (int b = 0; b < mo.mk(s); ++b)
                    val += GradedPoly::variable(&cat, cat.lambda(s, b, r, t)) *
                           st.Z[static_cast<size_t>(b)][static_cast<size_t>(alpha)];
                val -= Nred.at(r, t);
                val *= frac(-(r + 1) * (t + 1), s + 2);
                bwd_[static_cast<size_t>(cat.lPrime(Sub::F, k, a, r, t))] = val;
            }
        }

        // primed Z and Zinv entries, and the primed M'/N'
        auto zPrimed = [&](int bIdx, int aIdx) {
            return substFwd(st.Z[static_cast<size_t>(As[static_cast<size_t>(bIdx)])]
                               [static_cast<size_t>(Ak[static_cast<size_t>(aIdx)])]);
        };
        std::vector<std::vector<GradedPoly>> zinvP(static_cast<size_t>(q),
                                                   std::vector<GradedPoly>(static_cast<size_t>(q), GradedPoly(&cat)));
        for (int a = 0; a < q; ++a)
            for (int j = 0; j < q; ++j)
                zinvP[static_cast<size_t>(a)][static_cast<size_t>(j)] =
                    substFwd(split_.Zinv[static_cast<size_t>(k)][static_cast<size_t>(a)][static_cast<size_t>(j)]);

        std::vector<Sp2Tensor> mP, nP;
        for (int a = 0; a < q; ++a) {
            int alpha = Ak[static_cast<size_t>(a)];
            mP.push_back(params.Mred[static_cast<size_t>(k)][static_cast<size_t>(alpha)].map(substFwd));
            nP.push_back(params.Nred[static_cast<size_t>(k)][static_cast<size_t>(alpha)].map(substFwd));
        }

        for (int j = 0; j < static_cast<int>(ap.size()); ++j) {
            int alphaP = ap[static_cast<size_t>(j)];
            for (int t = 0; t <= s + 1; ++t) {
                int r = s + 1 - t;
                GradedPoly expr(&cat);
                for (int a = 0; a < q; ++a) {
                    GradedPoly rhs = frac(s + 2, (r + 1) * (t + 1)) *
                                     GradedPoly::variable(&cat, cat.pPrime(Sub::F, k, a, r, t));
                    for (size_t b = 0; b < As.size(); ++b)
                        rhs -= GradedPoly::variable(&cat,
                                                    cat.pPrime(Sub::G, s, static_cast<int>(b), r, t)) *
                               zPrimed(static_cast<int>(b), a);
                    rhs -= mP[static_cast<size_t>(a)].at(r, t);
                    expr += rhs * zinvP[static_cast<size_t>(a)][static_cast<size_t>(j)];
                }
                fwd_[static_cast<size_t>(cat.momP(s, alphaP, r, t))] = expr;
            }
            for (int t = 0; t <= s; ++t) {
                int r = s - t;
                GradedPoly expr(&cat);
                for (int a = 0; a < q; ++a) {
                    GradedPoly rhs = frac(s + 2, (r + 1) * (t + 1)) *
                                     GradedPoly::variable(&cat, cat.lPrime(Sub::F, k, a, r, t));
                    for (size_t b = 0; b < As.size(); ++b)
                        rhs += GradedPoly::variable(&cat,
                                                    cat.lPrime(Sub::G, s, static_cast<int>(b), r, t)) *
                               zPrimed(static_cast<int>(b), a);
                    rhs -= nP[static_cast<size_t>(a)].at(r, t);
                    expr -= rhs * zinvP[static_cast<size_t>(a)][static_cast<size_t>(j)];
                }
                fwd_[static_cast<size_t>(cat.lambda(s, alphaP, r, t))] = expr;
            }
        }
    }
}

void PrimedWorld::buildDeltaSigma() {
    Theory& th = *th_;
    Catalog& cat = th.cat;
    const int L = th.L();

    for (int a = 0; a < 2; ++a) {
        deltaP_[a].cat = &cat;
        deltaP_[a].parityShift = 1;
        sigmaP_[a].cat = &cat;
        sigmaP_[a].parityShift = 1;
    }

    auto var = [&](VarId v) { return GradedPoly::variable(&cat, v); };

    const int nT = static_cast<int>(split_.A[0].size());
    for (int j = 0; j < nT; ++j) {
        sigmaP_[0].set(cat.xiPrimeA(j), var(cat.pPrime(Sub::G, 0, j, 1, 0)));
        sigmaP_[1].set(cat.xiPrimeA(j), var(cat.pPrime(Sub::G, 0, j, 0, 1)));
    }

    // g-family momenta
    for (int s = 0; s <= L; ++s) {
        int nA = static_cast<int>(split_.A[static_cast<size_t>(s)].size());
        for (int a = 0; a < nA; ++a) {
            for (int t = 0; t <= s + 1; ++t) {
                int r = s + 1 - t;
                VarId v = cat.pPrime(Sub::G, s, a, r, t);
                // delta
                if (r >= 1) {
                    if (s == 0) deltaP_[0].set(v, var(cat.xiPrimeA(a)));
                    else deltaP_[0].set(v, frac(1, t + 1) * var(cat.pPrime(Sub::F, s, a, r - 1, t)));
                }
                if (t >= 1) {
                    if (s == 0) deltaP_[1].set(v, var(cat.xiPrimeA(a)));
                    else deltaP_[1].set(v, frac(1, r + 1) * var(cat.pPrime(Sub::F, s, a, r, t - 1)));
                }
                // sigma
                if (t >= 1) sigmaP_[0].set(v, frac(t, s + 1) * var(cat.lPrime(Sub::G, s, a, r, t - 1)));
                if (r >= 1) sigmaP_[1].set(v, frac(-r, s + 1) * var(cat.lPrime(Sub::G, s, a, r - 1, t)));
            }
            for (int t = 0; t <= s; ++t) {
                int r = s - t;
                VarId v = cat.lPrime(Sub::G, s, a, r, t);
                GradedPoly d1 = var(cat.pPrime(Sub::G, s, a, r, t + 1));
                GradedPoly d2 = -var(cat.pPrime(Sub::G, s, a, r + 1, t));
                if (s >= 1 && r >= 1) d1 += frac(1, t + 1) * var(cat.lPrime(Sub::F, s, a, r - 1, t));
                if (s >= 1 && t >= 1) d2 += frac(1, r + 1) * var(cat.lPrime(Sub::F, s, a, r, t - 1));
                deltaP_[0].set(v, d1);
                deltaP_[1].set(v, d2);
                // sigma lambda'_g = 0
            }
        }
    }
    // f-families
    for (int k = 1; k <= L; ++k) {
        int s = k - 1;
        int nA = static_cast<int>(split_.A[static_cast<size_t>(k)].size());
        for (int a = 0; a < nA; ++a) {
            for (int t = 0; t <= s + 1; ++t) {
                int r = s + 1 - t;
                VarId v = cat.pPrime(Sub::F, k, a, r, t);
                // delta P'_f = 0
                GradedPoly s1 = frac((t + 1) * (r + 1), s + 2) * var(cat.pPrime(Sub::G, k, a, r + 1, t));
                if (t >= 1) s1 -= frac(t + 1, s + 2) * var(cat.lPrime(Sub::F, k, a, r, t - 1));
                sigmaP_[0].set(v, s1);
                GradedPoly s2 = frac((r + 1) * (t + 1), s + 2) * var(cat.pPrime(Sub::G, k, a, r, t + 1));
                if (r >= 1) s2 += frac(r + 1, s + 2) * var(cat.lPrime(Sub::F, k, a, r - 1, t));
                sigmaP_[1].set(v, s2);
            }
            for (int t = 0; t <= s; ++t) {
                int r = s - t;
                VarId v = cat.lPrime(Sub::F, k, a, r, t);
                deltaP_[0].set(v, frac(-(t + 1), t + 2) * var(cat.pPrime(Sub::F, k, a, r, t + 1)));
                deltaP_[1].set(v, frac(r + 1, r + 2) * var(cat.pPrime(Sub::F, k, a, r + 1, t)));
                sigmaP_[0].set(v, frac((r + 1) * (t + 1), s + 2) * var(cat.lPrime(Sub::G, k, a, r + 1, t)));
                sigmaP_[1].set(v, frac((r + 1) * (t + 1), s + 2) * var(cat.lPrime(Sub::G, k, a, r, t + 1)));
            }
        }
    }
}

GradedPoly PrimedWorld::toPrimed(const GradedPoly& x) const {
    GradedPoly r = x.substitute(fwd_);
    for (VarId v : r.support()) {
        VarKind k = th_->cat.info(v).kind;
        if (k == VarKind::Xi || k == VarKind::MomentumP || k == VarKind::Lambda)
            throw Error("toPrimed: no substitution for " + th_->cat.info(v).name);
    }
    return r;
}

GradedPoly PrimedWorld::fromPrimed(const GradedPoly& x) const {
    GradedPoly r = x.substitute(bwd_);
    for (VarId v : r.support())
        if (th_->cat.isPrimedKind(v))
            throw Error("fromPrimed: no substitution for " + th_->cat.info(v).name);
    return r;
}

Sp2Tensor PrimedWorld::toPrimed(const Sp2Tensor& x) const {
    return x.map([this](const GradedPoly& p) { return toPrimed(p); });
}
Sp2Tensor PrimedWorld::fromPrimed(const Sp2Tensor& x) const {
    return x.map([this](const GradedPoly& p) { return fromPrimed(p); });
}

Sp2Tensor PrimedWorld::deltaPrimedLift(const Sp2Tensor& x) const {
    OperatorPair u{[this](const GradedPoly& p) { return deltaP_[0].apply(p); },
                   [this](const GradedPoly& p) { return deltaP_[1].apply(p); }};
    return liftPair(u, x, /*normalized=*/false);
}

Sp2Tensor PrimedWorld::deltaPrimedOnScalar(const GradedPoly& x) const {
    Sp2Tensor r(&th_->cat, 1);
    r.at(1, 0) = deltaP_[0].apply(x);
    r.at(0, 1) = deltaP_[1].apply(x);
    return r;
}

Sp2Tensor PrimedWorld::sigmaContract(const Sp2Tensor& x) const {
    OperatorPair s{[this](const GradedPoly& p) { return sigmaP_[0].apply(p); },
                   [this](const GradedPoly& p) { return sigmaP_[1].apply(p); }};
    return contractPair(s, x);
}

GradedPoly PrimedWorld::opN(const GradedPoly& x) const {
    GradedPoly r(&th_->cat);
    for (const auto& [m, c] : x.terms()) {
        long count = 0;
        for (const auto& f : m)
            if (th_->cat.info(f.var).resolution) count += f.exp;
        if (count) r.addTerm(m, c * count);
    }
    return r;
}

GradedPoly PrimedWorld::opNpow(const GradedPoly& x, int power) const {
    GradedPoly r(&th_->cat);
    for (const auto& [m, c] : x.terms()) {
        long count = 0;
        for (const auto& f : m)
            if (th_->cat.info(f.var).resolution) count += f.exp;
        if (count == 0) {
            if (power >= 0 && count == 0) {
                if (power == 0) { r.addTerm(m, c); continue; }
                continue;  // N^p kills it for p >= 1
            }
            throw Error("N^{-1} requested outside V (monomial with no resolution variable)");
        }
        Rat factor(1);
        for (int i = 0; i < std::abs(power); ++i) factor *= count;
        if (power < 0) factor = 1 / factor;
        r.addTerm(m, c * factor);
    }
    return r;
}

GradedPoly PrimedWorld::opM(const GradedPoly& x) const {
    return sigmaP_[0].apply(deltaP_[0].apply(x)) + sigmaP_[1].apply(deltaP_[1].apply(x));
}

bool PrimedWorld::inV(const GradedPoly& x) const {
    for (const auto& [m, c] : x.terms()) {
        bool has = false;
        for (const auto& f : m)
            if (th_->cat.info(f.var).resolution) { has = true; break; }
        if (!has) return false;
    }
    return true;
}
bool PrimedWorld::inV(const Sp2Tensor& x) const {
    for (int t = 0; t <= x.rank(); ++t)
        if (!inV(x.byT(t))) return false;
    return true;
}

GradedPoly PrimedWorld::scalarU0(const GradedPoly& x) const {
    // (11 N^{-1} - 6 M N^{-2} + M^2 N^{-3}) / 6
    GradedPoly a = opNpow(x, -1);
    GradedPoly b = opM(opNpow(x, -2));
    GradedPoly c = opM(opM(opNpow(x, -3)));
    return frac(11, 6) * a - b + frac(1, 6) * c;
}

Sp2Tensor PrimedWorld::opU(const Sp2Tensor& x) const {
    if (!inV(x)) throw Error("U: argument not in V");
    int n = x.rank();
    if (n == 0) return x.map([this](const GradedPoly& p) { return scalarU0(p); });
    // (nN+M)^{-1} = N^{-1}/n - ((n+3) M N^{-2} - M^2 N^{-3}) / (n(n+1)(n+2))
    Rat c1(1, n);
    Rat c2(1, static_cast<long>(n) * (n + 1) * (n + 2));
    return x.map([&](const GradedPoly& p) {
        GradedPoly a = opNpow(p, -1);
        GradedPoly b = opM(opNpow(p, -2));
        GradedPoly c = opM(opM(opNpow(p, -3)));
        return c1 * a - c2 * (Rat(n + 3) * b - c);
    });
}

Sp2Tensor PrimedWorld::deltaPlus(const Sp2Tensor& x) const {
    if (x.rank() == 0) return Sp2Tensor(&th_->cat, 0);
    return opU(sigmaContract(x));
}

Sp2Tensor PrimedWorld::lambdaOp(const Sp2Tensor& x) const {
    if (!inV(x)) throw Error("Lambda: argument not in V");
    return x;
}

GradedPoly PrimedWorld::conjugate(const std::function<GradedPoly(const GradedPoly&)>& f,
                                  const GradedPoly& xPrimed) const {
    return toPrimed(f(fromPrimed(xPrimed)));
}

void PrimedWorld::corruptSigmaForTesting() {
    VarId v = th_->cat.xiPrimeA(0);
    const GradedPoly* cur = sigmaP_[0].entry(v);
    if (cur) sigmaP_[0].set(v, Rat(2) * (*cur));
}

} // namespace brst
