#include "brst/model.hpp"

#include <sstream>

#include "brst/reduction.hpp"

namespace brst {

namespace {
std::string ghostName(const char* base, int s, int a, int r, int t) {
    std::ostringstream os;
    os << base << "[" << s << "," << a << "|" << r << "," << t << "]";
    return os.str();
}
} // namespace

void Theory::buildUnprimed() {
    const int m = model.m;
    const int L = model.L();
    // xi: p_1..p_m then q^1..q^m
    for (int i = 0; i < m; ++i) {
        VarInfo vi;
        vi.kind = VarKind::Xi;
        vi.base = i;
        vi.parity = model.pairParity[static_cast<size_t>(i)] & 1;
        vi.ngh = 0;
        vi.isMomentum = true;
        vi.name = model.pName[static_cast<size_t>(i)];
        cat.add(vi);
    }
    for (int i = 0; i < m; ++i) {
        VarInfo vi;
        vi.kind = VarKind::Xi;
        vi.base = m + i;
        vi.parity = model.pairParity[static_cast<size_t>(i)] & 1;
        vi.ngh = 0;
        vi.isMomentum = false;
        vi.name = model.qName[static_cast<size_t>(i)];
        cat.add(vi);
    }
    for (int i = 0; i < m; ++i) {
        VarId p = cat.xi(i), q = cat.xi(m + i);
        cat.vars[static_cast<size_t>(p)].conj = q;
        cat.vars[static_cast<size_t>(q)].conj = p;
    }

    auto addFamily = [&](VarKind kind, const char* base, int s, int idxCount, bool momentum) {
        int nIdx = (kind == VarKind::MomentumP || kind == VarKind::GhostC) ? s + 1 : s;
        for (int a = 0; a < idxCount; ++a) {
            for (int t = 0; t <= nIdx; ++t) {
                VarInfo vi;
                vi.kind = kind;
                vi.stage = s;
                vi.base = a;
                vi.r = nIdx - t;
                vi.t = t;
                int eps = model.stageParity(s, a);
                switch (kind) {
                    case VarKind::MomentumP:
                        vi.parity = (eps + s + 1) & 1;
                        vi.ngh = -(s + 1);
                        break;
                    case VarKind::GhostC:
                        vi.parity = (eps + s + 1) & 1;
                        vi.ngh = s + 1;
                        break;
                    case VarKind::Lambda:
                        vi.parity = (eps + s) & 1;
                        vi.ngh = -(s + 2);
                        break;
                    case VarKind::Pi:
                        vi.parity = (eps + s) & 1;
                        vi.ngh = s + 2;
                        break;
                    default: break;
                }
                vi.isMomentum = momentum;
                vi.name = ghostName(base, s, a, vi.r, vi.t);
                cat.add(vi);
            }
        }
    };

    for (int s = 0; s <= L; ++s) addFamily(VarKind::MomentumP, "P", s, mk(s), true);
    for (int s = 0; s <= L; ++s) addFamily(VarKind::GhostC, "c", s, mk(s), false);
    for (int s = 0; s <= L; ++s) addFamily(VarKind::Lambda, "l", s, mk(s), true);
    for (int s = 0; s <= L; ++s) addFamily(VarKind::Pi, "pi", s, mk(s), false);

    for (int s = 0; s <= L; ++s) {
        for (int a = 0; a < mk(s); ++a) {
            for (int t = 0; t <= s + 1; ++t) {
                VarId P = cat.momP(s, a, s + 1 - t, t), c = cat.ghostC(s, a, s + 1 - t, t);
                cat.vars[static_cast<size_t>(P)].conj = c;
                cat.vars[static_cast<size_t>(c)].conj = P;
            }
            for (int t = 0; t <= s; ++t) {
                VarId l = cat.lambda(s, a, s - t, t), piv = cat.pi(s, a, s - t, t);
                cat.vars[static_cast<size_t>(l)].conj = piv;
                cat.vars[static_cast<size_t>(piv)].conj = l;
            }
        }
    }
}

std::vector<std::string> Theory::validate() const {
    std::vector<std::string> errors;
    const int L = model.L();

    auto xiOnly = [&](const GradedPoly& p) {
        for (VarId v : p.support())
            if (cat.info(v).kind != VarKind::Xi) return false;
        return true;
    };

    for (size_t a = 0; a < model.T.size(); ++a) {
        const GradedPoly& T = model.T[a];
        if (!xiOnly(T)) errors.push_back("T_" + std::to_string(a) + " depends on non-xi variables");
        auto p = T.parity();
        if (!p) errors.push_back("T_" + std::to_string(a) + " is not parity-homogeneous");
        else if (!T.isZero() && *p != (model.tParity[a] & 1))
            errors.push_back("T_" + std::to_string(a) + " parity differs from its declaration");
    }

    for (int k = 0; k < L; ++k) {
        const Stage& st = model.stages[static_cast<size_t>(k)];
        for (int i = 0; i < model.mk(k); ++i) {
            for (int j = 0; j < st.size; ++j) {
                const GradedPoly& z = st.Z[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (!xiOnly(z))
                    errors.push_back("Z[" + std::to_string(k) + "] entry depends on non-xi variables");
                auto p = z.parity();
                int want = (model.stageParity(k, i) + model.stageParity(k + 1, j)) & 1;
                if (!p) errors.push_back("Z[" + std::to_string(k) + "] entry not homogeneous");
                else if (!z.isZero() && *p != want)
                    errors.push_back("Z[" + std::to_string(k) + "](" + std::to_string(i) + "," +
                                     std::to_string(j) + ") has wrong parity");
            }
        }
    }

    // T_{alpha_0} Z^{alpha_0}_{alpha_1} = 0
    if (L >= 1) {
        const Stage& st = model.stages[0];
        for (int j = 0; j < st.size; ++j) {
            GradedPoly acc(&cat);
            for (int i = 0; i < model.mk(0); ++i)
                acc += model.T[static_cast<size_t>(i)] * st.Z[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (!acc.isZero())
                errors.push_back("TZ != 0 at alpha_1=" + std::to_string(j));
        }
    }

    // Z Z = T A for adjacent pairs with supplied A-functions
    for (const AFunctions& af : model.aFuns) {
        int k = af.k;
        if (k < 0 || k > L - 2) {
            errors.push_back("A-functions supplied for out-of-range k=" + std::to_string(k));
            continue;
        }
        const Stage& s1 = model.stages[static_cast<size_t>(k)];
        const Stage& s2 = model.stages[static_cast<size_t>(k + 1)];
        for (int i = 0; i < model.mk(k); ++i) {
            for (int l = 0; l < s2.size; ++l) {
                GradedPoly zz(&cat);
                for (int j = 0; j < s1.size; ++j)
                    zz += s1.Z[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                          s2.Z[static_cast<size_t>(j)][static_cast<size_t>(l)];
                GradedPoly ta(&cat);
                for (int b = 0; b < model.mk(0); ++b)
                    ta += model.T[static_cast<size_t>(b)] *
                          af.A[static_cast<size_t>(b)][static_cast<size_t>(i)][static_cast<size_t>(l)];
                if (zz != ta)
                    errors.push_back("ZZ != TA at k=" + std::to_string(k) + ", alpha_k=" +
                                     std::to_string(i) + ", alpha_k2=" + std::to_string(l));
            }
        }
        if (k == 0) {
            for (int i = 0; i < model.mk(0); ++i) {
                for (int b = 0; b < model.mk(0); ++b) {
                    for (int l = 0; l < s2.size; ++l) {
                        const GradedPoly& ab = af.A[static_cast<size_t>(b)][static_cast<size_t>(i)][static_cast<size_t>(l)];
                        const GradedPoly& ba = af.A[static_cast<size_t>(i)][static_cast<size_t>(b)][static_cast<size_t>(l)];
                        int sgn = (model.tParity[static_cast<size_t>(i)] & model.tParity[static_cast<size_t>(b)]) & 1;
                        GradedPoly want = sgn ? ba : -ba;
                        if (ab != want) {
                            errors.push_back("A-functions not graded-antisymmetric at (" +
                                             std::to_string(b) + "," + std::to_string(i) + "," +
                                             std::to_string(l) + ")");
                        }
                    }
                }
            }
        }
    }

    // first class: with U, exact; without, ideal membership by reduction
    for (size_t a = 0; a < model.T.size(); ++a) {
        for (size_t b = a; b < model.T.size(); ++b) {
            GradedPoly br = poissonBracket(model.T[a], model.T[b]);
            if (model.U) {
                GradedPoly tu(&cat);
                for (size_t g = 0; g < model.T.size(); ++g)
                    tu += model.T[g] * (*model.U)[g][a][b];
                if (br != tu)
                    errors.push_back("{T_" + std::to_string(a) + ",T_" + std::to_string(b) +
                                     "} != T*U");
            } else {
                if (!reduceModulo(br, model.T).remainder.isZero())
                    errors.push_back("{T_" + std::to_string(a) + ",T_" + std::to_string(b) +
                                     "} not in the constraint ideal");
            }
        }
    }
    return errors;
}

std::vector<std::string> Omega1Params::validate(const Theory& th) const {
    std::vector<std::string> errors;
    const Catalog& cat = th.cat;
    auto checkEntry = [&](const Sp2Tensor& x, int s, int a, bool isM) {
        const char* tag = isM ? "M" : "N";
        int wantParity = isM ? (th.model.stageParity(s, a) + s) & 1
                             : (th.model.stageParity(s, a) + s + 1) & 1;
        long wantNgh = isM ? -s : -(s + 1);
        for (int t = 0; t <= x.rank(); ++t) {
            const GradedPoly& c = x.byT(t);
            if (c.isZero()) continue;
            auto p = c.parity();
            auto g = c.ngh();
            if (!p || *p != wantParity)
                errors.push_back(std::string(tag) + " at stage " + std::to_string(s) + " has wrong parity");
            if (!g || *g != wantNgh)
                errors.push_back(std::string(tag) + " at stage " + std::to_string(s) + " has wrong ngh");
            bool vanishes = true;
            for (const auto& [mono, coeff] : c.terms()) {
                bool hasMomentum = false;
                for (const auto& f : mono) {
                    const VarInfo& vi = cat.info(f.var);
                    if (vi.kind == VarKind::MomentumP || vi.kind == VarKind::Lambda) {
                        hasMomentum = true;
                        if (vi.stage > s - 2)
                            errors.push_back(std::string(tag) + " at stage " + std::to_string(s) +
                                             " depends on stage-" + std::to_string(vi.stage) +
                                             " momenta (allowed: <= " + std::to_string(s - 2) + ")");
                    } else if (vi.kind != VarKind::Xi) {
                        errors.push_back(std::string(tag) + " at stage " + std::to_string(s) +
                                         " depends on a ghost-sector coordinate");
                    }
                }
                if (!hasMomentum) vanishes = false;
            }
            if (!vanishes)
                errors.push_back(std::string(tag) + " at stage " + std::to_string(s) +
                                 " does not vanish at P=lambda=0");
        }
    };
    for (int s = 1; s < static_cast<int>(Mred.size()); ++s)
        for (size_t a = 0; a < Mred[static_cast<size_t>(s)].size(); ++a)
            checkEntry(Mred[static_cast<size_t>(s)][a], s, static_cast<int>(a), true);
    for (int s = 1; s < static_cast<int>(Nred.size()); ++s)
        for (size_t a = 0; a < Nred[static_cast<size_t>(s)].size(); ++a)
            checkEntry(Nred[static_cast<size_t>(s)][a], s, static_cast<int>(a), false);
    return errors;
}

} // namespace brst
