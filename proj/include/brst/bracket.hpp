#ifndef BRST_BRACKET_HPP
#define BRST_BRACKET_HPP

#include <functional>
#include <optional>
#include <vector>

#include "brst/poly.hpp"

namespace brst {

/// Which canonical pairs a bracket-type sum runs over.
enum class Sector { Full, Xi, Ghost };

inline bool pairInSector(const Catalog& cat, VarId momentum, Sector sec) {
    VarKind k = cat.info(momentum).kind;
    switch (sec) {
        case Sector::Full: return true;
        case Sector::Xi: return k == VarKind::Xi;
        case Sector::Ghost: return k == VarKind::MomentumP || k == VarKind::Lambda;
    }
    return false;
}

/// One-sided sum (dX/dQ^A)(dY/dP_A) over the sector's canonical pairs;
/// coordinate derivatives are right-handed, momentum ones left-handed.
inline GradedPoly pairSum(const GradedPoly& X, const GradedPoly& Y, Sector sec) {
    const Catalog& cat = *X.cat();
    GradedPoly r(&cat);
    for (VarId q : X.support()) {
        const VarInfo& qi = cat.info(q);
        if (qi.isMomentum || qi.conj == kNoVar) continue;
        VarId p = qi.conj;
        if (!pairInSector(cat, p, sec)) continue;
        GradedPoly dx = X.rightDerivative(q);
        if (dx.isZero()) continue;
        GradedPoly dy = Y.leftDerivative(p);
        if (dy.isZero()) continue;
        r += dx * dy;
    }
    return r;
}

namespace detail {
inline GradedPoly bracketHomogeneous(const GradedPoly& X, const GradedPoly& Y, Sector sec) {
    int ex = X.parity().value();
    int ey = Y.parity().value();
    GradedPoly r = pairSum(X, Y, sec);
    GradedPoly s = pairSum(Y, X, sec);
    if ((ex & ey) & 1) r += s;
    else r -= s;
    return r;
}
} // namespace detail

/// Poisson superbracket {X,Y}; mixed-parity inputs are split into
/// homogeneous parts first, the bracket extends bilinearly.
inline GradedPoly bracketSector(const GradedPoly& X, const GradedPoly& Y, Sector sec) {
    GradedPoly r(X.cat());
    if (X.isZero() || Y.isZero()) return r;
    for (int px = 0; px <= 1; ++px) {
        GradedPoly xp = X.parityPart(px);
        if (xp.isZero()) continue;
        for (int py = 0; py <= 1; ++py) {
            GradedPoly yp = Y.parityPart(py);
            if (yp.isZero()) continue;
            r += detail::bracketHomogeneous(xp, yp, sec);
        }
    }
    return r;
}

inline GradedPoly poissonBracket(const GradedPoly& X, const GradedPoly& Y) {
    return bracketSector(X, Y, Sector::Full);
}
inline GradedPoly xiBracket(const GradedPoly& X, const GradedPoly& Y) {
    return bracketSector(X, Y, Sector::Xi);
}
/// {X,Y}_diamond = (dX/dQ^{A'})(dY/dP_{A'}): ghost-sector pairs only,
/// no antisymmetrization.
inline GradedPoly diamondBracket(const GradedPoly& X, const GradedPoly& Y) {
    return pairSum(X, Y, Sector::Ghost);
}

/// Graded derivation given by a generator table, extended by
/// D(X) = sum_v table[v] * (d_l X / dv).
struct Derivation {
    const Catalog* cat = nullptr;
    int parityShift = 1;
    std::vector<GradedPoly> table;  // indexed by VarId; missing tail = 0

    const GradedPoly* entry(VarId v) const {
        size_t i = static_cast<size_t>(v);
        if (i >= table.size() || table[i].isZero()) return nullptr;
        return &table[i];
    }

    GradedPoly apply(const GradedPoly& X) const {
        GradedPoly r(cat);
        for (VarId v : X.support()) {
            const GradedPoly* val = entry(v);
            if (!val) continue;
            GradedPoly d = X.leftDerivative(v);
            if (!d.isZero()) r += (*val) * d;
        }
        return r;
    }

    void set(VarId v, GradedPoly p) {
        size_t i = static_cast<size_t>(v);
        if (table.size() <= i) table.resize(i + 1, GradedPoly(cat));
        table[i] = std::move(p);
    }
};

} // namespace brst

#endif
