#ifndef BRST_SP2_HPP
#define BRST_SP2_HPP

#include <functional>
#include <optional>
#include <vector>

#include "brst/bracket.hpp"
#include "brst/poly.hpp"

namespace brst {

inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Symmetric Sp(2) tensor of rank n, stored as the n+1 components
/// X_{(r,t)} with r+t = n ("r ones, t twos"); comp[t] = X_{(n-t,t)}.
class Sp2Tensor {
  public:
    Sp2Tensor() : cat_(nullptr), rank_(0), comp_(1) {}
    Sp2Tensor(const Catalog* cat, int rank)
        : cat_(cat), rank_(rank), comp_(static_cast<size_t>(rank) + 1, GradedPoly(cat)) {}
    static Sp2Tensor scalar(GradedPoly x) {
        Sp2Tensor r(x.cat(), 0);
        r.comp_[0] = std::move(x);
        return r;
    }

    int rank() const { return rank_; }
    const Catalog* cat() const { return cat_; }

    const GradedPoly& at([[maybe_unused]] int r, int t) const { return comp_[static_cast<size_t>(t)]; }
    GradedPoly& at([[maybe_unused]] int r, int t) { return comp_[static_cast<size_t>(t)]; }
    const GradedPoly& byT(int t) const { return comp_[static_cast<size_t>(t)]; }
    GradedPoly& byT(int t) { return comp_[static_cast<size_t>(t)]; }

    bool isZero() const {
        for (const auto& c : comp_)
            if (!c.isZero()) return false;
        return true;
    }
    bool operator==(const Sp2Tensor& o) const { return rank_ == o.rank_ && comp_ == o.comp_; }
    bool operator!=(const Sp2Tensor& o) const { return !(*this == o); }

    Sp2Tensor& operator+=(const Sp2Tensor& o) {
        requireSameRank(o);
        for (size_t i = 0; i < comp_.size(); ++i) comp_[i] += o.comp_[i];
        return *this;
    }
    Sp2Tensor& operator-=(const Sp2Tensor& o) {
        requireSameRank(o);
        for (size_t i = 0; i < comp_.size(); ++i) comp_[i] -= o.comp_[i];
        return *this;
    }
    friend Sp2Tensor operator+(Sp2Tensor a, const Sp2Tensor& b) { return a += b; }
    friend Sp2Tensor operator-(Sp2Tensor a, const Sp2Tensor& b) { return a -= b; }
    Sp2Tensor operator-() const {
        Sp2Tensor r = *this;
        for (auto& c : r.comp_) c = -c;
        return r;
    }
    Sp2Tensor& operator*=(const Rat& q) {
        for (auto& c : comp_) c *= q;
        return *this;
    }
    friend Sp2Tensor operator*(Sp2Tensor a, const Rat& q) { return a *= q; }
    friend Sp2Tensor operator*(const Rat& q, Sp2Tensor a) { return a *= q; }

    /// Parity if all nonzero components agree.
    std::optional<int> parity() const {
        std::optional<int> p;
        for (const auto& c : comp_) {
            if (c.isZero()) continue;
            auto cp = c.parity();
            if (!cp) return std::nullopt;
            if (!p) p = cp;
            else if (*p != *cp) return std::nullopt;
        }
        return p ? p : std::optional<int>(0);
    }
    std::optional<long> ngh() const {
        std::optional<long> g;
        for (const auto& c : comp_) {
            if (c.isZero()) continue;
            auto cg = c.ngh();
            if (!cg) return std::nullopt;
            if (!g) g = cg;
            else if (*g != *cg) return std::nullopt;
        }
        return g ? g : std::optional<long>(0);
    }

    Sp2Tensor ghostDegreePart(int n) const {
        Sp2Tensor r(cat_, rank_);
        for (size_t i = 0; i < comp_.size(); ++i) r.comp_[i] = comp_[i].ghostDegreePart(n);
        return r;
    }
    Sp2Tensor ghostDegreeAtMost(int n) const {
        Sp2Tensor r(cat_, rank_);
        for (size_t i = 0; i < comp_.size(); ++i) r.comp_[i] = comp_[i].ghostDegreeAtMost(n);
        return r;
    }
    int maxGhostDegree() const {
        int d = 0;
        for (const auto& c : comp_) d = std::max(d, c.maxGhostDegree());
        return d;
    }

    Sp2Tensor map(const std::function<GradedPoly(const GradedPoly&)>& f) const {
        Sp2Tensor r(cat_, rank_);
        for (size_t i = 0; i < comp_.size(); ++i) r.comp_[i] = f(comp_[i]);
        return r;
    }

  private:
    void requireSameRank(const Sp2Tensor& o) const {
        if (rank_ != o.rank_) throw Error("Sp2Tensor rank mismatch");
    }
    const Catalog* cat_;
    int rank_;
    std::vector<GradedPoly> comp_;
};

/// A pair of linear maps u^a with common parity/ngh shift; lifted and
/// contracted componentwise.
struct OperatorPair {
    std::function<GradedPoly(const GradedPoly&)> u1, u2;
    GradedPoly apply(int a, const GradedPoly& x) const { return a == 1 ? u1(x) : u2(x); }
};

/// Symmetric product (o-product), in (r,t)-component form.
inline Sp2Tensor symProduct(const Sp2Tensor& X, const Sp2Tensor& Y) {
    int q = X.rank(), p = Y.rank(), n = p + q;
    Sp2Tensor Z(X.cat() ? X.cat() : Y.cat(), n);
    for (int t = 0; t <= n; ++t) {
        int r = n - t;
        GradedPoly acc(Z.cat());
        for (int t1 = 0; t1 <= q; ++t1) {
            int r1 = q - t1;
            if (r1 > r || t1 > t) continue;
            Rat w(binomial(r, r1) * binomial(t, t1), binomial(n, q));
            w.canonicalize();
            acc += w * (X.at(r1, t1) * Y.at(r - r1, t - t1));
        }
        Z.at(r, t) = acc;
    }
    return Z;
}

namespace detail {
inline Sp2Tensor pairSumTensor(const Sp2Tensor& X, const Sp2Tensor& Y, Sector sec) {
    const Catalog& cat = *X.cat();
    Sp2Tensor r(&cat, X.rank() + Y.rank());
    std::vector<VarId> qs;
    for (int t = 0; t <= X.rank(); ++t)
        for (VarId v : X.byT(t).support()) {
            const VarInfo& vi = cat.info(v);
            if (!vi.isMomentum && vi.conj != kNoVar && pairInSector(cat, vi.conj, sec)) qs.push_back(v);
        }
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    for (VarId qv : qs) {
        VarId pv = cat.info(qv).conj;
        Sp2Tensor dX = X.map([&](const GradedPoly& c) { return c.rightDerivative(qv); });
        if (dX.isZero()) continue;
        Sp2Tensor dY = Y.map([&](const GradedPoly& c) { return c.leftDerivative(pv); });
        if (dY.isZero()) continue;
        r += symProduct(dX, dY);
    }
    return r;
}

inline Sp2Tensor tensorBracketHomogeneous(const Sp2Tensor& X, const Sp2Tensor& Y, Sector sec) {
    auto px = X.parity(), py = Y.parity();
    if (!px || !py) throw Error("tensorBracket: mixed-parity argument");
    Sp2Tensor r = pairSumTensor(X, Y, sec);
    Sp2Tensor s = pairSumTensor(Y, X, sec);
    if ((*px & *py) & 1) r += s;
    else r -= s;
    return r;
}
} // namespace detail

/// Bracket [X,Y] of Eq.-style form (dX/dQ o dY/dP) - sign (dY/dQ o dX/dP).
inline Sp2Tensor tensorBracket(const Sp2Tensor& X, const Sp2Tensor& Y, Sector sec = Sector::Full) {
    return detail::tensorBracketHomogeneous(X, Y, sec);
}
inline Sp2Tensor xiTensorBracket(const Sp2Tensor& X, const Sp2Tensor& Y) {
    return tensorBracket(X, Y, Sector::Xi);
}
/// [X,Y]_diamond = (dX/dQ^{A'}) o (dY/dP_{A'}), no antisymmetrization.
inline Sp2Tensor diamondTensorBracket(const Sp2Tensor& X, const Sp2Tensor& Y) {
    return detail::pairSumTensor(X, Y, Sector::Ghost);
}

/// Operator-pair lift S^n -> S^{n+1}.  With `normalized` the cyclic sum
/// carries the 1/(n+1) weight of the displayed definition; the homotopy
/// identities need the plain cyclic sum (normalized = false).
inline Sp2Tensor liftPair(const OperatorPair& u, const Sp2Tensor& X, bool normalized) {
    int n = X.rank();
    Sp2Tensor r(X.cat(), n + 1);
    if (n == 0) {
        r.at(1, 0) = u.apply(1, X.at(0, 0));
        r.at(0, 1) = u.apply(2, X.at(0, 0));
        return r;
    }
    for (int t = 0; t <= n + 1; ++t) {
        int rr = n + 1 - t;
        GradedPoly acc(X.cat());
        if (rr >= 1) acc += Rat(rr) * u.apply(1, X.at(rr - 1, t));
        if (t >= 1) acc += Rat(t) * u.apply(2, X.at(rr, t - 1));
        if (normalized) acc *= frac(1, n + 1);
        r.at(rr, t) = acc;
    }
    return r;
}

/// Contraction S^n -> S^{n-1} against an operator pair s_a.
inline Sp2Tensor contractPair(const OperatorPair& s, const Sp2Tensor& X) {
    int n = X.rank();
    if (n == 0) return Sp2Tensor(X.cat(), 0);
    Sp2Tensor r(X.cat(), n - 1);
    for (int t = 0; t <= n - 1; ++t) {
        int rr = n - 1 - t;
        r.at(rr, t) = s.apply(1, X.at(rr + 1, t)) + s.apply(2, X.at(rr, t + 1));
    }
    return r;
}

/// X_{{a_1...a_n}} = X_{a_1...a_n} + cyclic permutations, evaluated on the
/// canonical representative tuple of each (r,t) slot.  The callable takes
/// a tuple of 1/2 values.
inline Sp2Tensor cyclicSymmetrize(const Catalog* cat, int n,
                                  const std::function<GradedPoly(const std::vector<int>&)>& f) {
    Sp2Tensor out(cat, n);
    for (int t = 0; t <= n; ++t) {
        int r = n - t;
        std::vector<int> tuple;
        tuple.reserve(static_cast<size_t>(n));
        for (int i = 0; i < r; ++i) tuple.push_back(1);
        for (int i = 0; i < t; ++i) tuple.push_back(2);
        GradedPoly acc(cat);
        std::vector<int> rot = tuple;
        for (int k = 0; k < std::max(n, 1); ++k) {
            if (n == 0) { acc += f(rot); break; }
            acc += f(rot);
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        }
        out.at(r, t) = acc;
    }
    return out;
}

} // namespace brst

#endif
